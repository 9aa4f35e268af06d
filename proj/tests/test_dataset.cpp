#include <catch2/catch_amalgamated.hpp>

#include <limits>

#include "dge/dataset.hpp"
#include "dge/schema.hpp"

using namespace dge;

static Schema mixed_schema() {
    return Schema({{"age", ColumnKind::Numeric, {}},
                   {"color", ColumnKind::Categorical, {"red", "green", "blue"}}},
                  "y", {"no", "yes"}, "yes");
}

TEST_CASE("schema invariants are enforced", "[dataset]") {
    REQUIRE_THROWS_AS(Schema({{"a", ColumnKind::Numeric, {}}, {"a", ColumnKind::Numeric, {}}},
                             "y", {"0", "1"}, "1"),
                      SchemaMismatch);
    REQUIRE_THROWS_AS(Schema({{"a", ColumnKind::Categorical, {}}}, "y", {"0", "1"}, "1"),
                      SchemaMismatch);
    REQUIRE_THROWS_AS(Schema({{"a", ColumnKind::Categorical, {"x", "x"}}}, "y", {"0", "1"}, "1"),
                      SchemaMismatch);
    REQUIRE_THROWS_AS(Schema({{"a", ColumnKind::Numeric, {}}}, "y", {"0", "0"}, "0"),
                      SchemaMismatch);
    REQUIRE_THROWS_AS(Schema({{"a", ColumnKind::Numeric, {}}}, "y", {"0", "1"}, "2"),
                      SchemaMismatch);
    REQUIRE_THROWS_AS(Schema({{"y", ColumnKind::Numeric, {}}}, "y", {"0", "1"}, "1"),
                      SchemaMismatch);
}

TEST_CASE("dataset rejects non-finite and out-of-range cells", "[dataset]") {
    const Schema s = mixed_schema();
    REQUIRE_THROWS_AS(TabularDataset(s, {std::numeric_limits<double>::quiet_NaN(), 0.0}, {1}),
                      DataError);
    REQUIRE_THROWS_AS(TabularDataset(s, {1.0, 3.0}, {1}), DataError);   // level index out of range
    REQUIRE_THROWS_AS(TabularDataset(s, {1.0, 0.5}, {1}), DataError);   // non-integer level
    REQUIRE_THROWS_AS(TabularDataset(s, {1.0, 0.0}, {2}), DataError);   // label outside {0,1}
    REQUIRE_THROWS_AS(TabularDataset(s, {}, {}), DataError);            // empty
    REQUIRE_NOTHROW(TabularDataset(s, {35.5, 2.0}, {0}));
}

TEST_CASE("label encoding maps positive level to 1", "[dataset]") {
    const Schema s = mixed_schema();
    REQUIRE(s.positive_index() == 1);
    REQUIRE(s.label_level_for(1) == "yes");
    REQUIRE(s.label_level_for(0) == "no");
}

TEST_CASE("subset picks rows in order", "[dataset]") {
    const Schema s = numeric_schema({"x"});
    TabularDataset d(s, {10, 20, 30, 40}, {0, 1, 0, 1});
    auto sub = d.subset({3, 1});
    REQUIRE(sub.n_rows() == 2);
    REQUIRE(sub.cell(0, 0) == 40);
    REQUIRE(sub.cell(1, 0) == 20);
    REQUIRE(sub.label(0) == 1);
}

TEST_CASE("concat stacks rows and stamps provenance", "[dataset]") {
    const Schema s = numeric_schema({"x"});
    TabularDataset a(s, {1, 2}, {0, 1});
    TabularDataset b(s, {3}, {1});
    auto c = concat({a, b}, Provenance::synthetic(-1, "kde"));
    REQUIRE(c.n_rows() == 3);
    REQUIRE(c.cell(2, 0) == 3);
    REQUIRE(c.provenance().generator_seed == -1);
}
