#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <string>

#include "dge/csv.hpp"
#include "dge/rng.hpp"

using namespace dge;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    auto dir = fs::temp_directory_path() / "dge_csv_tests";
    fs::create_directories(dir);
    return dir / name;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

// Random mixed-type dataset arranged so hint-free inference can recover the
// schema exactly: every categorical level occurs (first rows cycle through
// them, fixing the appearance order), both label levels occur, and the
// positive label is the lexicographically larger level.
TabularDataset random_dataset(RngStream& rng) {
    const std::size_t n = 2 + rng.uniform_int(20);
    const std::size_t n_cols = 1 + rng.uniform_int(4);
    std::vector<Column> cols;
    for (std::size_t c = 0; c < n_cols; ++c) {
        const std::string name = "c" + std::to_string(c);
        if (rng.bernoulli(0.5)) {
            cols.push_back({name, ColumnKind::Numeric, {}});
        } else {
            std::vector<std::string> levels;
            const std::size_t k = std::min<std::size_t>(2 + rng.uniform_int(3), n);
            for (std::size_t l = 0; l < k; ++l)
                levels.push_back("v" + std::to_string(c) + "_" + std::to_string(l));
            cols.push_back({name, ColumnKind::Categorical, levels});
        }
    }
    Schema schema(cols, "y", {"a", "b"}, "b");
    std::vector<double> f;
    std::vector<int> labels;
    for (std::size_t r = 0; r < n; ++r) {
        for (const auto& col : cols) {
            if (col.kind == ColumnKind::Numeric) {
                // exercise oddball magnitudes
                const double v = (rng.uniform01() - 0.5) * std::pow(10.0, rng.uniform(-8, 8));
                f.push_back(v);
            } else if (r < col.levels.size()) {
                f.push_back(static_cast<double>(r));
            } else {
                f.push_back(static_cast<double>(rng.uniform_int(col.levels.size())));
            }
        }
        labels.push_back(r < 2 ? static_cast<int>(r) : static_cast<int>(rng.uniform_int(2)));
    }
    return TabularDataset(schema, std::move(f), std::move(labels));
}

}  // namespace

TEST_CASE("numeric columns are inferred, label comes from the last column", "[csv]") {
    auto p = temp_file("infer.csv");
    write_text(p, "x1,x2,y\n1.5,2,a\n-3e2,0.25,b\n7,8,a\n");
    auto d = read_csv(p);
    REQUIRE(d.schema().n_features() == 2);
    REQUIRE(d.schema().feature(0).kind == ColumnKind::Numeric);
    REQUIRE(d.schema().feature(1).kind == ColumnKind::Numeric);
    REQUIRE(d.schema().label_name() == "y");
    REQUIRE(d.schema().positive_label() == "b");
    REQUIRE(d.n_rows() == 3);
    REQUIRE(d.label(0) == 0);
    REQUIRE(d.label(1) == 1);
    REQUIRE(d.cell(1, 0) == -300.0);
}

TEST_CASE("NaN cell under a numeric schema hint is a parse error", "[csv]") {
    auto p = temp_file("nan.csv");
    write_text(p, "x1,y\nNaN,a\n2.0,b\n");
    CsvOptions opts;
    opts.schema_hint = Schema({{"x1", ColumnKind::Numeric, {}}}, "y", {"a", "b"}, "b");
    REQUIRE_THROWS_AS(read_csv(p, opts), ParseError);
    // without the hint the column falls back to categorical
    auto d = read_csv(p);
    REQUIRE(d.schema().feature(0).kind == ColumnKind::Categorical);
}

TEST_CASE("quoted fields with commas and embedded quotes survive", "[csv]") {
    auto p = temp_file("quotes.csv");
    write_text(p, "name,y\n\"red, loud\",a\n\"say \"\"hi\"\"\",b\n");
    auto d = read_csv(p);
    REQUIRE(d.schema().feature(0).levels[0] == "red, loud");
    REQUIRE(d.schema().feature(0).levels[1] == "say \"hi\"");
}

TEST_CASE("malformed rows carry a location", "[csv]") {
    auto p = temp_file("bad.csv");
    write_text(p, "x1,x2,y\n1.0,2.0,a\n1.0,b\n");
    REQUIRE_THROWS_WITH(read_csv(p), Catch::Matchers::ContainsSubstring("row 2"));
}

TEST_CASE("missing or constant label column is rejected", "[csv]") {
    auto p = temp_file("label.csv");
    write_text(p, "x1,y\n1,a\n2,a\n");
    REQUIRE_THROWS_AS(read_csv(p), MissingLabel);
    CsvOptions opts;
    opts.label_name = "z";
    REQUIRE_THROWS_AS(read_csv(p, opts), MissingLabel);
}

TEST_CASE("write then read is the identity", "[csv]") {
    RngStream rng(20240);
    for (int rep = 0; rep < 1000; ++rep) {
        auto d = random_dataset(rng);
        auto p = temp_file("roundtrip.csv");
        write_csv(d, p);
        auto back = read_csv(p);
        REQUIRE(back == d);
    }
}

TEST_CASE("write to an unwritable path raises IoError", "[csv]") {
    RngStream rng(1);
    auto d = random_dataset(rng);
    REQUIRE_THROWS_AS(write_csv(d, "/nonexistent_dir_zz/out.csv"), IoError);
}

TEST_CASE("one-row dataset writes a two-line file", "[csv]") {
    TabularDataset d(numeric_schema({"x"}), {3.25}, {1});
    auto p = temp_file("tiny.csv");
    write_csv(d, p);
    std::ifstream in(p);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    REQUIRE(lines == 2);
}
