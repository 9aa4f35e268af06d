#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dge/generator.hpp"

using namespace dge;

namespace {

Schema two_cat_schema() {
    return Schema({{"c1", ColumnKind::Categorical, {"a", "b", "c"}},
                   {"c2", ColumnKind::Categorical, {"x", "y"}}},
                  "y", {"0", "1"}, "1");
}

TabularDataset cat_fixture() {
    // class 0 rows: c1 = a,a,b ; c2 = x,x,x
    // class 1 rows: c1 = c,c,c,b ; c2 = x,y,y,y
    const Schema s = two_cat_schema();
    std::vector<double> f{0, 0, /**/ 0, 0, /**/ 1, 0,
                          2, 0, /**/ 2, 1, /**/ 2, 1, /**/ 1, 1};
    return TabularDataset(s, std::move(f), {0, 0, 0, 1, 1, 1, 1});
}

GeneratorSpec cat_spec(double alpha) {
    GeneratorSpec spec;
    spec.cls = GeneratorClass::CatProduct;
    spec.dirichlet_smoothing = alpha;
    return spec;
}

}  // namespace

TEST_CASE("smoothed frequencies match hand counts", "[cat_product]") {
    RngStream rng(1);
    auto fit = fit_generator(cat_spec(1.0), cat_fixture(), rng);

    // class 0, column c1: counts a=2, b=1, c=0, n=3, alpha=1, L=3
    const auto& f0 = fit.model.cat_per_class[0].freqs[0];
    REQUIRE_THAT(f0[0], Catch::Matchers::WithinAbs(3.0 / 6.0, 1e-15));
    REQUIRE_THAT(f0[1], Catch::Matchers::WithinAbs(2.0 / 6.0, 1e-15));
    REQUIRE_THAT(f0[2], Catch::Matchers::WithinAbs(1.0 / 6.0, 1e-15));

    // class 1, column c2: counts x=1, y=3, n=4, L=2
    const auto& f1 = fit.model.cat_per_class[1].freqs[1];
    REQUIRE_THAT(f1[0], Catch::Matchers::WithinAbs(2.0 / 6.0, 1e-15));
    REQUIRE_THAT(f1[1], Catch::Matchers::WithinAbs(4.0 / 6.0, 1e-15));

    for (const auto& cls : fit.model.cat_per_class) {
        for (const auto& freqs : cls.freqs) {
            double sum = 0;
            for (double p : freqs) sum += p;
            REQUIRE_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-9));
        }
    }
}

TEST_CASE("log density factorizes over columns", "[cat_product]") {
    RngStream rng(2);
    auto fit = fit_generator(cat_spec(0.5), cat_fixture(), rng);
    const double row[2] = {1.0, 0.0};  // c1=b, c2=x
    const int y = 1;
    const auto& cls = fit.model.cat_per_class[1];
    const double expect = std::log(fit.model.class_prior_pos) + std::log(cls.freqs[0][1]) +
                          std::log(cls.freqs[1][0]);
    REQUIRE_THAT(log_density(fit.model, row, y), Catch::Matchers::WithinAbs(expect, 1e-12));
}

TEST_CASE("alpha = 0 reproduces raw frequencies", "[cat_product]") {
    RngStream rng(3);
    auto fit = fit_generator(cat_spec(0.0), cat_fixture(), rng);
    const auto& f0 = fit.model.cat_per_class[0].freqs[0];
    REQUIRE(f0[0] == 2.0 / 3.0);
    REQUIRE(f0[2] == 0.0);
}

TEST_CASE("samples stay within schema levels and match frequencies", "[cat_product]") {
    RngStream rng(4);
    auto fit = fit_generator(cat_spec(1.0), cat_fixture(), rng);
    RngStream srng(5);
    auto synth = sample_generator(fit.model, 20000, srng);
    std::size_t a_count = 0, class0 = 0;
    for (std::size_t r = 0; r < synth.n_rows(); ++r) {
        REQUIRE(synth.cell(r, 0) >= 0);
        REQUIRE(synth.cell(r, 0) <= 2);
        if (synth.label(r) == 0) {
            ++class0;
            if (synth.cell(r, 0) == 0.0) ++a_count;
        }
    }
    const double freq_a = fit.model.cat_per_class[0].freqs[0][0];
    REQUIRE(std::abs(double(a_count) / double(class0) - freq_a) < 0.02);
}

TEST_CASE("cat_product rejects numeric columns", "[cat_product]") {
    TabularDataset numeric(numeric_schema({"x"}), {0.0, 1.0, 2.0, 3.0}, {0, 0, 1, 1});
    RngStream rng(6);
    REQUIRE_THROWS_AS(fit_generator(cat_spec(1.0), numeric, rng), UnsupportedSchema);
}
