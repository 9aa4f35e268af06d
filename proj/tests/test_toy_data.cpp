#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dge/toy_data.hpp"

using namespace dge;

TEST_CASE("zero-noise moons lie exactly on their arcs", "[toy_data]") {
    ToySpec spec{ToyKind::TwoMoons, 40, 0.0, 5};
    auto d = gen_two_moons(spec);
    REQUIRE(d.n_rows() == 40);
    REQUIRE(d.count_label(0) == 20);
    for (std::size_t r = 0; r < d.n_rows(); ++r) {
        const double x = d.cell(r, 0), y = d.cell(r, 1);
        if (d.label(r) == 0) {
            REQUIRE(std::abs(x * x + y * y - 1.0) <= 1e-12);
            REQUIRE(y >= -1e-12);
        } else {
            const double dx = x - 1.0, dy = y + 0.5;
            REQUIRE(std::abs(dx * dx + dy * dy - 1.0) <= 1e-12);
            REQUIRE(dy >= -1e-12);
        }
    }
}

TEST_CASE("odd n splits ceil/floor between classes", "[toy_data]") {
    auto d = gen_two_moons({ToyKind::TwoMoons, 7, 0.0, 0});
    REQUIRE(d.count_label(0) == 4);
    REQUIRE(d.count_label(1) == 3);
}

TEST_CASE("noisy moons match the construction-formula class means", "[toy_data]") {
    // Oracle: recompute the model means directly from the deterministic arc
    // grid; noise is mean zero so sample means stay within a CLT band.
    ToySpec spec{ToyKind::TwoMoons, 1000, 0.1, 13};
    auto d = gen_two_moons(spec);

    const std::size_t m0 = 500, m1 = 500;
    double ex0 = 0, ey0 = 0, ex1 = 0, ey1 = 0;
    for (std::size_t i = 0; i < m0; ++i) {
        const double t = std::numbers::pi * static_cast<double>(i) / (m0 - 1);
        ex0 += std::cos(t);
        ey0 += std::sin(t);
    }
    for (std::size_t i = 0; i < m1; ++i) {
        const double t = std::numbers::pi * static_cast<double>(i) / (m1 - 1);
        ex1 += 1.0 - std::cos(t);
        ey1 += -0.5 + std::sin(t);
    }
    ex0 /= m0; ey0 /= m0; ex1 /= m1; ey1 /= m1;

    double sx0 = 0, sy0 = 0, sx1 = 0, sy1 = 0;
    for (std::size_t r = 0; r < d.n_rows(); ++r) {
        if (d.label(r) == 0) { sx0 += d.cell(r, 0); sy0 += d.cell(r, 1); }
        else { sx1 += d.cell(r, 0); sy1 += d.cell(r, 1); }
    }
    sx0 /= m0; sy0 /= m0; sx1 /= m1; sy1 /= m1;

    const double band = 3.0 * 0.1 / std::sqrt(static_cast<double>(m0));
    REQUIRE(std::abs(sx0 - ex0) < band);
    REQUIRE(std::abs(sy0 - ey0) < band);
    REQUIRE(std::abs(sx1 - ex1) < band);
    REQUIRE(std::abs(sy1 - ey1) < band);
    // the two class means differ in both coordinates
    REQUIRE(std::abs(sx0 - sx1) > 0.1);
    REQUIRE(std::abs(sy0 - sy1) > 0.1);
}

TEST_CASE("zero-noise circles sit on radii 1 and 0.5", "[toy_data]") {
    auto d = gen_circles({ToyKind::Circles, 50, 0.0, 2});
    for (std::size_t r = 0; r < d.n_rows(); ++r) {
        const double radius = std::hypot(d.cell(r, 0), d.cell(r, 1));
        const double want = d.label(r) == 0 ? 1.0 : 0.5;
        REQUIRE(std::abs(radius - want) <= 1e-12);
    }
}

TEST_CASE("noisy circles keep their mean radius", "[toy_data]") {
    auto d = gen_circles({ToyKind::Circles, 1000, 0.05, 17});
    double r0 = 0, r1 = 0;
    for (std::size_t r = 0; r < d.n_rows(); ++r) {
        const double radius = std::hypot(d.cell(r, 0), d.cell(r, 1));
        (d.label(r) == 0 ? r0 : r1) += radius;
    }
    r0 /= 500; r1 /= 500;
    REQUIRE(std::abs(r0 - 1.0) < 0.02);
    REQUIRE(std::abs(r1 - 0.5) < 0.02);
}

TEST_CASE("gaussian toy ramp hits its fixed points", "[toy_data]") {
    REQUIRE(gaussian_toy_ramp(-1.0 + 1.0) == 0.0);
    REQUIRE(gaussian_toy_ramp(1.0 + 1.0) == 1.0);
    REQUIRE(gaussian_toy_ramp(0.0 + 1.0) == 0.5);
    REQUIRE(gaussian_toy_ramp(-5.0) == 0.0);
    REQUIRE(gaussian_toy_ramp(9.0) == 1.0);
}

TEST_CASE("gaussian toy is calibrated against the stated formula", "[toy_data]") {
    const std::size_t n = 100000;
    auto d = gen_gaussian_toy({ToyKind::Gaussian, n, 0.0, 23});

    // near x1 = 0 the positive rate is 1/2
    std::size_t in_band = 0, pos = 0;
    for (std::size_t r = 0; r < n; ++r) {
        if (std::abs(d.cell(r, 0)) < 0.1) {
            ++in_band;
            pos += d.label(r);
        }
    }
    REQUIRE(std::abs(static_cast<double>(pos) / in_band - 0.5) < 0.02);

    // binned positive rate tracks t(x1+1) within 3 sigma binomial error
    const int n_bins = 16;
    for (int b = 0; b < n_bins; ++b) {
        const double lo = -2.0 + 4.0 * b / n_bins, hi = lo + 4.0 / n_bins;
        std::size_t count = 0, hits = 0;
        double t_sum = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double x1 = d.cell(r, 0);
            if (x1 >= lo && x1 < hi) {
                ++count;
                hits += d.label(r);
                t_sum += gaussian_toy_ramp(x1 + 1.0);
            }
        }
        REQUIRE(count > 100);
        const double p = t_sum / count;
        const double sigma = std::sqrt(std::max(p * (1 - p), 1e-6) / count);
        REQUIRE(std::abs(static_cast<double>(hits) / count - p) <= 3.0 * sigma + 1e-9);
    }
}

TEST_CASE("toy generators are pure functions of their spec", "[toy_data]") {
    for (auto kind : {ToyKind::TwoMoons, ToyKind::Circles, ToyKind::Gaussian}) {
        ToySpec spec{kind, 64, 0.05, 77};
        REQUIRE(gen_toy(spec) == gen_toy(spec));
    }
    REQUIRE_THROWS_AS(gen_two_moons({ToyKind::Circles, 10, 0.1, 0}), BadSpec);
    REQUIRE_THROWS_AS(gen_circles({ToyKind::Circles, 10, -0.1, 0}), BadSpec);
    REQUIRE_THROWS_AS(gen_toy({ToyKind::Gaussian, 1, 0.0, 0}), BadSpec);
}
