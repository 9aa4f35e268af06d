#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "dge/dataset.hpp"
#include "dge/error.hpp"
#include "dge/rng.hpp"
#include "dge/schema.hpp"

namespace dge {

enum class ToyKind { TwoMoons, Circles, Gaussian };

struct ToySpec {
    ToyKind kind = ToyKind::TwoMoons;
    std::size_t n = 1000;
    double noise = 0.1;  // ignored for Gaussian
    std::uint64_t seed = 0;
};

inline const char* toy_kind_name(ToyKind k) {
    switch (k) {
        case ToyKind::TwoMoons: return "moons";
        case ToyKind::Circles: return "circles";
        case ToyKind::Gaussian: return "gaussian";
    }
    return "?";
}

namespace detail {

inline void check_toy(const ToySpec& spec, ToyKind expected) {
    if (spec.kind != expected) throw BadSpec("toy spec kind does not match generator");
    if (spec.n < 2) throw BadSpec("toy dataset needs n >= 2");
    if (spec.noise < 0.0) throw BadSpec("noise must be >= 0");
}

}  // namespace detail

// Two interleaving half-circles of radius 1. Class 0 is the upper arc
// centered at the origin; class 1 the arc of the circle centered at
// (1, -0.5) with y >= -0.5. Arc positions are an even grid over the arc,
// then isotropic Gaussian noise of the given std is added.
inline TabularDataset gen_two_moons(const ToySpec& spec) {
    detail::check_toy(spec, ToyKind::TwoMoons);
    RngStream rng(spec.seed, {1});
    const std::size_t n0 = (spec.n + 1) / 2;
    const std::size_t n1 = spec.n / 2;

    std::vector<double> f;
    f.reserve(spec.n * 2);
    std::vector<int> labels;
    labels.reserve(spec.n);
    auto grid = [](std::size_t i, std::size_t m) {
        return m > 1 ? static_cast<double>(i) / static_cast<double>(m - 1) : 0.0;
    };
    for (std::size_t i = 0; i < n0; ++i) {
        const double t = std::numbers::pi * grid(i, n0);
        f.push_back(std::cos(t) + spec.noise * rng.normal());
        f.push_back(std::sin(t) + spec.noise * rng.normal());
        labels.push_back(0);
    }
    for (std::size_t i = 0; i < n1; ++i) {
        const double t = std::numbers::pi * grid(i, n1);
        f.push_back(1.0 - std::cos(t) + spec.noise * rng.normal());
        f.push_back(-0.5 + std::sin(t) + spec.noise * rng.normal());
        labels.push_back(1);
    }
    return TabularDataset(numeric_schema({"x1", "x2"}), std::move(f), std::move(labels));
}

// Class 0 on the unit circle, class 1 on the radius-0.5 circle, plus noise.
inline TabularDataset gen_circles(const ToySpec& spec) {
    detail::check_toy(spec, ToyKind::Circles);
    RngStream rng(spec.seed, {2});
    const std::size_t n0 = (spec.n + 1) / 2;
    const std::size_t n1 = spec.n / 2;

    std::vector<double> f;
    f.reserve(spec.n * 2);
    std::vector<int> labels;
    labels.reserve(spec.n);
    auto emit = [&](std::size_t m, double radius, int y) {
        for (std::size_t i = 0; i < m; ++i) {
            const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m);
            f.push_back(radius * std::cos(t) + spec.noise * rng.normal());
            f.push_back(radius * std::sin(t) + spec.noise * rng.normal());
            labels.push_back(y);
        }
    };
    emit(n0, 1.0, 0);
    emit(n1, 0.5, 1);
    return TabularDataset(numeric_schema({"x1", "x2"}), std::move(f), std::move(labels));
}

// Label ramp of the Gaussian toy: 0 below 0, 1 above 2, linear in between.
inline double gaussian_toy_ramp(double x) {
    if (x < 0.0) return 0.0;
    if (x > 2.0) return 1.0;
    return 0.5 * x;
}

// X1, X2 iid standard normal; Y ~ Bernoulli(ramp(X1 + 1)). The Bayes rule
// is exactly 1(x1 > 0), which makes decision-boundary checks exact.
inline TabularDataset gen_gaussian_toy(const ToySpec& spec) {
    if (spec.kind != ToyKind::Gaussian) throw BadSpec("toy spec kind does not match generator");
    if (spec.n < 2) throw BadSpec("toy dataset needs n >= 2");
    RngStream rng(spec.seed, {3});

    std::vector<double> f;
    f.reserve(spec.n * 2);
    std::vector<int> labels;
    labels.reserve(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        const double x1 = rng.normal();
        const double x2 = rng.normal();
        f.push_back(x1);
        f.push_back(x2);
        labels.push_back(rng.bernoulli(gaussian_toy_ramp(x1 + 1.0)) ? 1 : 0);
    }
    return TabularDataset(numeric_schema({"x1", "x2"}), std::move(f), std::move(labels));
}

inline TabularDataset gen_toy(const ToySpec& spec) {
    switch (spec.kind) {
        case ToyKind::TwoMoons: return gen_two_moons(spec);
        case ToyKind::Circles: return gen_circles(spec);
        case ToyKind::Gaussian: return gen_gaussian_toy(spec);
    }
    throw BadSpec("unknown toy kind");
}

}  // namespace dge
