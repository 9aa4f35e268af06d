#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace dge {

namespace detail {

// SplitMix64 finalizer; used to derive stream keys from (root_seed, path).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace detail

// Hierarchical random stream. Equal (root_seed, path) pairs replay the exact
// same sequence; distinct paths give statistically independent streams. All
// sampling goes through explicit, engine-stable formulas (no std::*_distribution)
// so sequences are identical across standard library implementations.
class RngStream {
public:
    explicit RngStream(std::uint64_t root_seed, std::vector<std::uint64_t> path = {})
        : root_seed_(root_seed), path_(std::move(path)) {
        std::uint64_t key = detail::splitmix64(root_seed_ ^ 0x5851f42d4c957f2dULL);
        for (std::uint64_t label : path_) {
            key = detail::splitmix64(key ^ detail::splitmix64(label + 0x9e3779b97f4a7c15ULL));
        }
        engine_.seed(key);
    }

    std::uint64_t root_seed() const { return root_seed_; }
    const std::vector<std::uint64_t>& path() const { return path_; }

    // Fresh stream one level down; independent of this stream and of siblings.
    RngStream child(std::uint64_t label) const {
        std::vector<std::uint64_t> p = path_;
        p.push_back(label);
        return RngStream(root_seed_, std::move(p));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Unbiased integer in [0, n) by rejection.
    std::uint64_t uniform_int(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Standard normal via Box-Muller; caches the spare draw.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Index draw from unnormalized nonnegative weights (CDF inversion).
    std::size_t pick_weighted(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        double u = uniform01() * total;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            u -= weights[i];
            if (u < 0.0) return i;
        }
        return weights.empty() ? 0 : weights.size() - 1;
    }

    // Fisher-Yates; deterministic given the stream state.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(uniform_int(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // n distinct indices from [0, pool) in sorted order.
    std::vector<std::size_t> sample_without_replacement(std::size_t pool, std::size_t n) {
        std::vector<std::size_t> ids(pool);
        for (std::size_t i = 0; i < pool; ++i) ids[i] = i;
        shuffle(ids);
        ids.resize(n < pool ? n : pool);
        std::sort(ids.begin(), ids.end());
        return ids;
    }

private:
    std::uint64_t root_seed_;
    std::vector<std::uint64_t> path_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace dge
