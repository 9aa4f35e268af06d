#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dge/error.hpp"

namespace dge {

// K Monte Carlo draws of one downstream statistic.
struct StatisticSamples {
    std::vector<double> values;
    std::string statistic_name;
};

struct McStats {
    double mean = 0.0;
    std::optional<double> variance;  // empty when K = 1

    double stddev() const { return variance ? std::sqrt(*variance) : 0.0; }
};

// Empirical mean and (K-1)-normalized variance of the draws.
inline McStats mc_stats(const StatisticSamples& samples) {
    const auto& v = samples.values;
    if (v.empty()) throw InsufficientSamples("mc_stats over zero samples");
    for (double x : v)
        if (!std::isfinite(x)) throw DataError("non-finite statistic sample");
    McStats out;
    out.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    const bool constant = std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
    if (constant) out.mean = v[0];  // keep mean exact despite summation rounding
    if (v.size() >= 2) {
        if (constant) {
            out.variance = 0.0;
        } else {
            double ss = 0.0;
            for (double x : v) ss += (x - out.mean) * (x - out.mean);
            out.variance = ss / static_cast<double>(v.size() - 1);
        }
    }
    return out;
}

// ROC AUC as the Mann-Whitney U statistic normalized by n_pos * n_neg;
// tied scores contribute 1/2 via midranks.
inline double auc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw DataError("auc: size mismatch");
    const std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (int y : labels) n_pos += static_cast<std::size_t>(y == 1);
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) throw SingleClass("auc needs both classes");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // midranks over tie groups; accumulate ranks of positives
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]] == 1) rank_sum_pos += midrank;
        }
        i = j;
    }
    const double u = rank_sum_pos - 0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

// Accuracy at the 0.5 threshold; a probability of exactly 0.5 predicts the
// negative class.
inline double accuracy(std::span<const double> probs, std::span<const int> labels) {
    if (probs.size() != labels.size()) throw DataError("accuracy: size mismatch");
    if (probs.empty()) throw DataError("accuracy over zero rows");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const int pred = probs[i] > 0.5 ? 1 : 0;
        hits += static_cast<std::size_t>(pred == labels[i]);
    }
    return static_cast<double>(hits) / static_cast<double>(probs.size());
}

// Average ranks (1 = largest value); ties share the mean rank.
inline std::vector<double> rank_descending(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && values[order[j]] == values[order[i]]) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = midrank;
        i = j;
    }
    return ranks;
}

// Spearman correlation (Pearson on average ranks, which handles ties).
inline double spearman(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2) throw DataError("spearman needs >= 2 paired values");
    const auto ra = rank_descending(a);
    const auto rb = rank_descending(b);
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= n;
    mb /= n;
    double num = 0, va = 0, vb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (ra[i] - ma) * (rb[i] - mb);
        va += (ra[i] - ma) * (ra[i] - ma);
        vb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (va == 0.0 || vb == 0.0) throw DataError("spearman undefined for constant ranks");
    return num / std::sqrt(va * vb);
}

}  // namespace dge
