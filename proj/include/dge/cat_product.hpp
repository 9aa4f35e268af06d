#pragma once

#include <cmath>
#include <vector>

#include "dge/error.hpp"
#include "dge/rng.hpp"

namespace dge {

// Class-conditional independent categorical model: one smoothed frequency
// vector per column.
struct CatProductModel {
    std::vector<std::vector<double>> freqs;  // per column, per level

    double log_pmf(const std::vector<std::size_t>& levels) const {
        double lp = 0.0;
        for (std::size_t j = 0; j < freqs.size(); ++j) lp += std::log(freqs[j][levels[j]]);
        return lp;
    }

    std::vector<std::size_t> sample(RngStream& rng) const {
        std::vector<std::size_t> out(freqs.size());
        for (std::size_t j = 0; j < freqs.size(); ++j) out[j] = rng.pick_weighted(freqs[j]);
        return out;
    }
};

// Laplace smoothing with pseudo-count alpha per level; alpha = 0 is the MLE.
inline CatProductModel fit_cat_product(const std::vector<std::vector<std::size_t>>& columns,
                                       const std::vector<std::size_t>& n_levels, double alpha) {
    if (alpha < 0.0) throw BadSpec("dirichlet_smoothing must be >= 0");
    CatProductModel model;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        const auto& col = columns[j];
        if (col.size() < 2) throw InsufficientData("CatProduct needs at least 2 rows per class");
        std::vector<double> counts(n_levels[j], 0.0);
        for (std::size_t level : col) counts[level] += 1.0;
        const double denom =
            static_cast<double>(col.size()) + alpha * static_cast<double>(n_levels[j]);
        for (double& c : counts) c = (c + alpha) / denom;
        model.freqs.push_back(std::move(counts));
    }
    return model;
}

}  // namespace dge
