#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

#include "dge/error.hpp"

namespace dge {

// Selective accuracy: for each threshold tau, the accuracy over rows whose
// predicted-label confidence max(p, 1-p) strictly exceeds tau, plus the
// fraction of rows selected. Thresholds with no selected rows stay empty.
struct CurveSeries {
    std::vector<double> thresholds;
    std::vector<std::optional<double>> accuracy_at_tau;
    std::vector<double> coverage_at_tau;
};

inline CurveSeries confidence_accuracy_curve(std::span<const double> probs,
                                             std::span<const int> labels,
                                             std::span<const double> thresholds) {
    if (probs.size() != labels.size()) throw DataError("curve: size mismatch");
    if (probs.empty()) throw DataError("curve over zero rows");
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (thresholds[i] < 0.5 || thresholds[i] >= 1.0)
            throw BadSpec("thresholds must lie in [0.5, 1)");
        if (i > 0 && thresholds[i] <= thresholds[i - 1])
            throw BadSpec("thresholds must be strictly ascending");
    }

    CurveSeries out;
    for (double tau : thresholds) {
        std::size_t selected = 0, hits = 0;
        for (std::size_t r = 0; r < probs.size(); ++r) {
            const double conf = std::max(probs[r], 1.0 - probs[r]);
            if (conf > tau) {
                ++selected;
                const int pred = probs[r] > 0.5 ? 1 : 0;
                hits += static_cast<std::size_t>(pred == labels[r]);
            }
        }
        out.thresholds.push_back(tau);
        out.coverage_at_tau.push_back(static_cast<double>(selected) /
                                      static_cast<double>(probs.size()));
        if (selected > 0)
            out.accuracy_at_tau.push_back(static_cast<double>(hits) /
                                          static_cast<double>(selected));
        else
            out.accuracy_at_tau.push_back(std::nullopt);
    }
    return out;
}

}  // namespace dge
