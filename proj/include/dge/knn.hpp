#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "dge/error.hpp"

namespace dge {

// k-nearest-neighbour vote over standardized features. Distance ties are
// broken by the lower training-row index so predictions are deterministic.
struct KnnParams {
    Eigen::MatrixXd points;  // encoded training rows
    std::vector<int> labels;
    int k = 5;
};

inline KnnParams knn_train(const Eigen::MatrixXd& x, const std::vector<int>& labels, int k) {
    if (k < 1) throw BadSpec("k must be >= 1");
    if (static_cast<std::size_t>(x.rows()) != labels.size())
        throw DataError("knn: rows and labels disagree");
    return {x, labels, k};
}

inline std::vector<double> knn_predict(const KnnParams& p, const Eigen::MatrixXd& x) {
    const Eigen::Index n_train = p.points.rows();
    const auto k = static_cast<std::size_t>(std::min<Eigen::Index>(p.k, n_train));
    std::vector<double> out(static_cast<std::size_t>(x.rows()), 0.0);
    std::vector<std::pair<double, Eigen::Index>> dist(static_cast<std::size_t>(n_train));
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        for (Eigen::Index i = 0; i < n_train; ++i)
            dist[static_cast<std::size_t>(i)] = {
                (p.points.row(i) - x.row(r)).squaredNorm(), i};
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                          dist.end());
        int votes = 0;
        for (std::size_t i = 0; i < k; ++i)
            votes += p.labels[static_cast<std::size_t>(dist[i].second)];
        out[static_cast<std::size_t>(r)] = static_cast<double>(votes) / static_cast<double>(k);
    }
    return out;
}

}  // namespace dge
