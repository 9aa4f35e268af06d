#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "dge/error.hpp"
#include "dge/numeric.hpp"
#include "dge/rng.hpp"

namespace dge {

// Class-conditional product-Gaussian KDE: retained training points plus one
// bandwidth per column. Sampling is a smoothed bootstrap; bandwidth_scale
// near zero replays training rows, large values oversmooth.
struct KdeMixture {
    Eigen::MatrixXd points;          // n_class x d
    std::vector<double> bandwidths;  // per column

    double log_pdf(const Eigen::VectorXd& x) const {
        const Eigen::Index n = points.rows(), d = points.cols();
        std::vector<double> terms(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) {
            double lp = 0.0;
            for (Eigen::Index j = 0; j < d; ++j)
                lp += log_normal_pdf_1d(x(j), points(i, j),
                                        bandwidths[static_cast<std::size_t>(j)]);
            terms[static_cast<std::size_t>(i)] = lp;
        }
        return log_sum_exp(terms) - std::log(static_cast<double>(n));
    }

    Eigen::VectorXd sample(RngStream& rng) const {
        const Eigen::Index i = static_cast<Eigen::Index>(rng.uniform_int(points.rows()));
        Eigen::VectorXd x = points.row(i).transpose();
        for (Eigen::Index j = 0; j < points.cols(); ++j)
            x(j) += bandwidths[static_cast<std::size_t>(j)] * rng.normal();
        return x;
    }
};

// Silverman's multivariate rule of thumb per column, times the user's
// scale knob. Constant columns get a vanishing but nonzero bandwidth.
inline KdeMixture fit_kde(const Eigen::MatrixXd& x, double bandwidth_scale) {
    if (!(bandwidth_scale > 0.0)) throw BadSpec("bandwidth_scale must be > 0");
    if (x.rows() < 2) throw InsufficientData("KDE needs at least 2 rows per class");
    KdeMixture kde;
    kde.points = x;
    const double n = static_cast<double>(x.rows());
    const double d = static_cast<double>(x.cols());
    const double factor = std::pow(4.0 / ((d + 2.0) * n), 1.0 / (d + 4.0));
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double mean = x.col(j).mean();
        const double var = (x.col(j).array() - mean).square().sum() / (n - 1.0);
        const double h = std::sqrt(var) * factor * bandwidth_scale;
        kde.bandwidths.push_back(std::max(h, 1e-12));
    }
    return kde;
}

}  // namespace dge
