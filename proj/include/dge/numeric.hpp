#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

namespace dge {

inline double log_sum_exp(std::span<const double> xs) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : xs) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

// Multivariate normal with cached Cholesky factor.
struct MvNormal {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    Eigen::MatrixXd chol_lower;  // L with L L^T = cov
    double log_norm_const = 0.0;  // -d/2 log(2 pi) - 1/2 log|cov|

    static constexpr double kLog2Pi = 1.8378770664093454836;

    // Fails (returns false) when cov is not positive definite.
    bool factorize() {
        Eigen::LLT<Eigen::MatrixXd> llt(cov);
        if (llt.info() != Eigen::Success) return false;
        chol_lower = llt.matrixL();
        double log_det = 0.0;
        for (Eigen::Index i = 0; i < chol_lower.rows(); ++i) {
            const double l = chol_lower(i, i);
            if (!(l > 0.0) || !std::isfinite(l)) return false;
            log_det += 2.0 * std::log(l);
        }
        log_norm_const = -0.5 * static_cast<double>(cov.rows()) * kLog2Pi - 0.5 * log_det;
        return true;
    }

    double log_pdf(const Eigen::VectorXd& x) const {
        const Eigen::VectorXd z =
            chol_lower.triangularView<Eigen::Lower>().solve(x - mean);
        return log_norm_const - 0.5 * z.squaredNorm();
    }
};

inline double log_normal_pdf_1d(double x, double mean, double stddev) {
    const double z = (x - mean) / stddev;
    return -0.5 * MvNormal::kLog2Pi - std::log(stddev) - 0.5 * z * z;
}

inline double normal_cdf(double x, double mean = 0.0, double stddev = 1.0) {
    return 0.5 * std::erfc(-(x - mean) / (stddev * std::numbers::sqrt2));
}

}  // namespace dge
