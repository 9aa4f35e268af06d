#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dge/error.hpp"
#include "dge/numeric.hpp"
#include "dge/rng.hpp"

namespace dge {

// One class-conditional Gaussian mixture over the numeric block.
struct GmmMixture {
    std::vector<double> weights;
    std::vector<MvNormal> components;

    double log_pdf(const Eigen::VectorXd& x) const {
        std::vector<double> terms(weights.size());
        for (std::size_t c = 0; c < weights.size(); ++c)
            terms[c] = std::log(weights[c]) + components[c].log_pdf(x);
        return log_sum_exp(terms);
    }

    Eigen::VectorXd sample(RngStream& rng) const {
        const std::size_t c = rng.pick_weighted(weights);
        const auto& comp = components[c];
        Eigen::VectorXd z(comp.mean.size());
        for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
        return comp.mean + comp.chol_lower * z;
    }
};

struct EmTrace {
    std::vector<double> log_likelihood;
    bool converged = false;
};

namespace detail {

inline double covariance_floor(const Eigen::MatrixXd& cov) {
    return 1e-6 * cov.trace() / static_cast<double>(cov.rows());
}

inline Eigen::MatrixXd mle_covariance(const Eigen::MatrixXd& x, const Eigen::VectorXd& mean) {
    const auto n = static_cast<double>(x.rows());
    Eigen::MatrixXd centered = x.rowwise() - mean.transpose();
    return centered.transpose() * centered / n;
}

// k-means++ style seeding: first center uniform, later centers drawn with
// probability proportional to squared distance from the chosen set.
inline std::vector<Eigen::VectorXd> seed_means(const Eigen::MatrixXd& x, int k, RngStream& rng) {
    std::vector<Eigen::VectorXd> means;
    means.push_back(x.row(static_cast<Eigen::Index>(rng.uniform_int(x.rows()))).transpose());
    std::vector<double> d2(x.rows(), 0.0);
    while (static_cast<int>(means.size()) < k) {
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& m : means)
                best = std::min(best, (x.row(i).transpose() - m).squaredNorm());
            d2[static_cast<std::size_t>(i)] = best;
        }
        double total = 0.0;
        for (double v : d2) total += v;
        if (total <= 0.0) {
            // all points coincide with a center; fall back to uniform picks
            means.push_back(x.row(static_cast<Eigen::Index>(rng.uniform_int(x.rows()))).transpose());
        } else {
            means.push_back(x.row(static_cast<Eigen::Index>(rng.pick_weighted(d2))));
        }
    }
    return means;
}

struct EmRun {
    GmmMixture mixture;
    EmTrace trace;
    double final_ll = -std::numeric_limits<double>::infinity();
};

inline EmRun run_em(const Eigen::MatrixXd& x, int k, RngStream rng, int max_iter,
                    double rel_tol) {
    const Eigen::Index n = x.rows(), d = x.cols();
    EmRun run;
    auto& gmm = run.mixture;
    gmm.weights.assign(static_cast<std::size_t>(k), 1.0 / k);

    const Eigen::VectorXd grand_mean = x.colwise().mean().transpose();
    Eigen::MatrixXd base_cov = mle_covariance(x, grand_mean);
    base_cov.diagonal().array() += covariance_floor(base_cov);

    auto means = seed_means(x, k, rng);
    for (int c = 0; c < k; ++c) {
        MvNormal comp;
        comp.mean = means[static_cast<std::size_t>(c)];
        comp.cov = base_cov;
        if (!comp.factorize()) throw SingularCovariance("degenerate class covariance");
        gmm.components.push_back(std::move(comp));
    }

    Eigen::MatrixXd log_resp(n, k);
    std::vector<double> row_buf(static_cast<std::size_t>(k));
    double prev_ll = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < max_iter; ++iter) {
        // E-step
        double ll = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (int c = 0; c < k; ++c)
                row_buf[static_cast<std::size_t>(c)] =
                    std::log(gmm.weights[static_cast<std::size_t>(c)]) +
                    gmm.components[static_cast<std::size_t>(c)].log_pdf(x.row(i).transpose());
            const double norm = log_sum_exp(row_buf);
            ll += norm;
            for (int c = 0; c < k; ++c) log_resp(i, c) = row_buf[static_cast<std::size_t>(c)] - norm;
        }
        run.trace.log_likelihood.push_back(ll);
        run.final_ll = ll;
        if (iter > 0 && std::abs(ll - prev_ll) < rel_tol * (std::abs(prev_ll) + 1e-12)) {
            run.trace.converged = true;
            break;
        }
        prev_ll = ll;

        // M-step
        for (int c = 0; c < k; ++c) {
            Eigen::VectorXd resp = log_resp.col(c).array().exp();
            const double nc = resp.sum();
            if (nc < 1e-10) {
                // dead component: re-seed on the worst-covered point
                Eigen::Index worst = 0;
                double best = std::numeric_limits<double>::infinity();
                for (Eigen::Index i = 0; i < n; ++i) {
                    const double cover = log_resp.row(i).maxCoeff();
                    if (cover < best) { best = cover; worst = i; }
                }
                gmm.weights[static_cast<std::size_t>(c)] = 1.0 / n;
                gmm.components[static_cast<std::size_t>(c)].mean = x.row(worst).transpose();
                gmm.components[static_cast<std::size_t>(c)].cov = base_cov;
            } else {
                gmm.weights[static_cast<std::size_t>(c)] = nc / static_cast<double>(n);
                const Eigen::VectorXd mu = (x.transpose() * resp) / nc;
                Eigen::MatrixXd centered = x.rowwise() - mu.transpose();
                Eigen::MatrixXd cov =
                    centered.transpose() * (centered.array().colwise() * resp.array()).matrix() / nc;
                cov.diagonal().array() += covariance_floor(cov);
                gmm.components[static_cast<std::size_t>(c)].mean = mu;
                gmm.components[static_cast<std::size_t>(c)].cov = cov;
            }
            if (!gmm.components[static_cast<std::size_t>(c)].factorize())
                throw SingularCovariance("covariance not positive definite after flooring");
        }
        // renormalize weights (guards the re-seeded dead-component case)
        double wsum = 0.0;
        for (double w : gmm.weights) wsum += w;
        for (double& w : gmm.weights) w /= wsum;
    }
    return run;
}

}  // namespace detail

// EM fit with k-means++ seeding and restarts; keeps the best run by final
// log-likelihood. Throws InsufficientData when rows < 2k.
inline detail::EmRun fit_gmm(const Eigen::MatrixXd& x, int k, RngStream& rng,
                             int restarts = 3, int max_iter = 500, double rel_tol = 1e-6) {
    if (k < 1) throw BadSpec("components_per_class must be >= 1");
    if (x.rows() < 2 * k)
        throw InsufficientData("GMM needs at least 2 rows per component, got " +
                               std::to_string(x.rows()) + " for k=" + std::to_string(k));
    detail::EmRun best;
    for (int r = 0; r < restarts; ++r) {
        auto run = detail::run_em(x, k, rng.child(static_cast<std::uint64_t>(r)), max_iter, rel_tol);
        if (run.final_ll > best.final_ll) best = std::move(run);
    }
    return best;
}

}  // namespace dge
