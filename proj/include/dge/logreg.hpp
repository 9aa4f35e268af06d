#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "dge/error.hpp"

namespace dge {

struct LogRegParams {
    Eigen::VectorXd weights;
    double bias = 0.0;
};

// Full-batch gradient descent on mean cross-entropy + l2/2 ||w||^2 (bias
// unregularized), with step halving on any loss increase. Runs until the
// gradient norm drops below 1e-6 or 10^4 steps. Deterministic: zero init.
inline LogRegParams logreg_train(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double l2,
                                 int max_steps = 10000, double grad_tol = 1e-6) {
    const Eigen::Index n = x.rows(), d = x.cols();
    LogRegParams p;
    p.weights = Eigen::VectorXd::Zero(d);
    p.bias = 0.0;

    auto eval = [&](const Eigen::VectorXd& w, double b, Eigen::VectorXd* gw, double* gb) {
        Eigen::VectorXd z = x * w;
        z.array() += b;
        double loss = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            loss += (z(i) > 0.0 ? z(i) : 0.0) + std::log1p(std::exp(-std::abs(z(i)))) -
                    y(i) * z(i);
        loss = loss / static_cast<double>(n) + 0.5 * l2 * w.squaredNorm();
        if (!std::isfinite(loss)) throw NonFiniteLoss("logistic loss diverged");
        if (gw) {
            Eigen::VectorXd sigma(n);
            for (Eigen::Index i = 0; i < n; ++i) sigma(i) = 1.0 / (1.0 + std::exp(-z(i)));
            const Eigen::VectorXd resid = (sigma - y) / static_cast<double>(n);
            *gw = x.transpose() * resid + l2 * w;
            *gb = resid.sum();
        }
        return loss;
    };

    double lr = 1.0;
    Eigen::VectorXd gw(d);
    double gb = 0.0;
    double loss = eval(p.weights, p.bias, &gw, &gb);
    for (int step = 0; step < max_steps; ++step) {
        const double gnorm = std::sqrt(gw.squaredNorm() + gb * gb);
        if (gnorm < grad_tol) break;
        // halve the step until the loss decreases; cheap line search that
        // keeps plain GD stable without a hand-tuned rate
        for (;;) {
            const Eigen::VectorXd w_try = p.weights - lr * gw;
            const double b_try = p.bias - lr * gb;
            const double loss_try = eval(w_try, b_try, nullptr, nullptr);
            if (loss_try <= loss || lr < 1e-12) {
                p.weights = w_try;
                p.bias = b_try;
                loss = loss_try;
                break;
            }
            lr *= 0.5;
        }
        loss = eval(p.weights, p.bias, &gw, &gb);
        lr *= 1.1;  // slow recovery so steps stay near the stability edge
    }
    return p;
}

inline Eigen::VectorXd logreg_predict(const LogRegParams& p, const Eigen::MatrixXd& x) {
    Eigen::VectorXd z = x * p.weights;
    z.array() += p.bias;
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = 1.0 / (1.0 + std::exp(-z(i)));
    return z;
}

}  // namespace dge
