#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <vector>

#include "dge/encoding.hpp"
#include "dge/error.hpp"
#include "dge/rng.hpp"

namespace dge {

// Fully connected ReLU net with a single sigmoid output, trained with Adam
// on L2-regularized cross-entropy.
struct MlpParams {
    std::vector<Eigen::MatrixXd> weights;  // layer l: out x in
    std::vector<Eigen::VectorXd> biases;

    std::size_t count() const {
        std::size_t n = 0;
        for (std::size_t l = 0; l < weights.size(); ++l)
            n += static_cast<std::size_t>(weights[l].size() + biases[l].size());
        return n;
    }

    Eigen::VectorXd flatten() const {
        Eigen::VectorXd v(static_cast<Eigen::Index>(count()));
        Eigen::Index at = 0;
        for (std::size_t l = 0; l < weights.size(); ++l) {
            for (Eigen::Index j = 0; j < weights[l].size(); ++j) v(at++) = weights[l].data()[j];
            for (Eigen::Index j = 0; j < biases[l].size(); ++j) v(at++) = biases[l](j);
        }
        return v;
    }

    void unflatten(const Eigen::VectorXd& v) {
        Eigen::Index at = 0;
        for (std::size_t l = 0; l < weights.size(); ++l) {
            for (Eigen::Index j = 0; j < weights[l].size(); ++j) weights[l].data()[j] = v(at++);
            for (Eigen::Index j = 0; j < biases[l].size(); ++j) biases[l](j) = v(at++);
        }
    }
};

inline MlpParams mlp_init(std::size_t input_dim, const std::vector<int>& hidden, RngStream& rng) {
    MlpParams p;
    std::vector<std::size_t> dims{input_dim};
    for (int h : hidden) {
        if (h < 1) throw BadSpec("hidden layer width must be >= 1");
        dims.push_back(static_cast<std::size_t>(h));
    }
    dims.push_back(1);
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        Eigen::MatrixXd w(static_cast<Eigen::Index>(dims[l + 1]),
                          static_cast<Eigen::Index>(dims[l]));
        const double scale = std::sqrt(2.0 / static_cast<double>(dims[l]));
        for (Eigen::Index j = 0; j < w.size(); ++j) w.data()[j] = scale * rng.normal();
        p.weights.push_back(std::move(w));
        // small random biases keep dead rows off the exact ReLU kink
        Eigen::VectorXd b(static_cast<Eigen::Index>(dims[l + 1]));
        for (Eigen::Index j = 0; j < b.size(); ++j) b(j) = 0.01 * rng.normal();
        p.biases.push_back(std::move(b));
    }
    return p;
}

// Mean binary cross-entropy over the batch (computed from logits, stable for
// both signs) plus l2/2 * ||W||^2 on the weights. Gradients go to *grad when
// non-null. Kept as a pure function of (params, batch) so the finite
// difference check can probe the exact training objective.
inline double mlp_loss_grad(const MlpParams& params, const Eigen::MatrixXd& x,
                            const Eigen::VectorXd& y, double l2, MlpParams* grad) {
    const Eigen::Index n = x.rows();
    const std::size_t n_layers = params.weights.size();

    // forward
    std::vector<Eigen::MatrixXd> acts;  // activations per layer, n x width
    acts.reserve(n_layers + 1);
    acts.push_back(x);
    for (std::size_t l = 0; l + 1 < n_layers; ++l) {
        Eigen::MatrixXd z = (acts.back() * params.weights[l].transpose()).rowwise() +
                            params.biases[l].transpose();
        acts.push_back(z.cwiseMax(0.0));
    }
    Eigen::VectorXd logits =
        (acts.back() * params.weights[n_layers - 1].transpose()).col(0).array() +
        params.biases[n_layers - 1](0);

    double loss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double z = logits(i);
        // log(1 + e^z) - y z, computed stably
        loss += (z > 0.0 ? z : 0.0) + std::log1p(std::exp(-std::abs(z))) - y(i) * z;
    }
    loss /= static_cast<double>(n);
    for (const auto& w : params.weights) loss += 0.5 * l2 * w.squaredNorm();
    if (!std::isfinite(loss)) throw NonFiniteLoss("MLP loss diverged");
    if (!grad) return loss;

    // backward
    grad->weights.resize(n_layers);
    grad->biases.resize(n_layers);
    Eigen::VectorXd sigma(n);
    for (Eigen::Index i = 0; i < n; ++i) sigma(i) = 1.0 / (1.0 + std::exp(-logits(i)));
    Eigen::MatrixXd delta = (sigma - y) / static_cast<double>(n);  // n x 1
    for (std::size_t l = n_layers; l-- > 0;) {
        grad->weights[l] = delta.transpose() * acts[l] + l2 * params.weights[l];
        grad->biases[l] = delta.colwise().sum().transpose();
        if (l > 0) {
            Eigen::MatrixXd upstream = delta * params.weights[l];  // n x width(l-1)
            delta = (acts[l].array() > 0.0).cast<double>() * upstream.array();
        }
    }
    return loss;
}

struct MlpTrainConfig {
    std::vector<int> hidden{100, 100};
    double learning_rate = 1e-3;
    double l2 = 1e-4;
    int epochs = 200;
    int batch_size = 128;
};

// Adam with the usual bias correction; batches are reshuffled every epoch
// from the stream, so a fixed stream replays bit-identical training.
inline MlpParams mlp_train(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           const MlpTrainConfig& cfg, RngStream& rng) {
    if (cfg.learning_rate <= 0.0) throw BadSpec("learning_rate must be > 0");
    MlpParams params = mlp_init(static_cast<std::size_t>(x.cols()), cfg.hidden, rng);
    MlpParams grad = params;

    const Eigen::Index total = static_cast<Eigen::Index>(params.count());
    Eigen::VectorXd m = Eigen::VectorXd::Zero(total);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(total);
    const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    long t = 0;

    const Eigen::Index n = x.rows();
    const Eigen::Index batch = std::min<Eigen::Index>(std::max(cfg.batch_size, 1), n);
    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), std::size_t{0});

    Eigen::MatrixXd xb(batch, x.cols());
    Eigen::VectorXd yb(batch);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        for (Eigen::Index start = 0; start + batch <= n; start += batch) {
            for (Eigen::Index i = 0; i < batch; ++i) {
                xb.row(i) = x.row(static_cast<Eigen::Index>(order[static_cast<std::size_t>(start + i)]));
                yb(i) = y(static_cast<Eigen::Index>(order[static_cast<std::size_t>(start + i)]));
            }
            mlp_loss_grad(params, xb, yb, cfg.l2, &grad);

            ++t;
            Eigen::VectorXd g = grad.flatten();
            Eigen::VectorXd p = params.flatten();
            m = beta1 * m + (1.0 - beta1) * g;
            v = beta2 * v + (1.0 - beta2) * g.cwiseProduct(g);
            const double corr1 = 1.0 - std::pow(beta1, static_cast<double>(t));
            const double corr2 = 1.0 - std::pow(beta2, static_cast<double>(t));
            p -= (cfg.learning_rate / corr1) *
                 (m.array() / ((v.array() / corr2).sqrt() + eps)).matrix();
            params.unflatten(p);
        }
    }
    return params;
}

inline Eigen::VectorXd mlp_forward(const MlpParams& params, const Eigen::MatrixXd& x) {
    Eigen::MatrixXd h = x;
    const std::size_t n_layers = params.weights.size();
    for (std::size_t l = 0; l + 1 < n_layers; ++l) {
        h = ((h * params.weights[l].transpose()).rowwise() + params.biases[l].transpose())
                .cwiseMax(0.0);
    }
    Eigen::VectorXd logits =
        (h * params.weights[n_layers - 1].transpose()).col(0).array() +
        params.biases[n_layers - 1](0);
    for (Eigen::Index i = 0; i < logits.size(); ++i)
        logits(i) = 1.0 / (1.0 + std::exp(-logits(i)));
    return logits;
}

}  // namespace dge
