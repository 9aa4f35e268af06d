#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "dge/generator.hpp"
#include "dge/numeric.hpp"
#include "dge/toy_data.hpp"

using namespace dge;

namespace {

// Two well-separated clusters per class at x1 = +/-5, sigma = 0.3.
TabularDataset two_cluster_data(std::uint64_t seed, std::size_t per_cluster = 200) {
    RngStream rng(seed);
    std::vector<double> f;
    std::vector<int> labels;
    for (int y = 0; y < 2; ++y) {
        for (std::size_t i = 0; i < per_cluster; ++i) {
            for (double center : {-5.0, 5.0}) {
                f.push_back(center + 0.3 * rng.normal());
                f.push_back(0.3 * rng.normal());
                labels.push_back(y);
            }
        }
    }
    return TabularDataset(numeric_schema({"x1", "x2"}), std::move(f), std::move(labels));
}

GeneratorSpec gmm_spec(int components, std::int64_t seed = 0) {
    GeneratorSpec spec;
    spec.cls = GeneratorClass::Gmm;
    spec.components_per_class = components;
    spec.seed = seed;
    return spec;
}

}  // namespace

TEST_CASE("single-component fit is the closed-form mean and covariance", "[gmm]") {
    auto data = gen_gaussian_toy({ToyKind::Gaussian, 500, 0.0, 9});
    RngStream rng(1);
    auto fit = fit_generator(gmm_spec(1), data, rng);

    for (int y = 0; y < 2; ++y) {
        // oracle: per-class sample mean and MLE covariance computed directly
        std::vector<std::size_t> rows;
        for (std::size_t r = 0; r < data.n_rows(); ++r)
            if (data.label(r) == y) rows.push_back(r);
        Eigen::MatrixXd x(rows.size(), 2);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (int j = 0; j < 2; ++j) x(i, j) = data.cell(rows[i], j);
        const Eigen::VectorXd mean = x.colwise().mean().transpose();
        Eigen::MatrixXd centered = x.rowwise() - mean.transpose();
        Eigen::MatrixXd cov = centered.transpose() * centered / double(rows.size());
        cov.diagonal().array() += 1e-6 * cov.trace() / 2.0;

        const auto& comp = fit.model.gmm_per_class[y].components[0];
        REQUIRE((comp.mean - mean).norm() < 1e-8);
        REQUIRE((comp.cov - cov).norm() < 1e-6);
        REQUIRE(fit.model.gmm_per_class[y].weights[0] == 1.0);
    }
    const double prior = double(data.count_label(1)) / double(data.n_rows());
    REQUIRE(fit.model.class_prior_pos == prior);
}

TEST_CASE("two components find the two clusters", "[gmm]") {
    auto data = two_cluster_data(4);
    RngStream rng(2);
    auto fit = fit_generator(gmm_spec(2), data, rng);

    for (int y = 0; y < 2; ++y) {
        // oracle: cluster by sign of x1, compute means directly
        double neg_mean = 0, pos_mean = 0;
        std::size_t n_neg = 0, n_pos = 0;
        for (std::size_t r = 0; r < data.n_rows(); ++r) {
            if (data.label(r) != y) continue;
            if (data.cell(r, 0) < 0) { neg_mean += data.cell(r, 0); ++n_neg; }
            else { pos_mean += data.cell(r, 0); ++n_pos; }
        }
        neg_mean /= n_neg;
        pos_mean /= n_pos;

        auto& mix = fit.model.gmm_per_class[y];
        std::vector<double> centers{mix.components[0].mean(0), mix.components[1].mean(0)};
        std::sort(centers.begin(), centers.end());
        REQUIRE(std::abs(centers[0] - neg_mean) < 0.2);
        REQUIRE(std::abs(centers[1] - pos_mean) < 0.2);
        REQUIRE_THAT(mix.weights[0] + mix.weights[1],
                     Catch::Matchers::WithinAbs(1.0, 1e-9));
    }
    REQUIRE(fit.diagnostics.converged);
}

TEST_CASE("EM trace is non-decreasing over random seeds and datasets", "[gmm]") {
    int checked = 0;
    for (std::uint64_t ds = 0; ds < 5; ++ds) {
        auto data = gen_two_moons({ToyKind::TwoMoons, 300, 0.15, ds});
        for (std::uint64_t s = 0; s < 20; ++s) {
            RngStream rng(s * 31 + ds);
            auto fit = fit_generator(gmm_spec(3, std::int64_t(s)), data, rng);
            const auto& trace = fit.diagnostics.log_likelihood_trace;
            REQUIRE(trace.size() >= 2);
            for (std::size_t i = 1; i < trace.size(); ++i) {
                REQUIRE(trace[i] >= trace[i - 1] - 1e-9 * std::abs(trace[i - 1]));
                ++checked;
            }
        }
    }
    REQUIRE(checked > 100);
}

TEST_CASE("mixture weights and priors sum to one after fuzzed fits", "[gmm]") {
    RngStream fuzz(77);
    for (int rep = 0; rep < 20; ++rep) {
        auto data = gen_circles({ToyKind::Circles, 120 + 10 * rep, 0.1, std::uint64_t(rep)});
        RngStream rng(fuzz.next_u64());
        const int k = 1 + int(fuzz.uniform_int(4));
        auto fit = fit_generator(gmm_spec(k), data, rng);
        for (const auto& mix : fit.model.gmm_per_class) {
            double sum = 0;
            for (double w : mix.weights) sum += w;
            REQUIRE_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-9));
        }
        REQUIRE(fit.model.class_prior_pos > 0.0);
        REQUIRE(fit.model.class_prior_pos < 1.0);
    }
}

TEST_CASE("sampling matches the fitted prior and means", "[gmm]") {
    auto data = gen_gaussian_toy({ToyKind::Gaussian, 2000, 0.0, 3});
    RngStream rng(5);
    auto fit = fit_generator(gmm_spec(1), data, rng);
    RngStream srng(6);
    auto synth = sample_generator(fit.model, 100000, srng);

    const double p_hat = double(synth.count_label(1)) / double(synth.n_rows());
    const double p = fit.model.class_prior_pos;
    REQUIRE(std::abs(p_hat - p) < 3.0 * std::sqrt(p * (1 - p) / 100000.0));

    for (int y = 0; y < 2; ++y) {
        const auto& comp = fit.model.gmm_per_class[y].components[0];
        double mean_x1 = 0;
        std::size_t n = 0;
        for (std::size_t r = 0; r < synth.n_rows(); ++r) {
            if (synth.label(r) == y) { mean_x1 += synth.cell(r, 0); ++n; }
        }
        mean_x1 /= double(n);
        const double sigma = std::sqrt(comp.cov(0, 0) / double(n));
        REQUIRE(std::abs(mean_x1 - comp.mean(0)) < 3.5 * sigma);
    }

    // deterministic replay
    RngStream replay_a(6), replay_b(6);
    REQUIRE(sample_generator(fit.model, 100, replay_a) ==
            sample_generator(fit.model, 100, replay_b));
}

TEST_CASE("1-D sampling CDF matches the model CDF (KS < 0.01)", "[gmm]") {
    // class-conditional 1-D mixture; compare the empirical CDF of samples
    // against the analytic mixture CDF
    RngStream gen(11);
    std::vector<double> f;
    std::vector<int> labels;
    for (int i = 0; i < 600; ++i) {
        f.push_back(gen.bernoulli(0.4) ? gen.normal(-2.0, 0.5) : gen.normal(1.0, 1.2));
        labels.push_back(i % 2);
    }
    TabularDataset data(numeric_schema({"x"}), std::move(f), std::move(labels));
    RngStream rng(12);
    auto fit = fit_generator(gmm_spec(2), data, rng);

    const std::size_t n = 100000;
    RngStream srng(13);
    auto synth = sample_generator(fit.model, n, srng);

    for (int y = 0; y < 2; ++y) {
        std::vector<double> xs;
        for (std::size_t r = 0; r < n; ++r)
            if (synth.label(r) == y) xs.push_back(synth.cell(r, 0));
        std::sort(xs.begin(), xs.end());
        const auto& mix = fit.model.gmm_per_class[y];
        double ks = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double cdf = 0.0;
            for (std::size_t c = 0; c < mix.weights.size(); ++c)
                cdf += mix.weights[c] * normal_cdf(xs[i], mix.components[c].mean(0),
                                                   std::sqrt(mix.components[c].cov(0, 0)));
            const double lo = double(i) / xs.size(), hi = double(i + 1) / xs.size();
            ks = std::max({ks, std::abs(cdf - lo), std::abs(cdf - hi)});
        }
        REQUIRE(ks < 0.01);
    }
}

TEST_CASE("log_density equals the weighted component sum", "[gmm]") {
    auto data = two_cluster_data(21);
    RngStream rng(22);
    auto fit = fit_generator(gmm_spec(2), data, rng);
    RngStream probe(23);
    for (int rep = 0; rep < 10; ++rep) {
        const double row[2] = {probe.uniform(-7, 7), probe.uniform(-2, 2)};
        const int y = int(probe.uniform_int(2));
        // oracle: direct summation over components
        const auto& mix = fit.model.gmm_per_class[y];
        Eigen::Vector2d x(row[0], row[1]);
        double p = 0.0;
        for (std::size_t c = 0; c < mix.weights.size(); ++c)
            p += mix.weights[c] * std::exp(mix.components[c].log_pdf(x));
        const double prior = y == 1 ? fit.model.class_prior_pos : 1 - fit.model.class_prior_pos;
        REQUIRE_THAT(log_density(fit.model, row, y),
                     Catch::Matchers::WithinAbs(std::log(p * prior), 1e-9));
    }
}

TEST_CASE("gmm rejects unsupported schemas and insufficient data", "[gmm]") {
    Schema cat_schema({{"c", ColumnKind::Categorical, {"a", "b"}}}, "y", {"0", "1"}, "1");
    TabularDataset cat_data(cat_schema, {0, 1, 0, 1}, {0, 1, 0, 1});
    RngStream rng(1);
    REQUIRE_THROWS_AS(fit_generator(gmm_spec(1), cat_data, rng), UnsupportedSchema);

    TabularDataset tiny(numeric_schema({"x"}), {0.1, 0.2, 0.3, 0.4}, {0, 0, 1, 1});
    REQUIRE_THROWS_AS(fit_generator(gmm_spec(4), tiny, rng), InsufficientData);

    TabularDataset single(numeric_schema({"x"}), {0.1, 0.2, 0.3, 0.4}, {1, 1, 1, 1});
    REQUIRE_THROWS_AS(fit_generator(gmm_spec(1), single, rng), InsufficientData);
}
