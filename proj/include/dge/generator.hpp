#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dge/cat_product.hpp"
#include "dge/dataset.hpp"
#include "dge/error.hpp"
#include "dge/gmm.hpp"
#include "dge/kde.hpp"
#include "dge/rng.hpp"

namespace dge {

enum class GeneratorClass { Gmm, Kde, CatProduct, Composite };
enum class NumericBackend { Gmm, Kde };

inline const char* generator_class_name(GeneratorClass c) {
    switch (c) {
        case GeneratorClass::Gmm: return "gmm";
        case GeneratorClass::Kde: return "kde";
        case GeneratorClass::CatProduct: return "cat_product";
        case GeneratorClass::Composite: return "composite";
    }
    return "?";
}

// Complexity knobs are class-specific: components_per_class for GMM (more =
// finer fit), bandwidth_scale for KDE (1.0 = Silverman reference, small =
// memorization, large = oversmoothing), dirichlet_smoothing for the
// categorical product. Composite picks one numeric backend and uses both
// its knob and the categorical smoothing.
struct GeneratorSpec {
    GeneratorClass cls = GeneratorClass::Kde;
    int components_per_class = 8;
    double bandwidth_scale = 1.0;
    double dirichlet_smoothing = 1.0;
    NumericBackend composite_numeric = NumericBackend::Kde;
    std::int64_t seed = 0;
    std::optional<std::size_t> n_train_cap;  // fit on a seeded subsample when set

    void validate() const {
        if (components_per_class < 1) throw BadSpec("components_per_class must be >= 1");
        if (!(bandwidth_scale > 0.0)) throw BadSpec("bandwidth_scale must be > 0");
        if (dirichlet_smoothing < 0.0) throw BadSpec("dirichlet_smoothing must be >= 0");
        if (n_train_cap && *n_train_cap < 4) throw BadSpec("n_train_cap must be >= 4");
    }
};

struct FitDiagnostics {
    std::vector<double> log_likelihood_trace;
    int n_iterations = 0;
    bool converged = true;
};

// A fitted class-conditional generative model. Numeric and categorical
// blocks are independent given the class; which blocks exist depends on the
// generator class and the schema.
struct GeneratorModel {
    GeneratorSpec spec;
    Schema schema;
    double class_prior_pos = 0.5;
    std::size_t n_train = 0;
    std::vector<std::size_t> numeric_cols;
    std::vector<std::size_t> categorical_cols;
    std::vector<GmmMixture> gmm_per_class;        // size 2 when backend is Gmm
    std::vector<KdeMixture> kde_per_class;        // size 2 when backend is Kde
    std::vector<CatProductModel> cat_per_class;   // size 2 when categorical block exists

    std::optional<NumericBackend> numeric_backend() const {
        if (!gmm_per_class.empty()) return NumericBackend::Gmm;
        if (!kde_per_class.empty()) return NumericBackend::Kde;
        return std::nullopt;
    }
};

struct FitResult {
    GeneratorModel model;
    FitDiagnostics diagnostics;
};

namespace detail {

inline Eigen::MatrixXd numeric_block(const TabularDataset& data,
                                     const std::vector<std::size_t>& rows,
                                     const std::vector<std::size_t>& cols) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                data.cell(rows[i], cols[j]);
    return m;
}

// Element-wise sum of per-class EM traces, shorter one padded with its final
// value so the combined curve still reflects both runs.
inline FitDiagnostics combine_traces(const std::vector<EmTrace>& traces) {
    FitDiagnostics diag;
    std::size_t longest = 0;
    for (const auto& t : traces) longest = std::max(longest, t.log_likelihood.size());
    diag.log_likelihood_trace.assign(longest, 0.0);
    for (const auto& t : traces) {
        diag.converged = diag.converged && t.converged;
        for (std::size_t i = 0; i < longest; ++i) {
            const double v = i < t.log_likelihood.size() ? t.log_likelihood[i]
                                                         : t.log_likelihood.back();
            diag.log_likelihood_trace[i] += v;
        }
    }
    diag.n_iterations = static_cast<int>(longest);
    return diag;
}

}  // namespace detail

// Fits the generator on (a seeded subsample of) the training data. GMM
// classes are fit per label by EM with restarts; KDE stores points and
// Silverman-scaled bandwidths; CatProduct stores smoothed frequencies.
inline FitResult fit_generator(const GeneratorSpec& spec, const TabularDataset& train,
                               RngStream& rng) {
    spec.validate();
    const Schema& schema = train.schema();
    const auto numeric_cols = schema.numeric_columns();
    const auto categorical_cols = schema.categorical_columns();

    const bool wants_numeric =
        spec.cls == GeneratorClass::Gmm || spec.cls == GeneratorClass::Kde ||
        (spec.cls == GeneratorClass::Composite && !numeric_cols.empty());
    const bool wants_categorical =
        spec.cls == GeneratorClass::CatProduct ||
        (spec.cls == GeneratorClass::Composite && !categorical_cols.empty());

    if ((spec.cls == GeneratorClass::Gmm || spec.cls == GeneratorClass::Kde) &&
        !categorical_cols.empty())
        throw UnsupportedSchema(std::string(generator_class_name(spec.cls)) +
                                " requires an all-numeric schema");
    if (spec.cls == GeneratorClass::CatProduct && !numeric_cols.empty())
        throw UnsupportedSchema("cat_product requires an all-categorical schema");
    if (wants_numeric && numeric_cols.empty())
        throw UnsupportedSchema("no numeric columns to model");

    // seeded subsample cap, the desk-scale stand-in for per-seed training noise
    std::vector<std::size_t> rows;
    if (spec.n_train_cap && *spec.n_train_cap < train.n_rows()) {
        RngStream sub = rng.child(0);
        rows = sub.sample_without_replacement(train.n_rows(), *spec.n_train_cap);
    } else {
        rows.resize(train.n_rows());
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    }

    std::vector<std::size_t> rows_by_class[2];
    for (std::size_t r : rows) rows_by_class[train.label(r)].push_back(r);
    if (rows_by_class[0].size() < 2 || rows_by_class[1].size() < 2)
        throw InsufficientData("need at least 2 rows of each class to fit");

    FitResult out;
    out.model.spec = spec;
    out.model.schema = schema;
    out.model.n_train = rows.size();
    out.model.class_prior_pos =
        static_cast<double>(rows_by_class[1].size()) / static_cast<double>(rows.size());
    out.model.numeric_cols = numeric_cols;
    out.model.categorical_cols = categorical_cols;

    const NumericBackend backend = spec.cls == GeneratorClass::Gmm ? NumericBackend::Gmm
                                   : spec.cls == GeneratorClass::Kde
                                       ? NumericBackend::Kde
                                       : spec.composite_numeric;

    std::vector<EmTrace> traces;
    for (int y = 0; y < 2; ++y) {
        if (wants_numeric) {
            auto block = detail::numeric_block(train, rows_by_class[y], numeric_cols);
            if (backend == NumericBackend::Gmm) {
                RngStream em_rng = rng.child(1 + static_cast<std::uint64_t>(y));
                auto run = fit_gmm(block, spec.components_per_class, em_rng);
                out.model.gmm_per_class.push_back(std::move(run.mixture));
                traces.push_back(std::move(run.trace));
            } else {
                out.model.kde_per_class.push_back(fit_kde(block, spec.bandwidth_scale));
            }
        }
        if (wants_categorical) {
            std::vector<std::vector<std::size_t>> cols;
            std::vector<std::size_t> n_levels;
            for (std::size_t c : categorical_cols) {
                std::vector<std::size_t> col;
                col.reserve(rows_by_class[y].size());
                for (std::size_t r : rows_by_class[y])
                    col.push_back(static_cast<std::size_t>(train.cell(r, c)));
                cols.push_back(std::move(col));
                n_levels.push_back(schema.feature(c).levels.size());
            }
            out.model.cat_per_class.push_back(
                fit_cat_product(cols, n_levels, spec.dirichlet_smoothing));
        }
    }
    if (!traces.empty()) out.diagnostics = detail::combine_traces(traces);
    return out;
}

// Draws n iid rows: label from the class prior, then features from the
// fitted class-conditional blocks.
inline TabularDataset sample_generator(const GeneratorModel& model, std::size_t n,
                                       RngStream& rng) {
    if (n < 1) throw BadSpec("sample size must be >= 1");
    const std::size_t d = model.schema.n_features();
    std::vector<double> features(n * d, 0.0);
    std::vector<int> labels(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const int y = rng.bernoulli(model.class_prior_pos) ? 1 : 0;
        labels[i] = y;
        if (auto backend = model.numeric_backend()) {
            const Eigen::VectorXd x = *backend == NumericBackend::Gmm
                                          ? model.gmm_per_class[static_cast<std::size_t>(y)].sample(rng)
                                          : model.kde_per_class[static_cast<std::size_t>(y)].sample(rng);
            for (std::size_t j = 0; j < model.numeric_cols.size(); ++j)
                features[i * d + model.numeric_cols[j]] = x(static_cast<Eigen::Index>(j));
        }
        if (!model.cat_per_class.empty()) {
            const auto levels = model.cat_per_class[static_cast<std::size_t>(y)].sample(rng);
            for (std::size_t j = 0; j < model.categorical_cols.size(); ++j)
                features[i * d + model.categorical_cols[j]] = static_cast<double>(levels[j]);
        }
    }
    return TabularDataset(model.schema, std::move(features), std::move(labels),
                          Provenance::synthetic(model.spec.seed,
                                                generator_class_name(model.spec.cls)));
}

// log p(x, y) under the fitted model.
inline double log_density(const GeneratorModel& model, const double* row, int y) {
    double lp = std::log(y == 1 ? model.class_prior_pos : 1.0 - model.class_prior_pos);
    if (auto backend = model.numeric_backend()) {
        Eigen::VectorXd x(static_cast<Eigen::Index>(model.numeric_cols.size()));
        for (std::size_t j = 0; j < model.numeric_cols.size(); ++j)
            x(static_cast<Eigen::Index>(j)) = row[model.numeric_cols[j]];
        lp += *backend == NumericBackend::Gmm
                  ? model.gmm_per_class[static_cast<std::size_t>(y)].log_pdf(x)
                  : model.kde_per_class[static_cast<std::size_t>(y)].log_pdf(x);
    }
    if (!model.cat_per_class.empty()) {
        std::vector<std::size_t> levels(model.categorical_cols.size());
        for (std::size_t j = 0; j < model.categorical_cols.size(); ++j)
            levels[j] = static_cast<std::size_t>(row[model.categorical_cols[j]]);
        lp += model.cat_per_class[static_cast<std::size_t>(y)].log_pmf(levels);
    }
    return lp;
}

inline double log_density(const GeneratorModel& model, const TabularDataset& data,
                          std::size_t row) {
    if (!(data.schema() == model.schema)) throw SchemaMismatch("row does not match model schema");
    return log_density(model, data.row(row), data.label(row));
}

// Mean log p(x, y) over a dataset; the held-out fit quality used by the
// complexity-knob diagnostics.
inline double avg_log_density(const GeneratorModel& model, const TabularDataset& data) {
    double total = 0.0;
    for (std::size_t r = 0; r < data.n_rows(); ++r) total += log_density(model, data, r);
    return total / static_cast<double>(data.n_rows());
}

}  // namespace dge
