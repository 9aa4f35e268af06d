#pragma once

#include <string>
#include <vector>

#include "dge/classifier.hpp"
#include "dge/dataset.hpp"
#include "dge/error.hpp"
#include "dge/metrics.hpp"

namespace dge {

enum class Metric { Auc, Accuracy };

inline const char* metric_name(Metric m) { return m == Metric::Auc ? "auc" : "accuracy"; }

inline double score_metric(Metric metric, const std::vector<double>& probs,
                           const std::vector<int>& labels) {
    return metric == Metric::Auc ? auc(probs, labels) : accuracy(probs, labels);
}

inline double evaluate_model(const ClassifierModel& model, const TabularDataset& test,
                             Metric metric) {
    return score_metric(metric, predict_proba(model, test), test.labels());
}

inline double evaluate_model(const EnsemblePredictor& ens, const TabularDataset& test,
                             Metric metric) {
    return score_metric(metric, ensemble_predict(ens, test).mean, test.labels());
}

// Which test data scores model k: its own synthetic test set (Naive) or the
// pool of K' other sets in cyclic index order (DgeCross).
struct CrossEvalMode {
    enum class Kind { Naive, DgeCross };
    Kind kind = Kind::Naive;
    std::size_t k_prime = 0;

    static CrossEvalMode naive() { return {Kind::Naive, 0}; }
    static CrossEvalMode dge_cross(std::size_t k_prime) { return {Kind::DgeCross, k_prime}; }
};

inline StatisticSamples cross_dataset_eval(const std::vector<ClassifierModel>& models,
                                           const std::vector<TabularDataset>& test_sets,
                                           CrossEvalMode mode, Metric metric) {
    const std::size_t k = models.size();
    if (k == 0 || test_sets.size() != k)
        throw InsufficientDatasets("need one test set per model");
    if (mode.kind == CrossEvalMode::Kind::DgeCross) {
        if (k < 2) throw InsufficientDatasets("DgeCross needs K >= 2");
        if (mode.k_prime < 1 || mode.k_prime > k - 1)
            throw InsufficientDatasets("K' must be in [1, K-1]");
    }

    StatisticSamples out;
    out.statistic_name = metric_name(metric);
    out.values.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (mode.kind == CrossEvalMode::Kind::Naive) {
            out.values.push_back(evaluate_model(models[i], test_sets[i], metric));
        } else {
            std::vector<TabularDataset> pool;
            pool.reserve(mode.k_prime);
            for (std::size_t step = 1; step <= mode.k_prime; ++step)
                pool.push_back(test_sets[(i + step) % k]);
            const TabularDataset joined =
                concat(pool, Provenance::synthetic(-1, "cross-eval pool"));
            out.values.push_back(evaluate_model(models[i], joined, metric));
        }
    }
    return out;
}

// Candidate model classes ranked by mean statistic, compared against a
// reference (oracle) ranking. Rank 1 is the best mean; ties share ranks.
struct RankingReport {
    std::vector<std::string> model_names;
    std::vector<double> candidate_means;
    std::vector<double> reference_means;
    std::vector<double> candidate_ranks;
    std::vector<double> reference_ranks;
    double spearman_vs_reference = 0.0;
};

inline RankingReport rank_models(const std::vector<std::string>& names,
                                 const std::vector<StatisticSamples>& candidates,
                                 const std::vector<double>& reference_means) {
    if (names.size() < 2) throw InsufficientDatasets("ranking needs >= 2 model classes");
    if (candidates.size() != names.size() || reference_means.size() != names.size())
        throw DataError("rank_models: size mismatch");
    RankingReport report;
    report.model_names = names;
    for (const auto& s : candidates) report.candidate_means.push_back(mc_stats(s).mean);
    report.reference_means = reference_means;
    report.candidate_ranks = rank_descending(report.candidate_means);
    report.reference_ranks = rank_descending(report.reference_means);
    report.spearman_vs_reference = spearman(report.candidate_means, reference_means);
    return report;
}

}  // namespace dge
