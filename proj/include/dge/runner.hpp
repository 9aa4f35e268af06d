#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dge/bundle.hpp"
#include "dge/csv.hpp"
#include "dge/curves.hpp"
#include "dge/exp_config.hpp"
#include "dge/grid.hpp"
#include "dge/metrics.hpp"
#include "dge/parallel.hpp"
#include "dge/protocols.hpp"
#include "dge/split.hpp"
#include "dge/subgroups.hpp"
#include "dge/toy_data.hpp"

namespace dge {

// Fixed child labels for the per-run stream; every stochastic step hangs off
// one of these so that a table cell is replayable from (config, root_seed).
namespace stream {
constexpr std::uint64_t kSplitSeed = 4;
constexpr std::uint64_t kRunBase = 16;  // run r uses child(kRunBase + r)
constexpr std::uint64_t kGenerators = 0;
constexpr std::uint64_t kClassifiers = 1;  // .child(k).child(j): seed j on dataset k
constexpr std::uint64_t kOracle = 2;
constexpr std::uint64_t kConcat = 3;
constexpr std::uint64_t kSynthSplits = 4;
}  // namespace stream

struct RunRecord {
    Json results;  // deterministic; byte-identical under replay
    Json timings;  // wall clock, kept out of results on purpose

    double report_mean(const std::string& approach, const std::string& metric) const {
        for (const auto& r : results.at("reports")) {
            if (r.at("approach") == approach && r.at("metric") == metric)
                return r.at("mean").get<double>();
        }
        throw DataError("no report for " + approach + "/" + metric);
    }
};

namespace detail {

inline Json aggregate_report(const std::string& approach, const std::string& metric,
                             const std::vector<double>& per_run) {
    auto stats = mc_stats({per_run, metric});
    return Json{{"approach", approach},
                {"metric", metric},
                {"mean", stats.mean},
                {"std", stats.variance ? std::sqrt(*stats.variance) : 0.0},
                {"per_run", per_run}};
}

struct RunnerContext {
    ExperimentConfig cfg;
    TabularDataset real_all;
    TabularDataset real_train;
    TabularDataset real_test;

    explicit RunnerContext(const ExperimentConfig& config)
        : cfg(config), real_all(load_real(config)), real_train(real_all), real_test(real_all) {
        const std::uint64_t split_seed =
            RngStream(cfg.root_seed).child(stream::kSplitSeed).next_u64();
        const auto idx = split(real_all, cfg.data.train_fraction, split_seed, cfg.data.stratified);
        real_train = train_view(real_all, idx);
        real_test = test_view(real_all, idx);
    }

    static TabularDataset load_real(const ExperimentConfig& cfg) {
        if (cfg.data.toy)
            return gen_toy({*cfg.data.toy, cfg.data.n, cfg.data.noise, cfg.root_seed});
        CsvOptions opts;
        opts.label_name = cfg.data.label;
        opts.positive_label = cfg.data.positive;
        return read_csv(*cfg.data.csv, opts);
    }

    RngStream run_stream(std::size_t run) const {
        return RngStream(cfg.root_seed).child(stream::kRunBase + run);
    }

    SyntheticBundle make_bundle(const RngStream& run, std::size_t k, std::size_t n_synth) const {
        DgeOptions opts;
        opts.disjoint_train = cfg.disjoint_train;
        auto bundle =
            dge_generate(cfg.generator, real_train, k, n_synth, run.child(stream::kGenerators),
                         opts);
        if (cfg.uq.force_identical_sets) {
            for (std::size_t i = 1; i < bundle.datasets.size(); ++i)
                bundle.datasets[i] = bundle.datasets[0];
        }
        return bundle;
    }

    // one classifier per synthetic dataset, seed path [k, j]
    std::vector<ClassifierModel> train_members(const RngStream& run,
                                               const SyntheticBundle& bundle,
                                               const ClassifierSpec& spec,
                                               std::uint64_t seed_j = 0) const {
        std::vector<std::optional<ClassifierModel>> slots(bundle.datasets.size());
        parallel_for(bundle.datasets.size(), [&](std::size_t k) {
            RngStream rng = run.child(stream::kClassifiers).child(k).child(seed_j);
            slots[k] = train_classifier(spec, bundle.datasets[k], rng);
        });
        std::vector<ClassifierModel> out;
        out.reserve(slots.size());
        for (auto& s : slots) out.push_back(std::move(*s));
        return out;
    }

    // J classifiers with different seeds on one fixed dataset
    std::vector<ClassifierModel> train_seed_ensemble(const RngStream& run,
                                                     std::uint64_t dataset_label,
                                                     const TabularDataset& data,
                                                     const ClassifierSpec& spec,
                                                     std::size_t n_seeds) const {
        std::vector<std::optional<ClassifierModel>> slots(n_seeds);
        parallel_for(n_seeds, [&](std::size_t j) {
            RngStream rng = dataset_label == stream::kOracle || dataset_label == stream::kConcat
                                ? run.child(dataset_label).child(j)
                                : run.child(stream::kClassifiers).child(dataset_label).child(j);
            slots[j] = train_classifier(spec, data, rng);
        });
        std::vector<ClassifierModel> out;
        out.reserve(n_seeds);
        for (auto& s : slots) out.push_back(std::move(*s));
        return out;
    }
};

// ---------------------------------------------------------------- train ----

inline Json run_train(const RunnerContext& ctx) {
    const auto& cfg = ctx.cfg;
    const Metric metrics[2] = {Metric::Auc, Metric::Accuracy};
    std::map<std::string, std::map<std::string, std::vector<double>>> per_run;

    for (std::size_t r = 0; r < cfg.n_runs; ++r) {
        const RngStream run = ctx.run_stream(r);
        const auto bundle = ctx.make_bundle(run, cfg.ensemble.k, cfg.ensemble.n_synth);
        const auto members = ctx.train_members(run, bundle, cfg.downstream);

        // Naive (E): extra seeds on set 0; seed 0 is exactly the Naive (S) model
        auto naive_e_members = ctx.train_seed_ensemble(run, 0, bundle.datasets[0],
                                                       cfg.downstream,
                                                       cfg.uq.n_classifier_seeds);
        naive_e_members[0] = members[0];

        const auto concat_data = naive_view(bundle, NaiveMode::Concat);
        auto naive_c = ctx.train_seed_ensemble(run, stream::kConcat, concat_data,
                                               cfg.downstream, 1);
        auto oracle = ctx.train_seed_ensemble(run, stream::kOracle, ctx.real_train,
                                              cfg.downstream, 1);

        auto record = [&](const std::string& approach, const std::vector<double>& probs) {
            for (Metric m : metrics)
                per_run[approach][metric_name(m)].push_back(
                    score_metric(m, probs, ctx.real_test.labels()));
        };
        record("oracle", predict_proba(oracle[0], ctx.real_test));
        record("naive_s", predict_proba(members[0], ctx.real_test));
        record("naive_e",
               ensemble_predict(EnsemblePredictor{naive_e_members}, ctx.real_test).mean);
        record("naive_c", predict_proba(naive_c[0], ctx.real_test));

        // member probability matrix once; DGE_K averages the first K columns
        std::vector<std::vector<double>> member_probs;
        member_probs.reserve(members.size());
        for (const auto& m : members) member_probs.push_back(predict_proba(m, ctx.real_test));
        for (std::size_t kv : cfg.ensemble.k_values) {
            std::vector<double> mean(ctx.real_test.n_rows(), 0.0);
            for (std::size_t k = 0; k < kv; ++k)
                for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += member_probs[k][i];
            for (double& v : mean) v /= static_cast<double>(kv);
            record("dge_" + std::to_string(kv), mean);
        }
    }

    Json reports = Json::array();
    for (const auto& [approach, metrics_map] : per_run)
        for (const auto& [metric, values] : metrics_map)
            reports.push_back(aggregate_report(approach, metric, values));
    return Json{{"reports", std::move(reports)}};
}

// ------------------------------------------------------------- evaluate ----

struct EvaluateRunOutput {
    std::map<std::string, double> approach_means;             // mean over k
    std::map<std::string, std::vector<double>> per_k_values;  // raw T^k draws
};

inline EvaluateRunOutput evaluate_core(const RunnerContext& ctx, const RngStream& split_stream,
                                       const RngStream& clf_stream,
                                       const SyntheticBundle& bundle,
                                       const ClassifierSpec& spec, Metric metric) {
    const auto& cfg = ctx.cfg;
    const std::size_t k = bundle.datasets.size();

    // split each synthetic set and train g_k on its train part; the split
    // stream is shared across model classes so rankings compare like with like
    std::vector<TabularDataset> synth_train, synth_test;
    synth_train.reserve(k);
    synth_test.reserve(k);
    RngStream split_rng = split_stream.child(stream::kSynthSplits);
    for (std::size_t i = 0; i < k; ++i) {
        const auto idx = split(bundle.datasets[i], cfg.evaluation.synth_train_fraction,
                               split_rng.child(i).next_u64(), cfg.data.stratified);
        synth_train.push_back(bundle.datasets[i].subset(idx.train_ids));
        synth_test.push_back(bundle.datasets[i].subset(idx.test_ids));
    }

    std::vector<std::optional<ClassifierModel>> slots(k);
    parallel_for(k, [&](std::size_t i) {
        RngStream rng = clf_stream.child(stream::kClassifiers).child(i).child(0);
        slots[i] = train_classifier(spec, synth_train[i], rng);
    });
    std::vector<ClassifierModel> models;
    models.reserve(k);
    for (auto& s : slots) models.push_back(std::move(*s));

    EvaluateRunOutput out;
    auto push = [&](const std::string& name, const StatisticSamples& samples) {
        out.per_k_values[name] = samples.values;
        out.approach_means[name] = mc_stats(samples).mean;
    };
    push("naive", cross_dataset_eval(models, synth_test, CrossEvalMode::naive(), metric));
    for (std::size_t kp : cfg.evaluation.k_prime_values) {
        const std::size_t capped = std::min(kp, k - 1);
        if (capped < 1) continue;
        push("dge_cross_" + std::to_string(kp),
             cross_dataset_eval(models, synth_test, CrossEvalMode::dge_cross(capped), metric));
    }
    StatisticSamples oracle{{}, metric_name(metric)};
    for (const auto& m : models)
        oracle.values.push_back(evaluate_model(m, ctx.real_test, metric));
    push("oracle", oracle);
    return out;
}

inline Json run_evaluate(const RunnerContext& ctx) {
    const auto& cfg = ctx.cfg;
    if (cfg.ensemble.k < 2) throw ConfigError("evaluate experiment needs ensemble.k >= 2");
    std::map<std::string, std::vector<double>> per_run;
    for (std::size_t r = 0; r < cfg.n_runs; ++r) {
        const RngStream run = ctx.run_stream(r);
        const auto bundle = ctx.make_bundle(run, cfg.ensemble.k, cfg.ensemble.n_synth);
        auto out = evaluate_core(ctx, run, run, bundle, cfg.downstream, Metric::Auc);
        for (const auto& [approach, mean] : out.approach_means)
            per_run[approach].push_back(mean);
    }
    Json reports = Json::array();
    for (const auto& [approach, values] : per_run)
        reports.push_back(aggregate_report(approach, "auc", values));
    return Json{{"reports", std::move(reports)}};
}

// --------------------------------------------------------------- select ----

inline Json run_select(const RunnerContext& ctx) {
    const auto& cfg = ctx.cfg;
    if (cfg.downstream_list.size() < 2)
        throw ConfigError("select experiment needs >= 2 downstream specs");
    std::vector<std::string> class_names;
    for (const auto& spec : cfg.downstream_list)
        class_names.push_back(classifier_class_name(spec.cls));

    // per approach: per run: per class mean AUC
    std::map<std::string, std::vector<std::vector<double>>> class_means;
    std::map<std::string, std::vector<double>> spearman_per_run;

    for (std::size_t r = 0; r < cfg.n_runs; ++r) {
        const RngStream run = ctx.run_stream(r);
        const auto bundle = ctx.make_bundle(run, cfg.ensemble.k, cfg.ensemble.n_synth);

        std::map<std::string, std::vector<double>> this_run;  // approach -> per-class means
        for (std::size_t c = 0; c < cfg.downstream_list.size(); ++c) {
            // classifier streams offset per class so classes stay independent
            RngStream class_run = run.child(64 + c);
            auto out = evaluate_core(ctx, run, class_run, bundle, cfg.downstream_list[c],
                                     Metric::Auc);
            for (const auto& [approach, mean] : out.approach_means)
                this_run[approach].push_back(mean);
        }
        for (auto& [approach, means] : this_run) {
            class_means[approach].push_back(means);
            if (approach != "oracle")
                spearman_per_run[approach].push_back(spearman(means, this_run["oracle"]));
        }
        spearman_per_run["oracle"].push_back(1.0);
    }

    Json rankings = Json::array();
    Json reports = Json::array();
    for (const auto& [approach, runs] : class_means) {
        // mean AUC per class across runs, plus the ranking of those means
        std::vector<double> mean_by_class(class_names.size(), 0.0);
        for (const auto& run_vals : runs)
            for (std::size_t c = 0; c < run_vals.size(); ++c) mean_by_class[c] += run_vals[c];
        for (double& v : mean_by_class) v /= static_cast<double>(runs.size());
        const auto ranks = rank_descending(mean_by_class);
        const auto stats = mc_stats({spearman_per_run[approach], "spearman"});
        rankings.push_back(Json{{"approach", approach},
                                {"classes", class_names},
                                {"mean_auc", mean_by_class},
                                {"ranks", ranks},
                                {"spearman_mean", stats.mean},
                                {"spearman_per_run", spearman_per_run[approach]}});
        for (std::size_t c = 0; c < class_names.size(); ++c) {
            std::vector<double> per_run_class;
            for (const auto& run_vals : runs) per_run_class.push_back(run_vals[c]);
            reports.push_back(
                aggregate_report(approach + "/" + class_names[c], "auc", per_run_class));
        }
    }
    return Json{{"reports", std::move(reports)}, {"rankings", std::move(rankings)}};
}

// ------------------------------------------------------------------- uq ----

inline Json grid_to_json(const UncertaintyGrid& grid) {
    Json segs = Json::array();
    for (const auto& s : grid.boundary) segs.push_back(Json::array({s[0], s[1], s[2], s[3]}));
    return Json{{"xs", grid.xs},       {"ys", grid.ys},
                {"mean", grid.mean},   {"stddev", grid.stddev},
                {"boundary", std::move(segs)}, {"mean_std", grid.mean_std()}};
}

inline Json run_uq(const RunnerContext& ctx) {
    const auto& cfg = ctx.cfg;
    const bool is_2d = ctx.real_all.schema().n_features() == 2 &&
                       ctx.real_all.schema().all_numeric();

    BoundingBox bbox;
    if (is_2d) {
        bbox = {ctx.real_all.cell(0, 0), ctx.real_all.cell(0, 0), ctx.real_all.cell(0, 1),
                ctx.real_all.cell(0, 1)};
        for (std::size_t r = 0; r < ctx.real_all.n_rows(); ++r) {
            bbox.x_min = std::min(bbox.x_min, ctx.real_all.cell(r, 0));
            bbox.x_max = std::max(bbox.x_max, ctx.real_all.cell(r, 0));
            bbox.y_min = std::min(bbox.y_min, ctx.real_all.cell(r, 1));
            bbox.y_max = std::max(bbox.y_max, ctx.real_all.cell(r, 1));
        }
        bbox.x_min -= cfg.uq.grid_margin;
        bbox.x_max += cfg.uq.grid_margin;
        bbox.y_min -= cfg.uq.grid_margin;
        bbox.y_max += cfg.uq.grid_margin;
    }

    const std::vector<std::string> approaches{"naive_e", "naive_c", "dge", "oracle"};
    std::map<std::string, std::vector<std::vector<std::optional<double>>>> curve_acc;
    std::map<std::string, std::vector<std::vector<double>>> curve_cov;
    std::map<std::string, std::vector<double>> grid_mean_std;
    std::map<std::string, std::vector<double>> auc_per_run;
    Json run0_grids = Json::object();

    for (std::size_t r = 0; r < cfg.n_runs; ++r) {
        const RngStream run = ctx.run_stream(r);
        const auto bundle = ctx.make_bundle(run, cfg.ensemble.k, cfg.ensemble.n_synth);

        std::map<std::string, EnsemblePredictor> ens;
        ens["dge"] = EnsemblePredictor{ctx.train_members(run, bundle, cfg.downstream)};
        ens["naive_e"] = EnsemblePredictor{ctx.train_seed_ensemble(
            run, 0, bundle.datasets[0], cfg.downstream, cfg.uq.n_classifier_seeds)};
        const auto concat_data = naive_view(bundle, NaiveMode::Concat);
        ens["naive_c"] = EnsemblePredictor{ctx.train_seed_ensemble(
            run, stream::kConcat, concat_data, cfg.downstream, cfg.uq.n_classifier_seeds)};
        ens["oracle"] = EnsemblePredictor{ctx.train_seed_ensemble(
            run, stream::kOracle, ctx.real_train, cfg.downstream, cfg.uq.n_classifier_seeds)};

        for (const auto& name : approaches) {
            const auto pred = ensemble_predict(ens[name], ctx.real_test);
            const auto curve = confidence_accuracy_curve(pred.mean, ctx.real_test.labels(),
                                                         cfg.uq.thresholds);
            curve_acc[name].push_back(curve.accuracy_at_tau);
            curve_cov[name].push_back(curve.coverage_at_tau);
            auc_per_run[name].push_back(auc(pred.mean, ctx.real_test.labels()));
            if (is_2d) {
                const auto grid = uncertainty_grid(ens[name], bbox, cfg.uq.grid_resolution,
                                                   cfg.uq.grid_resolution);
                grid_mean_std[name].push_back(grid.mean_std());
                if (r == 0) run0_grids[name] = grid_to_json(grid);
            }
        }
    }

    Json curves = Json::object();
    for (const auto& name : approaches) {
        Json acc_mean = Json::array();
        Json acc_runs = Json::array();
        for (std::size_t t = 0; t < cfg.uq.thresholds.size(); ++t) {
            double sum = 0.0;
            std::size_t defined = 0;
            for (const auto& run_vals : curve_acc[name]) {
                if (run_vals[t]) {
                    sum += *run_vals[t];
                    ++defined;
                }
            }
            acc_mean.push_back(defined > 0 ? Json(sum / static_cast<double>(defined))
                                           : Json(nullptr));
        }
        for (const auto& run_vals : curve_acc[name]) {
            Json one = Json::array();
            for (const auto& v : run_vals) one.push_back(v ? Json(*v) : Json(nullptr));
            acc_runs.push_back(std::move(one));
        }
        std::vector<double> cov_mean(cfg.uq.thresholds.size(), 0.0);
        for (const auto& run_vals : curve_cov[name])
            for (std::size_t t = 0; t < run_vals.size(); ++t) cov_mean[t] += run_vals[t];
        for (double& v : cov_mean) v /= static_cast<double>(cfg.n_runs);
        curves[name] = Json{{"thresholds", cfg.uq.thresholds},
                            {"accuracy_mean", std::move(acc_mean)},
                            {"accuracy_per_run", std::move(acc_runs)},
                            {"coverage_mean", cov_mean}};
    }

    Json reports = Json::array();
    for (const auto& name : approaches)
        reports.push_back(aggregate_report(name, "auc", auc_per_run[name]));
    Json out{{"reports", std::move(reports)}, {"curves", std::move(curves)}};
    if (is_2d) {
        Json gs = Json::object();
        for (const auto& [name, values] : grid_mean_std)
            gs[name] = aggregate_report(name, "grid_mean_std", values);
        out["grid_mean_std"] = std::move(gs);
        out["grids_run0"] = std::move(run0_grids);
    }
    return out;
}

// ------------------------------------------------------------ subgroups ----

inline Json run_subgroups(const RunnerContext& ctx) {
    const auto& cfg = ctx.cfg;
    const auto rules = minority_subgroups(ctx.real_all);
    if (rules.empty()) throw NoSubgroups("no feature qualifies for the minority rule");

    const std::vector<std::string> approaches{"oracle", "naive_s", "dge"};
    // per rule, per approach, per run accuracy on subgroup rows of the test set
    std::vector<std::map<std::string, std::vector<double>>> acc(rules.size());
    std::map<std::string, std::vector<double>> overall;
    std::vector<std::vector<std::size_t>> counts(rules.size());

    for (std::size_t r = 0; r < cfg.n_runs; ++r) {
        const RngStream run = ctx.run_stream(r);
        const auto bundle = ctx.make_bundle(run, cfg.ensemble.k, cfg.ensemble.n_synth);
        const auto members = ctx.train_members(run, bundle, cfg.downstream);
        auto oracle = ctx.train_seed_ensemble(run, stream::kOracle, ctx.real_train,
                                              cfg.downstream, 1);

        std::map<std::string, std::vector<double>> probs;
        probs["oracle"] = predict_proba(oracle[0], ctx.real_test);
        probs["naive_s"] = predict_proba(members[0], ctx.real_test);
        probs["dge"] = ensemble_predict(EnsemblePredictor{members}, ctx.real_test).mean;

        for (const auto& name : approaches)
            overall[name].push_back(accuracy(probs[name], ctx.real_test.labels()));

        for (std::size_t g = 0; g < rules.size(); ++g) {
            std::vector<double> sub_probs;
            std::vector<int> sub_labels;
            for (std::size_t row = 0; row < ctx.real_test.n_rows(); ++row) {
                if (subgroup_member(rules[g], ctx.real_test, row)) {
                    sub_labels.push_back(ctx.real_test.label(row));
                }
            }
            counts[g].push_back(sub_labels.size());
            for (const auto& name : approaches) {
                sub_probs.clear();
                for (std::size_t row = 0; row < ctx.real_test.n_rows(); ++row)
                    if (subgroup_member(rules[g], ctx.real_test, row))
                        sub_probs.push_back(probs[name][row]);
                acc[g][name].push_back(sub_labels.empty()
                                           ? 0.0
                                           : accuracy(sub_probs, sub_labels));
            }
        }
    }

    Json subgroup_json = Json::array();
    for (std::size_t g = 0; g < rules.size(); ++g) {
        Json approaches_json = Json::object();
        for (const auto& name : approaches) {
            const auto stats = mc_stats({acc[g][name], "accuracy"});
            const auto oracle_stats = mc_stats({acc[g]["oracle"], "accuracy"});
            approaches_json[name] =
                Json{{"accuracy_mean", stats.mean},
                     {"accuracy_std", stats.variance ? std::sqrt(*stats.variance) : 0.0},
                     {"relative_to_oracle", stats.mean - oracle_stats.mean},
                     {"per_run", acc[g][name]}};
        }
        subgroup_json.push_back(Json{{"rule", rules[g].describe(ctx.real_all.schema())},
                                     {"share", rules[g].share},
                                     {"test_counts", counts[g]},
                                     {"approaches", std::move(approaches_json)}});
    }
    Json reports = Json::array();
    for (const auto& name : approaches)
        reports.push_back(aggregate_report(name, "overall_accuracy", overall[name]));
    return Json{{"reports", std::move(reports)}, {"subgroups", std::move(subgroup_json)}};
}

// ---------------------------------------------------------------- sweep ----

inline Json run_single(const RunnerContext& ctx);

inline Json run_sweep(const RunnerContext& ctx) {
    const auto& cfg = ctx.cfg;
    if (cfg.sweep.values.size() < 1) throw ConfigError("sweep needs values");
    Json per_value = Json::array();
    for (double value : cfg.sweep.values) {
        ExperimentConfig sub = cfg;
        sub.experiment = cfg.sweep.base;
        switch (cfg.sweep.knob) {
            case SweepKnob::BandwidthScale: sub.generator.bandwidth_scale = value; break;
            case SweepKnob::ComponentsPerClass:
                sub.generator.components_per_class = static_cast<int>(value);
                break;
            case SweepKnob::NSynth:
                sub.ensemble.n_synth = static_cast<std::size_t>(value);
                break;
        }
        RunnerContext sub_ctx(sub);
        Json sub_result = run_single(sub_ctx);
        per_value.push_back(Json{{"value", value}, {"result", std::move(sub_result)}});
    }
    return Json{{"sweep_values", cfg.sweep.values}, {"per_value", std::move(per_value)}};
}

inline Json run_single(const RunnerContext& ctx) {
    switch (ctx.cfg.experiment) {
        case ExperimentKind::Train: return run_train(ctx);
        case ExperimentKind::Evaluate: return run_evaluate(ctx);
        case ExperimentKind::Select: return run_select(ctx);
        case ExperimentKind::Uq: return run_uq(ctx);
        case ExperimentKind::Subgroups: return run_subgroups(ctx);
        case ExperimentKind::Sweep: return run_sweep(ctx);
    }
    throw ConfigError("unknown experiment kind");
}

}  // namespace detail

inline RunRecord run_experiment(const ExperimentConfig& cfg) {
    const auto started = std::chrono::steady_clock::now();
    detail::RunnerContext ctx(cfg);
    Json payload = detail::run_single(ctx);

    const Json canonical = experiment_config_to_json(cfg);
    RunRecord record;
    record.results = Json{{"format", "dge-run"},
                          {"version", 1},
                          {"experiment", experiment_name(cfg.experiment)},
                          {"config", canonical},
                          {"config_hash", config_hash(canonical)},
                          {"root_seed", cfg.root_seed},
                          {"n_runs", cfg.n_runs}};
    for (auto& [key, value] : payload.items()) record.results[key] = std::move(value);

    const auto elapsed = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - started);
    record.timings = Json{{"total_seconds", elapsed.count()}};
    return record;
}

inline void write_run_record(const RunRecord& record, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + dir.string());
    save_json(record.results, dir / "results.json");
    save_json(record.timings, dir / "timings.json");
}

}  // namespace dge
