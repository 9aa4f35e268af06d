#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dge/classifier.hpp"
#include "dge/error.hpp"
#include "dge/generator.hpp"
#include "dge/json_io.hpp"
#include "dge/toy_data.hpp"

namespace dge {

enum class ExperimentKind { Train, Evaluate, Select, Uq, Subgroups, Sweep };

inline const char* experiment_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Train: return "train";
        case ExperimentKind::Evaluate: return "evaluate";
        case ExperimentKind::Select: return "select";
        case ExperimentKind::Uq: return "uq";
        case ExperimentKind::Subgroups: return "subgroups";
        case ExperimentKind::Sweep: return "sweep";
    }
    return "?";
}

inline ExperimentKind experiment_from_name(const std::string& name) {
    if (name == "train") return ExperimentKind::Train;
    if (name == "evaluate") return ExperimentKind::Evaluate;
    if (name == "select") return ExperimentKind::Select;
    if (name == "uq") return ExperimentKind::Uq;
    if (name == "subgroups") return ExperimentKind::Subgroups;
    if (name == "sweep") return ExperimentKind::Sweep;
    throw ConfigError("unknown experiment: " + name);
}

struct DataConfig {
    std::optional<ToyKind> toy;       // either a toy kind ...
    std::optional<std::string> csv;   // ... or a CSV path
    std::size_t n = 4000;             // toy row count (train + test)
    double noise = 0.1;
    std::optional<std::string> label;     // CSV label column
    std::optional<std::string> positive;  // CSV positive level
    double train_fraction = 0.5;
    bool stratified = true;
};

struct EnsembleConfig {
    std::size_t k = 20;
    std::size_t n_synth = 2000;
    std::vector<std::size_t> k_values{5, 10, 20};  // DGE_K report sizes
};

struct EvaluationConfig {
    std::vector<std::size_t> k_prime_values{5, 10, 20};
    double synth_train_fraction = 0.8;
};

struct UqConfig {
    std::vector<double> thresholds{0.5, 0.6, 0.7, 0.8};
    std::size_t grid_resolution = 50;
    double grid_margin = 0.5;
    std::size_t n_classifier_seeds = 20;
    bool force_identical_sets = false;  // diagnostic: collapse the bundle to K copies of set 0
};

enum class SweepKnob { BandwidthScale, ComponentsPerClass, NSynth };

struct SweepConfig {
    ExperimentKind base = ExperimentKind::Evaluate;
    SweepKnob knob = SweepKnob::BandwidthScale;
    std::vector<double> values;
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::Train;
    std::filesystem::path output_dir;
    std::uint64_t root_seed = 0;
    std::size_t n_runs = 10;
    DataConfig data;
    GeneratorSpec generator;
    bool disjoint_train = false;
    EnsembleConfig ensemble;
    ClassifierSpec downstream;
    std::vector<ClassifierSpec> downstream_list;  // Select
    EvaluationConfig evaluation;
    UqConfig uq;
    SweepConfig sweep;
};

namespace detail {

inline void reject_unknown_keys(const Json& j, const std::vector<std::string>& allowed,
                                const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

inline DataConfig parse_data(const Json& j) {
    reject_unknown_keys(j, {"toy", "csv", "n", "noise", "label", "positive", "train_fraction",
                            "stratified"},
                        "data");
    DataConfig d;
    if (j.contains("toy")) {
        const auto name = j.at("toy").get<std::string>();
        if (name == "moons") d.toy = ToyKind::TwoMoons;
        else if (name == "circles") d.toy = ToyKind::Circles;
        else if (name == "gaussian") d.toy = ToyKind::Gaussian;
        else throw ConfigError("unknown toy dataset: " + name);
    }
    if (j.contains("csv")) d.csv = j.at("csv").get<std::string>();
    if (d.toy.has_value() == d.csv.has_value())
        throw ConfigError("data needs exactly one of 'toy' or 'csv'");
    d.n = j.value("n", d.n);
    d.noise = j.value("noise", d.noise);
    if (j.contains("label")) d.label = j.at("label").get<std::string>();
    if (j.contains("positive")) d.positive = j.at("positive").get<std::string>();
    d.train_fraction = j.value("train_fraction", d.train_fraction);
    d.stratified = j.value("stratified", d.stratified);
    if (!(d.train_fraction > 0.0 && d.train_fraction < 1.0))
        throw ConfigError("train_fraction must be in (0,1)");
    if (d.csv && !std::filesystem::exists(*d.csv))
        throw ConfigError("csv file does not exist: " + *d.csv);
    return d;
}

inline GeneratorSpec parse_generator(const Json& j) {
    reject_unknown_keys(j, {"class", "components_per_class", "bandwidth_scale",
                            "dirichlet_smoothing", "composite_numeric", "n_train_cap"},
                        "generator");
    try {
        Json spec_json = j;
        spec_json["seed"] = 0;
        return generator_spec_from_json(spec_json);
    } catch (const BadSpec& e) {
        throw ConfigError(std::string("generator: ") + e.what());
    }
}

inline ClassifierSpec parse_downstream(const Json& j) {
    reject_unknown_keys(j, {"class", "knn_k", "hidden", "n_trees", "learning_rate", "l2",
                            "epochs", "batch_size"},
                        "downstream");
    ClassifierSpec spec;
    const auto name = j.value("class", std::string("mlp"));
    if (name == "logreg") spec.cls = ClassifierClass::LogReg;
    else if (name == "knn") spec.cls = ClassifierClass::Knn;
    else if (name == "mlp") spec.cls = ClassifierClass::Mlp;
    else if (name == "deep_mlp") spec.cls = ClassifierClass::DeepMlp;
    else if (name == "random_forest") spec.cls = ClassifierClass::RandomForest;
    else throw ConfigError("unknown downstream class: " + name);
    spec.knn_k = j.value("knn_k", spec.knn_k);
    if (j.contains("hidden")) spec.hidden = j.at("hidden").get<std::vector<int>>();
    spec.n_trees = j.value("n_trees", spec.n_trees);
    spec.learning_rate = j.value("learning_rate", spec.learning_rate);
    spec.l2 = j.value("l2", spec.l2);
    spec.epochs = j.value("epochs", spec.epochs);
    spec.batch_size = j.value("batch_size", spec.batch_size);
    if (spec.knn_k < 1 || spec.n_trees < 1 || spec.epochs < 1 || spec.batch_size < 1 ||
        spec.learning_rate <= 0.0 || spec.l2 < 0.0)
        throw ConfigError("downstream hyperparameters out of range");
    for (int h : spec.hidden)
        if (h < 1) throw ConfigError("hidden widths must be >= 1");
    return spec;
}

}  // namespace detail

// Strict loader: unknown keys anywhere are config errors, so every knob in a
// config file is one the runner actually honours.
inline ExperimentConfig parse_experiment_config(const Json& j) {
    detail::reject_unknown_keys(
        j, {"experiment", "output_dir", "root_seed", "n_runs", "data", "generator",
            "disjoint_train", "ensemble", "downstream", "downstream_list", "evaluation", "uq",
            "sweep"},
        "config");
    ExperimentConfig cfg;
    if (!j.contains("experiment")) throw ConfigError("missing 'experiment'");
    cfg.experiment = experiment_from_name(j.at("experiment").get<std::string>());
    if (!j.contains("output_dir")) throw ConfigError("missing 'output_dir'");
    cfg.output_dir = j.at("output_dir").get<std::string>();
    cfg.root_seed = j.value("root_seed", cfg.root_seed);
    cfg.n_runs = j.value("n_runs", cfg.n_runs);
    if (cfg.n_runs < 1) throw ConfigError("n_runs must be >= 1");

    if (!j.contains("data")) throw ConfigError("missing 'data'");
    cfg.data = detail::parse_data(j.at("data"));
    cfg.generator = j.contains("generator") ? detail::parse_generator(j.at("generator"))
                                            : GeneratorSpec{};
    cfg.disjoint_train = j.value("disjoint_train", false);

    bool explicit_k_values = false;
    if (j.contains("ensemble")) {
        const auto& e = j.at("ensemble");
        detail::reject_unknown_keys(e, {"k", "n_synth", "k_values"}, "ensemble");
        cfg.ensemble.k = e.value("k", cfg.ensemble.k);
        cfg.ensemble.n_synth = e.value("n_synth", cfg.ensemble.n_synth);
        if (e.contains("k_values")) {
            cfg.ensemble.k_values = e.at("k_values").get<std::vector<std::size_t>>();
            explicit_k_values = true;
        }
    }
    if (cfg.ensemble.k < 1) throw ConfigError("ensemble.k must be >= 1");
    if (!explicit_k_values) {
        // default report sizes: the usual {5, 10, 20} capped at K, K always in
        std::vector<std::size_t> defaults;
        for (std::size_t kv : {std::size_t{5}, std::size_t{10}, std::size_t{20}})
            if (kv < cfg.ensemble.k) defaults.push_back(kv);
        defaults.push_back(cfg.ensemble.k);
        cfg.ensemble.k_values = std::move(defaults);
    }
    for (auto& kv : cfg.ensemble.k_values)
        if (kv < 1 || kv > cfg.ensemble.k)
            throw ConfigError("k_values must lie in [1, ensemble.k]");

    if (j.contains("downstream")) cfg.downstream = detail::parse_downstream(j.at("downstream"));
    if (j.contains("downstream_list")) {
        for (const auto& item : j.at("downstream_list"))
            cfg.downstream_list.push_back(detail::parse_downstream(item));
    }

    if (j.contains("evaluation")) {
        const auto& e = j.at("evaluation");
        detail::reject_unknown_keys(e, {"k_prime_values", "synth_train_fraction"}, "evaluation");
        if (e.contains("k_prime_values"))
            cfg.evaluation.k_prime_values = e.at("k_prime_values").get<std::vector<std::size_t>>();
        cfg.evaluation.synth_train_fraction =
            e.value("synth_train_fraction", cfg.evaluation.synth_train_fraction);
        if (!(cfg.evaluation.synth_train_fraction > 0 && cfg.evaluation.synth_train_fraction < 1))
            throw ConfigError("synth_train_fraction must be in (0,1)");
    }

    if (j.contains("uq")) {
        const auto& u = j.at("uq");
        detail::reject_unknown_keys(u, {"thresholds", "grid_resolution", "grid_margin",
                                        "n_classifier_seeds", "force_identical_sets"},
                                    "uq");
        if (u.contains("thresholds"))
            cfg.uq.thresholds = u.at("thresholds").get<std::vector<double>>();
        cfg.uq.grid_resolution = u.value("grid_resolution", cfg.uq.grid_resolution);
        cfg.uq.grid_margin = u.value("grid_margin", cfg.uq.grid_margin);
        cfg.uq.n_classifier_seeds = u.value("n_classifier_seeds", cfg.uq.n_classifier_seeds);
        cfg.uq.force_identical_sets = u.value("force_identical_sets", false);
        if (cfg.uq.grid_resolution < 2) throw ConfigError("grid_resolution must be >= 2");
        if (cfg.uq.n_classifier_seeds < 1) throw ConfigError("n_classifier_seeds must be >= 1");
    }

    if (cfg.experiment == ExperimentKind::Sweep) {
        if (!j.contains("sweep")) throw ConfigError("sweep experiment needs a 'sweep' section");
        const auto& s = j.at("sweep");
        detail::reject_unknown_keys(s, {"base", "knob", "values"}, "sweep");
        cfg.sweep.base = experiment_from_name(s.value("base", std::string("evaluate")));
        if (cfg.sweep.base == ExperimentKind::Sweep || cfg.sweep.base == ExperimentKind::Uq ||
            cfg.sweep.base == ExperimentKind::Subgroups)
            throw ConfigError("sweep base must be train, evaluate or select");
        const auto knob = s.value("knob", std::string("bandwidth_scale"));
        if (knob == "bandwidth_scale") cfg.sweep.knob = SweepKnob::BandwidthScale;
        else if (knob == "components_per_class") cfg.sweep.knob = SweepKnob::ComponentsPerClass;
        else if (knob == "n_synth") cfg.sweep.knob = SweepKnob::NSynth;
        else throw ConfigError("unknown sweep knob: " + knob);
        if (!s.contains("values")) throw ConfigError("sweep needs 'values'");
        cfg.sweep.values = s.at("values").get<std::vector<double>>();
        if (cfg.sweep.values.empty()) throw ConfigError("sweep values must be non-empty");
    }
    if (cfg.experiment == ExperimentKind::Select && cfg.downstream_list.size() < 2)
        throw ConfigError("select experiment needs downstream_list with >= 2 entries");
    return cfg;
}

inline ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    Json j;
    try {
        j = load_json(path);
    } catch (const ParseError& e) {
        throw ConfigError(e.what());
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    return parse_experiment_config(j);
}

inline Json classifier_spec_to_json(const ClassifierSpec& s) {
    return Json{{"class", classifier_class_name(s.cls)},
                {"knn_k", s.knn_k},
                {"hidden", s.hidden},
                {"n_trees", s.n_trees},
                {"learning_rate", s.learning_rate},
                {"l2", s.l2},
                {"epochs", s.epochs},
                {"batch_size", s.batch_size}};
}

// Canonical normalized config; its serialization feeds the config hash.
inline Json experiment_config_to_json(const ExperimentConfig& cfg) {
    Json data{{"n", cfg.data.n},
              {"noise", cfg.data.noise},
              {"train_fraction", cfg.data.train_fraction},
              {"stratified", cfg.data.stratified}};
    if (cfg.data.toy) data["toy"] = toy_kind_name(*cfg.data.toy);
    if (cfg.data.csv) data["csv"] = *cfg.data.csv;
    if (cfg.data.label) data["label"] = *cfg.data.label;
    if (cfg.data.positive) data["positive"] = *cfg.data.positive;

    Json j{{"experiment", experiment_name(cfg.experiment)},
           {"output_dir", cfg.output_dir.string()},
           {"root_seed", cfg.root_seed},
           {"n_runs", cfg.n_runs},
           {"data", std::move(data)},
           {"generator", generator_spec_to_json(cfg.generator)},
           {"disjoint_train", cfg.disjoint_train},
           {"ensemble", Json{{"k", cfg.ensemble.k},
                             {"n_synth", cfg.ensemble.n_synth},
                             {"k_values", cfg.ensemble.k_values}}},
           {"downstream", classifier_spec_to_json(cfg.downstream)},
           {"evaluation", Json{{"k_prime_values", cfg.evaluation.k_prime_values},
                               {"synth_train_fraction", cfg.evaluation.synth_train_fraction}}},
           {"uq", Json{{"thresholds", cfg.uq.thresholds},
                       {"grid_resolution", cfg.uq.grid_resolution},
                       {"grid_margin", cfg.uq.grid_margin},
                       {"n_classifier_seeds", cfg.uq.n_classifier_seeds},
                       {"force_identical_sets", cfg.uq.force_identical_sets}}}};
    if (!cfg.downstream_list.empty()) {
        Json list = Json::array();
        for (const auto& s : cfg.downstream_list) list.push_back(classifier_spec_to_json(s));
        j["downstream_list"] = std::move(list);
    }
    if (cfg.experiment == ExperimentKind::Sweep) {
        const char* knob = cfg.sweep.knob == SweepKnob::BandwidthScale ? "bandwidth_scale"
                           : cfg.sweep.knob == SweepKnob::ComponentsPerClass
                               ? "components_per_class"
                               : "n_synth";
        j["sweep"] = Json{{"base", experiment_name(cfg.sweep.base)},
                          {"knob", knob},
                          {"values", cfg.sweep.values}};
    }
    return j;
}

inline std::string config_hash(const Json& canonical) {
    const std::string text = canonical.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace dge
