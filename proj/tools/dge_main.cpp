// dge: publish-and-consume pipeline for ensembles of synthetic tabular datasets.
//
//   dge data gen --kind moons --n 2000 --seed 0 --out moons.csv
//   dge publish --real train.csv --class kde --bandwidth-scale 0.02 --k 20 \
//       --n-synth 2000 --out bundle/
//   dge run train --config cfg.json
//   dge report --in rundir --format csv --out rundir/report
//
// Exit codes: 0 success, 2 configuration error, 3 data error.

#include <CLI11.hpp>
#include <cstdio>
#include <string>

#include "dge/bundle.hpp"
#include "dge/csv.hpp"
#include "dge/report_io.hpp"
#include "dge/runner.hpp"
#include "dge/toy_data.hpp"

namespace {

struct DataGenArgs {
    std::string kind = "moons";
    std::size_t n = 2000;
    double noise = -1.0;  // default depends on kind
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_data_gen(const DataGenArgs& args) {
    dge::ToySpec spec;
    if (args.kind == "moons") spec.kind = dge::ToyKind::TwoMoons;
    else if (args.kind == "circles") spec.kind = dge::ToyKind::Circles;
    else if (args.kind == "gaussian") spec.kind = dge::ToyKind::Gaussian;
    else throw dge::ConfigError("unknown toy kind: " + args.kind);
    spec.n = args.n;
    spec.noise = args.noise >= 0 ? args.noise
                                 : (spec.kind == dge::ToyKind::Circles ? 0.05 : 0.1);
    spec.seed = args.seed;
    dge::write_csv(dge::gen_toy(spec), args.out);
    std::printf("wrote %zu rows to %s\n", spec.n, args.out.c_str());
    return 0;
}

struct PublishArgs {
    std::string real_csv;
    std::string label, positive;
    std::string generator_class = "kde";
    double bandwidth_scale = 1.0;
    int components_per_class = 8;
    double dirichlet_smoothing = 1.0;
    std::string composite_numeric = "kde";
    std::size_t k = 20;
    std::size_t n_synth = 2000;
    std::uint64_t seed = 0;
    std::size_t n_train_cap = 0;
    bool disjoint_train = false;
    std::string out;
};

int cmd_publish(const PublishArgs& args) {
    dge::CsvOptions opts;
    if (!args.label.empty()) opts.label_name = args.label;
    if (!args.positive.empty()) opts.positive_label = args.positive;
    const auto real = dge::read_csv(args.real_csv, opts);

    dge::GeneratorSpec spec;
    spec.cls = dge::generator_class_from_name(args.generator_class);
    spec.bandwidth_scale = args.bandwidth_scale;
    spec.components_per_class = args.components_per_class;
    spec.dirichlet_smoothing = args.dirichlet_smoothing;
    spec.composite_numeric =
        args.composite_numeric == "gmm" ? dge::NumericBackend::Gmm : dge::NumericBackend::Kde;
    if (args.n_train_cap > 0) spec.n_train_cap = args.n_train_cap;
    spec.validate();

    dge::DgeOptions options;
    options.disjoint_train = args.disjoint_train;
    dge::RngStream rng(args.seed);
    const auto bundle = dge::dge_generate(spec, real, args.k, args.n_synth, rng, options);
    dge::publish(bundle, args.out);
    std::printf("published %zu synthetic sets of %zu rows to %s\n", args.k, args.n_synth,
                args.out.c_str());
    return 0;
}

int cmd_run(const std::string& experiment, const std::string& config_path) {
    auto cfg = dge::load_experiment_config(config_path);
    if (dge::experiment_name(cfg.experiment) != experiment)
        throw dge::ConfigError("config declares experiment '" +
                               std::string(dge::experiment_name(cfg.experiment)) +
                               "' but the subcommand was '" + experiment + "'");
    const auto record = dge::run_experiment(cfg);
    dge::write_run_record(record, cfg.output_dir);
    std::printf("results written to %s\n", (cfg.output_dir / "results.json").string().c_str());
    for (const auto& r : record.results.at("reports")) {
        std::printf("  %-24s %-16s %.4f +- %.4f\n",
                    r.at("approach").get<std::string>().c_str(),
                    r.at("metric").get<std::string>().c_str(), r.at("mean").get<double>(),
                    r.at("std").get<double>());
    }
    return 0;
}

int cmd_report(const std::string& in_dir, const std::string& format, std::string out_dir) {
    if (out_dir.empty()) out_dir = in_dir + "/report";
    const auto written = dge::emit_report(in_dir, format, out_dir);
    for (const auto& f : written) std::printf("wrote %s\n", f.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deep generative ensembles for synthetic tabular data"};
    app.require_subcommand(1);

    auto* data = app.add_subcommand("data", "dataset utilities");
    data->require_subcommand(1);
    DataGenArgs gen_args;
    auto* gen = data->add_subcommand("gen", "generate a toy dataset CSV");
    gen->add_option("--kind", gen_args.kind, "moons|circles|gaussian");
    gen->add_option("--n", gen_args.n, "row count");
    gen->add_option("--noise", gen_args.noise, "noise std (toy default when omitted)");
    gen->add_option("--seed", gen_args.seed, "seed");
    gen->add_option("--out", gen_args.out, "output CSV path")->required();

    PublishArgs pub_args;
    auto* pub = app.add_subcommand("publish", "train K generators and publish a bundle");
    pub->add_option("--real", pub_args.real_csv, "real training CSV")->required();
    pub->add_option("--label", pub_args.label, "label column name");
    pub->add_option("--positive", pub_args.positive, "positive label level");
    pub->add_option("--class", pub_args.generator_class, "gmm|kde|cat_product|composite");
    pub->add_option("--bandwidth-scale", pub_args.bandwidth_scale, "KDE knob");
    pub->add_option("--components-per-class", pub_args.components_per_class, "GMM knob");
    pub->add_option("--dirichlet-smoothing", pub_args.dirichlet_smoothing, "CatProduct knob");
    pub->add_option("--composite-numeric", pub_args.composite_numeric, "gmm|kde");
    pub->add_option("--k", pub_args.k, "ensemble size");
    pub->add_option("--n-synth", pub_args.n_synth, "rows per synthetic set");
    pub->add_option("--seed", pub_args.seed, "root seed");
    pub->add_option("--n-train-cap", pub_args.n_train_cap, "per-generator training subsample");
    pub->add_flag("--disjoint-train", pub_args.disjoint_train,
                  "partition real data across generators");
    pub->add_option("--out", pub_args.out, "bundle directory")->required();

    auto* run = app.add_subcommand("run", "run a seeded experiment from a config file");
    run->require_subcommand(1);
    std::string config_path;
    std::vector<CLI::App*> run_subs;
    for (const char* name : {"train", "evaluate", "select", "uq", "subgroups", "sweep"}) {
        auto* sub = run->add_subcommand(name);
        sub->add_option("--config", config_path, "config JSON path")->required();
        run_subs.push_back(sub);
    }

    std::string report_in, report_format = "csv", report_out;
    auto* rep = app.add_subcommand("report", "emit tables and plots from a run directory");
    rep->add_option("--in", report_in, "run directory with results.json")->required();
    rep->add_option("--format", report_format, "csv|json|svg");
    rep->add_option("--out", report_out, "output directory (default <in>/report)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return cmd_data_gen(gen_args);
        if (pub->parsed()) return cmd_publish(pub_args);
        if (rep->parsed()) return cmd_report(report_in, report_format, report_out);
        for (auto* sub : run_subs) {
            if (sub->parsed()) return cmd_run(sub->get_name(), config_path);
        }
        std::fprintf(stderr, "no subcommand\n");
        return 2;
    } catch (const dge::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const dge::DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
