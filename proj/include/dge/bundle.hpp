#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dge/csv.hpp"
#include "dge/dataset.hpp"
#include "dge/error.hpp"
#include "dge/generator.hpp"
#include "dge/json_io.hpp"
#include "dge/parallel.hpp"
#include "dge/rng.hpp"

namespace dge {

// Published metadata accompanying a bundle: generator class and complexity,
// training size, per-set seeds and the schema needed to reload the CSVs.
// Creation metadata is deterministic so replays are byte-identical.
struct Manifest {
    std::string generator_class;
    Json complexity;
    std::size_t n_train = 0;
    std::size_t n_synth_per_set = 0;
    std::size_t k = 0;
    std::vector<std::int64_t> seeds;
    Schema schema;
    Json metadata;

    bool operator==(const Manifest&) const = default;
};

// The DGE artifact: K distinguishable synthetic datasets plus the manifest.
struct SyntheticBundle {
    std::vector<TabularDataset> datasets;
    Manifest manifest;

    bool operator==(const SyntheticBundle&) const = default;
};

enum class NaiveMode { Single, Concat };

struct DgeOptions {
    bool disjoint_train = false;  // partition the real data across generators
};

// Trains K generators with independent seed streams (same spec, same real
// training data unless disjoint_train) and samples one dataset each. All K
// fits run on the worker pool; assembly order is fixed by index.
inline SyntheticBundle dge_generate(const GeneratorSpec& spec, const TabularDataset& real_train,
                                    std::size_t k, std::size_t n_synth, const RngStream& rng,
                                    const DgeOptions& options = {}) {
    if (k < 1) throw BadSpec("K must be >= 1");
    if (n_synth < 1) throw BadSpec("n_synth must be >= 1");

    // optional disjoint partition of the training rows
    std::vector<std::vector<std::size_t>> partition;
    if (options.disjoint_train) {
        std::vector<std::size_t> ids(real_train.n_rows());
        for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
        RngStream prng = rng.child(0xD15C0);
        prng.shuffle(ids);
        partition.assign(k, {});
        for (std::size_t i = 0; i < ids.size(); ++i) partition[i % k].push_back(ids[i]);
    }

    SyntheticBundle bundle;
    bundle.datasets.reserve(k);
    std::vector<std::optional<TabularDataset>> slots(k);
    std::string fit_error;
    parallel_for(k, [&](std::size_t i) {
        GeneratorSpec member_spec = spec;
        member_spec.seed = static_cast<std::int64_t>(i);
        RngStream member_rng = rng.child(i);
        try {
            const TabularDataset train =
                options.disjoint_train ? real_train.subset(partition[i]) : real_train;
            auto fit = fit_generator(member_spec, train, member_rng);
            RngStream sample_rng = member_rng.child(0xA11);
            slots[i] = sample_generator(fit.model, n_synth, sample_rng);
        } catch (const Error& e) {
            throw DataError("generator " + std::to_string(i) + ": " + e.what());
        }
    });
    for (auto& s : slots) bundle.datasets.push_back(std::move(*s));

    bundle.manifest.generator_class = generator_class_name(spec.cls);
    bundle.manifest.complexity = complexity_json(spec);
    bundle.manifest.n_train = real_train.n_rows();
    bundle.manifest.n_synth_per_set = n_synth;
    bundle.manifest.k = k;
    for (std::size_t i = 0; i < k; ++i)
        bundle.manifest.seeds.push_back(static_cast<std::int64_t>(i));
    bundle.manifest.schema = real_train.schema();
    bundle.manifest.metadata = Json{{"tool", "dge"},
                                    {"format_version", 1},
                                    {"root_seed", rng.root_seed()},
                                    {"disjoint_train", options.disjoint_train}};
    return bundle;
}

// The two ways a consumer can collapse a bundle. Single is set 0; Concat
// stacks all K sets and erases per-set identity (provenance seed -1).
inline TabularDataset naive_view(const SyntheticBundle& bundle, NaiveMode mode) {
    if (bundle.datasets.empty()) throw DataError("empty bundle");
    if (mode == NaiveMode::Single) return bundle.datasets.front();
    return concat(bundle.datasets,
                  Provenance::synthetic(-1, bundle.manifest.generator_class));
}

inline Json manifest_to_json(const Manifest& m) {
    return Json{{"format", "dge-bundle"},
                {"version", 1},
                {"generator_class", m.generator_class},
                {"complexity", m.complexity},
                {"n_train", m.n_train},
                {"n_synth_per_set", m.n_synth_per_set},
                {"k", m.k},
                {"seeds", m.seeds},
                {"schema", schema_to_json(m.schema)},
                {"metadata", m.metadata}};
}

inline Manifest manifest_from_json(const Json& j) {
    if (j.value("format", "") != "dge-bundle" || j.value("version", 0) != 1)
        throw ManifestMismatch("not a dge bundle manifest");
    Manifest m;
    m.generator_class = j.at("generator_class").get<std::string>();
    m.complexity = j.at("complexity");
    m.n_train = j.at("n_train").get<std::size_t>();
    m.n_synth_per_set = j.at("n_synth_per_set").get<std::size_t>();
    m.k = j.at("k").get<std::size_t>();
    m.seeds = j.at("seeds").get<std::vector<std::int64_t>>();
    m.schema = schema_from_json(j.at("schema"));
    m.metadata = j.at("metadata");
    return m;
}

inline std::string bundle_csv_name(std::size_t index) {
    return "synth_k" + std::to_string(index) + ".csv";
}

// One CSV per set plus manifest.json; sets stay distinguishable on disk.
inline void publish(const SyntheticBundle& bundle, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create bundle directory: " + dir.string());
    for (std::size_t i = 0; i < bundle.datasets.size(); ++i)
        write_csv(bundle.datasets[i], dir / bundle_csv_name(i));
    save_json(manifest_to_json(bundle.manifest), dir / "manifest.json");
}

inline SyntheticBundle load_bundle(const std::filesystem::path& dir) {
    SyntheticBundle bundle;
    bundle.manifest = manifest_from_json(load_json(dir / "manifest.json"));
    if (bundle.manifest.seeds.size() != bundle.manifest.k)
        throw ManifestMismatch("manifest seed count does not match K");
    for (std::size_t i = 0; i < bundle.manifest.k; ++i) {
        const auto path = dir / bundle_csv_name(i);
        if (!std::filesystem::exists(path))
            throw ManifestMismatch("bundle is missing " + bundle_csv_name(i));
        CsvOptions opts;
        opts.schema_hint = bundle.manifest.schema;
        TabularDataset data = read_csv(path, opts);
        if (data.n_rows() != bundle.manifest.n_synth_per_set)
            throw ManifestMismatch(bundle_csv_name(i) + " row count disagrees with manifest");
        bundle.datasets.push_back(TabularDataset(
            data.schema(), data.features(), data.labels(),
            Provenance::synthetic(bundle.manifest.seeds[i], bundle.manifest.generator_class)));
    }
    return bundle;
}

}  // namespace dge
