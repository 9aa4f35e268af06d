#pragma once

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "dge/error.hpp"
#include "dge/generator.hpp"
#include "dge/schema.hpp"

namespace dge {

using Json = nlohmann::json;

inline Json schema_to_json(const Schema& s) {
    Json cols = Json::array();
    for (const auto& c : s.features()) {
        Json col{{"name", c.name}};
        if (c.kind == ColumnKind::Numeric) {
            col["kind"] = "numeric";
        } else {
            col["kind"] = "categorical";
            col["levels"] = c.levels;
        }
        cols.push_back(std::move(col));
    }
    return Json{{"columns", std::move(cols)},
                {"label", {{"name", s.label_name()},
                           {"levels", s.label_levels()},
                           {"positive", s.positive_label()}}}};
}

inline Schema schema_from_json(const Json& j) {
    std::vector<Column> cols;
    for (const auto& col : j.at("columns")) {
        Column c;
        c.name = col.at("name").get<std::string>();
        const auto kind = col.at("kind").get<std::string>();
        if (kind == "numeric") {
            c.kind = ColumnKind::Numeric;
        } else if (kind == "categorical") {
            c.kind = ColumnKind::Categorical;
            c.levels = col.at("levels").get<std::vector<std::string>>();
        } else {
            throw ParseError("unknown column kind: " + kind);
        }
        cols.push_back(std::move(c));
    }
    const auto& lab = j.at("label");
    return Schema(std::move(cols), lab.at("name").get<std::string>(),
                  lab.at("levels").get<std::vector<std::string>>(),
                  lab.at("positive").get<std::string>());
}

inline GeneratorClass generator_class_from_name(const std::string& name) {
    if (name == "gmm") return GeneratorClass::Gmm;
    if (name == "kde") return GeneratorClass::Kde;
    if (name == "cat_product") return GeneratorClass::CatProduct;
    if (name == "composite") return GeneratorClass::Composite;
    throw BadSpec("unknown generator class: " + name);
}

inline Json generator_spec_to_json(const GeneratorSpec& spec) {
    Json j{{"class", generator_class_name(spec.cls)},
           {"components_per_class", spec.components_per_class},
           {"bandwidth_scale", spec.bandwidth_scale},
           {"dirichlet_smoothing", spec.dirichlet_smoothing},
           {"composite_numeric", spec.composite_numeric == NumericBackend::Gmm ? "gmm" : "kde"},
           {"seed", spec.seed}};
    if (spec.n_train_cap) j["n_train_cap"] = *spec.n_train_cap;
    return j;
}

inline GeneratorSpec generator_spec_from_json(const Json& j) {
    GeneratorSpec spec;
    spec.cls = generator_class_from_name(j.at("class").get<std::string>());
    spec.components_per_class = j.value("components_per_class", spec.components_per_class);
    spec.bandwidth_scale = j.value("bandwidth_scale", spec.bandwidth_scale);
    spec.dirichlet_smoothing = j.value("dirichlet_smoothing", spec.dirichlet_smoothing);
    if (j.contains("composite_numeric"))
        spec.composite_numeric = j.at("composite_numeric").get<std::string>() == "gmm"
                                     ? NumericBackend::Gmm
                                     : NumericBackend::Kde;
    spec.seed = j.value("seed", spec.seed);
    if (j.contains("n_train_cap")) spec.n_train_cap = j.at("n_train_cap").get<std::size_t>();
    spec.validate();
    return spec;
}

// The class-specific complexity knob as published in manifests.
inline Json complexity_json(const GeneratorSpec& spec) {
    switch (spec.cls) {
        case GeneratorClass::Gmm:
            return Json{{"components_per_class", spec.components_per_class}};
        case GeneratorClass::Kde:
            return Json{{"bandwidth_scale", spec.bandwidth_scale}};
        case GeneratorClass::CatProduct:
            return Json{{"dirichlet_smoothing", spec.dirichlet_smoothing}};
        case GeneratorClass::Composite: {
            Json j{{"dirichlet_smoothing", spec.dirichlet_smoothing}};
            if (spec.composite_numeric == NumericBackend::Gmm)
                j["components_per_class"] = spec.components_per_class;
            else
                j["bandwidth_scale"] = spec.bandwidth_scale;
            return j;
        }
    }
    return Json::object();
}

namespace detail {

inline Json matrix_to_json(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Eigen::MatrixXd matrix_from_json(const Json& j) {
    const auto n = static_cast<Eigen::Index>(j.size());
    const auto d = n > 0 ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
    Eigen::MatrixXd m(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index c = 0; c < d; ++c) m(i, c) = j.at(i).at(c).get<double>();
    return m;
}

inline Json vector_to_json(const Eigen::VectorXd& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

inline Eigen::VectorXd vector_from_json(const Json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j.at(i).get<double>();
    return v;
}

}  // namespace detail

// Versioned, self-describing model dump with every fitted parameter at full
// precision, so a published bundle can be re-audited offline.
inline Json generator_model_to_json(const GeneratorModel& model) {
    Json j{{"format", "dge-generator"},
           {"version", 1},
           {"spec", generator_spec_to_json(model.spec)},
           {"schema", schema_to_json(model.schema)},
           {"n_train", model.n_train},
           {"class_prior_pos", model.class_prior_pos}};
    if (!model.gmm_per_class.empty()) {
        Json classes = Json::array();
        for (const auto& mix : model.gmm_per_class) {
            Json comps = Json::array();
            for (std::size_t c = 0; c < mix.components.size(); ++c) {
                comps.push_back(Json{{"weight", mix.weights[c]},
                                     {"mean", detail::vector_to_json(mix.components[c].mean)},
                                     {"cov", detail::matrix_to_json(mix.components[c].cov)}});
            }
            classes.push_back(std::move(comps));
        }
        j["gmm"] = std::move(classes);
    }
    if (!model.kde_per_class.empty()) {
        Json classes = Json::array();
        for (const auto& kde : model.kde_per_class) {
            classes.push_back(Json{{"points", detail::matrix_to_json(kde.points)},
                                   {"bandwidths", kde.bandwidths}});
        }
        j["kde"] = std::move(classes);
    }
    if (!model.cat_per_class.empty()) {
        Json classes = Json::array();
        for (const auto& cat : model.cat_per_class) classes.push_back(Json{{"freqs", cat.freqs}});
        j["cat_product"] = std::move(classes);
    }
    return j;
}

inline GeneratorModel generator_model_from_json(const Json& j) {
    if (j.value("format", "") != "dge-generator")
        throw ParseError("not a generator model file");
    if (j.value("version", 0) != 1)
        throw ParseError("unsupported generator model version");
    GeneratorModel model;
    model.spec = generator_spec_from_json(j.at("spec"));
    model.schema = schema_from_json(j.at("schema"));
    model.n_train = j.at("n_train").get<std::size_t>();
    model.class_prior_pos = j.at("class_prior_pos").get<double>();
    model.numeric_cols = model.schema.numeric_columns();
    model.categorical_cols = model.schema.categorical_columns();
    if (j.contains("gmm")) {
        for (const auto& cls : j.at("gmm")) {
            GmmMixture mix;
            for (const auto& comp : cls) {
                mix.weights.push_back(comp.at("weight").get<double>());
                MvNormal mv;
                mv.mean = detail::vector_from_json(comp.at("mean"));
                mv.cov = detail::matrix_from_json(comp.at("cov"));
                if (!mv.factorize()) throw SingularCovariance("stored covariance not PD");
                mix.components.push_back(std::move(mv));
            }
            model.gmm_per_class.push_back(std::move(mix));
        }
    }
    if (j.contains("kde")) {
        for (const auto& cls : j.at("kde")) {
            KdeMixture kde;
            kde.points = detail::matrix_from_json(cls.at("points"));
            kde.bandwidths = cls.at("bandwidths").get<std::vector<double>>();
            model.kde_per_class.push_back(std::move(kde));
        }
    }
    if (j.contains("cat_product")) {
        for (const auto& cls : j.at("cat_product")) {
            CatProductModel cat;
            cat.freqs = cls.at("freqs").get<std::vector<std::vector<double>>>();
            model.cat_per_class.push_back(std::move(cat));
        }
    }
    return model;
}

inline void save_json(const Json& j, const std::filesystem::path& path, int indent = 2) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << j.dump(indent) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

inline Json load_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

}  // namespace dge
