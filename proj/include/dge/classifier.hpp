#pragma once

#include <string>
#include <variant>
#include <vector>

#include "dge/encoding.hpp"
#include "dge/error.hpp"
#include "dge/forest.hpp"
#include "dge/knn.hpp"
#include "dge/logreg.hpp"
#include "dge/mlp.hpp"
#include "dge/rng.hpp"

namespace dge {

enum class ClassifierClass { LogReg, Knn, Mlp, DeepMlp, RandomForest };

inline const char* classifier_class_name(ClassifierClass c) {
    switch (c) {
        case ClassifierClass::LogReg: return "logreg";
        case ClassifierClass::Knn: return "knn";
        case ClassifierClass::Mlp: return "mlp";
        case ClassifierClass::DeepMlp: return "deep_mlp";
        case ClassifierClass::RandomForest: return "random_forest";
    }
    return "?";
}

struct ClassifierSpec {
    ClassifierClass cls = ClassifierClass::Mlp;
    int knn_k = 5;
    std::vector<int> hidden{100, 100};  // Mlp; DeepMlp defaults to three layers
    int n_trees = 100;
    double learning_rate = 1e-3;
    double l2 = 1e-4;
    int epochs = 200;
    int batch_size = 128;

    // widths actually used in training; DeepMlp is an Mlp alias with a
    // three-layer default unless widths were set explicitly
    std::vector<int> effective_hidden() const {
        if (cls == ClassifierClass::DeepMlp && hidden == std::vector<int>{100, 100})
            return {100, 100, 100};
        return hidden;
    }
};

struct LogRegModel {
    FeatureEncoder encoder;
    LogRegParams params;
};

struct KnnModel {
    FeatureEncoder encoder;
    KnnParams params;
};

struct MlpModel {
    FeatureEncoder encoder;
    MlpParams params;
};

struct ForestModel {
    Schema schema;
    ForestParams params;
};

struct ClassifierModel {
    ClassifierSpec spec;
    std::variant<LogRegModel, KnnModel, MlpModel, ForestModel> impl;
};

// Trains one downstream classifier. All stochastic trainers draw from the
// given stream only, so (spec, data, stream) fully determine the model.
inline ClassifierModel train_classifier(const ClassifierSpec& spec, const TabularDataset& train,
                                        RngStream& rng) {
    if (train.count_label(0) == 0 || train.count_label(1) == 0)
        throw SingleClassTrainingSet("training data must contain both classes");

    ClassifierModel model;
    model.spec = spec;
    switch (spec.cls) {
        case ClassifierClass::LogReg: {
            FeatureEncoder enc(train);
            const auto x = enc.encode(train);
            model.impl = LogRegModel{enc, logreg_train(x, labels_to_vector(train), spec.l2)};
            break;
        }
        case ClassifierClass::Knn: {
            FeatureEncoder enc(train);
            const auto x = enc.encode(train);
            model.impl = KnnModel{enc, knn_train(x, train.labels(), spec.knn_k)};
            break;
        }
        case ClassifierClass::Mlp:
        case ClassifierClass::DeepMlp: {
            FeatureEncoder enc(train);
            const auto x = enc.encode(train);
            MlpTrainConfig cfg;
            cfg.hidden = spec.effective_hidden();
            cfg.learning_rate = spec.learning_rate;
            cfg.l2 = spec.l2;
            cfg.epochs = spec.epochs;
            cfg.batch_size = spec.batch_size;
            model.impl = MlpModel{enc, mlp_train(x, labels_to_vector(train), cfg, rng)};
            break;
        }
        case ClassifierClass::RandomForest: {
            model.impl = ForestModel{train.schema(), forest_train(train, spec.n_trees, rng)};
            break;
        }
    }
    return model;
}

// Per-row P(Y=1); deterministic given the fitted model.
inline std::vector<double> predict_proba(const ClassifierModel& model,
                                         const TabularDataset& data) {
    return std::visit(
        [&](const auto& m) -> std::vector<double> {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ForestModel>) {
                if (!(data.schema() == m.schema))
                    throw SchemaMismatch("dataset does not match the training schema");
                return forest_predict(m.params, data);
            } else {
                const auto x = m.encoder.encode(data);  // checks the schema
                Eigen::VectorXd p;
                if constexpr (std::is_same_v<T, LogRegModel>) {
                    p = logreg_predict(m.params, x);
                } else if constexpr (std::is_same_v<T, KnnModel>) {
                    auto v = knn_predict(m.params, x);
                    return v;
                } else {
                    p = mlp_forward(m.params, x);
                }
                return std::vector<double>(p.data(), p.data() + p.size());
            }
        },
        model.impl);
}

// K downstream models whose positive-class probabilities are averaged.
struct EnsemblePredictor {
    std::vector<ClassifierModel> members;
};

struct EnsemblePrediction {
    std::vector<double> mean;                      // per row
    std::vector<std::vector<double>> member_probs; // K x rows, kept for UQ
};

inline EnsemblePrediction ensemble_predict(const EnsemblePredictor& ens,
                                           const TabularDataset& data) {
    if (ens.members.empty()) throw DataError("ensemble has no members");
    EnsemblePrediction out;
    out.member_probs.reserve(ens.members.size());
    for (const auto& m : ens.members) out.member_probs.push_back(predict_proba(m, data));
    out.mean.assign(data.n_rows(), 0.0);
    for (const auto& probs : out.member_probs)
        for (std::size_t r = 0; r < probs.size(); ++r) out.mean[r] += probs[r];
    for (double& p : out.mean) p /= static_cast<double>(ens.members.size());
    return out;
}

}  // namespace dge
