#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "dge/error.hpp"

namespace dge {

enum class ColumnKind { Numeric, Categorical };

struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    std::vector<std::string> levels;  // Categorical only; ordered, unique

    bool operator==(const Column&) const = default;
};

// Typed tabular layout: feature columns plus a binary label column. The label
// is always Categorical with exactly two levels; positive_label encodes to 1.
class Schema {
public:
    Schema() = default;
    Schema(std::vector<Column> features, std::string label_name,
           std::vector<std::string> label_levels, std::string positive_label)
        : features_(std::move(features)),
          label_name_(std::move(label_name)),
          label_levels_(std::move(label_levels)),
          positive_label_(std::move(positive_label)) {
        validate();
    }

    const std::vector<Column>& features() const { return features_; }
    const std::string& label_name() const { return label_name_; }
    const std::vector<std::string>& label_levels() const { return label_levels_; }
    const std::string& positive_label() const { return positive_label_; }

    std::size_t n_features() const { return features_.size(); }

    const Column& feature(std::size_t i) const { return features_[i]; }

    std::optional<std::size_t> feature_index(const std::string& name) const {
        for (std::size_t i = 0; i < features_.size(); ++i) {
            if (features_[i].name == name) return i;
        }
        return std::nullopt;
    }

    std::size_t positive_index() const {
        return label_levels_[0] == positive_label_ ? 0 : 1;
    }

    // Level string for an encoded 0/1 label.
    const std::string& label_level_for(int label01) const {
        const std::size_t pos = positive_index();
        return label_levels_[label01 == 1 ? pos : 1 - pos];
    }

    std::optional<std::size_t> level_index(std::size_t column, const std::string& level) const {
        const auto& lv = features_[column].levels;
        for (std::size_t i = 0; i < lv.size(); ++i) {
            if (lv[i] == level) return i;
        }
        return std::nullopt;
    }

    bool all_numeric() const {
        for (const auto& c : features_)
            if (c.kind != ColumnKind::Numeric) return false;
        return true;
    }

    bool all_categorical() const {
        for (const auto& c : features_)
            if (c.kind != ColumnKind::Categorical) return false;
        return true;
    }

    std::vector<std::size_t> numeric_columns() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < features_.size(); ++i)
            if (features_[i].kind == ColumnKind::Numeric) out.push_back(i);
        return out;
    }

    std::vector<std::size_t> categorical_columns() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < features_.size(); ++i)
            if (features_[i].kind == ColumnKind::Categorical) out.push_back(i);
        return out;
    }

    bool operator==(const Schema&) const = default;

private:
    void validate() const {
        std::unordered_set<std::string> names;
        for (const auto& c : features_) {
            if (!names.insert(c.name).second)
                throw SchemaMismatch("duplicate column name: " + c.name);
            if (c.kind == ColumnKind::Categorical) {
                if (c.levels.empty())
                    throw SchemaMismatch("categorical column without levels: " + c.name);
                std::unordered_set<std::string> lv;
                for (const auto& l : c.levels)
                    if (!lv.insert(l).second)
                        throw SchemaMismatch("duplicate level '" + l + "' in column " + c.name);
            } else if (!c.levels.empty()) {
                throw SchemaMismatch("numeric column with levels: " + c.name);
            }
        }
        if (!names.insert(label_name_).second)
            throw SchemaMismatch("label name collides with a feature column: " + label_name_);
        if (label_levels_.size() != 2 || label_levels_[0] == label_levels_[1])
            throw SchemaMismatch("label must have exactly 2 distinct levels");
        if (positive_label_ != label_levels_[0] && positive_label_ != label_levels_[1])
            throw SchemaMismatch("positive_label is not a label level: " + positive_label_);
    }

    std::vector<Column> features_;
    std::string label_name_;
    std::vector<std::string> label_levels_;
    std::string positive_label_;
};

// Convenience for the common all-numeric case.
inline Schema numeric_schema(const std::vector<std::string>& feature_names,
                             std::string label_name = "y",
                             std::vector<std::string> label_levels = {"0", "1"},
                             std::string positive_label = "1") {
    std::vector<Column> cols;
    cols.reserve(feature_names.size());
    for (const auto& n : feature_names) cols.push_back({n, ColumnKind::Numeric, {}});
    return Schema(std::move(cols), std::move(label_name), std::move(label_levels),
                  std::move(positive_label));
}

}  // namespace dge
