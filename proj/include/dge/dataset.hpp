#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dge/error.hpp"
#include "dge/schema.hpp"

namespace dge {

// Where a dataset came from. Synthetic data remembers which generator seed
// produced it; seed -1 marks a concatenation whose per-set identity was erased.
struct Provenance {
    enum class Kind { Real, Synthetic };
    Kind kind = Kind::Real;
    std::int64_t generator_seed = 0;
    std::string generator_class;

    static Provenance real() { return {}; }
    static Provenance synthetic(std::int64_t seed, std::string cls) {
        return {Kind::Synthetic, seed, std::move(cls)};
    }
    bool operator==(const Provenance&) const = default;
};

// Row-major feature table. Numeric cells hold the value itself; categorical
// cells hold the level index as a double (validated on construction).
class TabularDataset {
public:
    TabularDataset(Schema schema, std::vector<double> features, std::vector<int> labels,
                   Provenance provenance = Provenance::real())
        : schema_(std::move(schema)),
          features_(std::move(features)),
          labels_(std::move(labels)),
          provenance_(std::move(provenance)) {
        const std::size_t d = schema_.n_features();
        if (labels_.empty()) throw DataError("dataset must have at least one row");
        if (d == 0) throw DataError("dataset must have at least one feature column");
        if (features_.size() != labels_.size() * d)
            throw DataError("feature table size does not match rows x columns");
        for (std::size_t r = 0; r < labels_.size(); ++r) {
            if (labels_[r] != 0 && labels_[r] != 1)
                throw DataError("label outside {0,1} at row " + std::to_string(r));
            for (std::size_t c = 0; c < d; ++c) {
                const double v = features_[r * d + c];
                if (!std::isfinite(v))
                    throw DataError("non-finite cell at row " + std::to_string(r) +
                                    ", column " + schema_.feature(c).name);
                if (schema_.feature(c).kind == ColumnKind::Categorical) {
                    const auto n_levels = schema_.feature(c).levels.size();
                    if (v != std::floor(v) || v < 0 || v >= static_cast<double>(n_levels))
                        throw DataError("cell is not a valid level index at row " +
                                        std::to_string(r) + ", column " + schema_.feature(c).name);
                }
            }
        }
    }

    const Schema& schema() const { return schema_; }
    const Provenance& provenance() const { return provenance_; }
    std::size_t n_rows() const { return labels_.size(); }
    std::size_t n_features() const { return schema_.n_features(); }

    double cell(std::size_t row, std::size_t col) const {
        return features_[row * schema_.n_features() + col];
    }
    const double* row(std::size_t r) const { return features_.data() + r * schema_.n_features(); }
    int label(std::size_t r) const { return labels_[r]; }
    const std::vector<int>& labels() const { return labels_; }
    const std::vector<double>& features() const { return features_; }

    std::size_t count_label(int y) const {
        std::size_t n = 0;
        for (int l : labels_)
            if (l == y) ++n;
        return n;
    }

    // Rows whose index appears in ids, in the given order.
    TabularDataset subset(const std::vector<std::size_t>& ids) const {
        const std::size_t d = schema_.n_features();
        std::vector<double> f;
        f.reserve(ids.size() * d);
        std::vector<int> l;
        l.reserve(ids.size());
        for (std::size_t id : ids) {
            const double* r = row(id);
            f.insert(f.end(), r, r + d);
            l.push_back(labels_[id]);
        }
        return TabularDataset(schema_, std::move(f), std::move(l), provenance_);
    }

    // Value-level equality: schema, cells and labels all match.
    bool operator==(const TabularDataset&) const = default;

private:
    Schema schema_;
    std::vector<double> features_;  // n_rows x n_features, row-major
    std::vector<int> labels_;       // encoded 0/1
    Provenance provenance_;
};

// Row-wise concatenation; all parts must share one schema.
inline TabularDataset concat(const std::vector<TabularDataset>& parts, Provenance provenance) {
    if (parts.empty()) throw DataError("concat of zero datasets");
    std::vector<double> f;
    std::vector<int> l;
    for (const auto& p : parts) {
        if (!(p.schema() == parts.front().schema()))
            throw SchemaMismatch("concat over differing schemas");
        f.insert(f.end(), p.features().begin(), p.features().end());
        l.insert(l.end(), p.labels().begin(), p.labels().end());
    }
    return TabularDataset(parts.front().schema(), std::move(f), std::move(l),
                          std::move(provenance));
}

}  // namespace dge
