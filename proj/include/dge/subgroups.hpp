#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "dge/dataset.hpp"

namespace dge {

// Per-feature minority definition. Categorical: the smallest category whose
// population share lies in (0.5%, 20%); features without one are skipped.
// Numeric: the top decile by value.
struct SubgroupRule {
    std::size_t feature = 0;
    bool categorical = false;
    std::size_t level = 0;    // categorical rule
    double cutoff = 0.0;      // numeric rule: value >= cutoff
    double share = 0.0;       // fraction of rows in the subgroup

    std::string describe(const Schema& schema) const {
        const auto& col = schema.feature(feature);
        if (categorical) return col.name + "=" + col.levels[level];
        return col.name + ">=top-decile";
    }
};

inline bool subgroup_member(const SubgroupRule& rule, const TabularDataset& data,
                            std::size_t row) {
    const double v = data.cell(row, rule.feature);
    return rule.categorical ? static_cast<std::size_t>(v) == rule.level : v >= rule.cutoff;
}

inline std::vector<SubgroupRule> minority_subgroups(const TabularDataset& data) {
    std::vector<SubgroupRule> rules;
    const std::size_t n = data.n_rows();
    for (std::size_t c = 0; c < data.schema().n_features(); ++c) {
        const Column& col = data.schema().feature(c);
        if (col.kind == ColumnKind::Categorical) {
            std::vector<std::size_t> counts(col.levels.size(), 0);
            for (std::size_t r = 0; r < n; ++r)
                ++counts[static_cast<std::size_t>(data.cell(r, c))];
            bool found = false;
            SubgroupRule best;
            for (std::size_t lvl = 0; lvl < counts.size(); ++lvl) {
                const double share = static_cast<double>(counts[lvl]) / static_cast<double>(n);
                if (share <= 0.005 || share >= 0.20) continue;
                if (!found || share < best.share) {
                    best = {c, true, lvl, 0.0, share};
                    found = true;
                }
            }
            if (found) rules.push_back(best);
        } else {
            const std::size_t m = n / 10;
            if (m == 0) continue;
            std::vector<double> values;
            values.reserve(n);
            for (std::size_t r = 0; r < n; ++r) values.push_back(data.cell(r, c));
            std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(m - 1),
                             values.end(), std::greater<double>());
            const double cutoff = values[m - 1];
            std::size_t members = 0;
            for (std::size_t r = 0; r < n; ++r)
                members += static_cast<std::size_t>(data.cell(r, c) >= cutoff);
            rules.push_back({c, false, 0, cutoff,
                             static_cast<double>(members) / static_cast<double>(n)});
        }
    }
    return rules;
}

}  // namespace dge
