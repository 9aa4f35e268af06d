#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "dge/dataset.hpp"
#include "dge/error.hpp"
#include "dge/rng.hpp"

namespace dge {

// CART random forest over raw feature columns. Numeric splits are value
// thresholds (<= goes left); categorical splits are one-vs-rest membership
// predicates (== level goes left). Trees grow to min-leaf 2 on Gini.
struct TreeNode {
    bool leaf = true;
    double prob = 0.5;       // positive fraction at the leaf
    std::size_t feature = 0;
    bool categorical = false;
    double threshold = 0.0;  // numeric split
    std::size_t level = 0;   // categorical split
    int left = -1;
    int right = -1;
};

struct Tree {
    std::vector<TreeNode> nodes;

    double predict(const double* row) const {
        int at = 0;
        while (!nodes[static_cast<std::size_t>(at)].leaf) {
            const auto& nd = nodes[static_cast<std::size_t>(at)];
            const bool go_left = nd.categorical
                                     ? static_cast<std::size_t>(row[nd.feature]) == nd.level
                                     : row[nd.feature] <= nd.threshold;
            at = go_left ? nd.left : nd.right;
        }
        return nodes[static_cast<std::size_t>(at)].prob;
    }
};

struct ForestParams {
    std::vector<Tree> trees;
};

namespace detail {

constexpr std::size_t kMinLeaf = 2;

inline double gini(std::size_t pos, std::size_t n) {
    if (n == 0) return 0.0;
    const double p = static_cast<double>(pos) / static_cast<double>(n);
    return 2.0 * p * (1.0 - p);
}

struct SplitChoice {
    bool found = false;
    std::size_t feature = 0;
    bool categorical = false;
    double threshold = 0.0;
    std::size_t level = 0;
    double impurity = 0.0;
};

inline void grow_tree(Tree& tree, int node_id, const TabularDataset& data,
                      std::vector<std::size_t>& rows, std::size_t begin, std::size_t end,
                      RngStream& rng) {
    // re-fetch on every use: child push_backs may reallocate the node pool
    auto self = [&]() -> TreeNode& { return tree.nodes[static_cast<std::size_t>(node_id)]; };
    const std::size_t n = end - begin;
    std::size_t pos = 0;
    for (std::size_t i = begin; i < end; ++i) pos += static_cast<std::size_t>(data.label(rows[i]));
    self().prob = static_cast<double>(pos) / static_cast<double>(n);
    if (n < 2 * kMinLeaf || pos == 0 || pos == n) return;

    // sqrt(d) feature subsample per node
    const std::size_t d = data.n_features();
    const auto m = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));
    std::vector<std::size_t> feats(d);
    std::iota(feats.begin(), feats.end(), std::size_t{0});
    rng.shuffle(feats);
    feats.resize(m);
    std::sort(feats.begin(), feats.end());

    SplitChoice best;
    std::vector<std::pair<double, int>> vals;  // (value, label)
    for (std::size_t f : feats) {
        const bool categorical = data.schema().feature(f).kind == ColumnKind::Categorical;
        vals.clear();
        for (std::size_t i = begin; i < end; ++i)
            vals.emplace_back(data.cell(rows[i], f), data.label(rows[i]));

        if (categorical) {
            const std::size_t n_levels = data.schema().feature(f).levels.size();
            std::vector<std::size_t> count(n_levels, 0), count_pos(n_levels, 0);
            for (const auto& [v, y] : vals) {
                const auto lvl = static_cast<std::size_t>(v);
                ++count[lvl];
                count_pos[lvl] += static_cast<std::size_t>(y);
            }
            for (std::size_t lvl = 0; lvl < n_levels; ++lvl) {
                const std::size_t nl = count[lvl], nr = n - nl;
                if (nl < kMinLeaf || nr < kMinLeaf) continue;
                const std::size_t pl = count_pos[lvl], pr = pos - pl;
                const double impurity = (static_cast<double>(nl) * gini(pl, nl) +
                                         static_cast<double>(nr) * gini(pr, nr)) /
                                        static_cast<double>(n);
                if (!best.found || impurity < best.impurity) {
                    best = {true, f, true, 0.0, lvl, impurity};
                }
            }
        } else {
            std::sort(vals.begin(), vals.end());
            std::size_t pl = 0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                pl += static_cast<std::size_t>(vals[i].second);
                if (vals[i].first == vals[i + 1].first) continue;  // no boundary here
                const std::size_t nl = i + 1, nr = n - nl;
                if (nl < kMinLeaf || nr < kMinLeaf) continue;
                const std::size_t pr = pos - pl;
                const double impurity = (static_cast<double>(nl) * gini(pl, nl) +
                                         static_cast<double>(nr) * gini(pr, nr)) /
                                        static_cast<double>(n);
                if (!best.found || impurity < best.impurity) {
                    const double thr = 0.5 * (vals[i].first + vals[i + 1].first);
                    best = {true, f, false, thr, 0, impurity};
                }
            }
        }
    }
    if (!best.found) return;

    // partition rows[begin, end) in place, keeping relative order
    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t i = begin; i < end; ++i) {
        const double v = data.cell(rows[i], best.feature);
        const bool go_left =
            best.categorical ? static_cast<std::size_t>(v) == best.level : v <= best.threshold;
        (go_left ? left_rows : right_rows).push_back(rows[i]);
    }
    if (left_rows.size() < kMinLeaf || right_rows.size() < kMinLeaf) return;
    std::copy(left_rows.begin(), left_rows.end(), rows.begin() + static_cast<std::ptrdiff_t>(begin));
    std::copy(right_rows.begin(), right_rows.end(),
              rows.begin() + static_cast<std::ptrdiff_t>(begin + left_rows.size()));

    const int left_id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({});
    const int right_id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({});
    self().leaf = false;
    self().feature = best.feature;
    self().categorical = best.categorical;
    self().threshold = best.threshold;
    self().level = best.level;
    self().left = left_id;
    self().right = right_id;

    grow_tree(tree, left_id, data, rows, begin, begin + left_rows.size(), rng);
    grow_tree(tree, right_id, data, rows, begin + left_rows.size(), end, rng);
}

}  // namespace detail

inline ForestParams forest_train(const TabularDataset& train, int n_trees, RngStream& rng) {
    if (n_trees < 1) throw BadSpec("n_trees must be >= 1");
    ForestParams forest;
    forest.trees.resize(static_cast<std::size_t>(n_trees));
    const std::size_t n = train.n_rows();
    for (int t = 0; t < n_trees; ++t) {
        RngStream tree_rng = rng.child(static_cast<std::uint64_t>(t));
        std::vector<std::size_t> rows(n);
        for (std::size_t i = 0; i < n; ++i) rows[i] = tree_rng.uniform_int(n);  // bootstrap
        Tree& tree = forest.trees[static_cast<std::size_t>(t)];
        tree.nodes.push_back({});
        detail::grow_tree(tree, 0, train, rows, 0, n, tree_rng);
    }
    return forest;
}

inline std::vector<double> forest_predict(const ForestParams& forest, const TabularDataset& data) {
    std::vector<double> out(data.n_rows(), 0.0);
    for (std::size_t r = 0; r < data.n_rows(); ++r) {
        double sum = 0.0;
        for (const auto& tree : forest.trees) sum += tree.predict(data.row(r));
        out[r] = sum / static_cast<double>(forest.trees.size());
    }
    return out;
}

}  // namespace dge
