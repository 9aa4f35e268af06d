#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "dge/dataset.hpp"
#include "dge/error.hpp"
#include "dge/rng.hpp"

namespace dge {

struct SplitIndex {
    std::vector<std::size_t> train_ids;
    std::vector<std::size_t> test_ids;
    std::uint64_t seed = 0;
    double train_fraction = 0.0;
};

namespace detail {

// Shuffles ids and cuts off round(n * fraction) for the train side.
inline void cut(std::vector<std::size_t>& ids, double fraction, RngStream& rng,
                std::vector<std::size_t>& train, std::vector<std::size_t>& test) {
    rng.shuffle(ids);
    const auto n = ids.size();
    auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(n) * fraction));
    n_train = std::min(std::max<std::size_t>(n_train, 1), n - 1);
    train.insert(train.end(), ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
    test.insert(test.end(), ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
}

}  // namespace detail

// Deterministic train/test partition. Stratified mode keeps per-class train
// proportions within one row of train_fraction.
inline SplitIndex split(const TabularDataset& data, double train_fraction, std::uint64_t seed,
                        bool stratified = true) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw BadSpec("train_fraction must be in (0,1)");
    const std::size_t n = data.n_rows();
    if (n < 2) throw DegenerateSplit("need at least 2 rows to split");

    SplitIndex out;
    out.seed = seed;
    out.train_fraction = train_fraction;
    RngStream rng(seed);

    if (stratified) {
        std::vector<std::size_t> by_class[2];
        for (std::size_t i = 0; i < n; ++i) by_class[data.label(i)].push_back(i);
        if (by_class[0].size() < 2 || by_class[1].size() < 2)
            throw EmptyClass("stratified split needs at least 2 rows per class");
        for (auto& ids : by_class)
            detail::cut(ids, train_fraction, rng, out.train_ids, out.test_ids);
    } else {
        const double expect = static_cast<double>(n) * train_fraction;
        if (std::llround(expect) < 1 || std::llround(expect) > static_cast<long long>(n - 1))
            throw DegenerateSplit("one side of the split would be empty");
        std::vector<std::size_t> ids(n);
        for (std::size_t i = 0; i < n; ++i) ids[i] = i;
        detail::cut(ids, train_fraction, rng, out.train_ids, out.test_ids);
    }
    std::sort(out.train_ids.begin(), out.train_ids.end());
    std::sort(out.test_ids.begin(), out.test_ids.end());
    return out;
}

inline TabularDataset train_view(const TabularDataset& data, const SplitIndex& s) {
    return data.subset(s.train_ids);
}

inline TabularDataset test_view(const TabularDataset& data, const SplitIndex& s) {
    return data.subset(s.test_ids);
}

}  // namespace dge
