#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "dge/classifier.hpp"
#include "dge/error.hpp"

namespace dge {

inline const Schema& model_schema(const ClassifierModel& model) {
    return std::visit(
        [](const auto& m) -> const Schema& {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ForestModel>) return m.schema;
            else return m.encoder.schema();
        },
        model.impl);
}

struct BoundingBox {
    double x_min = -1, x_max = 1, y_min = -1, y_max = 1;
};

// Member mean / member std over a 2-D grid plus the marching-squares level
// set of the mean at 0.5 (the ensemble decision boundary). The std is the
// population (1/K) spread across ensemble members.
struct UncertaintyGrid {
    std::vector<double> xs, ys;           // axis coordinates
    std::vector<double> mean, stddev;     // row-major [iy * nx + ix]
    std::vector<std::array<double, 4>> boundary;  // segments (x1,y1,x2,y2)

    double mean_std() const {
        double s = 0;
        for (double v : stddev) s += v;
        return stddev.empty() ? 0.0 : s / static_cast<double>(stddev.size());
    }
};

namespace detail {

inline double interp(double a, double b, double va, double vb, double level) {
    const double t = (level - va) / (vb - va);
    return a + t * (b - a);
}

}  // namespace detail

inline UncertaintyGrid uncertainty_grid(const EnsemblePredictor& ens, const BoundingBox& bbox,
                                        std::size_t nx, std::size_t ny) {
    if (ens.members.empty()) throw DataError("ensemble has no members");
    if (nx < 2 || ny < 2) throw BadSpec("grid resolution must be >= 2 per axis");
    const Schema& schema = model_schema(ens.members.front());
    if (schema.n_features() != 2 || !schema.all_numeric())
        throw DimensionError("uncertainty grid needs a 2-D numeric feature space");

    UncertaintyGrid grid;
    for (std::size_t i = 0; i < nx; ++i)
        grid.xs.push_back(bbox.x_min + (bbox.x_max - bbox.x_min) *
                                           static_cast<double>(i) / static_cast<double>(nx - 1));
    for (std::size_t j = 0; j < ny; ++j)
        grid.ys.push_back(bbox.y_min + (bbox.y_max - bbox.y_min) *
                                           static_cast<double>(j) / static_cast<double>(ny - 1));

    std::vector<double> features;
    features.reserve(nx * ny * 2);
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            features.push_back(grid.xs[i]);
            features.push_back(grid.ys[j]);
        }
    }
    const TabularDataset points(schema, std::move(features),
                                std::vector<int>(nx * ny, 0));
    const auto pred = ensemble_predict(ens, points);
    const double k = static_cast<double>(ens.members.size());

    grid.mean = pred.mean;
    grid.stddev.assign(nx * ny, 0.0);
    for (const auto& member : pred.member_probs)
        for (std::size_t p = 0; p < member.size(); ++p) {
            const double d = member[p] - pred.mean[p];
            grid.stddev[p] += d * d;
        }
    for (double& v : grid.stddev) v = std::sqrt(v / k);

    // marching squares at level 0.5 over the mean surface
    const double level = 0.5;
    auto at = [&](std::size_t i, std::size_t j) { return grid.mean[j * nx + i]; };
    for (std::size_t j = 0; j + 1 < ny; ++j) {
        for (std::size_t i = 0; i + 1 < nx; ++i) {
            const double v00 = at(i, j), v10 = at(i + 1, j);
            const double v01 = at(i, j + 1), v11 = at(i + 1, j + 1);
            const double x0 = grid.xs[i], x1 = grid.xs[i + 1];
            const double y0 = grid.ys[j], y1 = grid.ys[j + 1];
            int idx = 0;
            if (v00 > level) idx |= 1;
            if (v10 > level) idx |= 2;
            if (v11 > level) idx |= 4;
            if (v01 > level) idx |= 8;
            if (idx == 0 || idx == 15) continue;

            // edge crossings
            std::vector<std::array<double, 2>> pts;
            auto bottom = [&] { return std::array<double, 2>{detail::interp(x0, x1, v00, v10, level), y0}; };
            auto top = [&] { return std::array<double, 2>{detail::interp(x0, x1, v01, v11, level), y1}; };
            auto left = [&] { return std::array<double, 2>{x0, detail::interp(y0, y1, v00, v01, level)}; };
            auto right = [&] { return std::array<double, 2>{x1, detail::interp(y0, y1, v10, v11, level)}; };
            switch (idx) {
                case 1: case 14: pts = {left(), bottom()}; break;
                case 2: case 13: pts = {bottom(), right()}; break;
                case 3: case 12: pts = {left(), right()}; break;
                case 4: case 11: pts = {right(), top()}; break;
                case 6: case 9:  pts = {bottom(), top()}; break;
                case 7: case 8:  pts = {left(), top()}; break;
                case 5:  pts = {left(), bottom(), right(), top()}; break;  // saddle
                case 10: pts = {bottom(), right(), top(), left()}; break;  // saddle
            }
            for (std::size_t s = 0; s + 1 < pts.size(); s += 2)
                grid.boundary.push_back({pts[s][0], pts[s][1], pts[s + 1][0], pts[s + 1][1]});
        }
    }
    return grid;
}

}  // namespace dge
