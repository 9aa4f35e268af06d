#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dge/curves.hpp"
#include "dge/grid.hpp"
#include "dge/toy_data.hpp"

using namespace dge;

namespace {

ClassifierModel constant_model(const TabularDataset& train, double prob) {
    FeatureEncoder enc(train);
    const double logit = std::log(prob / (1.0 - prob));
    LogRegModel m{enc,
                  LogRegParams{Eigen::VectorXd::Zero(Eigen::Index(enc.encoded_dim())), logit}};
    return ClassifierModel{ClassifierSpec{ClassifierClass::LogReg}, m};
}

}  // namespace

TEST_CASE("curve on a hand-enumerated 6-row fixture", "[curves_grid]") {
    // confidences: .9 .8 .7 .6 .55 .5 ; correctness: 1 0 1 1 0 (last excluded at .5)
    const std::vector<double> probs{0.9, 0.2, 0.3, 0.6, 0.45, 0.5};
    const std::vector<int> labels{1, 1, 0, 1, 0, 1};
    const std::vector<double> taus{0.5, 0.65, 0.75};
    auto curve = confidence_accuracy_curve(probs, labels, taus);

    // tau=0.5: rows 0..4 selected (conf>0.5), hits: r0 (.9->1==1), r1 (.2->0!=1),
    // r2 (.3->0==0), r3 (.6->1==1), r4 (.45->0==0) => 4/5
    REQUIRE_THAT(*curve.accuracy_at_tau[0], Catch::Matchers::WithinAbs(0.8, 1e-12));
    REQUIRE_THAT(curve.coverage_at_tau[0], Catch::Matchers::WithinAbs(5.0 / 6.0, 1e-12));
    // tau=0.65: rows with conf>0.65: r0 (.9), r1 (.8), r2 (.7) => hits 2/3
    REQUIRE_THAT(*curve.accuracy_at_tau[1], Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-12));
    // tau=0.75: rows r0, r1 => hits 1/2
    REQUIRE_THAT(*curve.accuracy_at_tau[2], Catch::Matchers::WithinAbs(0.5, 1e-12));

    // coverage is non-increasing
    for (std::size_t i = 1; i < curve.coverage_at_tau.size(); ++i)
        REQUIRE(curve.coverage_at_tau[i] <= curve.coverage_at_tau[i - 1]);
}

TEST_CASE("perfect calibrated predictor keeps accuracy 1 at every tau", "[curves_grid]") {
    std::vector<double> probs;
    std::vector<int> labels;
    RngStream rng(2);
    for (int i = 0; i < 200; ++i) {
        const int y = int(rng.uniform_int(2));
        labels.push_back(y);
        probs.push_back(y == 1 ? rng.uniform(0.8, 0.99) : rng.uniform(0.01, 0.2));
    }
    const std::vector<double> taus{0.5, 0.6, 0.7};
    auto curve = confidence_accuracy_curve(probs, labels, taus);
    for (const auto& acc : curve.accuracy_at_tau) REQUIRE(*acc == 1.0);
}

TEST_CASE("empty selections stay absent, bad thresholds are rejected", "[curves_grid]") {
    const std::vector<double> probs{0.55, 0.45};
    const std::vector<int> labels{1, 0};
    const std::vector<double> taus{0.5, 0.9};
    auto curve = confidence_accuracy_curve(probs, labels, taus);
    REQUIRE(curve.accuracy_at_tau[0].has_value());
    REQUIRE(!curve.accuracy_at_tau[1].has_value());
    REQUIRE(curve.coverage_at_tau[1] == 0.0);

    const std::vector<double> bad{0.4};
    REQUIRE_THROWS_AS(confidence_accuracy_curve(probs, labels, bad), BadSpec);
    const std::vector<double> unsorted{0.7, 0.6};
    REQUIRE_THROWS_AS(confidence_accuracy_curve(probs, labels, unsorted), BadSpec);
}

TEST_CASE("uncertainty grid member statistics", "[curves_grid]") {
    auto data = gen_two_moons({ToyKind::TwoMoons, 40, 0.1, 3});
    BoundingBox bbox{-1.5, 2.5, -1.0, 1.5};

    // identical members: std 0 everywhere
    EnsemblePredictor same;
    for (int i = 0; i < 4; ++i) same.members.push_back(constant_model(data, 0.7));
    auto g0 = uncertainty_grid(same, bbox, 8, 6);
    for (double s : g0.stddev) REQUIRE_THAT(s, Catch::Matchers::WithinAbs(0.0, 1e-12));
    for (double m : g0.mean) REQUIRE_THAT(m, Catch::Matchers::WithinAbs(0.7, 1e-12));

    // two constant members 0 and 1: mean 0.5, std 0.5 everywhere
    EnsemblePredictor split_ens;
    split_ens.members.push_back(constant_model(data, 1e-9));
    split_ens.members.push_back(constant_model(data, 1.0 - 1e-9));
    auto g1 = uncertainty_grid(split_ens, bbox, 5, 5);
    for (std::size_t p = 0; p < g1.mean.size(); ++p) {
        REQUIRE_THAT(g1.mean[p], Catch::Matchers::WithinAbs(0.5, 1e-6));
        REQUIRE_THAT(g1.stddev[p], Catch::Matchers::WithinAbs(0.5, 1e-6));
    }

    // three constant members: population std of {0.2, 0.4, 0.9}
    EnsemblePredictor three;
    for (double p : {0.2, 0.4, 0.9}) three.members.push_back(constant_model(data, p));
    auto g2 = uncertainty_grid(three, bbox, 4, 4);
    const double mean = (0.2 + 0.4 + 0.9) / 3.0;
    const double expect = std::sqrt(((0.2 - mean) * (0.2 - mean) + (0.4 - mean) * (0.4 - mean) +
                                     (0.9 - mean) * (0.9 - mean)) /
                                    3.0);
    for (double s : g2.stddev) REQUIRE_THAT(s, Catch::Matchers::WithinAbs(expect, 1e-9));
    REQUIRE_THAT(g2.mean_std(), Catch::Matchers::WithinAbs(expect, 1e-9));
}

TEST_CASE("grid boundary tracks a linear decision surface", "[curves_grid]") {
    // train a logreg on the gaussian toy: boundary is near x1 = 0
    auto train = gen_gaussian_toy({ToyKind::Gaussian, 4000, 0.0, 5});
    ClassifierSpec spec;
    spec.cls = ClassifierClass::LogReg;
    RngStream rng(6);
    EnsemblePredictor ens{{train_classifier(spec, train, rng)}};
    auto grid = uncertainty_grid(ens, {-2, 2, -2, 2}, 41, 41);
    REQUIRE(!grid.boundary.empty());
    for (const auto& seg : grid.boundary) {
        REQUIRE(std::abs(seg[0]) < 0.5);  // both endpoints near x1 = 0
        REQUIRE(std::abs(seg[2]) < 0.5);
    }
}

TEST_CASE("grid rejects non-2-D schemas", "[curves_grid]") {
    TabularDataset d1(numeric_schema({"x"}), {0.0, 1.0}, {0, 1});
    EnsemblePredictor ens{{constant_model(d1, 0.5)}};
    REQUIRE_THROWS_AS(uncertainty_grid(ens, {}, 4, 4), DimensionError);
}
