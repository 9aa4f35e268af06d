#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "dge/rng.hpp"

using dge::RngStream;

TEST_CASE("equal (root_seed, path) replays the same sequence", "[rng]") {
    RngStream a(42, {1, 2, 3});
    RngStream b(42, {1, 2, 3});
    for (int i = 0; i < 10000; ++i) {
        REQUIRE(a.next_u64() == b.next_u64());
    }
}

TEST_CASE("distinct paths diverge within the first draws", "[rng]") {
    // Statistical independence proxy: sibling streams should not share a
    // prefix. 64-bit collisions across 100 draws are essentially impossible.
    const std::vector<std::vector<std::uint64_t>> paths = {
        {}, {0}, {1}, {0, 0}, {0, 1}, {1, 0}, {7, 7, 7}};
    for (std::size_t i = 0; i < paths.size(); ++i) {
        for (std::size_t j = i + 1; j < paths.size(); ++j) {
            RngStream a(9, paths[i]);
            RngStream b(9, paths[j]);
            bool differs = false;
            for (int k = 0; k < 100 && !differs; ++k) differs = a.next_u64() != b.next_u64();
            REQUIRE(differs);
        }
    }
}

TEST_CASE("child matches explicit path construction", "[rng]") {
    RngStream root(5);
    RngStream via_child = root.child(3).child(8);
    RngStream direct(5, {3, 8});
    for (int i = 0; i < 100; ++i) REQUIRE(via_child.next_u64() == direct.next_u64());
}

TEST_CASE("uniform01 stays in [0,1) and is roughly uniform", "[rng]") {
    RngStream r(0);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    REQUIRE(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("normal draws have the requested moments", "[rng]") {
    RngStream r(1);
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = r.normal();
        sum += x;
        sq += x * x;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    REQUIRE(std::abs(mean) < 0.01);
    REQUIRE(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("uniform_int covers its range without bias", "[rng]") {
    RngStream r(2);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 70000; ++i) counts[r.uniform_int(7)]++;
    for (int c : counts) REQUIRE(std::abs(c - 10000) < 500);
}

TEST_CASE("sample_without_replacement returns distinct sorted ids", "[rng]") {
    RngStream r(3);
    auto ids = r.sample_without_replacement(50, 20);
    REQUIRE(ids.size() == 20);
    for (std::size_t i = 1; i < ids.size(); ++i) REQUIRE(ids[i] > ids[i - 1]);
    REQUIRE(ids.back() < 50);
}
