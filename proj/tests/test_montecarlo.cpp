#include <catch2/catch_amalgamated.hpp>

#include <malstein/montecarlo.hpp>

#include "test_util.hpp"

using namespace malstein;
using testutil::error_code;

TEST_CASE("generator reference outputs", "[montecarlo]") {
    SplitMix64 rng(1);
    REQUIRE(rng.next() == 0x910A2DEC89025CC1ull);
    REQUIRE(rng.next() == 0xBEEB8DA1658EEC67ull);
    REQUIRE(rng.next() == 0xF893A2EEFB32555Eull);
    REQUIRE(rng.next() == 0x71C18690EE42C90Bull);

    SplitMix64 zero(0);
    REQUIRE(zero.next() == 0xE220A8397B1DCDAFull);
}

TEST_CASE("bounded draws", "[montecarlo]") {
    SplitMix64 rng(42);
    std::vector<int> hits(5, 0);
    for (int i = 0; i < 50000; ++i) {
        const std::uint64_t d = rng.below(5);
        REQUIRE(d < 5);
        ++hits[d];
    }
    // each cell expects 10000 with sd ~ 89; a 10-sigma band is ample
    for (int h : hits) {
        REQUIRE(h > 9100);
        REQUIRE(h < 10900);
    }
    REQUIRE(SplitMix64(7).below(1) == 0);
}

TEST_CASE("sampling is worker-count independent", "[montecarlo]") {
    const Graph g = parse_edge_list(testutil::cycle_edges(9));
    const SampleSummary one = sample_mono_edges(g, 3, 2001, 99, 1);
    const SampleSummary eight = sample_mono_edges(g, 3, 2001, 99, 8);
    const SampleSummary clamped = sample_mono_edges(g, 3, 2001, 99, 50);
    REQUIRE(one.sorted_values == eight.sorted_values);
    REQUIRE(one.sorted_values == clamped.sorted_values);
    REQUIRE(one.n_samples == 2001);
    REQUIRE(one.seed == 99);

    const SampleSummary reseeded = sample_mono_edges(g, 3, 2001, 100, 8);
    REQUIRE(one.sorted_values != reseeded.sorted_values);

    REQUIRE(error_code([&] { sample_mono_edges(g, 3, 0, 1); }) == "BadInput");
}

TEST_CASE("sampled values hit the exact law", "[montecarlo]") {
    // triangle, 2 colors: standardized count takes values in a two-atom set
    const Graph k3 = parse_edge_list(testutil::complete_edges(3));
    const SampleSummary s = sample_mono_edges(k3, 2, 4096, 5);
    const double sd = std::sqrt(0.75);
    const double lo = (1.0 - 1.5) / sd, hi = (3.0 - 1.5) / sd;
    std::uint64_t n_lo = 0;
    for (double v : s.sorted_values) {
        const bool is_lo = std::abs(v - lo) < 1e-12;
        const bool is_hi = std::abs(v - hi) < 1e-12;
        REQUIRE((is_lo || is_hi));
        n_lo += is_lo ? 1 : 0;
    }
    // P(lo) = 3/4; binomial sd is ~27.7, allow 8 sigma
    REQUIRE(n_lo > 2850);
    REQUIRE(n_lo < 3290);
}

TEST_CASE("empirical distance and its confidence radius", "[montecarlo]") {
    SampleSummary tiny;
    tiny.n_samples = 99;
    tiny.sorted_values.assign(99, 0.0);
    REQUIRE(error_code([&] { empirical_kolmogorov(tiny); }) == "TooFewSamples");

    // all-zero sample: empirical cdf jumps 0 -> 1 at 0, where Phi = 1/2
    SampleSummary degenerate;
    degenerate.n_samples = 100;
    degenerate.sorted_values.assign(100, 0.0);
    const auto [d0, r0] = empirical_kolmogorov(degenerate);
    REQUIRE(d0 == Catch::Approx(0.5).margin(1e-15));
    REQUIRE(r0 == Catch::Approx(std::sqrt(std::log(200.0) / 200.0)).margin(1e-15));

    // symmetric two-point sample at +-1: worst gap is Phi(1) - 1/2
    SampleSummary pair;
    pair.n_samples = 200;
    pair.sorted_values.assign(100, -1.0);
    pair.sorted_values.resize(200, 1.0);
    const auto [d1, r1] = empirical_kolmogorov(pair);
    REQUIRE(d1 == Catch::Approx(normal_cdf(1.0) - 0.5).margin(1e-13));
    REQUIRE(r1 == Catch::Approx(std::sqrt(std::log(200.0) / 400.0)).margin(1e-15));
}

TEST_CASE("large samples concentrate near the true distance", "[montecarlo]") {
    const Graph c12 = parse_edge_list(testutil::cycle_edges(12));
    const double exact = kolmogorov_distance(law_of(mono_edge_functional(c12, 2)));
    const SampleSummary s = sample_mono_edges(c12, 2, 100000, 2026, 8);
    const auto [emp, radius] = empirical_kolmogorov(s);
    REQUIRE(std::abs(emp - exact) <= radius);
}
