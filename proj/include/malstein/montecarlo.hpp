#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <thread>
#include <utility>
#include <vector>

#include "graph_coloring.hpp"
#include "stein.hpp"

namespace malstein {

// SplitMix64: the state advances by the 64-bit golden ratio and the output is
// the avalanche finalizer of the advanced state.  Seed 1 yields
// 0x910A2DEC89025CC1, 0xBEEB8DA1658EEC67, 0xF893A2EEFB32555E, 0x71C18690EE42C90B
// as its first four outputs (recorded in a golden test).
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform draw from {0, ..., n-1} by the 128-bit multiply-shift map
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
    }
};

// Sampling always splits work into this many logical substreams, seeded
// seed+0 .. seed+7, regardless of how many threads process them.  Output is
// therefore byte-identical across worker counts.
constexpr int logical_shards = 8;

struct SampleSummary {
    std::uint64_t n_samples = 0;
    std::vector<double> sorted_values;
    std::uint64_t seed = 0;
};

inline SampleSummary sample_mono_edges(const Graph& g, int c, std::uint64_t n_samples,
                                       std::uint64_t seed, int workers = 1) {
    if (n_samples < 1) fail("BadInput", "need at least one sample");
    const auto [mean, var] = t2_moments(g.m(), c);
    const double sigma = std::sqrt(var);
    std::vector<double> values(n_samples);
    std::array<std::pair<std::uint64_t, std::uint64_t>, logical_shards> ranges;
    const std::uint64_t base = n_samples / logical_shards;
    const std::uint64_t rem = n_samples % logical_shards;
    std::uint64_t start = 0;
    for (int s = 0; s < logical_shards; ++s) {
        const std::uint64_t len = base + (s < static_cast<int>(rem) ? 1 : 0);
        ranges[s] = {start, len};
        start += len;
    }
    auto run_shard = [&](int s) {
        SplitMix64 rng(seed + static_cast<std::uint64_t>(s));
        std::vector<int> colors(g.n);
        for (std::uint64_t t = 0; t < ranges[s].second; ++t) {
            for (int v = 0; v < g.n; ++v) colors[v] = static_cast<int>(rng.below(c));
            int t2 = 0;
            for (auto [u, v] : g.edges) t2 += colors[u] == colors[v] ? 1 : 0;
            values[ranges[s].first + t] = (t2 - mean) / sigma;
        }
    };
    workers = std::clamp(workers, 1, logical_shards);
    if (workers == 1) {
        for (int s = 0; s < logical_shards; ++s) run_shard(s);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&run_shard, w, workers] {
                for (int s = w; s < logical_shards; s += workers) run_shard(s);
            });
        for (auto& th : pool) th.join();
    }
    std::sort(values.begin(), values.end());
    return {n_samples, std::move(values), seed};
}

// (sup_v |empirical CDF(v) - Phi(v)| over both one-sided jumps,
//  DKW 99% confidence radius sqrt(ln(2/0.01) / (2n)))
inline std::pair<double, double> empirical_kolmogorov(const SampleSummary& summary) {
    const std::uint64_t n = summary.n_samples;
    if (n < 100) fail("TooFewSamples", "need at least 100 samples");
    double best = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const double phi = normal_cdf(summary.sorted_values[i]);
        best = std::max(best, std::abs(static_cast<double>(i) / n - phi));
        best = std::max(best, std::abs(static_cast<double>(i + 1) / n - phi));
    }
    const double radius = std::sqrt(std::log(2.0 / 0.01) / (2.0 * static_cast<double>(n)));
    return {best, radius};
}

} // namespace malstein
