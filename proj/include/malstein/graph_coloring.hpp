#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bounds.hpp"

namespace malstein {

struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // stored with u < v

    int m() const { return static_cast<int>(edges.size()); }
};

// One "u v" pair per line, 0-based ids, blank lines and '#' comments ignored.
inline Graph parse_edge_list(const std::string& text) {
    Graph g;
    std::set<std::pair<int, int>> seen;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        long long u = -1, v = -1;
        std::string rest;
        if (!(ls >> u >> v) || (ls >> rest) || u < 0 || v < 0)
            fail("ParseError", "line " + std::to_string(line_no) + ": expected \"u v\"");
        if (u == v)
            fail("SelfLoop", "line " + std::to_string(line_no) + ": edge endpoints coincide");
        const int lo = static_cast<int>(std::min(u, v));
        const int hi = static_cast<int>(std::max(u, v));
        if (!seen.insert({lo, hi}).second)
            fail("DuplicateEdge", "line " + std::to_string(line_no) + ": edge repeated");
        g.edges.push_back({lo, hi});
        g.n = std::max(g.n, hi + 1);
    }
    return g;
}

inline std::vector<int> degrees(const Graph& g) {
    std::vector<int> deg(g.n, 0);
    for (auto [u, v] : g.edges) {
        ++deg[u];
        ++deg[v];
    }
    return deg;
}

// Relabel so that deg(0) >= deg(1) >= ...; ties keep the original label order.
inline Graph degree_sort(const Graph& g) {
    const std::vector<int> deg = degrees(g);
    std::vector<int> order(g.n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&deg](int a, int b) { return deg[a] > deg[b]; });
    std::vector<int> new_id(g.n);
    for (int i = 0; i < g.n; ++i) new_id[order[i]] = i;
    Graph out;
    out.n = g.n;
    out.edges.reserve(g.edges.size());
    for (auto [u, v] : g.edges)
        out.edges.push_back({std::min(new_id[u], new_id[v]), std::max(new_id[u], new_id[v])});
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

namespace detail {

inline std::vector<std::uint64_t> adjacency_rows(const Graph& g, int words) {
    std::vector<std::uint64_t> adj(static_cast<std::size_t>(g.n) * words, 0);
    for (auto [u, v] : g.edges) {
        adj[static_cast<std::size_t>(u) * words + v / 64] |= std::uint64_t(1) << (v % 64);
        adj[static_cast<std::size_t>(v) * words + u / 64] |= std::uint64_t(1) << (u % 64);
    }
    return adj;
}

} // namespace detail

// Number of 4-cycles, counted as pairs of common neighbors: every 4-cycle
// contains exactly two opposite vertex pairs (u,v) each contributing one pair
// of common neighbors, hence the division by 2.
inline std::int64_t count_c4(const Graph& g) {
    const int words = (g.n + 63) / 64;
    const auto adj = detail::adjacency_rows(g, words);
    std::int64_t pairs = 0;
    for (int u = 0; u < g.n; ++u)
        for (int v = u + 1; v < g.n; ++v) {
            std::int64_t codeg = 0;
            const auto* ru = &adj[static_cast<std::size_t>(u) * words];
            const auto* rv = &adj[static_cast<std::size_t>(v) * words];
            for (int t = 0; t < words; ++t) codeg += std::popcount(ru[t] & rv[t]);
            pairs += codeg * (codeg - 1) / 2;
        }
    return pairs / 2;
}

// The two path sums over i < j < k in the current labeling:
//   first  = sum a_ik a_jk  (paths whose middle vertex is the largest label)
//   second = sum a_ij a_jk  (paths whose middle vertex is the middle label)
// With a degree-sorted labeling both are at most sqrt(2) m^{3/2}.
inline std::pair<std::int64_t, std::int64_t> wedge_sums(const Graph& g) {
    std::vector<std::int64_t> below(g.n, 0), above(g.n, 0);
    for (auto [u, v] : g.edges) {
        ++below[v];
        ++above[u];
    }
    std::int64_t first = 0, second = 0;
    for (int k = 0; k < g.n; ++k) {
        first += below[k] * (below[k] - 1) / 2;
        second += below[k] * above[k];
    }
    return {first, second};
}

struct GraphStats {
    int m = 0;
    std::int64_t c4_count = 0;
    std::pair<std::int64_t, std::int64_t> wedge_sums{0, 0};
};

inline GraphStats graph_stats(const Graph& g) {
    GraphStats s;
    s.m = g.m();
    s.c4_count = count_c4(g);
    s.wedge_sums = wedge_sums(degree_sort(g));
    return s;
}

inline std::pair<double, double> t2_moments(std::int64_t m, int c) {
    if (c < 2) fail("BadColors", "need at least 2 colors");
    if (m < 1) fail("BadInput", "need at least one edge");
    const double mean = static_cast<double>(m) / c;
    return {mean, mean * (1.0 - 1.0 / c)};
}

// psi(x,y) = 1{x=y} - 1/c, the degenerate kernel of the pair term of T2.
inline double psi_kernel(int c, double x, double y) {
    return (x == y ? 1.0 : 0.0) - 1.0 / c;
}

inline double rho_kernel(int c, double x, double y, double z) {
    const double eq_xy = x == y ? 1.0 : 0.0;
    const double eq_xz = x == z ? 1.0 : 0.0;
    const double eq_yz = y == z ? 1.0 : 0.0;
    const double all = (x == y && y == z) ? 1.0 : 0.0;
    return all - (eq_xy + eq_xz + eq_yz) / c + 2.0 / (c * c);
}

// F = (T2 - m/c) / sqrt((m/c)(1 - 1/c)) on the grid of uniform c-colorings.
inline Functional mono_edge_functional(const Graph& g, int c,
                                       std::uint64_t outcome_cap = default_outcome_cap) {
    const auto [mean, var] = t2_moments(g.m(), c);
    const double sigma = std::sqrt(var);
    std::vector<DiscreteDistribution> coords(g.n, uniform_colors(c));
    SpacePtr sp = build_space(coords, outcome_cap);
    return Functional::from_values(sp, [&](const std::vector<double>& colors) {
        int t2 = 0;
        for (auto [u, v] : g.edges) t2 += colors[u] == colors[v] ? 1 : 0;
        return (t2 - mean) / sigma;
    });
}

// total = sqrt(2/pi) (3(c-2)/m + 10 sqrt(2)/sqrt(m) + 15 sqrt(2)/(sqrt(m)(c-1))
//                     + 30 N(C4)/(m^2 (c-1)))^(1/2)
//       + sqrt(2) ((c-1)/m + 5 sqrt(2)/(sqrt(m)(c-1)) + 7 sqrt(2)/sqrt(m))^(1/2)
inline BoundReport mono_bound(const GraphStats& stats, int c) {
    if (c < 2) fail("BadColors", "need at least 2 colors");
    if (stats.m < 1) fail("BadInput", "need at least one edge");
    const double m = stats.m;
    const double root_m = std::sqrt(m);
    const double root2 = std::sqrt(2.0);
    const double first_inner = 3.0 * (c - 2.0) / m + 10.0 * root2 / root_m +
                               15.0 * root2 / (root_m * (c - 1.0)) +
                               30.0 * static_cast<double>(stats.c4_count) / (m * m * (c - 1.0));
    const double second_inner =
        (c - 1.0) / m + 5.0 * root2 / (root_m * (c - 1.0)) + 7.0 * root2 / root_m;
    BoundReport r;
    r.bound_name = "mono_edges_wasserstein";
    r.terms = {{"first_radical", sqrt_2_over_pi * std::sqrt(first_inner)},
               {"second_radical", root2 * std::sqrt(second_inner)}};
    r.total = r.terms[0].second + r.terms[1].second;
    r.vacuous = r.total > 1.0;
    r.metadata = {{"m", m},
                  {"colors", static_cast<double>(c)},
                  {"c4_count", static_cast<double>(stats.c4_count)},
                  {"wedge_sum_first", static_cast<double>(stats.wedge_sums.first)},
                  {"wedge_sum_second", static_cast<double>(stats.wedge_sums.second)}};
    return r;
}

// Earlier Wasserstein bound kept for comparison:
// 3 sqrt(c/m) + 10 sqrt(2)/sqrt(c) + (1/sqrt(pi)) 2^{7/4} / m^{1/4}.
inline double fang_bound(std::int64_t m, int c) {
    if (c < 2) fail("BadColors", "need at least 2 colors");
    if (m < 1) fail("BadInput", "need at least one edge");
    const double md = static_cast<double>(m);
    return 3.0 * std::sqrt(c / md) + 10.0 * std::sqrt(2.0) / std::sqrt(c) +
           std::pow(2.0, 1.75) / (std::sqrt(std::numbers::pi) * std::pow(md, 0.25));
}

} // namespace malstein
