#include <catch2/catch_amalgamated.hpp>

#include <malstein/graph_coloring.hpp>
#include <malstein/hoeffding.hpp>

#include "test_util.hpp"

using namespace malstein;
using testutil::error_code;

TEST_CASE("edge list parsing", "[graph_coloring]") {
    const Graph g = parse_edge_list("# triangle\n0 1\n\n  1 2\n2 0\n");
    REQUIRE(g.n == 3);
    REQUIRE(g.m() == 3);
    REQUIRE(g.edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {0, 2}});

    REQUIRE(error_code([] { parse_edge_list("0 1\n1\n"); }) == "ParseError");
    REQUIRE(error_code([] { parse_edge_list("0 1 2\n"); }) == "ParseError");
    REQUIRE(error_code([] { parse_edge_list("0 a\n"); }) == "ParseError");
    REQUIRE(error_code([] { parse_edge_list("-1 2\n"); }) == "ParseError");
    REQUIRE(error_code([] { parse_edge_list("3 3\n"); }) == "SelfLoop");
    REQUIRE(error_code([] { parse_edge_list("0 1\n1 0\n"); }) == "DuplicateEdge");
}

TEST_CASE("degree sorting", "[graph_coloring]") {
    // star with center 3: center must be relabeled to 0
    const Graph g = parse_edge_list("3 0\n3 1\n3 2\n0 1\n");
    const Graph sorted = degree_sort(g);
    const std::vector<int> deg = degrees(sorted);
    for (std::size_t v = 1; v < deg.size(); ++v) REQUIRE(deg[v - 1] >= deg[v]);
    REQUIRE(sorted.m() == g.m());
    REQUIRE(deg[0] == 3);
}

TEST_CASE("four-cycle counting", "[graph_coloring]") {
    REQUIRE(count_c4(parse_edge_list(testutil::complete_edges(4))) == 3);
    REQUIRE(count_c4(parse_edge_list(testutil::complete_edges(5))) == 15);
    REQUIRE(count_c4(parse_edge_list(testutil::cycle_edges(4))) == 1);
    REQUIRE(count_c4(parse_edge_list(testutil::cycle_edges(8))) == 0);
    REQUIRE(count_c4(parse_edge_list(testutil::star_edges(10))) == 0);
    REQUIRE(count_c4(parse_edge_list(testutil::path_edges(10))) == 0);

    testutil::Rng rng(61);
    for (int round = 0; round < 8; ++round) {
        const Graph g = parse_edge_list(testutil::random_edges(12, 0.4, 100 + round));
        REQUIRE(count_c4(g) == testutil::oracle_c4(g));
    }
}

TEST_CASE("wedge sums under the degree-sorted labeling", "[graph_coloring]") {
    // triangle: every labeling gives one wedge of each orientation
    const GraphStats tri = graph_stats(parse_edge_list(testutil::complete_edges(3)));
    REQUIRE(tri.wedge_sums.first == 1);
    REQUIRE(tri.wedge_sums.second == 1);

    // after degree sorting the star's center carries the smallest label, so
    // all its wedges fall in the third orientation and both sums vanish
    const GraphStats star = graph_stats(parse_edge_list(testutil::star_edges(5)));
    REQUIRE(star.wedge_sums.first == 0);
    REQUIRE(star.wedge_sums.second == 0);

    // path 0-1-2-3 relabels to edges {0,1},{0,2},{1,3}: the wedge centered at
    // the new vertex 1 has one smaller and one larger neighbor
    const GraphStats p4 = graph_stats(parse_edge_list(testutil::path_edges(4)));
    REQUIRE(p4.wedge_sums.first == 0);
    REQUIRE(p4.wedge_sums.second == 1);

    const double root2 = std::sqrt(2.0);
    for (const std::string& text :
         {testutil::star_edges(20), testutil::path_edges(30), testutil::cycle_edges(24),
          testutil::complete_edges(7), testutil::random_edges(25, 0.3, 7),
          testutil::random_edges(50, 0.1, 8)}) {
        const GraphStats s = graph_stats(parse_edge_list(text));
        const double cap = root2 * std::pow(static_cast<double>(s.m), 1.5) + 1e-9;
        REQUIRE(static_cast<double>(s.wedge_sums.first) <= cap);
        REQUIRE(static_cast<double>(s.wedge_sums.second) <= cap);
    }
}

TEST_CASE("count moments", "[graph_coloring]") {
    const auto [mean, var] = t2_moments(3, 2);
    REQUIRE(mean == 1.5);
    REQUIRE(var == 0.75);
    const auto [mean5, var5] = t2_moments(10, 5);
    REQUIRE(mean5 == Catch::Approx(2.0).margin(1e-15));
    REQUIRE(var5 == Catch::Approx(10.0 * 0.2 * 0.8).margin(1e-14));
    REQUIRE(error_code([] { t2_moments(3, 1); }) == "BadColors");
    REQUIRE(error_code([] { t2_moments(0, 2); }) == "BadInput");
}

TEST_CASE("kernels are degenerate and have the stated variances", "[graph_coloring]") {
    for (int c : {2, 3, 5}) {
        const SpacePtr pair = build_space({uniform_colors(c), uniform_colors(c)});
        const Functional psi = Functional::from_values(pair, [c](const std::vector<double>& x) {
            return psi_kernel(c, x[0], x[1]);
        });
        REQUIRE(expectation(psi) == Catch::Approx(0.0).margin(1e-14));
        // degenerate: averaging either coordinate kills it
        REQUIRE(conditional_expectation(psi, 0b01).max_abs() <= 1e-13);
        REQUIRE(conditional_expectation(psi, 0b10).max_abs() <= 1e-13);
        const double var_psi = (1.0 / c) * (1.0 - 1.0 / c);
        REQUIRE(variance(psi) == Catch::Approx(var_psi).margin(1e-12));
        REQUIRE(second_moment(psi) == Catch::Approx(var_psi).margin(1e-12));

        const SpacePtr triple =
            build_space({uniform_colors(c), uniform_colors(c), uniform_colors(c)});
        const Functional rho = Functional::from_values(triple, [c](const std::vector<double>& x) {
            return rho_kernel(c, x[0], x[1], x[2]);
        });
        const double cd = c;
        const double var_rho = 2.0 / (cd * cd * cd * cd) - 3.0 / (cd * cd * cd) + 1.0 / (cd * cd);
        REQUIRE(second_moment(rho) == Catch::Approx(var_rho).margin(1e-12));
        REQUIRE(expectation(rho) == Catch::Approx(0.0).margin(1e-13));
        for (std::uint64_t mask : {0b011ull, 0b101ull, 0b110ull})
            REQUIRE(conditional_expectation(rho, mask).max_abs() <= 1e-12);
    }
}

TEST_CASE("kernel product decompositions", "[graph_coloring]") {
    for (int c : {2, 3, 5}) {
        const SpacePtr triple =
            build_space({uniform_colors(c), uniform_colors(c), uniform_colors(c)});
        auto psi12 = Functional::from_values(triple, [c](const std::vector<double>& x) {
            return psi_kernel(c, x[0], x[1]);
        });
        auto psi13 = Functional::from_values(triple, [c](const std::vector<double>& x) {
            return psi_kernel(c, x[0], x[2]);
        });
        auto psi23 = Functional::from_values(triple, [c](const std::vector<double>& x) {
            return psi_kernel(c, x[1], x[2]);
        });
        auto rho = Functional::from_values(triple, [c](const std::vector<double>& x) {
            return rho_kernel(c, x[0], x[1], x[2]);
        });

        // psi(X1,X2) psi(X1,X3) = (1/c) psi(X2,X3) + rho(X1,X2,X3)
        const Functional w = psi12 * psi13;
        const Functional expected = (1.0 / c) * psi23 + rho;
        for (std::uint64_t i = 0; i < w.size(); ++i)
            REQUIRE(w[i] == Catch::Approx(expected[i]).margin(1e-12));
        const HoeffdingDecomposition dw = decompose(w);
        const Functional c23 = dw.component_or_zero(0b110);
        const Functional c123 = dw.component_or_zero(0b111);
        for (std::uint64_t i = 0; i < w.size(); ++i) {
            REQUIRE(c23[i] == Catch::Approx(psi23[i] / c).margin(1e-12));
            REQUIRE(c123[i] == Catch::Approx(rho[i]).margin(1e-12));
        }

        // psi(X1,X2)^2 = (1/c)(1 - 1/c) + (1 - 2/c) psi(X1,X2)
        const Functional v = psi12 * psi12;
        const HoeffdingDecomposition dv = decompose(v);
        const double mean = (1.0 / c) * (1.0 - 1.0 / c);
        REQUIRE(dv.component_or_zero(0b000)[0] == Catch::Approx(mean).margin(1e-13));
        const Functional c12 = dv.component_or_zero(0b011);
        for (std::uint64_t i = 0; i < v.size(); ++i)
            REQUIRE(c12[i] == Catch::Approx((1.0 - 2.0 / c) * psi12[i]).margin(1e-12));
    }
}

TEST_CASE("monochromatic count functional", "[graph_coloring]") {
    const Graph k3 = parse_edge_list(testutil::complete_edges(3));
    const Functional f = mono_edge_functional(k3, 2);
    REQUIRE(expectation(f) == Catch::Approx(0.0).margin(1e-14));
    REQUIRE(second_moment(f) == Catch::Approx(1.0).margin(1e-13));

    const LawOfF law = law_of(f);
    REQUIRE(law.atoms.size() == 2);
    // raw counts 1 and 3 standardized by mean 1.5, sd sqrt(0.75)
    const double sd = std::sqrt(0.75);
    REQUIRE(law.atoms[0] == Catch::Approx((1.0 - 1.5) / sd).margin(1e-13));
    REQUIRE(law.atoms[1] == Catch::Approx((3.0 - 1.5) / sd).margin(1e-13));
    REQUIRE(law.probs[0] == Catch::Approx(0.75).margin(1e-13));
    REQUIRE(law.probs[1] == Catch::Approx(0.25).margin(1e-13));
}

TEST_CASE("closed-form bounds", "[graph_coloring]") {
    const GraphStats k3 = graph_stats(parse_edge_list(testutil::complete_edges(3)));
    const BoundReport r = mono_bound(k3, 2);
    // independent substitution: m = 3, c = 2, N(C4) = 0
    const double first_inner = 0.0 + 10.0 * std::sqrt(2.0) / std::sqrt(3.0) +
                               15.0 * std::sqrt(2.0) / std::sqrt(3.0) + 0.0;
    const double second_inner =
        1.0 / 3.0 + 5.0 * std::sqrt(2.0) / std::sqrt(3.0) + 7.0 * std::sqrt(2.0) / std::sqrt(3.0);
    const double hand =
        std::sqrt(2.0 / std::acos(-1.0)) * std::sqrt(first_inner) +
        std::sqrt(2.0) * std::sqrt(second_inner);
    REQUIRE(r.total == Catch::Approx(hand).margin(1e-12));
    REQUIRE(r.metadata.at("m") == 3.0);
    REQUIRE(r.metadata.at("c4_count") == 0.0);

    const double fang = 3.0 * std::sqrt(2.0 / 3.0) + 10.0 * std::sqrt(2.0) / std::sqrt(2.0) +
                        std::pow(2.0, 1.75) / (std::sqrt(std::acos(-1.0)) * std::pow(3.0, 0.25));
    REQUIRE(fang_bound(3, 2) == Catch::Approx(fang).margin(1e-12));

    REQUIRE(error_code([&] { mono_bound(k3, 1); }) == "BadColors");
    REQUIRE(error_code([] { fang_bound(0, 2); }) == "BadInput");
    REQUIRE(error_code([] {
                GraphStats empty{0, 0, {0, 0}};
                mono_bound(empty, 2);
            }) == "BadInput");
}

TEST_CASE("cycle bound dominates the exact distance", "[graph_coloring]") {
    const Graph c8 = parse_edge_list(testutil::cycle_edges(8));
    const BoundReport r = mono_bound(graph_stats(c8), 2);
    const double dw = wasserstein_distance(law_of(mono_edge_functional(c8, 2)));
    REQUIRE(r.total >= dw);
}
