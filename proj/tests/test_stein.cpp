#include <catch2/catch_amalgamated.hpp>

#include <malstein/malliavin.hpp>
#include <malstein/stein.hpp>

#include "test_util.hpp"

using namespace malstein;
using testutil::error_code;

TEST_CASE("normal cdf and quantile", "[stein]") {
    REQUIRE(normal_cdf(0.0) == 0.5);
    REQUIRE(normal_cdf(1.0) == Catch::Approx(0.8413447460685429).margin(1e-15));
    REQUIRE(normal_cdf(-1.0) == Catch::Approx(0.1586552539314571).margin(1e-15));
    REQUIRE(normal_pdf(0.0) == Catch::Approx(inv_sqrt_2pi).margin(1e-16));

    REQUIRE(normal_quantile(0.5) == Catch::Approx(0.0).margin(1e-15));
    REQUIRE(normal_quantile(0.975) == Catch::Approx(1.959963984540054).margin(1e-12));
    for (double p : {1e-10, 0.01, 0.3, 0.5, 0.77, 0.999, 1.0 - 1e-12})
        REQUIRE(normal_cdf(normal_quantile(p)) == Catch::Approx(p).margin(1e-13));
    REQUIRE(error_code([] { normal_quantile(0.0); }) == "OutOfRange");
    REQUIRE(error_code([] { normal_quantile(1.0); }) == "OutOfRange");
    REQUIRE(error_code([] { normal_quantile(-0.5); }) == "OutOfRange");
}

TEST_CASE("tail helpers agree", "[stein]") {
    for (double x : {8.0, 10.0, 15.0, 25.0}) {
        const double via_mills = normal_pdf(x) * mills_ratio(x);
        REQUIRE(normal_tail(x) == Catch::Approx(via_mills).epsilon(1e-13));
    }
    REQUIRE(normal_tail(38.0) > 0.0);
    REQUIRE(normal_tail(-1.0) == Catch::Approx(normal_cdf(1.0)).margin(1e-16));
}

TEST_CASE("stein solution properties", "[stein]") {
    for (double z : {-4.0, -0.7, 0.0, 1.3, 3.0, 10.0, -10.0}) {
        double prev = -1.0 - 1e-12;
        for (int i = 0; i <= 800; ++i) {
            const double x = -40.0 + 0.1 * i;
            const double psi = psi_z(z, x);
            REQUIRE(psi >= 0.0);
            REQUIRE(std::abs(psi) <= sqrt_2pi / 4.0 + 1e-12);
            REQUIRE(std::abs(psi_z_prime(z, x)) <= 1.0 + 1e-10);
            REQUIRE(std::abs(x * psi) <= 1.0 + 1e-12);
            REQUIRE(x * psi >= prev - 1e-12);
            prev = x * psi;
        }
    }
}

TEST_CASE("stein solution symmetry and seams", "[stein]") {
    for (double z : {-3.0, -0.4, 0.9, 6.0})
        for (double x : {-9.0, -2.2, 0.0, 1.7, 8.4})
            REQUIRE(psi_z(z, x) == Catch::Approx(psi_z(-z, -x)).epsilon(1e-12).margin(1e-300));

    // continuity across the |x| = 8 evaluation seam
    for (double z : {-3.0, 0.0, 2.0, 8.5, 9.5}) {
        for (double seam : {8.0, -8.0}) {
            const double a = psi_z(z, seam - 1e-9);
            const double b = psi_z(z, seam + 1e-9);
            REQUIRE(a == Catch::Approx(b).epsilon(1e-6).margin(1e-300));
        }
    }
}

TEST_CASE("stein equation by finite differences", "[stein]") {
    testutil::Rng rng(51);
    for (int round = 0; round < 200; ++round) {
        const double z = 6.0 * rng.sym();
        const double x = 7.9 * rng.sym();
        if (std::abs(x - z) < 1e-2) continue;
        const double h = 1e-5;
        const double fd = (psi_z(z, x + h) - psi_z(z, x - h)) / (2.0 * h);
        REQUIRE(fd == Catch::Approx(psi_z_prime(z, x)).margin(1e-6));
        // the equation itself, with the inhomogeneity written out
        const double resid = psi_z_prime(z, x) - x * psi_z(z, x) -
                             ((x <= z ? 1.0 : 0.0) - normal_cdf(z));
        REQUIRE(std::abs(resid) <= 1e-10);
    }
    // derivative jump of size 1 at x = z
    const double z = 0.8;
    REQUIRE(psi_z_prime(z, z - 1e-12) - psi_z_prime(z, z + 1e-12) ==
            Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("kolmogorov distance golden values", "[stein]") {
    REQUIRE(kolmogorov_distance({{0.0}, {1.0}}) == 0.5);
    REQUIRE(kolmogorov_distance({{-1.0, 1.0}, {0.5, 0.5}}) ==
            Catch::Approx(0.5 - normal_cdf(-1.0)).margin(1e-15));

    // sup sits either left of an atom or at it; scan a fine grid to cross-check
    const LawOfF law{{-0.5, 0.7}, {0.3, 0.7}};
    double grid_sup = 0.0;
    for (int i = 0; i <= 40000; ++i) {
        const double t = -4.0 + i * 2e-4;
        double cdf = 0.0;
        for (std::size_t a = 0; a < law.atoms.size(); ++a)
            if (law.atoms[a] <= t) cdf += law.probs[a];
        grid_sup = std::max(grid_sup, std::abs(cdf - normal_cdf(t)));
    }
    REQUIRE(kolmogorov_distance(law) == Catch::Approx(grid_sup).margin(2e-4));
    REQUIRE(kolmogorov_distance(law) >= grid_sup - 1e-12);
}

TEST_CASE("wasserstein distance golden values", "[stein]") {
    REQUIRE(wasserstein_distance({{0.0}, {1.0}}) ==
            Catch::Approx(sqrt_2_over_pi).margin(1e-12));
    REQUIRE(wasserstein_distance({{-1.0, 1.0}, {0.5, 0.5}}) ==
            Catch::Approx(testutil::oracle_wasserstein({{-1.0, 1.0}, {0.5, 0.5}}))
                .margin(1e-9));
    // law whose CDF crosses Phi inside an interval, forcing the quantile split
    const LawOfF crossing{{-2.0, 3.0}, {0.9, 0.1}};
    REQUIRE(wasserstein_distance(crossing) ==
            Catch::Approx(testutil::oracle_wasserstein(crossing)).margin(1e-9));
}

TEST_CASE("wasserstein distance against quadrature on random laws", "[stein]") {
    testutil::Rng rng(52);
    for (int round = 0; round < 15; ++round) {
        const SpacePtr sp = rng.space();
        const LawOfF law = law_of(rng.normalized(sp));
        const double exact = wasserstein_distance(law);
        REQUIRE(exact == Catch::Approx(testutil::oracle_wasserstein(law)).margin(1e-9));
        REQUIRE(kolmogorov_distance(law) <= std::sqrt(exact) + 1e-12);
    }
}

TEST_CASE("chain remainders", "[stein]") {
    testutil::Rng rng(53);
    const SpacePtr sp = rng.space(3, 3);
    const Functional f = rng.functional(sp);
    for (double z : {-1.5, 0.2, 2.0}) {
        for (int k = 0; k < 3; ++k) {
            const auto [r, s] = chain_remainders(f, z, k);
            const Functional dkf = d_k(f, k);
            const Functional fk = f - dkf;
            for (std::uint64_t i = 0; i < f.size(); ++i) {
                // definitions restated pointwise
                REQUIRE(r[i] == Catch::Approx(psi_z(z, f[i]) - psi_z(z, fk[i]) -
                                              psi_z_prime(z, fk[i]) * dkf[i])
                                    .margin(1e-14));
                REQUIRE(s[i] == Catch::Approx(psi_z(z, fk[i]) - psi_z(z, f[i]) +
                                              psi_z_prime(z, f[i]) * dkf[i])
                                    .margin(1e-14));
                const double cap = 2.0 * std::abs(dkf[i]) + 1e-12;
                REQUIRE(std::abs(r[i]) <= cap);
                REQUIRE(std::abs(s[i]) <= cap);
            }
        }
    }
    REQUIRE(error_code([&] { chain_remainders(f, 0.0, 5); }) == "CoordinateOutOfRange");
}
