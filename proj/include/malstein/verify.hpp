#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "graph_coloring.hpp"
#include "montecarlo.hpp"
#include "random_sums.hpp"

namespace malstein {

struct VerifyFamily {
    std::string name;
    int cases = 0;
    int failures = 0;
};

struct VerifyResult {
    std::vector<VerifyFamily> families;

    bool all_passed() const {
        for (const auto& f : families)
            if (f.failures > 0) return false;
        return true;
    }
};

namespace detail {

struct VerifyRng {
    SplitMix64 rng;

    explicit VerifyRng(std::uint64_t seed) : rng(seed) {}

    double uniform() { return static_cast<double>(rng.next() >> 11) * 0x1.0p-53; }
    double sym() { return 2.0 * uniform() - 1.0; }
    std::uint64_t below(std::uint64_t n) { return rng.below(n); }

    DiscreteDistribution distribution(int support) {
        std::vector<double> vals(support), probs(support);
        double v = -1.5 - uniform();
        double total = 0.0;
        for (int i = 0; i < support; ++i) {
            vals[i] = v;
            v += 0.3 + uniform();
            probs[i] = 0.1 + uniform();
            total += probs[i];
        }
        for (double& p : probs) p /= total;
        return DiscreteDistribution(std::move(vals), std::move(probs));
    }

    SpacePtr space(int min_coords = 2, int max_coords = 4) {
        const int n = min_coords + static_cast<int>(below(max_coords - min_coords + 1));
        std::vector<DiscreteDistribution> coords;
        coords.reserve(n);
        for (int k = 0; k < n; ++k) coords.push_back(distribution(2 + static_cast<int>(below(2))));
        return build_space(coords);
    }

    Functional functional(const SpacePtr& sp) {
        std::vector<double> t(sp->size());
        for (double& x : t) x = sym();
        return Functional(sp, std::move(t));
    }

    // centered with unit second moment
    Functional normalized(const SpacePtr& sp) {
        for (;;) {
            Functional f = functional(sp);
            const double mean = expectation(f);
            const double var = variance(f);
            if (var < 1e-6) continue;
            return (f - mean) * (1.0 / std::sqrt(var));
        }
    }
};

inline double scale_tol(double scale) { return 1e-9 * (1.0 + scale); }

inline bool close_tables(const Functional& a, const Functional& b, double tol) {
    for (std::uint64_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > tol) return false;
    return true;
}

// sum_k E[(f(X^(k)) - f(X))^q (g(X^(k)) - g(X))^r] by double enumeration
inline double resample_moment(const Functional& f, const Functional& g, int q, int r) {
    const auto& sp = *f.space();
    const auto& w = sp.weights();
    long double acc = 0.0L;
    for (std::uint64_t i = 0; i < f.size(); ++i)
        for (int k = 0; k < sp.coord_count(); ++k) {
            const auto& dist = sp.coord(k);
            const std::uint64_t stride = sp.stride(k);
            const std::uint64_t base = i - sp.digit(i, k) * stride;
            for (std::uint64_t x = 0; x < dist.size(); ++x) {
                const std::uint64_t j = base + x * stride;
                long double term = static_cast<long double>(w[i]) * dist.prob(x);
                for (int t = 0; t < q; ++t) term *= f[j] - f[i];
                for (int t = 0; t < r; ++t) term *= g[j] - g[i];
                acc += term;
            }
        }
    return static_cast<double>(acc);
}

} // namespace detail

// Randomized self-check of every operator identity, Stein-solution property,
// distance golden value and bound dominance relation the library relies on.
inline VerifyResult verify_suite(std::uint64_t seed, int rounds = 30) {
    detail::VerifyRng vr(seed);
    VerifyResult res;
    auto family = [&res](const char* name) {
        res.families.push_back({name, 0, 0});
        return res.families.size() - 1;
    };
    auto check = [&res](std::size_t fam, bool ok) {
        ++res.families[fam].cases;
        if (!ok) ++res.families[fam].failures;
    };

    const auto f_reconstruct = family("hoeffding_reconstruction");
    const auto f_orth = family("hoeffding_orthogonality");
    const auto f_cond = family("component_conditionals");
    const auto f_stroock = family("stroock_formula");
    const auto f_gen = family("generator_identities");
    const auto f_pinv = family("pseudo_inverse");
    const auto f_gamma = family("carre_du_champ");
    const auto f_cov = family("covariance_identities");
    const auto f_poincare = family("poincare_chain");
    const auto f_fourth = family("fourth_moment_identity");
    const auto f_chain = family("chain_remainders");

    for (int round = 0; round < rounds; ++round) {
        const SpacePtr sp = vr.space();
        const int n = sp->coord_count();
        const Functional f = vr.functional(sp);
        const Functional g = vr.functional(sp);
        const double scale = f.max_abs();
        const double tol = detail::scale_tol(scale);

        const HoeffdingDecomposition dec = decompose(f);
        {
            std::vector<double> sum(f.size(), 0.0);
            for (const auto& [mask, comp] : dec.components)
                for (std::uint64_t i = 0; i < sum.size(); ++i) sum[i] += comp[i];
            check(f_reconstruct, detail::close_tables(f, Functional(sp, std::move(sum)), tol));
            long double var_sum = 0.0L;
            for (const auto& [mask, v] : dec.variances) var_sum += v;
            check(f_reconstruct, std::abs(static_cast<double>(var_sum) - variance(f)) <= tol);
        }
        {
            bool ok = true;
            for (const auto& [ma, ca] : dec.components)
                for (const auto& [mb, cb] : dec.components) {
                    if (ma >= mb) continue;
                    const double ip = inner(ca, cb);
                    if (std::abs(ip) > tol * (1.0 + scale)) ok = false;
                }
            check(f_orth, ok);
        }
        {
            bool ok = true;
            const std::uint64_t full = sp->full_mask();
            for (const auto& [mask, comp] : dec.components) {
                if (mask == 0) continue;
                const std::uint64_t keep = vr.below(full + 1);
                const Functional ce = conditional_expectation(comp, keep);
                if ((mask & ~keep) == 0) {
                    if (!detail::close_tables(ce, comp, tol)) ok = false;
                } else if (ce.max_abs() > tol) {
                    ok = false;
                }
            }
            check(f_cond, ok);
        }
        {
            bool ok = true;
            for (std::uint64_t mask = 1; mask <= sp->full_mask(); ++mask)
                if (!detail::close_tables(stroock_component(f, mask), component(f, mask), tol))
                    ok = false;
            check(f_stroock, ok);
        }
        {
            const Functional lf = ou_generator(f);
            check(f_gen, detail::close_tables(lf, -divergence(gradient(f)), tol));
            std::vector<double> eig(f.size(), 0.0);
            for (const auto& [mask, comp] : dec.components) {
                const double order = static_cast<double>(std::popcount(mask));
                for (std::uint64_t i = 0; i < eig.size(); ++i) eig[i] -= order * comp[i];
            }
            check(f_gen, detail::close_tables(lf, Functional(sp, std::move(eig)), tol));
            const Functional lg = ou_generator(g);
            check(f_gen, std::abs(inner(f, lg) - inner(g, lf)) <= tol);
            check(f_gen, inner(f, lf) <= tol);
        }
        {
            const Functional gc = g - expectation(g);
            const Functional linv = ou_pseudo_inverse(gc);
            check(f_pinv, std::abs(expectation(linv)) <= tol);
            check(f_pinv, detail::close_tables(ou_generator(linv), gc, tol));
            const Functional fc = f - expectation(f);
            check(f_pinv, detail::close_tables(ou_pseudo_inverse(ou_generator(fc)), fc, tol));
        }
        {
            const Functional gam = gamma0(f, g);
            const Functional via_l =
                (ou_generator(f * g) - g * ou_generator(f) - f * ou_generator(g)) * 0.5;
            check(f_gamma, detail::close_tables(gam, via_l, tol * (1.0 + g.max_abs())));
            check(f_gamma, std::abs(inner(f, ou_generator(g)) + expectation(gam)) <= tol);
            bool es_ok = true;
            for (int k = 0; k < n; ++k) {
                const double lhs = inner(d_k(f, k), d_k(g, k));
                // half the resampled cross moment, one coordinate at a time
                const auto& w = sp->weights();
                long double rhs = 0.0L;
                const auto& dist = sp->coord(k);
                const std::uint64_t stride = sp->stride(k);
                for (std::uint64_t i = 0; i < f.size(); ++i) {
                    const std::uint64_t base = i - sp->digit(i, k) * stride;
                    for (std::uint64_t x = 0; x < dist.size(); ++x) {
                        const std::uint64_t j = base + x * stride;
                        rhs += static_cast<long double>(w[i]) * dist.prob(x) *
                               (f[j] - f[i]) * (g[j] - g[i]);
                    }
                }
                if (std::abs(lhs - 0.5 * static_cast<double>(rhs)) > tol) es_ok = false;
            }
            check(f_gamma, es_ok);
        }
        {
            const double cov = inner(f, g) - expectation(f) * expectation(g);
            const Functional fc = f - expectation(f);
            const Functional linv_f = ou_pseudo_inverse(fc);
            long double mall = 0.0L, clark = 0.0L;
            const std::vector<Functional> prefixes = prefix_conditionals(f);
            for (int k = 0; k < n; ++k) {
                mall -= inner(d_k(linv_f, k), d_k(g, k));
                clark += inner(d_k(prefixes[k], k), d_k(g, k));
            }
            check(f_cov, std::abs(static_cast<double>(mall) - cov) <= tol);
            check(f_cov, std::abs(static_cast<double>(clark) - cov) <= tol);
            check(f_cov, std::abs(expectation(gamma0(-linv_f, g)) - cov) <= tol);
        }
        {
            long double infl = 0.0L;
            for (int k = 0; k < n; ++k) infl += influence(f, k);
            long double weighted = 0.0L;
            int max_order = 0;
            for (const auto& [mask, v] : dec.variances) {
                const int order = std::popcount(mask);
                weighted += order * v;
                if (v > 0.0 && order > max_order) max_order = order;
            }
            check(f_poincare, std::abs(static_cast<double>(infl - weighted)) <= tol);
            const double var = variance(f);
            check(f_poincare, var <= static_cast<double>(infl) + tol);
            check(f_poincare, static_cast<double>(infl) <= max_order * var + tol);
        }
        {
            const double lhs = detail::resample_moment(f, f, 4, 0);
            const double rhs = 12.0 * expectation(f * f * gamma0(f, f)) +
                               4.0 * expectation(f * f * f * ou_generator(f));
            check(f_fourth, std::abs(lhs - rhs) <= 1e-8 * std::pow(1.0 + scale, 4));
        }
        {
            const double z = 3.0 * vr.sym();
            bool ok = true;
            for (int k = 0; k < n; ++k) {
                const auto [r, s] = chain_remainders(f, z, k);
                const Functional dkf = d_k(f, k);
                std::vector<double> bound_ok(1, 0.0);
                for (std::uint64_t i = 0; i < f.size(); ++i) {
                    const double cap = 2.0 * std::abs(dkf[i]) + 1e-12;
                    if (std::abs(r[i]) > cap || std::abs(s[i]) > cap) ok = false;
                }
                // D_k psi_z(F) = psi_z'(F) D_kF - S_k - E[R_k | G_k]
                std::vector<double> psi_f(f.size());
                for (std::uint64_t i = 0; i < f.size(); ++i) psi_f[i] = psi_z(z, f[i]);
                const Functional lhs = d_k(Functional(sp, psi_f), k);
                std::vector<double> cond_r(r.table());
                detail::average_coordinate_inplace(*sp, cond_r, k);
                std::vector<double> rhs(f.size());
                for (std::uint64_t i = 0; i < f.size(); ++i)
                    rhs[i] = psi_z_prime(z, f[i]) * dkf[i] - s[i] - cond_r[i];
                if (!detail::close_tables(lhs, Functional(sp, std::move(rhs)), tol)) ok = false;
            }
            check(f_chain, ok);
        }
    }

    const auto f_stein = family("stein_solution");
    for (double z : {-3.0, -1.0, 0.0, 0.5, 2.0, 8.5}) {
        double prev = -2.0;
        for (int i = 0; i <= 400; ++i) {
            const double x = -20.0 + 0.1 * i;
            const double psi = psi_z(z, x);
            const double xpsi = x * psi;
            check(f_stein, std::abs(psi) <= sqrt_2pi / 4.0 + 1e-12);
            check(f_stein, std::abs(psi_z_prime(z, x)) <= 1.0 + 1e-10);
            check(f_stein, std::abs(xpsi) <= 1.0 + 1e-12);
            check(f_stein, xpsi >= prev - 1e-12);
            prev = xpsi;
            if (std::abs(x - z) > 1e-2 && std::abs(x) < 8.0) {
                const double h = 1e-5;
                const double fd = (psi_z(z, x + h) - psi_z(z, x - h)) / (2.0 * h);
                check(f_stein, std::abs(fd - psi_z_prime(z, x)) <= 1e-5);
            }
        }
    }

    const auto f_dist = family("distance_goldens");
    {
        const LawOfF point{{0.0}, {1.0}};
        check(f_dist, kolmogorov_distance(point) == 0.5);
        check(f_dist, std::abs(wasserstein_distance(point) - sqrt_2_over_pi) <= 1e-12);
        const LawOfF coin{{-1.0, 1.0}, {0.5, 0.5}};
        check(f_dist, std::abs(kolmogorov_distance(coin) - (0.5 - normal_cdf(-1.0))) <= 1e-12);
        for (int round = 0; round < rounds; ++round) {
            const SpacePtr sp = vr.space();
            const LawOfF law = law_of(vr.normalized(sp));
            long double mass = 0.0L;
            for (double p : law.probs) mass += p;
            check(f_dist, std::abs(static_cast<double>(mass) - 1.0) <= 1e-12);
            check(f_dist,
                  kolmogorov_distance(law) <= std::sqrt(wasserstein_distance(law)) + 1e-12);
        }
    }

    const auto f_dom = family("bound_dominance");
    for (int round = 0; round < rounds; ++round) {
        const SpacePtr sp = vr.space();
        const Functional f = vr.normalized(sp);
        const LawOfF law = law_of(f);
        const double dw = wasserstein_distance(law);
        const double dk = kolmogorov_distance(law);
        const auto [msw, msk] = ms_bounds(f);
        const auto [cow, cok] = co_bounds(f);
        const auto [cdw, cdk] = cdc_bounds(f);
        check(f_dom, msw.total >= dw - 1e-9);
        check(f_dom, cow.total >= dw - 1e-9);
        check(f_dom, cdw.total >= dw - 1e-9);
        check(f_dom, msk.total >= dk - 1e-9);
        check(f_dom, cok.total >= dk - 1e-9);
        check(f_dom, cdk.total >= dk - 1e-9);
    }

    const auto f_app = family("application_goldens");
    {
        const SpacePtr coin = build_space({fair_coin()});
        const Functional x1 = Functional::coordinate(coin, 0);
        check(f_app, std::abs(ms_bounds(x1).first.total - 1.0) <= 1e-12);
        check(f_app, std::abs(cdc_bounds(x1).first.terms[1].second - 2.0) <= 1e-12);
        const Graph k3 = parse_edge_list("0 1\n1 2\n0 2\n");
        const auto [mean, var] = t2_moments(k3.m(), 2);
        check(f_app, mean == 1.5 && var == 0.75);
        const LawOfF law = law_of(mono_edge_functional(k3, 2));
        check(f_app, law.atoms.size() == 2 && std::abs(law.probs[0] - 0.75) <= 1e-12);
        const RandomSumSpec rs =
            make_random_sum_spec(DiscreteDistribution({4.0}, {1.0}), fair_coin());
        check(f_app, std::abs(rs_bound(rs).total - 0.5) <= 1e-12);
    }

    return res;
}

} // namespace malstein
