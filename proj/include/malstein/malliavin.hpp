#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "product_space.hpp"

namespace malstein {

namespace detail {

// One factor of the semigroup: replace the coordinate-k fiber values by
// tau * value + (1 - tau) * fiber average, i.e. apply (1-tau) A_k + tau I.
inline void blend_coordinate_inplace(const ProductSpace& sp, std::vector<double>& t,
                                     int k, double tau) {
    const std::uint64_t stride = sp.stride(k);
    const auto& dist = sp.coord(k);
    const std::uint64_t sz = dist.size();
    const std::uint64_t block = stride * sz;
    for (std::uint64_t base = 0; base < t.size(); base += block)
        for (std::uint64_t off = 0; off < stride; ++off) {
            long double avg = 0.0L;
            for (std::uint64_t x = 0; x < sz; ++x)
                avg += static_cast<long double>(dist.prob(x)) * t[base + off + x * stride];
            const double a = static_cast<double>(avg);
            for (std::uint64_t x = 0; x < sz; ++x) {
                double& v = t[base + off + x * stride];
                v = tau * v + (1.0 - tau) * a;
            }
        }
}

} // namespace detail

// D_k F = F - E[F | coordinates other than k].
inline Functional d_k(const Functional& f, int k) {
    const auto& sp = *f.space();
    sp.check_coord(k);
    std::vector<double> avg(f.table());
    detail::average_coordinate_inplace(sp, avg, k);
    std::vector<double> out(f.size());
    for (std::uint64_t i = 0; i < out.size(); ++i) out[i] = f[i] - avg[i];
    return Functional(f.space(), std::move(out));
}

struct Process {
    std::vector<Functional> entries;

    explicit Process(std::vector<Functional> e) : entries(std::move(e)) {
        if (entries.empty()) fail("SpaceMismatch", "process has no entries");
        const auto& sp = entries.front().space();
        if (static_cast<int>(entries.size()) != sp->coord_count())
            fail("SpaceMismatch", "process needs one entry per coordinate");
        for (const auto& e : entries) require_same_space(entries.front(), e);
    }
};

inline Process gradient(const Functional& f) {
    std::vector<Functional> entries;
    entries.reserve(f.space()->coord_count());
    for (int k = 0; k < f.space()->coord_count(); ++k) entries.push_back(d_k(f, k));
    return Process(std::move(entries));
}

// Adjoint of the gradient: delta(u) = sum_k D_k u_k, so that
// E[F delta(u)] = sum_k E[D_k F u_k].
inline Functional divergence(const Process& u) {
    const auto& sp = u.entries.front().space();
    std::vector<double> acc(sp->size(), 0.0);
    for (int k = 0; k < sp->coord_count(); ++k) {
        const Functional dk = d_k(u.entries[k], k);
        for (std::uint64_t i = 0; i < acc.size(); ++i) acc[i] += dk[i];
    }
    return Functional(sp, std::move(acc));
}

// L F = -sum_k D_k F = sum_k A_k F - n F.
inline Functional ou_generator(const Functional& f) {
    const auto& sp = *f.space();
    const int n = sp.coord_count();
    std::vector<double> acc(f.size(), 0.0);
    for (int k = 0; k < n; ++k) {
        std::vector<double> avg(f.table());
        detail::average_coordinate_inplace(sp, avg, k);
        for (std::uint64_t i = 0; i < acc.size(); ++i) acc[i] += avg[i];
    }
    for (std::uint64_t i = 0; i < acc.size(); ++i) acc[i] -= n * f[i];
    return Functional(f.space(), std::move(acc));
}

// L^{-1} G = -integral over (0,1] of P(t) G dt/t for centered G, where
// P(t) = prod_k ((1-t) A_k + t I) acts as t^{|M|} on the chaos of order |M|,
// so each chaos component picks up the eigenvalue -1/|M| as required.  The
// integrand is a polynomial in t whose degree is the number of non-constant
// coordinates (at most 30 or so under any grid that fits in memory, since each
// non-constant coordinate doubles the grid), so Gauss-Legendre of order 30,
// exact through degree 59, integrates it without error.
inline Functional ou_pseudo_inverse(const Functional& g) {
    if (std::abs(expectation(g)) > 1e-9 * (1.0 + g.max_abs()))
        fail("NotCentered", "pseudo-inverse requires a centered argument");
    const auto& sp = *g.space();
    const int n = sp.coord_count();
    using rule = boost::math::quadrature::gauss<double, 30>;
    const auto& xs = rule::abscissa();
    const auto& ws = rule::weights();
    std::vector<long double> acc(g.size(), 0.0L);
    auto add_node = [&](double x, double w) {
        const double t = 0.5 * (1.0 + x);
        std::vector<double> pt(g.table());
        for (int k = 0; k < n; ++k) detail::blend_coordinate_inplace(sp, pt, k, t);
        const double c = -0.5 * w / t;
        for (std::uint64_t i = 0; i < pt.size(); ++i)
            acc[i] += static_cast<long double>(c) * pt[i];
    };
    for (std::size_t j = 0; j < xs.size(); ++j) {
        add_node(xs[j], ws[j]);
        add_node(-xs[j], ws[j]);
    }
    std::vector<double> out(g.size());
    for (std::uint64_t i = 0; i < out.size(); ++i) out[i] = static_cast<double>(acc[i]);
    return Functional(g.space(), std::move(out));
}

// Gamma_0(F,G)(w) = 1/2 sum_k sum_{x'} mu_k(x') (f(w^{k->x'}) - f(w)) (g(w^{k->x'}) - g(w)).
inline Functional gamma0(const Functional& f, const Functional& g) {
    require_same_space(f, g);
    const auto& sp = *f.space();
    std::vector<double> out(f.size());
    for (std::uint64_t i = 0; i < out.size(); ++i) {
        long double s = 0.0L;
        for (int k = 0; k < sp.coord_count(); ++k) {
            const auto& dist = sp.coord(k);
            const std::uint64_t stride = sp.stride(k);
            const std::uint64_t base = i - sp.digit(i, k) * stride;
            for (std::uint64_t x = 0; x < dist.size(); ++x) {
                const std::uint64_t j = base + x * stride;
                s += static_cast<long double>(dist.prob(x)) * (f[j] - f[i]) * (g[j] - g[i]);
            }
        }
        out[i] = 0.5 * static_cast<double>(s);
    }
    return Functional(f.space(), std::move(out));
}

// F_M = E[ prod_{k in M} D_k F | F_M ] without touching the other components.
inline Functional stroock_component(const Functional& f, std::uint64_t mask) {
    f.space()->check_subset(mask);
    if (mask == 0) return Functional::constant(f.space(), expectation(f));
    Functional g = f;
    for (int k = 0; k < f.space()->coord_count(); ++k)
        if (mask >> k & 1) g = d_k(g, k);
    return conditional_expectation(g, mask);
}

// E[F | F_k] for k = 0..n-1, with F_k generated by coordinates 0..k inclusive.
inline std::vector<Functional> prefix_conditionals(const Functional& f) {
    const auto& sp = *f.space();
    const int n = sp.coord_count();
    std::vector<std::vector<double>> tables(n);
    std::vector<double> t(f.table());
    tables[n - 1] = t;
    for (int k = n - 2; k >= 0; --k) {
        detail::average_coordinate_inplace(sp, t, k + 1);
        tables[k] = t;
    }
    std::vector<Functional> out;
    out.reserve(n);
    for (int k = 0; k < n; ++k) out.emplace_back(f.space(), std::move(tables[k]));
    return out;
}

} // namespace malstein
