#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "product_space.hpp"

namespace malstein {

// Entry budget for a full decomposition: 2^n component tables of |grid| doubles
// each, twice (conditional-expectation cache plus components).
constexpr std::uint64_t decomposition_entry_budget = std::uint64_t(1) << 25;

struct HoeffdingDecomposition {
    Functional base;
    // Component per subset mask.  Only components with nonzero variance are
    // kept, plus the empty set, which carries E[F].
    std::map<std::uint64_t, Functional> components;
    std::map<std::uint64_t, double> variances;

    Functional component_or_zero(std::uint64_t mask) const {
        auto it = components.find(mask);
        if (it != components.end()) return it->second;
        return Functional::constant(base.space(), 0.0);
    }
};

// Single component by inclusion-exclusion over conditional expectations:
// F_M = sum over L subset of M of (-1)^{|M|-|L|} E[F | F_L].
inline Functional component(const Functional& f, std::uint64_t mask) {
    f.space()->check_subset(mask);
    const int pm = std::popcount(mask);
    std::vector<double> acc(f.size(), 0.0);
    std::uint64_t sub = mask;
    while (true) {
        const Functional ce = conditional_expectation(f, sub);
        const double sign = ((pm - std::popcount(sub)) % 2 == 0) ? 1.0 : -1.0;
        for (std::uint64_t i = 0; i < acc.size(); ++i) acc[i] += sign * ce[i];
        if (sub == 0) break;
        sub = (sub - 1) & mask;
    }
    return Functional(f.space(), std::move(acc));
}

inline HoeffdingDecomposition decompose(const Functional& f) {
    const auto& sp = *f.space();
    const int n = sp.coord_count();
    const std::uint64_t subsets = std::uint64_t(1) << n;
    if (subsets > decomposition_entry_budget / sp.size())
        fail("SpaceTooLargeForFullDecomposition",
             "full decomposition needs " + std::to_string(subsets) + " tables of " +
                 std::to_string(sp.size()) + " entries");

    // Conditional-expectation cache, each entry derived from a parent with one
    // more coordinate by averaging that coordinate out.  Descending mask order
    // guarantees the parent is already present.
    std::vector<std::vector<double>> cond(subsets);
    cond[subsets - 1] = f.table();
    for (std::uint64_t mask = subsets - 1; mask-- > 0;) {
        int k = 0;
        while (mask >> k & 1) ++k;
        cond[mask] = cond[mask | (std::uint64_t(1) << k)];
        detail::average_coordinate_inplace(sp, cond[mask], k);
    }

    const double scale = f.max_abs();
    const double drop_threshold = 1e-18 * scale * scale;
    HoeffdingDecomposition d{f, {}, {}};
    const auto& w = sp.weights();
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
        const int pm = std::popcount(mask);
        std::vector<double> acc(sp.size(), 0.0);
        std::uint64_t sub = mask;
        while (true) {
            const double sign = ((pm - std::popcount(sub)) % 2 == 0) ? 1.0 : -1.0;
            const auto& t = cond[sub];
            for (std::uint64_t i = 0; i < acc.size(); ++i) acc[i] += sign * t[i];
            if (sub == 0) break;
            sub = (sub - 1) & mask;
        }
        long double var = 0.0L;
        if (mask != 0)
            for (std::uint64_t i = 0; i < acc.size(); ++i)
                var += static_cast<long double>(w[i]) * acc[i] * acc[i];
        if (mask == 0 || static_cast<double>(var) >= drop_threshold) {
            d.components.emplace(mask, Functional(f.space(), std::move(acc)));
            d.variances.emplace(mask, mask == 0 ? 0.0 : static_cast<double>(var));
        }
    }
    return d;
}

inline Functional chaos_projection(const Functional& f, int p) {
    if (p < 0 || p > f.space()->coord_count())
        fail("SubsetOutOfRange", "chaos order outside 0..coordinate count");
    const HoeffdingDecomposition d = decompose(f);
    std::vector<double> acc(f.size(), 0.0);
    for (const auto& [mask, comp] : d.components)
        if (std::popcount(mask) == p)
            for (std::uint64_t i = 0; i < acc.size(); ++i) acc[i] += comp[i];
    return Functional(f.space(), std::move(acc));
}

// E[Var(F | G_k)] where G_k is generated by every coordinate except k; equals
// E[(D_k F)^2] and the sum of Var(F_M) over subsets containing k.
inline double influence(const Functional& f, int k) {
    const auto& sp = *f.space();
    sp.check_coord(k);
    std::vector<double> avg(f.table());
    detail::average_coordinate_inplace(sp, avg, k);
    const auto& w = sp.weights();
    long double acc = 0.0L;
    for (std::uint64_t i = 0; i < f.size(); ++i) {
        const long double d = f[i] - avg[i];
        acc += static_cast<long double>(w[i]) * d * d;
    }
    return static_cast<double>(acc);
}

inline double max_influence(const Functional& f) {
    double m = 0.0;
    for (int k = 0; k < f.space()->coord_count(); ++k)
        m = std::max(m, influence(f, k));
    return m;
}

// F is concentrated on chaos p exactly when (L + p)F vanishes together with
// E[F]; this avoids the 2^n component sweep on large grids.
inline bool is_degenerate_ustat(const Functional& f, int p, double tol = 1e-9) {
    if (p < 1) fail("BadInput", "chaos order must be positive");
    const auto& sp = *f.space();
    const int n = sp.coord_count();
    std::vector<double> lf(f.size(), 0.0);
    for (int k = 0; k < n; ++k) {
        std::vector<double> avg(f.table());
        detail::average_coordinate_inplace(sp, avg, k);
        for (std::uint64_t i = 0; i < lf.size(); ++i) lf[i] += avg[i];
    }
    const auto& w = sp.weights();
    long double resid = 0.0L;
    for (std::uint64_t i = 0; i < lf.size(); ++i) {
        const long double r = lf[i] - n * f[i] + p * f[i];
        resid += static_cast<long double>(w[i]) * r * r;
    }
    return static_cast<double>(resid) <= tol && std::abs(expectation(f)) <= tol;
}

} // namespace malstein
