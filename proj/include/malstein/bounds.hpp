#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hoeffding.hpp"
#include "malliavin.hpp"
#include "stein.hpp"

namespace malstein {

// Itemized evaluation of one normal-approximation bound.  Labels beginning
// with "alt:" are informational estimates of some term and are excluded from
// the total; the remaining term values add up to it exactly.
struct BoundReport {
    std::string bound_name;
    double total = 0.0;
    std::vector<std::pair<std::string, double>> terms;
    std::map<std::string, double> metadata;
    bool vacuous = false;
};

namespace detail {

inline void require_centered(const Functional& f) {
    if (std::abs(expectation(f)) > 1e-9 * (1.0 + f.max_abs()))
        fail("NotCentered", "bound requires a centered functional");
}

inline BoundReport finish_report(std::string name, const Functional& f,
                                 std::vector<std::pair<std::string, double>> terms,
                                 std::map<std::string, double> metadata = {}) {
    BoundReport r;
    r.bound_name = std::move(name);
    r.terms = std::move(terms);
    long double tot = 0.0L;
    for (const auto& [label, value] : r.terms)
        if (label.rfind("alt:", 0) != 0) tot += value;
    r.total = static_cast<double>(tot);
    r.vacuous = r.total > 1.0;
    r.metadata = std::move(metadata);
    r.metadata["coordinates"] = f.space()->coord_count();
    r.metadata["space_size"] = static_cast<double>(f.space()->size());
    r.metadata["mean"] = expectation(f);
    const double m2 = second_moment(f);
    r.metadata["second_moment"] = m2;
    r.metadata["normalized"] = std::abs(m2 - 1.0) <= 1e-9 ? 1.0 : 0.0;
    return r;
}

} // namespace detail

// Wasserstein:  sqrt(2/pi) E|1 - sum_k D_k(-L^-1 F) D_k F|
//                 + sum_k E[|D_k(-L^-1 F)| (D_k F)^2]
// Kolmogorov:   E|1 - sum_k D_k(-L^-1 F) D_k F|
//                 + 2 sum_k E|D_k|D_k L^-1 F| D_k F|
//                 + 2 E|sum_k E[|D_k L^-1 F| | G_k] D_k F|
inline std::pair<BoundReport, BoundReport> ms_bounds(const Functional& f) {
    detail::require_centered(f);
    const auto& sp = *f.space();
    const auto& w = sp.weights();
    const Functional minus_linv = -ou_pseudo_inverse(f);
    std::vector<double> pairing(f.size(), 0.0);
    std::vector<double> cond_sum(f.size(), 0.0);
    long double cubic = 0.0L, cross = 0.0L;
    for (int k = 0; k < sp.coord_count(); ++k) {
        const Functional dkf = d_k(f, k);
        const Functional dkm = d_k(minus_linv, k);
        const Functional abs_dkm = abs(dkm);
        std::vector<double> cond(abs_dkm.table());
        detail::average_coordinate_inplace(sp, cond, k);
        const Functional cross_k = d_k(abs_dkm, k);
        for (std::uint64_t i = 0; i < f.size(); ++i) {
            pairing[i] += dkm[i] * dkf[i];
            cond_sum[i] += cond[i] * dkf[i];
            cubic += static_cast<long double>(w[i]) * std::abs(dkm[i]) * dkf[i] * dkf[i];
            cross += static_cast<long double>(w[i]) * std::abs(cross_k[i] * dkf[i]);
        }
    }
    long double disc = 0.0L, cond_abs = 0.0L;
    for (std::uint64_t i = 0; i < f.size(); ++i) {
        disc += static_cast<long double>(w[i]) * std::abs(1.0 - pairing[i]);
        cond_abs += static_cast<long double>(w[i]) * std::abs(cond_sum[i]);
    }
    BoundReport wass = detail::finish_report(
        "ms_wasserstein", f,
        {{"discrepancy", sqrt_2_over_pi * static_cast<double>(disc)},
         {"cubic_remainder", static_cast<double>(cubic)}});
    BoundReport kol = detail::finish_report(
        "ms_kolmogorov", f,
        {{"discrepancy", static_cast<double>(disc)},
         {"derivative_cross", 2.0 * static_cast<double>(cross)},
         {"conditional_sum", 2.0 * static_cast<double>(cond_abs)}});
    return {std::move(wass), std::move(kol)};
}

// Same shapes with D_k E[F | F_k] in place of D_k(-L^-1 F), where F_k is the
// prefix filtration of coordinates 0..k.  The Wasserstein report carries three
// informational estimates of its second term: sum_k E|D_k F|^3, the root of
// sum_k E[(D_k F)^4], and the variance product
// (sum_k Var(E[D_kF|F_k] D_kF) + sum_k Var(E[D_kF|F_k])^2)^(1/2) (sum_k E[(D_kF)^2])^(1/2).
inline std::pair<BoundReport, BoundReport> co_bounds(const Functional& f) {
    detail::require_centered(f);
    const auto& sp = *f.space();
    const auto& w = sp.weights();
    const std::vector<Functional> prefixes = prefix_conditionals(f);
    std::vector<double> pairing(f.size(), 0.0);
    std::vector<double> cond_sum(f.size(), 0.0);
    long double cubic = 0.0L, cross = 0.0L;
    long double alt_cubic = 0.0L, alt_quartic = 0.0L;
    long double brem_var = 0.0L, grad_sq = 0.0L;
    for (int k = 0; k < sp.coord_count(); ++k) {
        const Functional dkf = d_k(f, k);
        const Functional dke = d_k(prefixes[k], k);
        const Functional abs_dke = abs(dke);
        std::vector<double> cond(abs_dke.table());
        detail::average_coordinate_inplace(sp, cond, k);
        const Functional cross_k = d_k(abs_dke, k);
        long double prod_m1 = 0.0L, prod_m2 = 0.0L, dke_m2 = 0.0L;
        for (std::uint64_t i = 0; i < f.size(); ++i) {
            const long double wi = w[i];
            pairing[i] += dke[i] * dkf[i];
            cond_sum[i] += cond[i] * dkf[i];
            cubic += wi * std::abs(dke[i]) * dkf[i] * dkf[i];
            cross += wi * std::abs(cross_k[i] * dkf[i]);
            const long double d = dkf[i];
            alt_cubic += wi * std::abs(d) * d * d;
            alt_quartic += wi * d * d * d * d;
            grad_sq += wi * d * d;
            const long double pr = dke[i] * dkf[i];
            prod_m1 += wi * pr;
            prod_m2 += wi * pr * pr;
            dke_m2 += wi * dke[i] * dke[i];
        }
        // E[dke] = E[D_k F] = 0, so Var(dke) is its second moment.
        brem_var += (prod_m2 - prod_m1 * prod_m1) + dke_m2 * dke_m2;
    }
    long double disc = 0.0L, cond_abs = 0.0L;
    for (std::uint64_t i = 0; i < f.size(); ++i) {
        disc += static_cast<long double>(w[i]) * std::abs(1.0 - pairing[i]);
        cond_abs += static_cast<long double>(w[i]) * std::abs(cond_sum[i]);
    }
    const double brem = std::sqrt(std::max(0.0, static_cast<double>(brem_var))) *
                        std::sqrt(std::max(0.0, static_cast<double>(grad_sq)));
    BoundReport wass = detail::finish_report(
        "co_wasserstein", f,
        {{"discrepancy", sqrt_2_over_pi * static_cast<double>(disc)},
         {"cubic_remainder", static_cast<double>(cubic)},
         {"alt:cubic_sum", static_cast<double>(alt_cubic)},
         {"alt:quartic_root", std::sqrt(std::max(0.0, static_cast<double>(alt_quartic)))},
         {"alt:variance_product", brem}});
    BoundReport kol = detail::finish_report(
        "co_kolmogorov", f,
        {{"discrepancy", static_cast<double>(disc)},
         {"derivative_cross", 2.0 * static_cast<double>(cross)},
         {"conditional_sum", 2.0 * static_cast<double>(cond_abs)}});
    return {std::move(wass), std::move(kol)};
}

// Wasserstein:  sqrt(2/pi) E|1 - Gamma_0(F, -L^-1 F)|
//                 + 1/2 sum_k E[|g^(k) - g| (f^(k) - f)^2]
// Kolmogorov:   E|1 - Gamma_0(F, -L^-1 F)|
//                 + E|E[sum_k |g^(k) - g| (f^(k) - f) | F]|
// with g a representative of L^-1 F and ^(k) the resampling of coordinate k.
// Conditioning on F partitions the grid by merged law atoms.  The Wasserstein
// report also carries the coupling-free informational estimate
// (-E[F L^-1 F])^(1/2) (3 E[F^2 Gamma_0(F,F)] + E[F^3 L F])^(1/2).
inline std::pair<BoundReport, BoundReport> cdc_bounds(const Functional& f) {
    detail::require_centered(f);
    const auto& sp = *f.space();
    const auto& w = sp.weights();
    const Functional linv = ou_pseudo_inverse(f);
    const Functional gamma = gamma0(f, -linv);
    long double disc = 0.0L;
    for (std::uint64_t i = 0; i < f.size(); ++i)
        disc += static_cast<long double>(w[i]) * std::abs(1.0 - gamma[i]);

    long double cubic = 0.0L;
    std::vector<double> resample_avg(f.size());
    for (std::uint64_t i = 0; i < f.size(); ++i) {
        long double hi = 0.0L, ci = 0.0L;
        for (int k = 0; k < sp.coord_count(); ++k) {
            const auto& dist = sp.coord(k);
            const std::uint64_t stride = sp.stride(k);
            const std::uint64_t base = i - sp.digit(i, k) * stride;
            for (std::uint64_t x = 0; x < dist.size(); ++x) {
                const std::uint64_t j = base + x * stride;
                const long double dg = std::abs(linv[j] - linv[i]);
                const long double df = f[j] - f[i];
                hi += dist.prob(x) * dg * df;
                ci += dist.prob(x) * dg * df * df;
            }
        }
        resample_avg[i] = static_cast<double>(hi);
        cubic += static_cast<long double>(w[i]) * ci;
    }

    const double merge_tol = default_merge_tol(f);
    const ValueGroups groups = group_by_value(f, merge_tol);
    std::vector<long double> group_mean(groups.atoms.size(), 0.0L);
    for (std::uint64_t i = 0; i < f.size(); ++i)
        group_mean[groups.group_of[i]] += static_cast<long double>(w[i]) * resample_avg[i];
    long double cond_on_f = 0.0L;
    for (long double s : group_mean) cond_on_f += std::abs(static_cast<double>(s));

    const Functional gamma_ff = gamma0(f, f);
    const Functional lf = ou_generator(f);
    long double e_fl = 0.0L, e_f2g = 0.0L, e_f3l = 0.0L;
    for (std::uint64_t i = 0; i < f.size(); ++i) {
        const long double wi = w[i];
        e_fl -= wi * f[i] * linv[i];
        e_f2g += wi * f[i] * f[i] * gamma_ff[i];
        e_f3l += wi * f[i] * f[i] * f[i] * lf[i];
    }
    const double variant =
        std::sqrt(std::max(0.0, static_cast<double>(e_fl))) *
        std::sqrt(std::max(0.0, static_cast<double>(3.0L * e_f2g + e_f3l)));

    BoundReport wass = detail::finish_report(
        "cdc_wasserstein", f,
        {{"discrepancy", sqrt_2_over_pi * static_cast<double>(disc)},
         {"resample_cubic", 0.5 * static_cast<double>(cubic)},
         {"alt:fourth_moment_form", variant}},
        {{"law_merge_tol", merge_tol}});
    BoundReport kol = detail::finish_report(
        "cdc_kolmogorov", f,
        {{"discrepancy", static_cast<double>(disc)},
         {"conditional_on_f", static_cast<double>(cond_on_f)}},
        {{"law_merge_tol", merge_tol}});
    return {std::move(wass), std::move(kol)};
}

// Success probabilities of a +-1 two-point product space, P(X_k = +1) = p[k];
// plus_digit[k] records which digit of coordinate k carries the value +1.
struct RademacherSpace {
    std::vector<double> p;
    std::vector<int> plus_digit;
};

inline RademacherSpace rademacher_profile(const ProductSpace& sp) {
    RademacherSpace r;
    for (int k = 0; k < sp.coord_count(); ++k) {
        const auto& d = sp.coord(k);
        if (d.size() != 2 ||
            std::min(d.value(0), d.value(1)) != -1.0 ||
            std::max(d.value(0), d.value(1)) != 1.0)
            fail("NotTwoPoint",
                 "coordinate " + std::to_string(k) + " is not a -1/+1 two-point law");
        const int plus = d.value(0) == 1.0 ? 0 : 1;
        r.plus_digit.push_back(plus);
        r.p.push_back(d.prob(plus));
    }
    return r;
}

struct RademacherBounds {
    BoundReport ms_wasserstein;
    BoundReport ms_kolmogorov;
    BoundReport co_wasserstein;
    BoundReport co_kolmogorov;
};

// Specializations built from Dhat_k F = sqrt(p_k q_k) (F|_{X_k=+1} - F|_{X_k=-1})
// and Y_k = (X_k + q_k - p_k) / (2 sqrt(p_k q_k)), with D_k F = Y_k Dhat_k F.
// The Clark-Ocone pair conditions Dhat_k F on the strict prefix of coordinates
// 0..k-1 (Dhat_k F does not depend on X_k itself).
inline RademacherBounds rademacher_bounds(const Functional& f) {
    detail::require_centered(f);
    const auto& sp = *f.space();
    const auto& w = sp.weights();
    const RademacherSpace rs = rademacher_profile(sp);
    const Functional minus_linv = -ou_pseudo_inverse(f);

    std::vector<double> pair_ms(f.size(), 0.0), pair_co(f.size(), 0.0);
    std::vector<double> last_ms(f.size(), 0.0), last_co(f.size(), 0.0);
    long double cubic_ms = 0.0L, cubic_co = 0.0L, mid_ms = 0.0L, mid_co = 0.0L;
    for (int k = 0; k < sp.coord_count(); ++k) {
        const double p = rs.p[k], q = 1.0 - p;
        const double root_pq = std::sqrt(p * q);
        const double cubic_coef = (1.0 - 2.0 * p * q) / root_pq;
        const std::uint64_t stride = sp.stride(k);
        const std::uint64_t plus_off = static_cast<std::uint64_t>(rs.plus_digit[k]) * stride;
        const std::uint64_t minus_off = stride - plus_off;
        std::vector<double> dhat_f(f.size()), dhat_m(f.size());
        for (std::uint64_t i = 0; i < f.size(); ++i) {
            const std::uint64_t base = i - sp.digit(i, k) * stride;
            dhat_f[i] = root_pq * (f[base + plus_off] - f[base + minus_off]);
            dhat_m[i] = root_pq * (minus_linv[base + plus_off] - minus_linv[base + minus_off]);
        }
        const std::uint64_t prefix_mask = (std::uint64_t(1) << k) - 1;
        const Functional cond =
            conditional_expectation(Functional(f.space(), dhat_f), prefix_mask);
        for (std::uint64_t i = 0; i < f.size(); ++i) {
            const double y = (sp.coordinate_value(i, k) + q - p) / (2.0 * root_pq);
            pair_ms[i] += dhat_m[i] * dhat_f[i] * y * y;
            pair_co[i] += cond[i] * dhat_f[i] * y * y;
            last_ms[i] += root_pq * std::abs(dhat_m[i]) * dhat_f[i] * y;
            last_co[i] += root_pq * std::abs(cond[i]) * dhat_f[i] * y;
            const long double wi = w[i];
            cubic_ms += wi * cubic_coef * std::abs(dhat_m[i]) * dhat_f[i] * dhat_f[i];
            cubic_co += wi * cubic_coef * std::abs(cond[i]) * dhat_f[i] * dhat_f[i];
            mid_ms += wi * std::abs(p - q) * std::abs(dhat_m[i] * dhat_f[i]);
            mid_co += wi * std::abs(p - q) * std::abs(cond[i] * dhat_f[i]);
        }
    }
    long double disc_ms = 0.0L, disc_co = 0.0L, tail_ms = 0.0L, tail_co = 0.0L;
    for (std::uint64_t i = 0; i < f.size(); ++i) {
        const long double wi = w[i];
        disc_ms += wi * std::abs(1.0 - pair_ms[i]);
        disc_co += wi * std::abs(1.0 - pair_co[i]);
        tail_ms += wi * std::abs(last_ms[i]);
        tail_co += wi * std::abs(last_co[i]);
    }
    RademacherBounds out{
        detail::finish_report(
            "rademacher_ms_wasserstein", f,
            {{"discrepancy", sqrt_2_over_pi * static_cast<double>(disc_ms)},
             {"cubic_remainder", static_cast<double>(cubic_ms)}}),
        detail::finish_report(
            "rademacher_ms_kolmogorov", f,
            {{"discrepancy", static_cast<double>(disc_ms)},
             {"imbalance_cross", 2.0 * static_cast<double>(mid_ms)},
             {"tail_sum", 4.0 * static_cast<double>(tail_ms)}}),
        detail::finish_report(
            "rademacher_co_wasserstein", f,
            {{"discrepancy", sqrt_2_over_pi * static_cast<double>(disc_co)},
             {"cubic_remainder", static_cast<double>(cubic_co)}}),
        detail::finish_report(
            "rademacher_co_kolmogorov", f,
            {{"discrepancy", static_cast<double>(disc_co)},
             {"imbalance_cross", 2.0 * static_cast<double>(mid_co)},
             {"tail_sum", 4.0 * static_cast<double>(tail_co)}})};
    return out;
}

// Wasserstein:  (sqrt(2/pi) + 4/3) |E F^4 - 3|^(1/2)
//                 + kappa_p^(1/2) (sqrt(2/pi) + 2 sqrt(2)/sqrt(3)) rho(F)
// Kolmogorov:   11.9 |E F^4 - 3|^(1/2) + (3.5 + 10.8 kappa_p^(1/2)) rho(F)
// for F in the p-th chaos with E[F^2] = 1, rho(F)^2 the maximal influence.
// kappa_p has no closed form and must be supplied by the caller.
inline std::pair<BoundReport, BoundReport> dejong_bounds(const Functional& f, int p,
                                                         double kappa_p) {
    if (!(kappa_p > 0.0)) fail("BadInput", "kappa_p must be positive");
    if (!is_degenerate_ustat(f, p, 1e-9))
        fail("NotDegenerate", "functional is not concentrated on the requested chaos");
    const double m2 = second_moment(f);
    if (std::abs(m2 - 1.0) > 1e-9)
        fail("NotNormalized", "functional must have unit second moment");
    const auto& w = f.space()->weights();
    long double m4 = 0.0L;
    for (std::uint64_t i = 0; i < f.size(); ++i) {
        const long double v = f[i];
        m4 += static_cast<long double>(w[i]) * v * v * v * v;
    }
    const double fourth = static_cast<double>(m4);
    const double fourth_gap = std::sqrt(std::abs(fourth - 3.0));
    const double rho = std::sqrt(max_influence(f));
    const double root_kappa = std::sqrt(kappa_p);
    std::map<std::string, double> extra{{"fourth_moment", fourth},
                                        {"rho", rho},
                                        {"kappa", kappa_p},
                                        {"chaos_order", static_cast<double>(p)}};
    BoundReport wass = detail::finish_report(
        "dejong_wasserstein", f,
        {{"fourth_moment_gap", (sqrt_2_over_pi + 4.0 / 3.0) * fourth_gap},
         {"influence", root_kappa * (sqrt_2_over_pi + 2.0 * std::sqrt(2.0 / 3.0)) * rho}},
        extra);
    BoundReport kol = detail::finish_report(
        "dejong_kolmogorov", f,
        {{"fourth_moment_gap", 11.9 * fourth_gap},
         {"influence", (3.5 + 10.8 * root_kappa) * rho}},
        extra);
    return {std::move(wass), std::move(kol)};
}

} // namespace malstein
