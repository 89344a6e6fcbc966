#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <boost/math/special_functions/erf.hpp>

#include "product_space.hpp"

namespace malstein {

constexpr double sqrt_2pi = 2.5066282746310005024;
constexpr double inv_sqrt_2pi = 0.3989422804014326779;
constexpr double sqrt_2_over_pi = 0.7978845608028653559;

inline double normal_pdf(double x) { return inv_sqrt_2pi * std::exp(-0.5 * x * x); }

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

// 1 - Phi(x) without the cancellation that the literal subtraction hits once
// Phi(x) rounds to 1 (x above roughly 8).
inline double normal_tail(double x) { return 0.5 * std::erfc(x * 0.7071067811865475244); }

inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) fail("OutOfRange", "quantile argument must lie in (0,1)");
    return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

// (1 - Phi(x)) / phi(x) by the Laplace continued fraction; accurate for x >= 8.
inline double mills_ratio(double x) {
    double cf = 0.0;
    for (int k = 40; k >= 1; --k) cf = k / (x + cf);
    return 1.0 / (x + cf);
}

// Bounded solution of psi'(x) - x psi(x) = 1_{x<=z} - Phi(z):
// psi_z(x) = sqrt(2 pi) e^{x^2/2} Phi(min(x,z)) (1 - Phi(max(x,z))).
// For |x| > 8 the factors overflow/underflow separately, so the exact
// cancellation sqrt(2 pi) e^{x^2/2} phi(x) = 1 is applied through the Mills
// ratio instead of evaluating them.
inline double psi_z(double z, double x) {
    if (std::abs(x) <= 8.0) {
        const double lo = std::min(x, z), hi = std::max(x, z);
        return sqrt_2pi * std::exp(0.5 * x * x) * normal_cdf(lo) * normal_tail(hi);
    }
    if (x > 8.0) {
        if (z < x) return normal_cdf(z) * mills_ratio(x);
        return normal_cdf(x) * mills_ratio(z) * std::exp(0.5 * (x * x - z * z));
    }
    if (z > x) return mills_ratio(-x) * normal_tail(z);
    return normal_tail(x) * mills_ratio(-z) * std::exp(0.5 * (x * x - z * z));
}

inline double psi_z_prime(double z, double x) {
    return x * psi_z(z, x) + (x <= z ? 1.0 : 0.0) - normal_cdf(z);
}

// sup over v of |P(F <= v) - Phi(v)|; the supremum is attained at an atom,
// approached either from the left or at the atom itself.
inline double kolmogorov_distance(const LawOfF& law) {
    double best = 0.0;
    long double cdf = 0.0L;
    for (std::size_t i = 0; i < law.atoms.size(); ++i) {
        const double phi = normal_cdf(law.atoms[i]);
        best = std::max(best, std::abs(static_cast<double>(cdf) - phi));
        cdf += law.probs[i];
        best = std::max(best, std::abs(static_cast<double>(cdf) - phi));
    }
    return best;
}

// Integral of |P(F <= t) - Phi(t)| dt, evaluated in closed form on each
// interval where the law's CDF is constant, splitting at the crossing point
// Phi^{-1}(c).  Antiderivative of Phi(t) - c is t Phi(t) + phi(t) - c t; the
// two tails have the closed forms phi(v) -+ v (1 - Phi(+-v)).
inline double wasserstein_distance(const LawOfF& law) {
    const auto& v = law.atoms;
    const std::size_t count = v.size();
    auto anti = [](double t, double c) { return t * normal_cdf(t) + normal_pdf(t) - c * t; };
    long double total = normal_pdf(v[0]) + v[0] * normal_cdf(v[0]);
    long double cum = 0.0L;
    for (std::size_t i = 0; i + 1 < count; ++i) {
        cum += law.probs[i];
        const double c = static_cast<double>(cum);
        const double a = v[i], b = v[i + 1];
        if (c <= normal_cdf(a)) {
            total += anti(b, c) - anti(a, c);
        } else if (c >= normal_cdf(b)) {
            total += anti(a, c) - anti(b, c);
        } else {
            const double ts = normal_quantile(c);
            total += (anti(a, c) - anti(ts, c)) + (anti(b, c) - anti(ts, c));
        }
    }
    total += normal_pdf(v[count - 1]) - v[count - 1] * normal_tail(v[count - 1]);
    return static_cast<double>(total);
}

// Remainders of the approximate chain rule for psi_z composed with F, with
// F_k = E[F | all coordinates but k]:
//   psi(F) - psi(F_k) = psi'(F_k) D_k F + R_k
//   psi(F_k) - psi(F) = -psi'(F) D_k F + S_k
inline std::pair<Functional, Functional> chain_remainders(const Functional& f, double z, int k) {
    const auto& sp = *f.space();
    sp.check_coord(k);
    std::vector<double> fk(f.table());
    detail::average_coordinate_inplace(sp, fk, k);
    std::vector<double> r(f.size()), s(f.size());
    for (std::uint64_t i = 0; i < f.size(); ++i) {
        const double dkf = f[i] - fk[i];
        const double pf = psi_z(z, f[i]);
        const double pfk = psi_z(z, fk[i]);
        r[i] = pf - pfk - psi_z_prime(z, fk[i]) * dkf;
        s[i] = pfk - pf + psi_z_prime(z, f[i]) * dkf;
    }
    return {Functional(f.space(), std::move(r)), Functional(f.space(), std::move(s))};
}

} // namespace malstein
