#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "bounds.hpp"

namespace malstein {

struct RandomSumSpec {
    DiscreteDistribution law_n;
    DiscreteDistribution law_x;
    int n_max = 0;
    double e_n = 0.0, var_n = 0.0;
    double e_x2 = 0.0, e_abs_x3 = 0.0, e_x4 = 0.0;
};

inline RandomSumSpec make_random_sum_spec(const DiscreteDistribution& law_n,
                                          const DiscreteDistribution& law_x) {
    double top = 0.0;
    for (std::uint64_t i = 0; i < law_n.size(); ++i) {
        const double v = law_n.value(i);
        if (v < 0.0 || v != std::floor(v) || v > 62.0)
            fail("BadDistribution", "sum-length law must sit on small nonnegative integers");
        top = std::max(top, v);
    }
    RandomSumSpec s{law_n, law_x, static_cast<int>(top), law_n.mean(), law_n.variance(),
                    law_x.moment(2), law_x.abs_moment(3), law_x.moment(4)};
    if (!(s.e_n > 0.0)) fail("DegenerateN", "the sum length must have positive mean");
    if (std::abs(law_x.mean()) > 1e-12)
        fail("BadDistribution", "summand law must be centered");
    if (!(s.e_x2 > 0.0)) fail("BadDistribution", "summand law needs positive variance");
    return s;
}

// F = (X_1 + ... + X_N) / sqrt(E[N] E[X^2]) with N at coordinate 0 and the
// summands at coordinates 1..n_max, so every prefix sigma-field from
// coordinate 1 onward already knows N.
inline Functional random_sum_functional(const RandomSumSpec& spec,
                                        std::uint64_t outcome_cap = default_outcome_cap) {
    std::vector<DiscreteDistribution> coords;
    coords.reserve(spec.n_max + 1);
    coords.push_back(spec.law_n);
    for (int j = 0; j < spec.n_max; ++j) coords.push_back(spec.law_x);
    SpacePtr sp = build_space(coords, outcome_cap);
    const double sigma = std::sqrt(spec.e_n * spec.e_x2);
    return Functional::from_values(sp, [&](const std::vector<double>& vals) {
        const int count = static_cast<int>(std::llround(vals[0]));
        double sum = 0.0;
        for (int j = 1; j <= count; ++j) sum += vals[j];
        return sum / sigma;
    });
}

// total = [sqrt(2/pi) (E X^4 / (E X^2)^2 - 1)^(1/2) + E|X|^3 / (E X^2)^(3/2)]
//           / sqrt(E N)
//       + sqrt(Var N) / E N
inline BoundReport rs_bound(const RandomSumSpec& spec) {
    const double root_en = std::sqrt(spec.e_n);
    const double kurtosis_gap = std::sqrt(std::max(0.0, spec.e_x4 / (spec.e_x2 * spec.e_x2) - 1.0));
    BoundReport r;
    r.bound_name = "random_sum_wasserstein";
    r.terms = {{"kurtosis", sqrt_2_over_pi * kurtosis_gap / root_en},
               {"third_moment", spec.e_abs_x3 / std::pow(spec.e_x2, 1.5) / root_en},
               {"size_fluctuation", std::sqrt(spec.var_n) / spec.e_n}};
    long double tot = 0.0L;
    for (const auto& [label, value] : r.terms) tot += value;
    r.total = static_cast<double>(tot);
    r.vacuous = r.total > 1.0;
    r.metadata = {{"e_n", spec.e_n},           {"var_n", spec.var_n}, {"e_x2", spec.e_x2},
                  {"e_abs_x3", spec.e_abs_x3}, {"e_x4", spec.e_x4},  {"n_max", static_cast<double>(spec.n_max)}};
    return r;
}

} // namespace malstein
