#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace malstein {

constexpr std::uint64_t default_outcome_cap = std::uint64_t(1) << 24;
constexpr int max_coordinates = 63;

class DiscreteDistribution {
public:
    DiscreteDistribution(std::vector<double> values, std::vector<double> probs)
        : values_(std::move(values)), probs_(std::move(probs)) {
        if (values_.empty())
            fail("EmptySupport", "distribution needs at least one support point");
        if (values_.size() != probs_.size())
            fail("BadDistribution", "values and probs have different lengths");
        double total = 0.0;
        for (double p : probs_) {
            if (!std::isfinite(p) || p <= 0.0)
                fail("ProbSumNotOne", "probabilities must be finite and > 0");
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-12)
            fail("ProbSumNotOne", "probabilities sum to " + std::to_string(total));
        for (double v : values_)
            if (!std::isfinite(v))
                fail("BadDistribution", "support points must be finite");
        for (std::size_t i = 0; i < values_.size(); ++i)
            for (std::size_t j = i + 1; j < values_.size(); ++j)
                if (values_[i] == values_[j])
                    fail("BadDistribution", "support points must be pairwise distinct");
    }

    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& probs() const { return probs_; }
    double value(std::size_t i) const { return values_[i]; }
    double prob(std::size_t i) const { return probs_[i]; }

    double moment(int p) const {
        long double acc = 0.0L;
        for (std::size_t i = 0; i < values_.size(); ++i)
            acc += static_cast<long double>(probs_[i]) * std::pow(static_cast<long double>(values_[i]), p);
        return static_cast<double>(acc);
    }

    double abs_moment(int p) const {
        long double acc = 0.0L;
        for (std::size_t i = 0; i < values_.size(); ++i)
            acc += static_cast<long double>(probs_[i]) * std::pow(std::abs(static_cast<long double>(values_[i])), p);
        return static_cast<double>(acc);
    }

    double mean() const { return moment(1); }

    double variance() const {
        const double m = mean();
        long double acc = 0.0L;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            const long double d = values_[i] - m;
            acc += static_cast<long double>(probs_[i]) * d * d;
        }
        return static_cast<double>(acc);
    }

private:
    std::vector<double> values_;
    std::vector<double> probs_;
};

inline DiscreteDistribution fair_coin() { return DiscreteDistribution({-1.0, 1.0}, {0.5, 0.5}); }

inline DiscreteDistribution rademacher(double p) {
    if (!(p > 0.0 && p < 1.0))
        fail("BadDistribution", "success probability must lie in (0,1)");
    return DiscreteDistribution({-1.0, 1.0}, {1.0 - p, p});
}

inline DiscreteDistribution uniform_colors(int c) {
    if (c < 2) fail("BadColors", "need at least 2 colors");
    std::vector<double> vals(c), probs(c, 1.0 / c);
    for (int i = 0; i < c; ++i) vals[i] = i + 1;
    return DiscreteDistribution(std::move(vals), std::move(probs));
}

struct Outcome {
    std::vector<std::uint32_t> digits;
    std::uint64_t linear_index = 0;
};

// An ordered list of independent discrete coordinates.  Outcomes are tuples of
// support indices, laid out in mixed radix with coordinate 0 varying fastest.
// Coordinate subsets are 64-bit masks, hence the hard cap of 63 coordinates.
class ProductSpace {
public:
    explicit ProductSpace(std::vector<DiscreteDistribution> coords,
                          std::uint64_t outcome_cap = default_outcome_cap)
        : coords_(std::move(coords)) {
        if (coords_.empty())
            fail("EmptySupport", "a product space needs at least one coordinate");
        if (static_cast<int>(coords_.size()) > max_coordinates)
            fail("SpaceTooLarge", "at most 63 coordinates are representable as subset masks");
        strides_.resize(coords_.size());
        std::uint64_t total = 1;
        for (std::size_t k = 0; k < coords_.size(); ++k) {
            strides_[k] = total;
            const std::uint64_t sz = coords_[k].size();
            if (total > outcome_cap / sz)
                fail("SpaceTooLarge", "outcome grid exceeds the cap of " + std::to_string(outcome_cap));
            total *= sz;
        }
        total_ = total;
        weights_.resize(total_);
        weights_[0] = 1.0;
        std::uint64_t filled = 1;
        for (std::size_t k = 0; k < coords_.size(); ++k) {
            const auto& probs = coords_[k].probs();
            for (std::size_t x = 1; x < probs.size(); ++x)
                for (std::uint64_t i = 0; i < filled; ++i)
                    weights_[x * filled + i] = weights_[i] * probs[x];
            for (std::uint64_t i = 0; i < filled; ++i)
                weights_[i] *= probs[0];
            filled *= probs.size();
        }
    }

    int coord_count() const { return static_cast<int>(coords_.size()); }
    std::uint64_t size() const { return total_; }
    const std::vector<DiscreteDistribution>& coords() const { return coords_; }
    const DiscreteDistribution& coord(int k) const { return coords_[check_coord(k)]; }
    std::uint64_t stride(int k) const { return strides_[check_coord(k)]; }
    std::uint64_t full_mask() const { return (std::uint64_t(1) << coords_.size()) - 1; }

    std::uint32_t digit(std::uint64_t index, int k) const {
        return static_cast<std::uint32_t>((index / strides_[k]) % coords_[k].size());
    }

    double coordinate_value(std::uint64_t index, int k) const {
        return coords_[k].value(digit(index, k));
    }

    double weight(std::uint64_t index) const { return weights_[index]; }
    const std::vector<double>& weights() const { return weights_; }

    Outcome outcome(std::uint64_t index) const {
        Outcome o;
        o.linear_index = index;
        o.digits.resize(coords_.size());
        for (std::size_t k = 0; k < coords_.size(); ++k)
            o.digits[k] = digit(index, static_cast<int>(k));
        return o;
    }

    std::uint64_t index_of(const std::vector<std::uint32_t>& digits) const {
        if (digits.size() != coords_.size())
            fail("BadInput", "digit tuple length does not match coordinate count");
        std::uint64_t idx = 0;
        for (std::size_t k = 0; k < coords_.size(); ++k) {
            if (digits[k] >= coords_[k].size())
                fail("BadInput", "digit out of range for coordinate " + std::to_string(k));
            idx += digits[k] * strides_[k];
        }
        return idx;
    }

    int check_coord(int k) const {
        if (k < 0 || k >= coord_count())
            fail("CoordinateOutOfRange", "coordinate " + std::to_string(k) + " out of range");
        return k;
    }

    std::uint64_t check_subset(std::uint64_t mask) const {
        if (mask & ~full_mask())
            fail("SubsetOutOfRange", "subset mask names coordinates beyond the space");
        return mask;
    }

private:
    std::vector<DiscreteDistribution> coords_;
    std::vector<std::uint64_t> strides_;
    std::uint64_t total_ = 0;
    std::vector<double> weights_;
};

using SpacePtr = std::shared_ptr<const ProductSpace>;

inline SpacePtr build_space(std::vector<DiscreteDistribution> dists,
                            std::uint64_t outcome_cap = default_outcome_cap) {
    return std::make_shared<const ProductSpace>(std::move(dists), outcome_cap);
}

// Dense table of real values over the outcome grid; the table is the
// representative f of F = f(X) evaluated at every outcome.
class Functional {
public:
    Functional(SpacePtr space, std::vector<double> table)
        : space_(std::move(space)), table_(std::move(table)) {
        if (!space_) fail("BadInput", "functional needs a space");
        if (table_.size() != space_->size())
            fail("BadInput", "table length does not match the outcome count");
        for (double v : table_)
            if (!std::isfinite(v)) fail("BadInput", "table entries must be finite");
    }

    static Functional constant(SpacePtr space, double c) {
        std::vector<double> t(space->size(), c);
        return Functional(std::move(space), std::move(t));
    }

    static Functional coordinate(SpacePtr space, int k) {
        space->check_coord(k);
        std::vector<double> t(space->size());
        for (std::uint64_t i = 0; i < t.size(); ++i)
            t[i] = space->coordinate_value(i, k);
        return Functional(std::move(space), std::move(t));
    }

    // fn receives the tuple of coordinate values of each outcome.
    template <class Fn>
    static Functional from_values(SpacePtr space, Fn&& fn) {
        const int n = space->coord_count();
        std::vector<double> xs(n);
        std::vector<std::uint32_t> digits(n, 0);
        for (int k = 0; k < n; ++k) xs[k] = space->coord(k).value(0);
        std::vector<double> t(space->size());
        for (std::uint64_t i = 0; i < t.size(); ++i) {
            t[i] = fn(static_cast<const std::vector<double>&>(xs));
            for (int k = 0; k < n; ++k) {
                if (++digits[k] < space->coord(k).size()) {
                    xs[k] = space->coord(k).value(digits[k]);
                    break;
                }
                digits[k] = 0;
                xs[k] = space->coord(k).value(0);
            }
        }
        return Functional(std::move(space), std::move(t));
    }

    const SpacePtr& space() const { return space_; }
    const std::vector<double>& table() const { return table_; }
    std::vector<double>& table() { return table_; }
    double operator[](std::uint64_t i) const { return table_[i]; }
    std::uint64_t size() const { return table_.size(); }

    double max_abs() const {
        double m = 0.0;
        for (double v : table_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    SpacePtr space_;
    std::vector<double> table_;
};

inline void require_same_space(const Functional& a, const Functional& b) {
    if (a.space() != b.space())
        fail("SpaceMismatch", "functionals live on different spaces");
}

inline Functional operator+(const Functional& a, const Functional& b) {
    require_same_space(a, b);
    std::vector<double> t(a.table());
    for (std::uint64_t i = 0; i < t.size(); ++i) t[i] += b[i];
    return Functional(a.space(), std::move(t));
}

inline Functional operator-(const Functional& a, const Functional& b) {
    require_same_space(a, b);
    std::vector<double> t(a.table());
    for (std::uint64_t i = 0; i < t.size(); ++i) t[i] -= b[i];
    return Functional(a.space(), std::move(t));
}

inline Functional operator*(const Functional& a, const Functional& b) {
    require_same_space(a, b);
    std::vector<double> t(a.table());
    for (std::uint64_t i = 0; i < t.size(); ++i) t[i] *= b[i];
    return Functional(a.space(), std::move(t));
}

inline Functional operator*(double c, const Functional& a) {
    std::vector<double> t(a.table());
    for (double& v : t) v *= c;
    return Functional(a.space(), std::move(t));
}

inline Functional operator*(const Functional& a, double c) { return c * a; }

inline Functional operator-(const Functional& a) { return -1.0 * a; }

inline Functional operator+(const Functional& a, double c) {
    std::vector<double> t(a.table());
    for (double& v : t) v += c;
    return Functional(a.space(), std::move(t));
}

inline Functional operator-(const Functional& a, double c) { return a + (-c); }

inline Functional abs(const Functional& a) {
    std::vector<double> t(a.table());
    for (double& v : t) v = std::abs(v);
    return Functional(a.space(), std::move(t));
}

inline double expectation(const Functional& f) {
    const auto& w = f.space()->weights();
    long double acc = 0.0L;
    for (std::uint64_t i = 0; i < f.size(); ++i)
        acc += static_cast<long double>(w[i]) * f[i];
    return static_cast<double>(acc);
}

// E[f * g] without materializing the product table.
inline double inner(const Functional& f, const Functional& g) {
    require_same_space(f, g);
    const auto& w = f.space()->weights();
    long double acc = 0.0L;
    for (std::uint64_t i = 0; i < f.size(); ++i)
        acc += static_cast<long double>(w[i]) * f[i] * g[i];
    return static_cast<double>(acc);
}

inline double second_moment(const Functional& f) { return inner(f, f); }

inline double variance(const Functional& f) {
    const double m = expectation(f);
    const auto& w = f.space()->weights();
    long double acc = 0.0L;
    for (std::uint64_t i = 0; i < f.size(); ++i) {
        const long double d = f[i] - m;
        acc += static_cast<long double>(w[i]) * d * d;
    }
    return static_cast<double>(acc);
}

inline double expectation_abs(const Functional& f) {
    const auto& w = f.space()->weights();
    long double acc = 0.0L;
    for (std::uint64_t i = 0; i < f.size(); ++i)
        acc += static_cast<long double>(w[i]) * std::abs(f[i]);
    return static_cast<double>(acc);
}

namespace detail {

// Replaces the table by its probability-weighted average over coordinate k,
// i.e. applies the conditioning that integrates coordinate k out.  The result
// is constant along k, so the table stays on the full grid.
inline void average_coordinate_inplace(const ProductSpace& sp, std::vector<double>& t, int k) {
    const auto& probs = sp.coord(k).probs();
    const std::uint64_t stride = sp.stride(k);
    const std::uint64_t sz = probs.size();
    const std::uint64_t block = stride * sz;
    for (std::uint64_t base = 0; base < t.size(); base += block) {
        for (std::uint64_t off = 0; off < stride; ++off) {
            long double acc = 0.0L;
            for (std::uint64_t x = 0; x < sz; ++x)
                acc += static_cast<long double>(probs[x]) * t[base + off + x * stride];
            const double avg = static_cast<double>(acc);
            for (std::uint64_t x = 0; x < sz; ++x)
                t[base + off + x * stride] = avg;
        }
    }
}

} // namespace detail

// E[F | sigma(X_k : k in mask)], as a functional on the same grid.
inline Functional conditional_expectation(const Functional& f, std::uint64_t mask) {
    const auto& sp = *f.space();
    sp.check_subset(mask);
    std::vector<double> t(f.table());
    for (int k = 0; k < sp.coord_count(); ++k)
        if (!(mask >> k & 1))
            detail::average_coordinate_inplace(sp, t, k);
    return Functional(f.space(), std::move(t));
}

struct LawOfF {
    std::vector<double> atoms;
    std::vector<double> probs;
};

inline double default_merge_tol(const Functional& f) { return 1e-12 * (1.0 + f.max_abs()); }

// Partition of the outcome grid by (tolerance-merged) value of F.  Outcomes
// whose values differ from the group's smallest value by at most merge_tol
// share a group; atoms[g] is that smallest value.
struct ValueGroups {
    std::vector<double> atoms;
    std::vector<double> probs;
    std::vector<std::uint64_t> group_of;
};

inline ValueGroups group_by_value(const Functional& f, double merge_tol = -1.0) {
    if (merge_tol < 0.0) merge_tol = default_merge_tol(f);
    const auto& w = f.space()->weights();
    std::vector<std::uint64_t> order(f.size());
    for (std::uint64_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&f](std::uint64_t a, std::uint64_t b) { return f[a] < f[b]; });
    ValueGroups g;
    g.group_of.resize(f.size());
    std::vector<long double> mass;
    for (std::uint64_t i : order) {
        if (g.atoms.empty() || f[i] - g.atoms.back() > merge_tol) {
            g.atoms.push_back(f[i]);
            mass.push_back(0.0L);
        }
        mass.back() += w[i];
        g.group_of[i] = g.atoms.size() - 1;
    }
    g.probs.assign(mass.begin(), mass.end());
    return g;
}

inline LawOfF law_of(const Functional& f, double merge_tol = -1.0) {
    ValueGroups g = group_by_value(f, merge_tol);
    return {std::move(g.atoms), std::move(g.probs)};
}

} // namespace malstein
