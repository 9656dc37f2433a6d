#pragma once

// Private valuations over the cake [0,1] and Robertson-Webb query answering.
//
// A DensityValuation is an exact piecewise-constant density. Its m-simple
// approximation rounds every grid prefix v([0, k/m]) up to a multiple of 1/m
// and interpolates linearly inside each cell. Two realisations of that
// approximation exist: SimpleValuation (materialised cell weights) and
// RoundedGrid (computes grid prefixes on demand, so protocols can run on
// grids with millions of cells while touching only O(log m) of them).
//
// Error bounds of the rounding, with e(x) = v'([0,x]) - v([0,x]):
//   grid points:  0 <= e(k/m) < 1/m, so grid intervals are off by < 1/m;
//   any point:    -D/m <= e(x) < (D+1)/m, so any interval is off by < (2D+1)/m.

#include <cstdint>
#include <type_traits>
#include <variant>
#include <vector>

#include "fairdiv/bits.hpp"
#include "fairdiv/errors.hpp"
#include "fairdiv/rational.hpp"

namespace fairdiv {

/// A point of the cake: an exact rational in [0,1].
class CakePoint {
public:
    CakePoint(Rational value);  // NOLINT: implicit by design of the query API
    CakePoint(std::int64_t num, std::int64_t den) : CakePoint(make_rational(num, den)) {}
    /// Integers and GMP expressions convert too, so cut(v, 0, alpha) reads naturally.
    template <typename T>
        requires(std::is_constructible_v<Rational, const T&> && !std::is_same_v<std::decay_t<T>, Rational> &&
                 !std::is_same_v<std::decay_t<T>, CakePoint>)
    CakePoint(const T& value) : CakePoint(Rational(value)) {}  // NOLINT

    const Rational& value() const { return value_; }
    friend bool operator==(const CakePoint&, const CakePoint&) = default;

private:
    Rational value_;
};

inline constexpr std::int64_t kDefaultDensityBound = 4;

class DensityValuation {
public:
    /// Validates every invariant (breakpoints 0 = b_0 < ... < b_s = 1,
    /// nonnegative densities <= density_bound, total mass exactly 1).
    DensityValuation(std::vector<Rational> breakpoints, std::vector<Rational> densities, Rational density_bound);

    static DensityValuation uniform(Rational density_bound = kDefaultDensityBound);

    const std::vector<Rational>& breakpoints() const { return breakpoints_; }
    const std::vector<Rational>& densities() const { return densities_; }
    const Rational& density_bound() const { return density_bound_; }
    std::size_t segments() const { return densities_.size(); }
    Rational min_density() const;
    Rational max_density() const;

    /// v([0, x]).
    Rational prefix(const Rational& x) const;
    /// v([a, b]); throws PreconditionError when a > b.
    Rational eval(const CakePoint& a, const CakePoint& b) const;
    /// Leftmost y >= a with v([a, y]) = alpha.
    CakePoint cut(const CakePoint& a, const Rational& alpha) const;
    /// Leftmost y with v([0, y]) = target.
    Rational point_of_prefix(const Rational& target) const;

    friend bool operator==(const DensityValuation&, const DensityValuation&) = default;

private:
    std::vector<Rational> breakpoints_;
    std::vector<Rational> densities_;
    Rational density_bound_;
    std::vector<Rational> cumulative_;  // cumulative_[s] = v([0, breakpoints_[s]])
};

/// m-simple valuation: cell k = [k/m, (k+1)/m] is worth cell_weights[k]/m,
/// spread uniformly inside the cell.
class SimpleValuation {
public:
    SimpleValuation(std::int64_t m, std::vector<std::int64_t> cell_weights);

    std::int64_t m() const { return m_; }
    const std::vector<std::int64_t>& cell_weights() const { return cell_weights_; }
    /// m * v([0, k/m]), an integer.
    std::int64_t prefix_units(std::int64_t k) const;

    Rational prefix(const Rational& x) const;
    Rational eval(const CakePoint& a, const CakePoint& b) const;
    CakePoint cut(const CakePoint& a, const Rational& alpha) const;

    /// The same measure as a DensityValuation (density of cell k is its weight).
    DensityValuation as_density() const;

    friend bool operator==(const SimpleValuation&, const SimpleValuation&) = default;

private:
    std::int64_t m_;
    std::vector<std::int64_t> cell_weights_;
    std::vector<std::int64_t> prefix_;  // size m+1
};

/// simplify() evaluated lazily: prefix_units(k) = ceil(m * v([0, k/m])).
class RoundedGrid {
public:
    RoundedGrid(DensityValuation v, std::int64_t m);

    std::int64_t m() const { return m_; }
    std::int64_t prefix_units(std::int64_t k) const;
    Rational prefix(const Rational& x) const;
    Rational eval(const CakePoint& a, const CakePoint& b) const;
    CakePoint cut(const CakePoint& a, const Rational& alpha) const;

    const DensityValuation& source() const { return source_; }
    SimpleValuation materialize() const;

private:
    DensityValuation source_;
    std::int64_t m_;
};

/// Rounds grid prefixes up to multiples of 1/m (m >= 2).
SimpleValuation simplify(const DensityValuation& v, std::int64_t m);

/// v'(x) = (1 - eps/2) v(x) + eps/2, for 0 < eps < 1.
DensityValuation make_hungry(const DensityValuation& v, const Rational& eps);

// Free-function spellings of the query operations, overloaded on the
// valuation kind.
inline Rational eval(const DensityValuation& v, const CakePoint& a, const CakePoint& b) { return v.eval(a, b); }
inline Rational eval(const SimpleValuation& v, const CakePoint& a, const CakePoint& b) { return v.eval(a, b); }
inline Rational eval(const RoundedGrid& v, const CakePoint& a, const CakePoint& b) { return v.eval(a, b); }
inline CakePoint cut(const DensityValuation& v, const CakePoint& a, const Rational& alpha) { return v.cut(a, alpha); }
inline CakePoint cut(const SimpleValuation& v, const CakePoint& a, const Rational& alpha) { return v.cut(a, alpha); }
inline CakePoint cut(const RoundedGrid& v, const CakePoint& a, const Rational& alpha) { return v.cut(a, alpha); }

// ---------------------------------------------------------------------------
// Robertson-Webb answers on grid valuations.

/// Eval query: v([0, y]) for a public point y.
struct EvalQuery {
    CakePoint y;
};
/// Cut query: the leftmost y with v([0, y]) = alpha, for public alpha in [0,1].
struct CutQuery {
    Rational alpha;
};
using RwQuery = std::variant<EvalQuery, CutQuery>;

/// Wire format (w = width_for(m)):
///   tag bit 0, k, W_k            eval at a grid point k/m
///   tag bit 1, k, W_k, W_{k+1}   eval strictly inside cell k
///   tag bit 0, k                 cut answer is exactly the grid point k/m
///   tag bit 1, k, W_k, W_{k+1}   cut answer strictly inside cell k
/// where W_j = m * v'([0, j/m]). At most 3w + 1 <= 4w bits.
BitString encode_query_answer(const SimpleValuation& v, const RwQuery& query);
BitString encode_query_answer(const RoundedGrid& v, const RwQuery& query);

/// Recovers the exact answer (a value for Eval, a point for Cut) from the
/// bits alone plus the public query.
Rational decode_query_answer(std::int64_t m, const RwQuery& query, const BitString& bits);

}  // namespace fairdiv
