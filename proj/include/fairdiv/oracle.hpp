#pragma once

// Ground truth: exact fairness checkers, the brute-force crossing scan,
// the hard-instance generators that embed crossing problems into cakes, and
// the maps from cuts back to crossing indices.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "fairdiv/allocation.hpp"
#include "fairdiv/crossing.hpp"
#include "fairdiv/valuation.hpp"

namespace fairdiv {

enum class Notion { Proportional, EnvyFree, Equitable, Perfect };

struct FairnessNotion {
    Notion tag = Notion::Proportional;
    Rational eps = 0;
};

struct FairnessReport {
    bool pass = false;
    /// Minimum over every defining inequality of (allowed - observed);
    /// negative exactly when some inequality fails.
    Rational slack = 0;
    /// The (i, j) pair attaining the minimum slack.
    std::pair<int, int> witness{0, 0};
};

/// Exact evaluation of every inequality of the notion:
///   proportional  v_i(A_i) >= 1/n - eps
///   envy-free     v_i(A_i) >= v_i(A_j) - eps
///   equitable     |v_i(A_i) - v_j(A_j)| <= eps
///   perfect       |v_i(A_j) - 1/n| <= eps
/// Throws PreconditionError when the allocation does not tile [0,1].
FairnessReport check_fair(const Allocation& allocation, const std::vector<DensityValuation>& valuations,
                          const FairnessNotion& notion);

/// True when index i (1..m) is a crossing of (x, y) in either orientation,
/// or only in the x-below-then-above one when `below_then_above_only`.
bool is_crossing(const std::vector<std::int64_t>& x, const std::vector<std::int64_t>& y, std::int64_t i,
                 bool below_then_above_only = false);

/// Every valid crossing index, by linear scan.
std::vector<std::int64_t> brute_crossing(const CrossingInstance& instance, bool below_then_above_only = false);
std::vector<std::int64_t> brute_crossing(const MonCrossingInstance& instance);

// ---------------------------------------------------------------------------
// Monotone crossing -> equitable division. Requires k == m. Outer thirds hold
// (1 - 1/m)/2 each; the middle third is split into m cells whose prefix
// masses are x_i / m^2 (Alice) and (m - y_i) / m^2 (Bob). Densities <= 3.

struct CakePair {
    DensityValuation alice;
    DensityValuation bob;
};

CakePair gen_equitable_hard(const MonCrossingInstance& instance);

/// Any cut x* with |v_A([0,x*]) - v_B([x*,1])| < 1/m^2 lies in the middle
/// third; its cell index solves the instance. Throws ReductionContractError
/// when x* is outside the middle third.
std::int64_t recover_equitable_index(const Rational& cut, std::int64_t m);

/// Tolerance under which the equitable round trip is guaranteed.
Rational equitable_hard_eps(std::int64_t m);

// ---------------------------------------------------------------------------
// General crossing -> perfect division. Requires x_0 = 0, x_m = m, y_0 = m,
// y_m = 0 (see pad_for_perfect). Values are shifted to s_i = v_i + H + 2 m i
// with H = 2m^2 + m. Each party has a uniform left zone [0,1/2], a gap
// [1/2, s_0/2H] and tail [s_m/2H, 1] of density 1 and equal mass mu, and
// cells [s_{i-1}/2H, s_i/2H] of mass (1/2 - mu)/m, so that every window
// [i/2m, s_i/2H] is worth exactly 1/2 to its owner.

CakePair gen_perfect_hard(const CrossingInstance& instance);

/// Left end a of a middle piece worth 1/2 +- eps to both parties, with eps
/// below perfect_hard_eps(m), lies in some [(i-1)/2m, i/2m]; returns i.
/// Throws ReductionContractError when a > 1/2.
std::int64_t recover_perfect_index(const Rational& left_cut, std::int64_t m);

/// 1 / (8 H m): the tolerance the perfect round trip runs at.
Rational perfect_hard_eps(std::int64_t m);

/// Embeds an arbitrary crossing instance of size m into one of size m + 2
/// with x running from 0 to m + 2 and y from m + 2 to 0; interior entries are
/// shifted up by one. Index j of the padded instance maps back to
/// clamp(j - 1, 1, m).
CrossingInstance pad_for_perfect(const CrossingInstance& instance);
std::int64_t unpad_perfect_index(std::int64_t padded_index, std::int64_t m);

// ---------------------------------------------------------------------------

/// Seeded random valuation with at most `segments` pieces, density <= D and
/// mass exactly 1. segments == 1 yields the uniform valuation.
DensityValuation random_valuation(std::uint64_t seed, int segments, const Rational& density_bound);

/// Seeded random instances (mon: k == m).
CrossingInstance random_crossing_instance(std::uint64_t seed, std::int64_t m);
MonCrossingInstance random_mon_crossing_instance(std::uint64_t seed, std::int64_t m, std::int64_t k);

}  // namespace fairdiv
