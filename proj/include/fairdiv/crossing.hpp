#pragma once

// The crossing search problem: Alice holds x_0..x_m, Bob holds y_0..y_m, and
// they look for an index i where the two sequences cross, i.e.
//   x_{i-1} <= y_{i-1} and x_i >= y_i   (x below, then above), or
//   x_{i-1} >= y_{i-1} and x_i <= y_i   (x above, then below).
//
// Every solver has two spellings: one over a materialised instance, which
// validates it and returns a finished transcript, and one over lazily
// evaluated sequences that talks on a caller-owned Channel. Protocols use the
// lazy form so that only the O(log m) probed entries are ever computed.

#include <cstdint>
#include <functional>
#include <vector>

#include "fairdiv/comm.hpp"
#include "fairdiv/rational.hpp"

namespace fairdiv {

enum class Orientation { XBelowThenAbove, XAboveThenBelow };

struct CrossingAnswer {
    std::int64_t index = 0;
    Orientation orientation = Orientation::XBelowThenAbove;
};

/// General instance: entries in [0, m], x_0 <= y_0 and x_m >= y_m.
struct CrossingInstance {
    std::int64_t m = 0;
    std::vector<std::int64_t> x;
    std::vector<std::int64_t> y;

    /// Throws MalformedInstanceError on any violated invariant.
    void validate() const;
};

/// Monotone instance: x weakly increasing from 0 to k, y weakly decreasing
/// from k to 0.
struct MonCrossingInstance {
    std::int64_t m = 0;
    std::int64_t k = 0;
    std::vector<std::int64_t> x;
    std::vector<std::int64_t> y;

    void validate() const;
};

struct CrossingResult {
    CrossingAnswer answer;
    Transcript transcript;
};

using SequenceFn = std::function<std::int64_t(std::int64_t)>;

/// Lazily evaluated pair of sequences over indices 0..m with entries in
/// [0, value_max]; alice reads x, bob reads y.
struct CrossingView {
    std::int64_t m = 0;
    std::int64_t value_max = 0;
    SequenceFn x;
    SequenceFn y;
    PartyId alice = 0;
    PartyId bob = 1;
};

// ---------------------------------------------------------------------------
// Deterministic binary search. Round 1 exchanges both endpoints (so a
// malformed instance is caught by both parties); every further round each
// party sends one w-bit value at the midpoint. The answer is always of the
// x-below-then-above kind. Rounds <= ceil(log2 m) + 1 and total bits
// <= 4 w (ceil(log2 m) + 1) with w = width_for(value_max).

CrossingResult solve_crossing_det(const CrossingInstance& instance);
CrossingAnswer solve_crossing_det(const CrossingView& view, Channel& channel);

// ---------------------------------------------------------------------------
// Randomised comparison of Alice's a and Bob's b, both k_bits wide.
// Binary search for the longest common prefix with public-coin GF(2) inner
// product fingerprints, F = ceil(log2(1/delta)) + ceil(log2(probes)) bits per
// probe, then one bit from Alice at the first difference. Errs only by
// declaring unequal prefixes equal, with probability <= delta overall.

enum class Ordering { Less, Equal, Greater };

Ordering compare_randomized(std::uint64_t a, std::uint64_t b, int k_bits, const Rational& delta, Channel& channel,
                            PublicCoins& coins, PartyId alice = 0, PartyId bob = 1);

/// Per-comparison failure budget used by solve_crossing_rand:
/// 1 / max(L^2, 3L) with L = ceil(log2 m), so the union bound stays below 1/3.
Rational crossing_rand_delta(std::int64_t m);

/// Binary search driven by randomised comparisons; no endpoint round.
CrossingResult solve_crossing_rand(const CrossingInstance& instance, PublicCoins& coins);
CrossingAnswer solve_crossing_rand(const CrossingView& view, Channel& channel, PublicCoins& coins);

// ---------------------------------------------------------------------------
// Monotone crossing by the four-case halving recursion. Index range and value
// range are padded to powers of two M >= m and K >= k (x continues at k, y at
// 0 beyond m); each round both parties send one bit. The value window shrinks
// from K down to a single value (log2 K + 1 halvings), so total bits
// <= 2 (log2 M + log2 K + 1).

CrossingResult solve_mon_crossing(const MonCrossingInstance& instance);
/// view.value_max plays the role of k.
CrossingAnswer solve_mon_crossing(const CrossingView& view, Channel& channel);

// ---------------------------------------------------------------------------
// Lift of k monotone instances of size m into one of size k m (the
// "pointer" construction). Block j of X is x^j shifted up by (j-1) m; Y
// carries y in block z, is mk before it and 0 after it.

struct PkLift {
    MonCrossingInstance lifted;
    std::int64_t block_offset = 0;  // (z-1) m
    std::int64_t block_size = 0;    // m

    /// Maps a crossing index of the lifted instance to one of (x^z, y).
    /// Throws ReductionContractError outside block z.
    std::int64_t back_map(std::int64_t lifted_index) const;
};

PkLift lift_pk(const std::vector<std::vector<std::int64_t>>& xs, const std::vector<std::int64_t>& y, std::int64_t z);

}  // namespace fairdiv
