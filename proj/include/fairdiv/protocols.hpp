#pragma once

// Fair division protocols. Each protocol has a Channel form (appends rounds
// to a caller-owned transcript) and a convenience form that owns a fresh
// transcript and finishes it.
//
// The density bound D that sizes the grids is public: the largest
// density_bound() among the participants.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fairdiv/allocation.hpp"
#include "fairdiv/comm.hpp"
#include "fairdiv/valuation.hpp"

namespace fairdiv {

struct ProtocolRun {
    Allocation allocation;
    Transcript transcript;
};

/// Largest density bound among the valuations.
Rational public_density_bound(const std::vector<DensityValuation>& valuations);

// ---------------------------------------------------------------------------
// Simultaneous proportional. Grid m = next_pow2(ceil(max(2n, D) / eps)).
// Party i sends, in one round, the n-1 smallest grid indices k with
// v_i([0, k/m]) >= j/n; pieces are then handed out left to right, each to
// the unserved party whose next mark is smallest (lowest index on ties).

std::int64_t proportional_grid(int n, const Rational& density_bound, const Rational& eps);
Allocation proportional_simultaneous(const std::vector<DensityValuation>& valuations, const Rational& eps,
                                     Channel& channel);
ProtocolRun proportional_simultaneous(const std::vector<DensityValuation>& valuations, const Rational& eps);

// ---------------------------------------------------------------------------
// Two-party equitable. Both parties round to m-simple valuations with
// m = next_pow2(ceil((2D + 2) / eps)); Alice's x_i = W^A_i and Bob's
// y_i = m - W^B_i form a monotone crossing instance. After it is solved both
// send W_{i-1}, W_i and the cut is the exact root of v'_A([0,x]) +
// v'_B([0,x]) = 1 inside cell i. Alice (party 0) gets [0, x*].

std::int64_t equitable_grid(const Rational& density_bound, const Rational& eps);
Allocation equitable_two(const DensityValuation& alice, const DensityValuation& bob, const Rational& eps,
                         Channel& channel);
ProtocolRun equitable_two(const DensityValuation& alice, const DensityValuation& bob, const Rational& eps);

// ---------------------------------------------------------------------------
// Two-party perfect. Grid m = next_pow2(ceil(5D / eps)). For party p let
// f_p(i) be the smallest grid index j >= i with v_p([i/m, j/m]) >= 1/2
// (m if none) and k_p = f_p(0). Round 1 exchanges k_A and k_B; the party
// with the smaller k (party 0 on ties) leads and k is its value. The crossing
// instance on indices 0..k is x_i = f_lead(i) with x_k = m, y_i = f_other(i).
// A final round sends x_i and y_i at the answer index i; the cuts are i/m and
// min(x_i, y_i)/m and the middle piece goes to a coin-chosen party.

struct PerfectOptions {
    bool randomized = false;  // solve the crossing with public-coin comparisons
    std::uint64_t seed = 0;   // public coins (role of the middle piece, fingerprints)
};

std::int64_t perfect_grid(const Rational& density_bound, const Rational& eps);
Allocation perfect_two(const DensityValuation& alice, const DensityValuation& bob, const Rational& eps,
                       Channel& channel, const PerfectOptions& options = {});
ProtocolRun perfect_two(const DensityValuation& alice, const DensityValuation& bob, const Rational& eps,
                        const PerfectOptions& options = {});

// ---------------------------------------------------------------------------
// Three-party connected envy-free. Grid m = next_pow2(ceil(10D / eps)).
//   1. marks: each party sends its 1/3, 1/2 and 2/3 grid marks; roles
//      A, B, C sort the parties by 1/3 mark (party index on ties);
//   2. early exit: each party sends a 3-bit mask of the pieces of A's thirds
//      within eps/2 of its favourite; stop if the masks admit an assignment;
//   3. otherwise B and C share a favourite, the middle (case 1) or the right
//      piece (case 2), and A and B solve one monotone crossing instance;
//   4. A and B send their sequence values around the answer;
//   5. each party sends a mask over a constant-size list of candidate cut
//      pairs near the crossing; the first candidate admitting an
//      eps-envy-free assignment is returned.

struct EnvyFreeTrace {
    bool early_exit = false;
    int branch = 0;  // 0 early exit, 1 middle piece, 2 right piece
    std::int64_t crossing_rounds = 0;
    int candidate = -1;  // position of the chosen cut pair in the candidate list
};

std::int64_t envy_free_grid(const Rational& density_bound, const Rational& eps);
Allocation envy_free_three(const std::vector<DensityValuation>& valuations, const Rational& eps, Channel& channel,
                           EnvyFreeTrace* trace = nullptr);
ProtocolRun envy_free_three(const std::vector<DensityValuation>& valuations, const Rational& eps,
                            EnvyFreeTrace* trace = nullptr);

// ---------------------------------------------------------------------------
// Randomised perfect division with no communication: ceil(D^2 n^2 / eps^2)
// equal cells, each owned by a uniformly random party drawn from the public
// coins; adjacent cells with the same owner are merged.

std::int64_t noncomm_cells(int n, const Rational& density_bound, const Rational& eps);
/// Declared cut bound C(eps) = cells - 1.
std::int64_t noncomm_cut_bound(int n, const Rational& density_bound, const Rational& eps);
Allocation perfect_random_noncomm(const std::vector<DensityValuation>& valuations, const Rational& eps,
                                  PublicCoins& coins);

// ---------------------------------------------------------------------------
// Robertson-Webb programs and their simulation on m-simple valuations.

/// Query access handed to a program. Eval(i, y) = v_i([0, y]); Cut(i, alpha)
/// is the leftmost y with v_i([0, y]) = alpha.
class RwOracle {
public:
    virtual ~RwOracle() = default;
    virtual Rational eval(PartyId party, const CakePoint& y) = 0;
    virtual Rational cut(PartyId party, const Rational& alpha) = 0;
};

struct RwProgram {
    std::string name;
    int parties = 2;
    std::int64_t query_bound = 0;  // r
    std::int64_t cut_bound = 0;    // C
    std::function<Allocation(RwOracle&)> run;
};

/// Alice cuts at her half mark, Bob takes the piece he prefers. r = 2, C = 1.
RwProgram cut_and_choose();
/// Recursive halving proportional division for n parties, 3n queries per
/// level: r = EP(n) = 3n + EP(floor(n/2)) + EP(ceil(n/2)), C = n - 1.
RwProgram even_paz(int n);
std::int64_t even_paz_queries(int n);
/// Cut-and-choose, except that Alice takes the whole cake when her half mark
/// has a denominator above `denominator_limit` (the rational stand-in for an
/// irrational mark). r = 2, C = 1.
RwProgram irrational_guard(const Integer& denominator_limit);

/// m = next_pow2(ceil((2D + 1)(C + 1) / eps)).
std::int64_t rw_grid(const Rational& density_bound, std::int64_t cut_bound, const Rational& eps);

/// Runs the program with every query answered by one encode_query_answer
/// message of the queried party (one round per query). Throws ProtocolError
/// when the program issues more than query_bound queries.
Allocation run_rw_simulated(const RwProgram& program, const std::vector<DensityValuation>& valuations,
                            const Rational& eps, Channel& channel);
ProtocolRun run_rw_simulated(const RwProgram& program, const std::vector<DensityValuation>& valuations,
                             const Rational& eps);
/// Runs the program against the exact valuations, without communication.
Allocation run_rw_exact(const RwProgram& program, const std::vector<DensityValuation>& valuations);

}  // namespace fairdiv
