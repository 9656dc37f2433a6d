#pragma once

// Moving-knife steps and their simulation by communication.
//
// A step has devices 1..K whose values move with the time t in [alpha, omega].
// Device 1 is the time knife x_1(t) = t; it is implicit and public. Every
// other device j is owned by one party and computed by its dependence
// function from t and the values of the devices announced before it.
//
// Devices are grouped into stages. All devices of one stage are announced in
// the same round, so a dependence function only sees the devices of earlier
// stages: prior[0] = t, prior[1..] = devices of earlier stages in order.

#include <cstdint>
#include <functional>
#include <vector>

#include "fairdiv/allocation.hpp"
#include "fairdiv/comm.hpp"
#include "fairdiv/protocols.hpp"
#include "fairdiv/valuation.hpp"

namespace fairdiv {

enum class DeviceKind { knife, trigger };

using DependenceFn = std::function<Rational(const std::vector<Rational>& prior)>;

struct Device {
    PartyId controller = 0;
    DeviceKind kind = DeviceKind::trigger;
    int stage = 1;  // >= 1, nondecreasing along the device list
    DependenceFn dependence;
    Rational lipschitz = 1;  // |x_j(t) - x_j(s)| <= lipschitz * |t - s|
    Rational magnitude = 1;  // |x_j(t)| <= magnitude; knives stay in [0, 1]
};

struct MovingKnifeStep {
    Rational alpha = 0;
    Rational omega = 1;
    std::vector<Device> devices;  // devices 2..K

    /// K, counting the time knife.
    int size() const { return static_cast<int>(devices.size()) + 1; }
    /// max(1, every device's lipschitz): the cascade's zeta. It must also
    /// bound each dependence function's Lipschitz constant in its arguments
    /// (Euclidean norm).
    Rational zeta() const;
    /// Throws PreconditionError on an ill-formed step.
    void validate() const;
};

/// Exact x_1(t) .. x_K(t), every device fed the exact values before it.
std::vector<Rational> exact_device_values(const MovingKnifeStep& step, const Rational& t);

/// Precision of device j (1-based) when the announced values must all be
/// within eps: eps / (4 zeta r)^(K - j) with r = ceil(sqrt(K + 1)).
Rational cascade_precision(const MovingKnifeStep& step, int device, const Rational& eps);

struct DeviceReading {
    std::vector<Rational> values;  // K values, values[0] = t exactly
    std::int64_t bits = 0;         // bits sent for this reading
};

/// One round per stage: each controller announces its devices at time t,
/// rounded to a dyadic within half the cascade precision of its dependence
/// on the announced values. Every returned value is within eps of the truth.
DeviceReading approx_device_values(const MovingKnifeStep& step, const Rational& t, const Rational& eps,
                                   Channel& channel);

/// Samples time pairs and checks each device's declared lipschitz against
/// exact values. Throws PreconditionError naming the device on a violation.
void verify_lipschitz(const MovingKnifeStep& step, int samples, std::uint64_t seed);

struct EpsilonOutcome {
    int trigger_index = 0;  // 1-based device index
    Rational time;
    std::vector<Rational> approx_values;  // K values
};

/// True when |x_trigger(time)| <= eps and every approx value is within eps
/// of the exact device value, all recomputed exactly.
bool is_epsilon_outcome(const MovingKnifeStep& step, const EpsilonOutcome& outcome, const Rational& eps);

struct SearchTrace {
    std::int64_t rounds = 0;
    std::int64_t midpoints = 0;  // binary-search steps taken
    bool capped = false;         // stopped by the ceil(2 zeta / eps) step cap
};

/// Time binary search for an eps-outcome of the trigger. Device values are
/// read to eps/4, an end or midpoint is accepted once its trigger reading is
/// within eps/2, and the search otherwise keeps an interval whose ends have
/// readings of opposite sign. While stage s of one point is announced, the
/// earlier stages of the points the search may visit next are announced in
/// the same round, so each search step costs one round. With the true
/// Lipschitz constant zeta the search takes at most ceil(log2(2 zeta / eps))
/// steps and ceil(log2(2 zeta / eps)) + stages rounds.
///
/// Throws PreconditionError when neither end reading is within eps/2 and the
/// two readings have the same sign.
EpsilonOutcome find_epsilon_outcome(const MovingKnifeStep& step, int trigger_index, const Rational& eps,
                                    Channel& channel, SearchTrace* trace = nullptr);

// ---------------------------------------------------------------------------
// Austin's two-cut perfect division for two parties, run on the hungry
// valuations v' = (1 - eps/2) v + eps/2.
//
// Phase 1 (eps_1 = eps^2 / (256 D^2)): triggers v'_A([0,t]) - 1/2 and
// v'_B([0,t]) - 1/2 in stage 1, their maximum in stage 2. The caller is the
// party with the larger reading at the outcome time t_1 (A on ties).
//
// Phase 2 (eps_2 = eps / (8 D)): the time is the left knife on
// [0, t_1 + 3 eps_1 / eps]; the caller's knife keeps v'_c between the knives
// at 1/2 (capped at the right end), the other party's trigger is its value
// between the knives minus 1/2. The middle piece goes to a coin-chosen party.

struct AustinTrace {
    PartyId caller = 0;
    MovingKnifeStep phase1;
    MovingKnifeStep phase2;
    Rational eps1;
    Rational eps2;
    EpsilonOutcome outcome1;
    EpsilonOutcome outcome2;
    SearchTrace search1;
    SearchTrace search2;
};

Allocation austin(const DensityValuation& alice, const DensityValuation& bob, const Rational& eps, Channel& channel,
                  PublicCoins& coins, AustinTrace* trace = nullptr);
ProtocolRun austin(const DensityValuation& alice, const DensityValuation& bob, const Rational& eps,
                   std::uint64_t seed, AustinTrace* trace = nullptr);

}  // namespace fairdiv
