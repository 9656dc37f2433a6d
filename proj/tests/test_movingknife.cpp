#include <gtest/gtest.h>

#include <memory>

#include "fairdiv/errors.hpp"
#include "fairdiv/movingknife.hpp"
#include "fairdiv/oracle.hpp"
#include "support.hpp"

using namespace fairdiv;
using fairdiv::testing::Gen;

namespace {

Rational q(std::int64_t n, std::int64_t d = 1) { return make_rational(n, d); }

std::int64_t log2_ceil(const Rational& x) {
    std::int64_t k = 0;
    Rational p = 1;
    while (p < x) p *= 2, ++k;
    return k;
}

MovingKnifeStep single_trigger(DependenceFn f, const Rational& lipschitz, const Rational& magnitude = 1) {
    MovingKnifeStep step;
    step.devices.push_back({0, DeviceKind::trigger, 1, std::move(f), lipschitz, magnitude});
    return step;
}

// Three stages on two hungry valuations: a half-window knife, a trigger on
// it and a knife halving the caller's prefix up to the first knife.
MovingKnifeStep chained_step(const DensityValuation& a, const DensityValuation& b, const Rational& e,
                             const Rational& d) {
    auto ha = std::make_shared<const DensityValuation>(make_hungry(a, e));
    auto hb = std::make_shared<const DensityValuation>(make_hungry(b, e));
    MovingKnifeStep step;
    step.devices.push_back({0, DeviceKind::knife, 1, [ha](const std::vector<Rational>& p) -> Rational {
                                return ha->point_of_prefix(std::min(Rational(1), Rational(ha->prefix(p[0]) + q(1, 2))));
                            }, 2 * d / e, 1});
    step.devices.push_back({1, DeviceKind::trigger, 2, [hb](const std::vector<Rational>& p) -> Rational {
                                return hb->prefix(p[1]) - hb->prefix(p[0]) - q(1, 2);
                            }, d + 2 * d * d / e, 1});
    step.devices.push_back({0, DeviceKind::knife, 3, [ha](const std::vector<Rational>& p) -> Rational {
                                return ha->point_of_prefix(ha->prefix(p[1]) / 2);
                            }, 4 * d * d / (e * e) + 1, 1});
    return step;
}

Rational cubic(const Rational& t) { return 10 * (t - q(1, 5)) * (t - q(1, 2)) * (t - q(4, 5)); }

}  // namespace

// ---------------------------------------------------------------------------
// device readings

TEST(DeviceValues, TimeKnifeAloneIsEchoedForFree) {
    MovingKnifeStep step;
    Transcript tr;
    Channel ch(tr);
    auto r = approx_device_values(step, q(3, 7), q(1, 100), ch);
    EXPECT_EQ(r.values, std::vector<Rational>{q(3, 7)});
    EXPECT_EQ(r.bits, 0);
    EXPECT_TRUE(tr.rounds().empty());
}

TEST(DeviceValues, UniformHalfWindowKnifeStartsAtHalf) {
    auto u = DensityValuation::uniform();
    MovingKnifeStep step;
    step.devices.push_back({0, DeviceKind::knife, 1, [u](const std::vector<Rational>& p) -> Rational {
                                return u.point_of_prefix(std::min(Rational(1), Rational(u.prefix(p[0]) + q(1, 2))));
                            }, 1, 1});
    const Rational eps = q(1, 1000);
    for (auto t : {q(0), q(1, 8), q(1, 3)}) {
        Transcript tr;
        Channel ch(tr);
        auto r = approx_device_values(step, t, eps, ch);
        // closed form for the uniform cake: the knife sits at t + 1/2
        EXPECT_LE(abs_of(Rational(r.values[1] - (t + q(1, 2)))), eps) << to_string(t);
        EXPECT_EQ(tr.rounds().size(), 1u);
    }
}

TEST(DeviceValues, CascadeStaysWithinEpsOnRandomSteps) {
    Gen g(41);
    for (int trial = 0; trial < 100; ++trial) {
        auto a = g.valuation(4), b = g.valuation(4);
        const Rational e = q(1, 16);
        auto step = chained_step(a, b, e, 4);
        const Rational t = g.unit(1000);
        const Rational eps = trial % 2 == 0 ? q(1, 256) : q(1, 4096);
        Transcript tr;
        Channel ch(tr);
        auto r = approx_device_values(step, t, eps, ch);
        auto exact = exact_device_values(step, t);
        ASSERT_EQ(r.values.size(), 4u);
        for (std::size_t j = 0; j < 4; ++j)
            EXPECT_LE(abs_of(Rational(r.values[j] - exact[j])), eps) << "trial " << trial << " device " << j + 1;
        EXPECT_EQ(tr.rounds().size(), 3u);
    }
}

TEST(DeviceValues, PrecisionShrinksTowardsTheFirstDevice) {
    auto step = chained_step(DensityValuation::uniform(), DensityValuation::uniform(), q(1, 4), 4);
    const Rational eps = q(1, 100);
    EXPECT_EQ(cascade_precision(step, 4, eps), eps);
    // K = 4, r = ceil(sqrt 5) = 3
    EXPECT_EQ(cascade_precision(step, 3, eps), eps / (12 * step.zeta()));
    EXPECT_LT(cascade_precision(step, 2, eps), cascade_precision(step, 3, eps));
}

TEST(DeviceValues, OutOfRangeTriggerIsRejected) {
    auto step = single_trigger([](const std::vector<Rational>& p) -> Rational { return p[0] + 5; }, 1, 1);
    Transcript tr;
    Channel ch(tr);
    EXPECT_THROW(approx_device_values(step, q(1, 2), q(1, 100), ch), ProtocolError);
    EXPECT_THROW(approx_device_values(step, q(3, 2), q(1, 100), ch), PreconditionError);
}

TEST(Lipschitz, UnderstatedBoundIsReported) {
    auto step = single_trigger([](const std::vector<Rational>& p) -> Rational { return 3 * p[0] - 1; }, 2, 2);
    EXPECT_THROW(verify_lipschitz(step, 8, 1), PreconditionError);
    step.devices[0].lipschitz = 3;
    EXPECT_NO_THROW(verify_lipschitz(step, 8, 1));
}

// ---------------------------------------------------------------------------
// time search

TEST(TimeSearch, LinearTriggerFindsHalf) {
    auto step = single_trigger([](const std::vector<Rational>& p) -> Rational { return p[0] - q(1, 2); }, 1);
    const Rational eps = q(1, 1000);
    Transcript tr;
    Channel ch(tr);
    SearchTrace trace;
    auto out = find_epsilon_outcome(step, 2, eps, ch, &trace);
    EXPECT_EQ(out.time, q(1, 2));  // the first midpoint is exact
    EXPECT_TRUE(is_epsilon_outcome(step, out, eps));
    EXPECT_EQ(trace.midpoints, 1);
    EXPECT_EQ(trace.rounds, static_cast<std::int64_t>(tr.rounds().size()));
}

TEST(TimeSearch, ZeroTriggerReturnsAlpha) {
    auto step = single_trigger([](const std::vector<Rational>&) -> Rational { return 0; }, 1);
    step.alpha = q(1, 4);
    Transcript tr;
    Channel ch(tr);
    SearchTrace trace;
    auto out = find_epsilon_outcome(step, 2, q(1, 100), ch, &trace);
    EXPECT_EQ(out.time, q(1, 4));
    EXPECT_EQ(trace.rounds, 1);
    EXPECT_EQ(trace.midpoints, 0);
}

TEST(TimeSearch, NonMonotoneTriggerLandsNearSomeCrossing) {
    // 10 (t - 1/5)(t - 1/2)(t - 4/5): |derivative| <= 10 * 3 / 2 on [0,1]
    auto step = single_trigger([](const std::vector<Rational>& p) -> Rational { return cubic(p[0]); }, 15, 2);
    for (auto eps : {q(1, 64), q(1, 1024), q(1, 65536)}) {
        Transcript tr;
        Channel ch(tr);
        SearchTrace trace;
        auto out = find_epsilon_outcome(step, 2, eps, ch, &trace);
        EXPECT_LE(abs_of(cubic(out.time)), eps) << to_string(eps);
        EXPECT_TRUE(is_epsilon_outcome(step, out, eps));
        EXPECT_LE(trace.rounds, log2_ceil(2 * step.zeta() / eps) + 2);
        EXPECT_FALSE(trace.capped);
    }
}

TEST(TimeSearch, RandomLinearTriggersMeetRoundBound) {
    Gen g(5);
    for (int trial = 0; trial < 200; ++trial) {
        const Rational root = g.unit(997), slope = q(g.range(1, 40), g.range(1, 8));
        const bool up = g.coin();
        auto step = single_trigger(
            [root, slope, up](const std::vector<Rational>& p) -> Rational {
                Rational v = slope * (p[0] - root);
                return up ? v : Rational(-v);
            },
            slope, slope + 1);
        const Rational eps = q(1, g.range(2, 5000));
        Transcript tr;
        Channel ch(tr);
        SearchTrace trace;
        auto out = find_epsilon_outcome(step, 2, eps, ch, &trace);
        ASSERT_TRUE(is_epsilon_outcome(step, out, eps)) << trial;
        EXPECT_LE(trace.midpoints, log2_ceil(2 * step.zeta() / eps)) << trial;
        EXPECT_LE(trace.rounds, log2_ceil(2 * step.zeta() / eps) + 2) << trial;
    }
}

TEST(TimeSearch, MissingSignChangeIsAPreconditionError) {
    auto step = single_trigger([](const std::vector<Rational>& p) -> Rational { return p[0] + q(1, 2); }, 1, 2);
    Transcript tr;
    Channel ch(tr);
    EXPECT_THROW(find_epsilon_outcome(step, 2, q(1, 100), ch), PreconditionError);
    EXPECT_THROW(find_epsilon_outcome(step, 1, q(1, 100), ch), PreconditionError);
}

TEST(TimeSearch, LaterStagesAreFilledInAtTheAnswer) {
    Gen g(77);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = g.valuation(3), b = g.valuation(3);
        auto step = chained_step(a, b, q(1, 8), 4);
        // the stage-2 trigger only switches signs on some pairs
        auto x0 = exact_device_values(step, 0)[2], x1 = exact_device_values(step, 1)[2];
        if (x0 * x1 > 0) continue;
        const Rational eps = q(1, 512);
        Transcript tr;
        Channel ch(tr);
        auto out = find_epsilon_outcome(step, 3, eps, ch);
        EXPECT_TRUE(is_epsilon_outcome(step, out, eps)) << trial;
    }
}

TEST(TimeSearch, TamperedOutcomeFailsTheExactCheck) {
    auto step = single_trigger([](const std::vector<Rational>& p) -> Rational { return p[0] - q(1, 3); }, 1);
    const Rational eps = q(1, 100);
    Transcript tr;
    Channel ch(tr);
    auto out = find_epsilon_outcome(step, 2, eps, ch);
    ASSERT_TRUE(is_epsilon_outcome(step, out, eps));
    auto bad = out;
    bad.approx_values[1] += 2 * eps;
    EXPECT_FALSE(is_epsilon_outcome(step, bad, eps));
    bad = out;
    bad.time = q(1, 2);
    bad.approx_values = exact_device_values(step, bad.time);
    EXPECT_FALSE(is_epsilon_outcome(step, bad, eps));
}

// ---------------------------------------------------------------------------
// Austin

namespace {

void expect_austin_sound(const DensityValuation& a, const DensityValuation& b, const Rational& eps, std::uint64_t seed) {
    AustinTrace trace;
    auto run = austin(a, b, eps, seed, &trace);
    EXPECT_EQ(run.allocation.cuts.size(), 2u);
    auto report = check_fair(run.allocation, {a, b}, {Notion::Perfect, eps});
    EXPECT_TRUE(report.pass) << "slack " << to_string(report.slack);
    EXPECT_TRUE(is_epsilon_outcome(trace.phase1, trace.outcome1, trace.eps1));
    EXPECT_TRUE(is_epsilon_outcome(trace.phase2, trace.outcome2, trace.eps2));
    EXPECT_LE(trace.search1.rounds, log2_ceil(2 * trace.phase1.zeta() / trace.eps1) + 2);
    EXPECT_LE(trace.search2.rounds, log2_ceil(2 * trace.phase2.zeta() / trace.eps2) + 2);
    EXPECT_EQ(cost(run.transcript).rounds, trace.search1.rounds + trace.search2.rounds);
}

}  // namespace

TEST(Austin, UniformPairSplitsInHalf) {
    auto u = DensityValuation::uniform();
    const Rational eps = q(1, 256);
    auto run = austin(u, u, eps, 3);
    const auto& c = run.allocation.cuts;
    ASSERT_EQ(c.size(), 2u);
    EXPECT_LE(abs_of(Rational(c[1] - c[0] - q(1, 2))), eps);
    expect_austin_sound(u, u, eps, 3);
}

TEST(Austin, FrontLoadedBobAtOneThousandth) {
    auto u = DensityValuation::uniform();
    DensityValuation bob({q(0), q(1, 2), q(1)}, {q(2), q(0)}, q(4));
    expect_austin_sound(u, bob, q(1, 1000), 1);
    expect_austin_sound(bob, u, q(1, 1000), 2);
}

TEST(Austin, RandomPairs) {
    Gen g(2024);
    for (int trial = 0; trial < 30; ++trial) {
        auto a = g.valuation(static_cast<int>(g.range(1, 6)));
        auto b = g.valuation(static_cast<int>(g.range(1, 6)));
        const Rational eps = trial % 2 == 0 ? q(1, 256) : q(1, 4096);
        SCOPED_TRACE(trial);
        expect_austin_sound(a, b, eps, static_cast<std::uint64_t>(trial));
    }
}

TEST(Austin, AgreesWithTheGridProtocolUnderTheChecker) {
    Gen g(9);
    for (int trial = 0; trial < 10; ++trial) {
        auto a = g.valuation(4), b = g.valuation(4);
        const Rational eps = q(1, 512);
        auto mk = austin(a, b, eps, 5);
        auto grid = perfect_two(a, b, eps);
        EXPECT_TRUE(check_fair(mk.allocation, {a, b}, {Notion::Perfect, eps}).pass) << trial;
        EXPECT_TRUE(check_fair(grid.allocation, {a, b}, {Notion::Perfect, eps}).pass) << trial;
    }
}

TEST(Austin, RejectsBadEps) {
    auto u = DensityValuation::uniform();
    EXPECT_THROW(austin(u, u, q(0), 1), PreconditionError);
    EXPECT_THROW(austin(u, u, q(1), 1), PreconditionError);
}
