#include <gtest/gtest.h>

#include "fairdiv/errors.hpp"
#include "fairdiv/oracle.hpp"
#include "support.hpp"

using namespace fairdiv;
using fairdiv::testing::Gen;
using fairdiv::testing::integral;

namespace {

Rational q(std::int64_t n, std::int64_t d = 1) { return make_rational(n, d); }

Allocation split_at(const Rational& c) { return {{c}, {0, 1}}; }

std::vector<DensityValuation> two_uniform() { return {DensityValuation::uniform(), DensityValuation::uniform()}; }

}  // namespace

TEST(CheckFair, SymmetricHalvesPassEverything) {
    for (Notion n : {Notion::Proportional, Notion::EnvyFree, Notion::Equitable, Notion::Perfect}) {
        auto rep = check_fair(split_at(q(1, 2)), two_uniform(), {n, 0});
        EXPECT_TRUE(rep.pass);
        EXPECT_EQ(rep.slack, 0);
    }
}

TEST(CheckFair, EquitableThresholds) {
    auto fail = check_fair(split_at(q(2, 5)), two_uniform(), {Notion::Equitable, q(1, 10)});
    EXPECT_FALSE(fail.pass);
    EXPECT_EQ(fail.slack, q(1, 10) - q(1, 5));
    EXPECT_EQ(fail.witness, std::make_pair(0, 1));
    EXPECT_TRUE(check_fair(split_at(q(2, 5)), two_uniform(), {Notion::Equitable, q(1, 5)}).pass);
}

TEST(CheckFair, PerfectNeedsTwoCutsForDifferentValuations) {
    DensityValuation heavy({q(0), q(1, 2), q(1)}, {q(2), q(0)}, q(4));
    std::vector<DensityValuation> vals{DensityValuation::uniform(), heavy};
    // the only one-cut candidate at 1/2 gives Bob 1 and 0
    auto rep = check_fair(split_at(q(1, 2)), vals, {Notion::Perfect, q(1, 100)});
    EXPECT_FALSE(rep.pass);
    // [1/4, 3/4] is worth 1/2 to both
    Allocation two{{q(1, 4), q(3, 4)}, {0, 1, 0}};
    EXPECT_TRUE(check_fair(two, vals, {Notion::Perfect, 0}).pass);
}

TEST(CheckFair, StructuralErrors) {
    EXPECT_THROW(check_fair({{q(1, 2)}, {0}}, two_uniform(), {Notion::Proportional, 0}), PreconditionError);
    EXPECT_THROW(check_fair({{q(2, 3), q(1, 3)}, {0, 1, 0}}, two_uniform(), {Notion::Proportional, 0}),
                 PreconditionError);
    EXPECT_THROW(check_fair({{q(1, 2)}, {0, 2}}, two_uniform(), {Notion::Proportional, 0}), PreconditionError);
}

TEST(CheckFair, MonotoneSlack) {
    // moving the cut away from 1/2 by d shrinks equitable slack by exactly 2d
    for (int d = 0; d <= 10; ++d) {
        auto rep = check_fair(split_at(q(1, 2) + q(d, 100)), two_uniform(), {Notion::Equitable, q(1, 10)});
        EXPECT_EQ(rep.slack, q(1, 10) - q(2 * d, 100));
        EXPECT_EQ(rep.pass, 2 * d <= 10);
    }
}

TEST(CheckFair, ThreePartyEnvyWitness) {
    std::vector<DensityValuation> vals(3, DensityValuation::uniform());
    Allocation a{{q(1, 4), q(1, 2)}, {0, 1, 2}};
    auto rep = check_fair(a, vals, {Notion::EnvyFree, 0});
    EXPECT_FALSE(rep.pass);
    EXPECT_EQ(rep.slack, q(1, 4) - q(1, 2));
    EXPECT_EQ(rep.witness.second, 2);
}

TEST(GenEquitableHard, SmallExampleBySubstitution) {
    MonCrossingInstance inst{2, 2, {0, 1, 2}, {2, 1, 0}};
    auto pair = gen_equitable_hard(inst);
    const auto& a = pair.alice;
    EXPECT_EQ(a.eval(0, q(1, 3)), q(1, 4));
    EXPECT_EQ(a.eval(q(2, 3), 1), q(1, 4));
    EXPECT_EQ(a.eval(q(1, 3), q(1, 2)), q(1, 4));  // x_1 / m^2
    EXPECT_EQ(a.eval(q(1, 3), q(2, 3)), q(1, 2));  // x_2 / m^2
    // Bob uses m - y_i = (0, 1, 2)
    EXPECT_EQ(pair.bob.eval(q(1, 3), q(1, 2)), q(1, 4));
    EXPECT_LE(a.max_density(), 3);
}

TEST(GenEquitableHard, MassAndCellIdentity) {
    Gen g(3);
    for (std::int64_t m : {1, 2, 5, 16, 64}) {
        auto inst = random_mon_crossing_instance(static_cast<std::uint64_t>(m), m, m);
        auto pair = gen_equitable_hard(inst);
        EXPECT_EQ(integral(pair.alice, 0, 1), 1);
        EXPECT_EQ(integral(pair.bob, 0, 1), 1);
        for (std::int64_t i = 0; i <= m; ++i) {
            Rational p = q(1, 3) + q(i, 3 * m);
            Rational sum = integral(pair.alice, 0, p) + integral(pair.bob, 0, p);
            Rational want = 1 - q(1, m) + Rational(inst.x[i] + m - inst.y[i]) / (m * m);
            EXPECT_EQ(sum, want);
        }
    }
}

TEST(GenEquitableHard, ExactEquitableCutsLandInValidCells) {
    // For each instance, solve v_A([0,c]) = v_B([c,1]) exactly by a
    // scan over the middle cells and check the recovered index.
    for (std::int64_t m : {2, 3, 4, 8}) {
        for (std::uint64_t s = 0; s < 20; ++s) {
            auto inst = random_mon_crossing_instance(s * 101 + static_cast<std::uint64_t>(m), m, m);
            auto pair = gen_equitable_hard(inst);
            auto valid = brute_crossing(inst);
            bool found = false;
            for (std::int64_t i = 1; i <= m; ++i) {
                Rational lo = q(1, 3) + q(i - 1, 3 * m), hi = q(1, 3) + q(i, 3 * m);
                auto g = [&](const Rational& c) -> Rational {
                    return integral(pair.alice, 0, c) - integral(pair.bob, c, 1);
                };
                Rational glo = g(lo), ghi = g(hi);
                if (glo <= 0 && ghi >= 0) {
                    Rational c = ghi == glo ? lo : lo + (hi - lo) * (-glo) / (ghi - glo);
                    ASSERT_EQ(g(c), 0);
                    auto idx = recover_equitable_index(c, m);
                    EXPECT_NE(std::find(valid.begin(), valid.end(), idx), valid.end());
                    found = true;
                }
            }
            EXPECT_TRUE(found);
        }
    }
}

TEST(RecoverEquitable, CellArithmetic) {
    for (std::int64_t m : {3, 10}) {
        for (std::int64_t i = 1; i <= m; ++i)
            EXPECT_EQ(recover_equitable_index(q(1, 3) + (Rational(i) - q(1, 2)) / (3 * m), m), i);
    }
    EXPECT_THROW(recover_equitable_index(q(1, 4), 3), ReductionContractError);
    EXPECT_THROW(recover_equitable_index(q(3, 4), 3), ReductionContractError);
}

TEST(GenPerfectHard, TinyInstanceBySubstitution) {
    // m = 1: H = 3, shifted x = (3, 6), shifted y = (4, 5), mu_B = 1/6
    CrossingInstance inst{1, {0, 1}, {1, 0}};
    auto pair = gen_perfect_hard(inst);
    EXPECT_EQ(pair.alice.breakpoints(), (std::vector<Rational>{q(0), q(1, 2), q(1)}));
    EXPECT_EQ(pair.alice.densities(), (std::vector<Rational>{q(1), q(1)}));
    EXPECT_EQ(pair.bob.breakpoints(), (std::vector<Rational>{q(0), q(1, 2), q(2, 3), q(5, 6), q(1)}));
    // left zone 1/3 over 1/2, gap and tail density 1, cell 1/3 over 1/6
    EXPECT_EQ(pair.bob.densities(), (std::vector<Rational>{q(2, 3), q(1), q(2), q(1)}));
}

TEST(GenPerfectHard, HalfMassWindows) {
    for (std::int64_t m : {1, 2, 4, 16, 64}) {
        for (std::uint64_t s = 0; s < 5; ++s) {
            auto raw = random_crossing_instance(s + static_cast<std::uint64_t>(m) * 7, m);
            raw.x.front() = 0;
            raw.x.back() = m;
            raw.y.front() = m;
            raw.y.back() = 0;
            auto pair = gen_perfect_hard(raw);
            const std::int64_t H = 2 * m * m + m;
            EXPECT_EQ(integral(pair.alice, 0, q(1, 2)), q(1, 2));
            EXPECT_EQ(integral(pair.alice, 0, 1), 1);
            EXPECT_EQ(integral(pair.bob, 0, 1), 1);
            EXPECT_LE(pair.alice.max_density(), 3);
            EXPECT_LE(pair.bob.max_density(), 3);
            EXPECT_GE(pair.alice.min_density(), q(1, 3));
            EXPECT_GE(pair.bob.min_density(), q(1, 3));
            for (std::int64_t i = 0; i <= m; ++i) {
                Rational a = q(i, 2 * m);
                EXPECT_EQ(integral(pair.alice, a, Rational(raw.x[i] + H + 2 * m * i) / (2 * H)), q(1, 2));
                EXPECT_EQ(integral(pair.bob, a, Rational(raw.y[i] + H + 2 * m * i) / (2 * H)), q(1, 2));
            }
        }
    }
}

TEST(GenPerfectHard, RequiresPaddedForm) {
    EXPECT_THROW(gen_perfect_hard(CrossingInstance{2, {1, 1, 2}, {1, 1, 1}}), PreconditionError);
    EXPECT_THROW(gen_perfect_hard(CrossingInstance{2, {0, 1, 2}, {1, 1, 0}}), PreconditionError);
}

TEST(RecoverPerfect, CellArithmetic) {
    for (std::int64_t i = 1; i <= 6; ++i) EXPECT_EQ(recover_perfect_index((Rational(i) - q(1, 3)) / 12, 6), i);
    EXPECT_THROW(recover_perfect_index(q(3, 5), 6), ReductionContractError);
}

TEST(PadForPerfect, PreservesAnswers) {
    for (std::int64_t m : {1, 2, 3}) {
        for (std::uint64_t s = 0; s < 200; ++s) {
            auto inst = random_crossing_instance(s, m);
            auto padded = pad_for_perfect(inst);
            EXPECT_EQ(padded.x.front(), 0);
            EXPECT_EQ(padded.x.back(), padded.m);
            EXPECT_EQ(padded.y.front(), padded.m);
            EXPECT_EQ(padded.y.back(), 0);
            auto orig = brute_crossing(inst);
            for (auto j : brute_crossing(padded)) {
                auto i = unpad_perfect_index(j, m);
                EXPECT_NE(std::find(orig.begin(), orig.end(), i), orig.end()) << "m=" << m << " j=" << j;
            }
        }
    }
}

TEST(RandomValuation, Examples) {
    EXPECT_EQ(random_valuation(9, 1, 4), DensityValuation::uniform(4));
    EXPECT_EQ(random_valuation(9, 6, 4), random_valuation(9, 6, 4));
    EXPECT_NE(random_valuation(9, 6, 4), random_valuation(10, 6, 4));
}

TEST(RandomValuation, InvariantSweep) {
    for (std::uint64_t s = 0; s < 1000; ++s) {
        int segs = static_cast<int>(1 + s % 9);
        Rational D = s % 3 == 0 ? Rational(1) : q(static_cast<std::int64_t>(2 + s % 5));
        auto v = random_valuation(s, segs, D);
        EXPECT_LE(v.segments(), static_cast<std::size_t>(segs));
        EXPECT_LE(v.max_density(), D);
        EXPECT_EQ(integral(v, 0, 1), 1);
    }
}
