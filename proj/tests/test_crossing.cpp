#include <gtest/gtest.h>

#include <algorithm>
#include <functional>

#include "fairdiv/crossing.hpp"
#include "fairdiv/errors.hpp"
#include "fairdiv/oracle.hpp"
#include "support.hpp"

using namespace fairdiv;
using fairdiv::testing::Gen;

namespace {

bool contains(const std::vector<std::int64_t>& s, std::int64_t v) { return std::find(s.begin(), s.end(), v) != s.end(); }

// Calls f on every weakly increasing sequence 0 = s_0 <= ... <= s_m = k.
void for_each_monotone(std::int64_t m, std::int64_t k, const std::function<void(const std::vector<std::int64_t>&)>& f) {
    std::vector<std::int64_t> s(static_cast<std::size_t>(m + 1), 0);
    s.back() = k;
    std::function<void(std::int64_t)> rec = [&](std::int64_t i) {
        if (i == m) {
            f(s);
            return;
        }
        for (std::int64_t v = s[static_cast<std::size_t>(i - 1)]; v <= k; ++v) {
            s[static_cast<std::size_t>(i)] = v;
            rec(i + 1);
        }
    };
    if (m == 1)
        f(s);
    else
        rec(1);
}

}  // namespace

TEST(Validate, RejectsMalformed) {
    EXPECT_THROW((CrossingInstance{2, {1, 0, 0}, {0, 0, 0}}.validate()), MalformedInstanceError);
    EXPECT_THROW((CrossingInstance{2, {0, 0, 0}, {0, 0, 1}}.validate()), MalformedInstanceError);
    EXPECT_THROW((CrossingInstance{2, {0, 3, 2}, {2, 0, 0}}.validate()), MalformedInstanceError);
    EXPECT_THROW((MonCrossingInstance{2, 2, {0, 2, 1}, {2, 1, 0}}.validate()), MalformedInstanceError);
    EXPECT_THROW((MonCrossingInstance{2, 2, {0, 1, 2}, {2, 1, 1}}.validate()), MalformedInstanceError);
}

TEST(BruteCrossing, Examples) {
    EXPECT_EQ(brute_crossing(CrossingInstance{2, {0, 2, 2}, {2, 1, 0}}), (std::vector<std::int64_t>{1}));
    EXPECT_EQ(brute_crossing(CrossingInstance{3, {1, 2, 0, 3}, {1, 2, 0, 3}}), (std::vector<std::int64_t>{1, 2, 3}));
    EXPECT_EQ(brute_crossing(MonCrossingInstance{4, 4, {0, 1, 2, 3, 4}, {4, 3, 2, 1, 0}}),
              (std::vector<std::int64_t>{2, 3}));
}

TEST(BruteCrossing, NonemptyExhaustive) {
    for (std::int64_t m = 1; m <= 3; ++m) {
        const std::int64_t total = m + 1;
        std::vector<std::int64_t> digits(static_cast<std::size_t>(2 * total), 0);
        for (;;) {
            CrossingInstance inst{m, {digits.begin(), digits.begin() + total}, {digits.begin() + total, digits.end()}};
            if (inst.x.front() <= inst.y.front() && inst.x.back() >= inst.y.back())
                ASSERT_FALSE(brute_crossing(inst).empty());
            std::size_t p = 0;
            while (p < digits.size() && ++digits[p] > m) digits[p++] = 0;
            if (p == digits.size()) break;
        }
    }
}

TEST(Det, Examples) {
    auto zero = solve_crossing_det(CrossingInstance{4, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}});
    EXPECT_GE(zero.answer.index, 1);
    EXPECT_LE(zero.answer.index, 4);
    EXPECT_EQ(solve_crossing_det(CrossingInstance{2, {0, 2, 2}, {2, 1, 0}}).answer.index, 1);
}

TEST(Det, MalformedDetectedMidProtocol) {
    CrossingView v;
    v.m = 4;
    v.value_max = 4;
    v.x = [](std::int64_t i) { return i == 0 ? 3 : 0; };
    v.y = [](std::int64_t) { return std::int64_t{1}; };
    Transcript tr;
    Channel ch(tr);
    EXPECT_THROW(solve_crossing_det(v, ch), MalformedInstanceError);
    EXPECT_EQ(tr.rounds().size(), 1U);  // caught right after the endpoint round
}

TEST(Det, RandomLargeAgreesWithOracleAndCost) {
    for (std::int64_t m : {5, 100, 1024, 4096}) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto inst = random_crossing_instance(seed * 31 + static_cast<std::uint64_t>(m), m);
            auto res = solve_crossing_det(inst);
            // the binary search always produces the x-below-then-above kind
            ASSERT_TRUE(contains(brute_crossing(inst, true), res.answer.index));
            auto c = res.transcript.cost();
            int L = ceil_log2(static_cast<std::uint64_t>(m));
            int w = width_for(static_cast<std::uint64_t>(m));
            EXPECT_LE(c.rounds, L + 1);
            EXPECT_LE(c.total_bits, 4 * w * (L + 1));
        }
    }
}

TEST(CompareRandomized, EqualAndExtremes) {
    int errors_equal = 0, errors_gap = 0;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        PublicCoins coins(seed);
        Transcript tr;
        Channel ch(tr);
        if (compare_randomized(77, 77, 10, make_rational(1, 10), ch, coins) != Ordering::Equal) ++errors_equal;
        if (compare_randomized(0, 1023, 10, make_rational(1, 10), ch, coins) != Ordering::Less) ++errors_gap;
    }
    EXPECT_EQ(errors_equal, 0);  // fingerprints never separate equal prefixes
    EXPECT_LE(errors_gap, 40);
}

TEST(CompareRandomized, MonteCarloErrorRate) {
    Gen g(5);
    int errors = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        auto a = static_cast<std::uint64_t>(g.range(0, 1023));
        auto b = static_cast<std::uint64_t>(g.range(0, 1023));
        PublicCoins coins(static_cast<std::uint64_t>(t) * 7919U);
        Transcript tr;
        Channel ch(tr);
        Ordering got = compare_randomized(a, b, 10, make_rational(1, 100), ch, coins);
        Ordering want = a < b ? Ordering::Less : (a > b ? Ordering::Greater : Ordering::Equal);
        if (got != want) ++errors;
    }
    EXPECT_LE(errors, trials * 2 / 100);
}

TEST(Rand, AllZeroAlwaysValid) {
    CrossingInstance inst{8, std::vector<std::int64_t>(9, 0), std::vector<std::int64_t>(9, 0)};
    for (std::uint64_t s = 0; s < 50; ++s) {
        PublicCoins coins(s);
        auto res = solve_crossing_rand(inst, coins);
        EXPECT_TRUE(contains(brute_crossing(inst), res.answer.index));
    }
}

TEST(Rand, ExhaustiveM2ErrorRate) {
    int runs = 0, errors = 0;
    for (std::int64_t code = 0; code < 729; ++code) {
        std::int64_t c = code;
        std::vector<std::int64_t> d;
        for (int i = 0; i < 6; ++i) {
            d.push_back(c % 3);
            c /= 3;
        }
        CrossingInstance inst{2, {d[0], d[1], d[2]}, {d[3], d[4], d[5]}};
        if (inst.x[0] > inst.y[0] || inst.x[2] < inst.y[2]) continue;
        auto valid = brute_crossing(inst);
        for (std::uint64_t s = 0; s < 100; ++s) {
            PublicCoins coins(static_cast<std::uint64_t>(code) * 1000 + s);
            ++runs;
            if (!contains(valid, solve_crossing_rand(inst, coins).answer.index)) ++errors;
        }
    }
    EXPECT_LE(3 * errors, runs);
}

TEST(Mon, Examples) {
    auto a = solve_mon_crossing(MonCrossingInstance{4, 4, {0, 1, 2, 3, 4}, {4, 3, 2, 1, 0}});
    EXPECT_TRUE(a.answer.index == 2 || a.answer.index == 3);
    auto b = solve_mon_crossing(MonCrossingInstance{2, 2, {0, 0, 2}, {2, 0, 0}});
    EXPECT_TRUE(b.answer.index == 1 || b.answer.index == 2);
}

TEST(Mon, ExhaustiveSmallShapes) {
    // includes non-powers of two on both axes, which exercise the padding
    for (std::int64_t m = 1; m <= 5; ++m) {
        for (std::int64_t k = 1; k <= 5; ++k) {
            for_each_monotone(m, k, [&](const std::vector<std::int64_t>& xs) {
                for_each_monotone(m, k, [&](const std::vector<std::int64_t>& up) {
                    MonCrossingInstance inst{m, k, xs, {up.rbegin(), up.rend()}};
                    auto res = solve_mon_crossing(inst);
                    ASSERT_TRUE(contains(brute_crossing(inst), res.answer.index))
                        << "m=" << m << " k=" << k << " answer=" << res.answer.index;
                    auto bound = 2 * (ceil_log2(static_cast<std::uint64_t>(m)) + ceil_log2(static_cast<std::uint64_t>(k)) + 1);
                    ASSERT_LE(res.transcript.cost().total_bits, bound);
                });
            });
        }
    }
}

TEST(Mon, RandomLarge) {
    for (std::int64_t m : {16, 1000, 1 << 12, 1 << 16}) {
        for (std::uint64_t s = 0; s < 30; ++s) {
            std::int64_t k = (s % 2 == 0) ? m : m / 3 + 1;
            auto inst = random_mon_crossing_instance(s + 17 * static_cast<std::uint64_t>(m), m, k);
            auto res = solve_mon_crossing(inst);
            ASSERT_TRUE(contains(brute_crossing(inst), res.answer.index));
        }
    }
}

TEST(Lift, TwoBlockExample) {
    auto lift = lift_pk({{0, 1, 2}, {0, 2, 2}}, {2, 1, 0}, 1);
    EXPECT_EQ(lift.lifted.x, (std::vector<std::int64_t>{0, 1, 2, 4, 4}));
    EXPECT_EQ(lift.lifted.y, (std::vector<std::int64_t>{4, 1, 0, 0, 0}));
    auto valid = brute_crossing(lift.lifted);
    ASSERT_FALSE(valid.empty());
    for (auto w : valid) {
        auto i = lift.back_map(w);
        EXPECT_EQ(i, w);  // z = 1: no offset
        EXPECT_TRUE(is_crossing({0, 1, 2}, {2, 1, 0}, i, true));
    }
}

TEST(Lift, LastBlockCrossingIsInterior) {
    auto lift = lift_pk({{0, 1, 2}, {0, 2, 2}}, {2, 1, 0}, 2);
    for (auto w : brute_crossing(lift.lifted)) {
        EXPECT_GT(w, 2);
        EXPECT_LE(w, 4);
        EXPECT_TRUE(is_crossing({0, 2, 2}, {2, 1, 0}, lift.back_map(w), true));
    }
}

TEST(Lift, BoundaryConsistencyAndBackMapExhaustive) {
    for (std::int64_t m = 1; m <= 3; ++m) {
        std::vector<std::vector<std::int64_t>> all;
        for_each_monotone(m, m, [&](const std::vector<std::int64_t>& s) { all.push_back(s); });
        for (std::int64_t k = 1; k <= 3; ++k) {
            std::vector<std::size_t> pick(static_cast<std::size_t>(k), 0);
            for (;;) {
                std::vector<std::vector<std::int64_t>> xs;
                for (auto p : pick) xs.push_back(all[p]);
                for (const auto& up : all) {
                    std::vector<std::int64_t> y(up.rbegin(), up.rend());
                    for (std::int64_t z = 1; z <= k; ++z) {
                        auto lift = lift_pk(xs, y, z);
                        const auto& L = lift.lifted;
                        ASSERT_EQ(L.x.front(), 0);
                        ASSERT_EQ(L.x.back(), k * m);
                        ASSERT_EQ(L.y.front(), k * m);
                        ASSERT_EQ(L.y.back(), 0);
                        for (auto w : brute_crossing(L))
                            ASSERT_TRUE(is_crossing(xs[static_cast<std::size_t>(z - 1)], y, lift.back_map(w), true));
                    }
                }
                std::size_t p = 0;
                while (p < pick.size() && ++pick[p] == all.size()) pick[p++] = 0;
                if (p == pick.size()) break;
            }
        }
    }
}

TEST(Lift, RejectsBadSelector) {
    EXPECT_THROW(lift_pk({{0, 1, 2}}, {2, 1, 0}, 2), MalformedInstanceError);
    EXPECT_THROW(lift_pk({{0, 2, 1}}, {2, 1, 0}, 1), MalformedInstanceError);
}
