#include "fairdiv/oracle.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "fairdiv/errors.hpp"

namespace fairdiv {

namespace {

// std::uniform_int_distribution is implementation-defined; rejection
// sampling on the standardised mt19937_64 stream keeps outputs portable.
class SeededDraws {
public:
    explicit SeededDraws(std::uint64_t seed) : rng_(seed) {}

    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        for (;;) {
            std::uint64_t v = rng_();
            if (v < limit) return v % n;
        }
    }
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace

// ---------------------------------------------------------------------------

FairnessReport check_fair(const Allocation& allocation, const std::vector<DensityValuation>& valuations,
                          const FairnessNotion& notion) {
    const int n = static_cast<int>(valuations.size());
    if (n < 1) throw PreconditionError("check_fair needs at least one valuation");
    if (notion.eps < 0) throw PreconditionError("fairness tolerance must be nonnegative");
    allocation.validate(n);

    // val[i][j] = v_i(A_j)
    std::vector<std::vector<Rational>> val(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) val[i][j] = value_of(valuations[i], allocation, j);

    const Rational& eps = notion.eps;
    const Rational share = Rational(1) / n;
    FairnessReport rep;
    bool first = true;
    auto consider = [&](const Rational& slack, int i, int j) {
        if (first || slack < rep.slack) {
            rep.slack = slack;
            rep.witness = {i, j};
            first = false;
        }
    };

    switch (notion.tag) {
        case Notion::Proportional:
            for (int i = 0; i < n; ++i) consider(val[i][i] - (share - eps), i, i);
            break;
        case Notion::EnvyFree:
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (i != j) consider(val[i][i] - val[i][j] + eps, i, j);
            break;
        case Notion::Equitable:
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) consider(eps - abs_of(val[i][i] - val[j][j]), i, j);
            break;
        case Notion::Perfect:
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) consider(eps - abs_of(val[i][j] - share), i, j);
            break;
    }
    if (first) consider(eps, 0, 0);  // no inequality applies (n = 1)
    rep.pass = rep.slack >= 0;
    return rep;
}

// ---------------------------------------------------------------------------

bool is_crossing(const std::vector<std::int64_t>& x, const std::vector<std::int64_t>& y, std::int64_t i,
                 bool below_then_above_only) {
    auto p = static_cast<std::size_t>(i - 1);
    auto c = static_cast<std::size_t>(i);
    bool below_above = x[p] <= y[p] && x[c] >= y[c];
    bool above_below = x[p] >= y[p] && x[c] <= y[c];
    return below_above || (!below_then_above_only && above_below);
}

std::vector<std::int64_t> brute_crossing(const CrossingInstance& instance, bool below_then_above_only) {
    std::vector<std::int64_t> out;
    for (std::int64_t i = 1; i <= instance.m; ++i)
        if (is_crossing(instance.x, instance.y, i, below_then_above_only)) out.push_back(i);
    return out;
}

std::vector<std::int64_t> brute_crossing(const MonCrossingInstance& instance) {
    std::vector<std::int64_t> out;
    for (std::int64_t i = 1; i <= instance.m; ++i)
        if (is_crossing(instance.x, instance.y, i, true)) out.push_back(i);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

DensityValuation equitable_side(const std::vector<std::int64_t>& prefix, std::int64_t m) {
    std::vector<Rational> bps{Rational(0), make_rational(1, 3)};
    for (std::int64_t i = 1; i < m; ++i) bps.push_back(make_rational(1, 3) + make_rational(i, 3 * m));
    bps.push_back(make_rational(2, 3));
    bps.emplace_back(1);

    const Rational outer = Rational(3) * (1 - make_rational(1, m)) / 2;
    std::vector<Rational> dens{outer};
    for (std::int64_t i = 0; i < m; ++i)
        dens.push_back(make_rational(3 * (prefix[static_cast<std::size_t>(i + 1)] - prefix[static_cast<std::size_t>(i)]), m));
    dens.push_back(outer);
    return DensityValuation(std::move(bps), std::move(dens), Rational(3));
}

// Left zone [0,1/2] uniform with mass 1/2 - mu, a gap [1/2, s_0/2H] and a
// tail [s_m/2H, 1] of density 1 and mass mu each, and cells
// [s_{i-1}/2H, s_i/2H] of mass (1/2 - mu)/m. Then every window
// [i/2m, s_i/2H] is worth exactly 1/2.
DensityValuation perfect_side(const std::vector<std::int64_t>& seq, std::int64_t m) {
    const std::int64_t H = 2 * m * m + m;
    std::vector<std::int64_t> s;
    for (std::int64_t i = 0; i <= m; ++i) s.push_back(seq[static_cast<std::size_t>(i)] + H + 2 * m * i);
    const Rational mu = make_rational(s.front() - H, 2 * H);
    const Rational half = make_rational(1, 2);
    const Rational cell_mass = (half - mu) / m;

    std::vector<Rational> bps{Rational(0), half};
    std::vector<Rational> dens{(half - mu) / half};
    if (s.front() > H) {
        bps.push_back(make_rational(s.front(), 2 * H));
        dens.emplace_back(1);
    }
    for (std::int64_t i = 1; i <= m; ++i) {
        auto lo = s[static_cast<std::size_t>(i - 1)], hi = s[static_cast<std::size_t>(i)];
        bps.push_back(make_rational(hi, 2 * H));
        dens.push_back(cell_mass * (2 * H) / (hi - lo));
    }
    if (bps.back() < 1) {
        bps.emplace_back(1);
        dens.emplace_back(1);
    }
    Rational top = *std::max_element(dens.begin(), dens.end());
    return DensityValuation(std::move(bps), std::move(dens), Rational(std::max<Integer>(1, ceil_of(top))));
}

}  // namespace

CakePair gen_equitable_hard(const MonCrossingInstance& instance) {
    instance.validate();
    if (instance.k != instance.m) throw PreconditionError("equitable embedding needs k == m");
    const std::int64_t m = instance.m;
    std::vector<std::int64_t> bob_prefix;
    for (auto yi : instance.y) bob_prefix.push_back(m - yi);
    return {equitable_side(instance.x, m), equitable_side(bob_prefix, m)};
}

std::int64_t recover_equitable_index(const Rational& cut, std::int64_t m) {
    if (cut < make_rational(1, 3) || cut > make_rational(2, 3))
        throw ReductionContractError("equitable cut " + to_string(cut) + " lies outside the middle third");
    auto i = to_int64(ceil_of(3 * m * (cut - make_rational(1, 3))));
    return std::clamp<std::int64_t>(i, 1, m);
}

Rational equitable_hard_eps(std::int64_t m) { return make_rational(1, 2 * m * m); }

CakePair gen_perfect_hard(const CrossingInstance& instance) {
    instance.validate();
    const std::int64_t m = instance.m;
    if (instance.x.front() != 0 || instance.x.back() != m || instance.y.front() != m || instance.y.back() != 0)
        throw PreconditionError("perfect embedding needs x from 0 to m and y from m to 0 (pad first)");
    return {perfect_side(instance.x, m), perfect_side(instance.y, m)};
}

std::int64_t recover_perfect_index(const Rational& left_cut, std::int64_t m) {
    if (left_cut < 0 || left_cut > make_rational(1, 2))
        throw ReductionContractError("perfect left cut " + to_string(left_cut) + " lies beyond 1/2");
    auto i = to_int64(ceil_of(2 * m * left_cut));
    return std::clamp<std::int64_t>(i, 1, m);
}

Rational perfect_hard_eps(std::int64_t m) {
    const std::int64_t H = 2 * m * m + m;
    return make_rational(1, 8 * H * m);
}

CrossingInstance pad_for_perfect(const CrossingInstance& instance) {
    instance.validate();
    CrossingInstance out;
    out.m = instance.m + 2;
    out.x.push_back(0);
    out.y.push_back(out.m);
    for (std::size_t i = 0; i < instance.x.size(); ++i) {
        out.x.push_back(instance.x[i] + 1);
        out.y.push_back(instance.y[i] + 1);
    }
    out.x.push_back(out.m);
    out.y.push_back(0);
    return out;
}

std::int64_t unpad_perfect_index(std::int64_t padded_index, std::int64_t m) {
    return std::clamp<std::int64_t>(padded_index - 1, 1, m);
}

// ---------------------------------------------------------------------------

DensityValuation random_valuation(std::uint64_t seed, int segments, const Rational& density_bound) {
    if (segments < 1) throw PreconditionError("random_valuation needs segments >= 1");
    if (density_bound < 1) throw PreconditionError("random_valuation needs D >= 1");
    if (segments == 1) return DensityValuation::uniform(density_bound);
    SeededDraws draw(seed);

    const std::int64_t grid = 64 * segments;
    std::vector<std::int64_t> picks;
    while (static_cast<int>(picks.size()) < segments - 1) {
        std::int64_t c = draw.between(1, grid - 1);
        if (std::find(picks.begin(), picks.end(), c) == picks.end()) picks.push_back(c);
    }
    std::sort(picks.begin(), picks.end());
    std::vector<Rational> bps{Rational(0)};
    for (auto c : picks) bps.push_back(make_rational(c, grid));
    bps.emplace_back(1);

    std::vector<Rational> dens;
    Rational mass = 0;
    for (int s = 0; s < segments; ++s) {
        dens.emplace_back(draw.between(0, 16));
        mass += dens.back() * (bps[s + 1] - bps[s]);
    }
    if (mass == 0) return DensityValuation::uniform(density_bound);
    Rational top = 0;
    for (auto& d : dens) {
        d /= mass;
        top = std::max(top, d);
    }
    if (top > density_bound) {
        // mix with the uniform density so the peak lands exactly on D
        Rational lambda = (density_bound - 1) / (top - 1);
        for (auto& d : dens) d = lambda * d + (1 - lambda);
    }
    return DensityValuation(std::move(bps), std::move(dens), density_bound);
}

CrossingInstance random_crossing_instance(std::uint64_t seed, std::int64_t m) {
    SeededDraws draw(seed);
    CrossingInstance inst;
    inst.m = m;
    for (std::int64_t i = 0; i <= m; ++i) {
        inst.x.push_back(draw.between(0, m));
        inst.y.push_back(draw.between(0, m));
    }
    if (inst.x.front() > inst.y.front()) std::swap(inst.x.front(), inst.y.front());
    if (inst.x.back() < inst.y.back()) std::swap(inst.x.back(), inst.y.back());
    return inst;
}

MonCrossingInstance random_mon_crossing_instance(std::uint64_t seed, std::int64_t m, std::int64_t k) {
    SeededDraws draw(seed);
    MonCrossingInstance inst;
    inst.m = m;
    inst.k = k;
    auto monotone = [&](bool increasing) {
        std::vector<std::int64_t> v;
        for (std::int64_t i = 0; i <= m; ++i) v.push_back(draw.between(0, k));
        std::sort(v.begin(), v.end());
        v.front() = 0;
        v.back() = k;
        if (!increasing) std::reverse(v.begin(), v.end());
        return v;
    };
    inst.x = monotone(true);
    inst.y = monotone(false);
    return inst;
}

}  // namespace fairdiv
