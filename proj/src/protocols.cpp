#include "fairdiv/protocols.hpp"

#include <algorithm>
#include <string>

#include "fairdiv/crossing.hpp"
#include "fairdiv/errors.hpp"
#include "wire.hpp"

namespace fairdiv {

namespace {

void require_eps(const Rational& eps) {
    if (eps <= 0 || eps >= 1) throw PreconditionError("eps must lie in (0, 1), got " + to_string(eps));
}

// Smallest grid index k with v([0, k/m]) >= target; m + 1 when target > 1.
std::int64_t grid_mark(const DensityValuation& v, std::int64_t m, const Rational& target) {
    if (target > 1) return m + 1;
    Rational scaled = v.point_of_prefix(target) * m;
    return to_int64(ceil_of(scaled));
}

Rational grid_point(std::int64_t k, std::int64_t m) { return make_rational(k, m); }

template <typename F>
ProtocolRun owned_run(F&& body) {
    ProtocolRun run;
    Channel ch(run.transcript);
    run.allocation = body(ch);
    run.transcript.finish();
    return run;
}

}  // namespace

Rational public_density_bound(const std::vector<DensityValuation>& valuations) {
    Rational d = 1;
    for (const auto& v : valuations) d = std::max(d, v.density_bound());
    return d;
}

// ---------------------------------------------------------------------------

std::int64_t proportional_grid(int n, const Rational& density_bound, const Rational& eps) {
    return wire::grid_for(std::max(Rational(2 * n), density_bound), eps);
}

Allocation proportional_simultaneous(const std::vector<DensityValuation>& valuations, const Rational& eps,
                                     Channel& channel) {
    const int n = static_cast<int>(valuations.size());
    if (n < 2) throw PreconditionError("proportional protocol needs n >= 2");
    if (eps <= 0 || eps >= Rational(1) / n) throw PreconditionError("need 0 < eps < 1/n");
    const std::int64_t m = proportional_grid(n, public_density_bound(valuations), eps);
    const int w = width_for(static_cast<std::uint64_t>(m));

    wire::Outgoing out;
    for (int i = 0; i < n; ++i) {
        std::vector<std::int64_t> marks;
        for (int j = 1; j < n; ++j) marks.push_back(grid_mark(valuations[i], m, make_rational(j, n)));
        out.emplace_back(i, std::move(marks));
    }
    auto marks = wire::exchange_ints(channel, out, w);

    Allocation a;
    std::vector<bool> served(static_cast<std::size_t>(n), false);
    for (int j = 1; j < n; ++j) {
        int best = -1;
        for (int i = 0; i < n; ++i) {
            if (served[i]) continue;
            if (best < 0 || marks[i][j - 1] < marks[best][j - 1]) best = i;
        }
        served[best] = true;
        a.cuts.push_back(grid_point(marks[best][j - 1], m));
        a.assignment.push_back(best);
    }
    for (int i = 0; i < n; ++i)
        if (!served[i]) a.assignment.push_back(i);
    return a;
}

ProtocolRun proportional_simultaneous(const std::vector<DensityValuation>& valuations, const Rational& eps) {
    return owned_run([&](Channel& ch) { return proportional_simultaneous(valuations, eps, ch); });
}

// ---------------------------------------------------------------------------

std::int64_t equitable_grid(const Rational& density_bound, const Rational& eps) {
    return wire::grid_for(2 * density_bound + 2, eps);
}

Allocation equitable_two(const DensityValuation& alice, const DensityValuation& bob, const Rational& eps,
                         Channel& channel) {
    require_eps(eps);
    const std::int64_t m = equitable_grid(public_density_bound({alice, bob}), eps);
    const int w = width_for(static_cast<std::uint64_t>(m));
    RoundedGrid ga(alice, m), gb(bob, m);

    CrossingView view;
    view.m = m;
    view.value_max = m;
    view.x = [&](std::int64_t i) { return ga.prefix_units(i); };
    view.y = [&](std::int64_t i) { return m - gb.prefix_units(i); };
    const std::int64_t i = solve_mon_crossing(view, channel).index;

    auto got = wire::exchange_ints(
        channel, {{0, {ga.prefix_units(i - 1), ga.prefix_units(i)}}, {1, {gb.prefix_units(i - 1), gb.prefix_units(i)}}},
        w);
    const std::int64_t a0 = got[0][0], a1 = got[0][1], b0 = got[1][0], b1 = got[1][1];
    // v'_A([0,x]) + v'_B([0,x]) is linear on the cell; solve it for 1
    const std::int64_t slope = (a1 - a0) + (b1 - b0);
    Rational theta = slope == 0 ? Rational(0) : make_rational(m - a0 - b0, slope);
    Rational cut = (Rational(i - 1) + theta) / m;
    return Allocation{{cut}, {0, 1}};
}

ProtocolRun equitable_two(const DensityValuation& alice, const DensityValuation& bob, const Rational& eps) {
    return owned_run([&](Channel& ch) { return equitable_two(alice, bob, eps, ch); });
}

// ---------------------------------------------------------------------------

std::int64_t perfect_grid(const Rational& density_bound, const Rational& eps) {
    return wire::grid_for(5 * density_bound, eps);
}

namespace {

// f(i): smallest j >= i with v([i/m, j/m]) >= 1/2, or m when none exists.
std::int64_t half_window_end(const DensityValuation& v, std::int64_t m, std::int64_t i) {
    Rational target = v.prefix(grid_point(i, m)) + make_rational(1, 2);
    return std::min(grid_mark(v, m, target), m);
}

}  // namespace

Allocation perfect_two(const DensityValuation& alice, const DensityValuation& bob, const Rational& eps,
                       Channel& channel, const PerfectOptions& options) {
    require_eps(eps);
    const std::int64_t m = perfect_grid(public_density_bound({alice, bob}), eps);
    const int w = width_for(static_cast<std::uint64_t>(m));
    PublicCoins coins(options.seed);
    const DensityValuation* val[2] = {&alice, &bob};

    auto ks = wire::exchange_ints(
        channel, {{0, {half_window_end(alice, m, 0)}}, {1, {half_window_end(bob, m, 0)}}}, w);
    const PartyId lead = ks[1][0] < ks[0][0] ? 1 : 0;
    const PartyId other = 1 - lead;
    const std::int64_t k = ks[lead][0];

    CrossingView view;
    view.m = k;
    view.value_max = m;
    view.alice = lead;
    view.bob = other;
    view.x = [&](std::int64_t i) { return i == k ? m : half_window_end(*val[lead], m, i); };
    view.y = [&](std::int64_t i) { return half_window_end(*val[other], m, i); };
    const std::int64_t i = options.randomized ? solve_crossing_rand(view, channel, coins).index
                                              : solve_crossing_det(view, channel).index;

    auto ends = wire::exchange_ints(channel, {{lead, {view.x(i)}}, {other, {view.y(i)}}}, w);
    const std::int64_t right = std::min(ends[0][0], ends[1][0]);
    const PartyId middle_owner = static_cast<PartyId>(coins.draw_below(2));
    return Allocation{{grid_point(i, m), grid_point(right, m)}, {1 - middle_owner, middle_owner, 1 - middle_owner}};
}

ProtocolRun perfect_two(const DensityValuation& alice, const DensityValuation& bob, const Rational& eps,
                        const PerfectOptions& options) {
    return owned_run([&](Channel& ch) { return perfect_two(alice, bob, eps, ch, options); });
}

// ---------------------------------------------------------------------------

std::int64_t noncomm_cells(int n, const Rational& density_bound, const Rational& eps) {
    require_eps(eps);
    Rational cells = density_bound * density_bound * n * n / (eps * eps);
    return std::max<std::int64_t>(1, to_int64(ceil_of(cells)));
}

std::int64_t noncomm_cut_bound(int n, const Rational& density_bound, const Rational& eps) {
    return noncomm_cells(n, density_bound, eps) - 1;
}

Allocation perfect_random_noncomm(const std::vector<DensityValuation>& valuations, const Rational& eps,
                                  PublicCoins& coins) {
    const int n = static_cast<int>(valuations.size());
    if (n < 1) throw PreconditionError("need at least one party");
    require_eps(eps);
    if (n == 1) return Allocation{{}, {0}};
    const std::int64_t cells = noncomm_cells(n, public_density_bound(valuations), eps);
    Allocation a;
    for (std::int64_t c = 0; c < cells; ++c) {
        auto owner = static_cast<PartyId>(coins.draw_below(static_cast<std::uint64_t>(n)));
        if (!a.assignment.empty() && a.assignment.back() == owner) continue;
        if (!a.assignment.empty()) a.cuts.push_back(grid_point(c, cells));
        a.assignment.push_back(owner);
    }
    return a;
}

}  // namespace fairdiv
