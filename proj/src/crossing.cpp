#include "fairdiv/crossing.hpp"

#include <algorithm>
#include <string>

#include "fairdiv/errors.hpp"

namespace fairdiv {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw MalformedInstanceError(what);
}

void check_range(std::int64_t v, std::int64_t max, const char* who) {
    if (v < 0 || v > max)
        throw MalformedInstanceError(std::string(who) + " holds " + std::to_string(v) + " outside [0," +
                                     std::to_string(max) + "]");
}

BitString encode(std::uint64_t value, int width) {
    BitString b;
    b.append_uint(value, width);
    return b;
}

// One round in which both parties speak; returns what each receiver decodes
// from the other's message.
struct Received {
    std::int64_t from_alice = 0;
    std::int64_t from_bob = 0;
};

Received swap_values(Channel& ch, const CrossingView& v, std::uint64_t a, std::uint64_t b, int width) {
    ch.exchange({{v.alice, encode(a, width)}, {v.bob, encode(b, width)}});
    const auto& round = ch.transcript().rounds().back();
    Received r;
    for (const auto& msg : round) {
        BitReader in(msg.payload);
        auto val = static_cast<std::int64_t>(in.read_uint(width));
        (msg.sender == v.alice ? r.from_alice : r.from_bob) = val;
    }
    return r;
}

CrossingView view_of(const CrossingInstance& inst) {
    CrossingView v;
    v.m = inst.m;
    v.value_max = inst.m;
    v.x = [&inst](std::int64_t i) { return inst.x.at(static_cast<std::size_t>(i)); };
    v.y = [&inst](std::int64_t i) { return inst.y.at(static_cast<std::size_t>(i)); };
    return v;
}

std::uint64_t fingerprint(std::uint64_t prefix, std::int64_t len, int f, const BitString& coins) {
    std::uint64_t out = 0;
    for (int j = 0; j < f; ++j) {
        bool parity = false;
        for (std::int64_t b = 0; b < len; ++b) {
            bool bit = ((prefix >> (len - 1 - b)) & 1U) != 0;
            parity ^= bit && coins[static_cast<std::size_t>(j * len + b)];
        }
        out = (out << 1) | static_cast<std::uint64_t>(parity);
    }
    return out;
}

}  // namespace

void CrossingInstance::validate() const {
    require(m >= 1, "crossing instance needs m >= 1");
    require(x.size() == static_cast<std::size_t>(m + 1) && y.size() == x.size(), "sequences must have m+1 entries");
    for (std::size_t i = 0; i < x.size(); ++i) {
        check_range(x[i], m, "x");
        check_range(y[i], m, "y");
    }
    require(x.front() <= y.front(), "need x_0 <= y_0");
    require(x.back() >= y.back(), "need x_m >= y_m");
}

void MonCrossingInstance::validate() const {
    require(m >= 1 && k >= 1, "mon-crossing instance needs m, k >= 1");
    require(x.size() == static_cast<std::size_t>(m + 1) && y.size() == x.size(), "sequences must have m+1 entries");
    require(x.front() == 0 && x.back() == k, "x must run from 0 to k");
    require(y.front() == k && y.back() == 0, "y must run from k to 0");
    for (std::size_t i = 1; i < x.size(); ++i) {
        require(x[i - 1] <= x[i], "x must be weakly increasing");
        require(y[i - 1] >= y[i], "y must be weakly decreasing");
    }
}

// ---------------------------------------------------------------------------

CrossingAnswer solve_crossing_det(const CrossingView& v, Channel& ch) {
    const int w = width_for(static_cast<std::uint64_t>(v.value_max));
    std::int64_t x0 = v.x(0), xm = v.x(v.m), y0 = v.y(0), ym = v.y(v.m);
    for (auto val : {x0, xm}) check_range(val, v.value_max, "x");
    for (auto val : {y0, ym}) check_range(val, v.value_max, "y");

    BitString a, b;
    a.append_uint(static_cast<std::uint64_t>(x0), w);
    a.append_uint(static_cast<std::uint64_t>(xm), w);
    b.append_uint(static_cast<std::uint64_t>(y0), w);
    b.append_uint(static_cast<std::uint64_t>(ym), w);
    ch.exchange({{v.alice, a}, {v.bob, b}});
    require(x0 <= y0, "endpoint check failed: x_0 > y_0");
    require(xm >= ym, "endpoint check failed: x_m < y_m");

    // invariant: x_lo <= y_lo and x_hi >= y_hi
    std::int64_t lo = 0, hi = v.m;
    while (hi - lo > 1) {
        std::int64_t mid = lo + (hi - lo) / 2;
        std::int64_t xv = v.x(mid), yv = v.y(mid);
        check_range(xv, v.value_max, "x");
        check_range(yv, v.value_max, "y");
        auto got = swap_values(ch, v, static_cast<std::uint64_t>(xv), static_cast<std::uint64_t>(yv), w);
        if (got.from_alice >= got.from_bob)
            hi = mid;
        else
            lo = mid;
    }
    return {hi, Orientation::XBelowThenAbove};
}

CrossingResult solve_crossing_det(const CrossingInstance& inst) {
    inst.validate();
    CrossingResult out;
    Channel ch(out.transcript);
    out.answer = solve_crossing_det(view_of(inst), ch);
    out.transcript.finish();
    return out;
}

// ---------------------------------------------------------------------------

Ordering compare_randomized(std::uint64_t a, std::uint64_t b, int k_bits, const Rational& delta, Channel& ch,
                            PublicCoins& coins, PartyId alice, PartyId bob) {
    if (k_bits < 1 || k_bits > 63) throw PreconditionError("compare_randomized needs 1 <= k_bits <= 63");
    if (delta <= 0 || delta >= 1) throw PreconditionError("compare_randomized needs 0 < delta < 1");
    if ((a >> k_bits) != 0 || (b >> k_bits) != 0) throw PreconditionError("operand wider than k_bits");

    const int probes = ceil_log2(static_cast<std::uint64_t>(k_bits) + 1);
    const int f = static_cast<int>(ceil_log2(static_cast<std::uint64_t>(to_int64(ceil_of(1 / delta))))) +
                  ceil_log2(static_cast<std::uint64_t>(std::max(probes, 1)));

    // longest common prefix length lies in [lo, hi]
    std::int64_t lo = 0, hi = k_bits;
    while (lo < hi) {
        std::int64_t len = (lo + hi + 1) / 2;
        BitString r = coins.draw_public_bits(len * f);
        std::uint64_t fa = fingerprint(a >> (k_bits - len), len, f, r);
        std::uint64_t fb = fingerprint(b >> (k_bits - len), len, f, r);
        ch.exchange({{alice, encode(fa, f)}, {bob, encode(fb, f)}});
        if (fa == fb)
            lo = len;
        else
            hi = len - 1;
    }
    if (lo == k_bits) return Ordering::Equal;
    bool a_bit = ((a >> (k_bits - 1 - lo)) & 1U) != 0;
    BitString one;
    one.push_back(a_bit);
    ch.exchange({{alice, one}});
    return a_bit ? Ordering::Greater : Ordering::Less;
}

Rational crossing_rand_delta(std::int64_t m) {
    std::int64_t l = std::max<std::int64_t>(1, ceil_log2(static_cast<std::uint64_t>(m)));
    return make_rational(1, std::max(l * l, 3 * l));
}

CrossingAnswer solve_crossing_rand(const CrossingView& v, Channel& ch, PublicCoins& coins) {
    const int w = width_for(static_cast<std::uint64_t>(v.value_max));
    const Rational delta = crossing_rand_delta(v.m);
    std::int64_t lo = 0, hi = v.m;
    while (hi - lo > 1) {
        std::int64_t mid = lo + (hi - lo) / 2;
        std::int64_t xv = v.x(mid), yv = v.y(mid);
        check_range(xv, v.value_max, "x");
        check_range(yv, v.value_max, "y");
        Ordering o = compare_randomized(static_cast<std::uint64_t>(xv), static_cast<std::uint64_t>(yv), w, delta, ch,
                                        coins, v.alice, v.bob);
        if (o != Ordering::Less)
            hi = mid;
        else
            lo = mid;
    }
    return {hi, Orientation::XBelowThenAbove};
}

CrossingResult solve_crossing_rand(const CrossingInstance& inst, PublicCoins& coins) {
    inst.validate();
    CrossingResult out;
    Channel ch(out.transcript);
    out.answer = solve_crossing_rand(view_of(inst), ch, coins);
    out.transcript.finish();
    return out;
}

// ---------------------------------------------------------------------------

CrossingAnswer solve_mon_crossing(const CrossingView& v, Channel& ch) {
    const std::int64_t m = v.m;
    const std::int64_t k = v.value_max;
    if (m < 1 || k < 1) throw PreconditionError("mon-crossing needs m, k >= 1");
    auto x_at = [&](std::int64_t i) { return i <= m ? v.x(i) : k; };
    auto y_at = [&](std::int64_t i) { return i <= m ? v.y(i) : 0; };

    // The answer lies in (lo, hi]. Values are tracked inside the window
    // [base, base + span]; every window move is justified by a probe at some
    // mid, which guarantees that no index has x and y strictly outside the
    // window on the same side. Hence x - y keeps its sign after clamping to
    // the window, even where the clamped values tie.
    std::int64_t lo = 0;
    std::int64_t hi = static_cast<std::int64_t>(next_pow2(static_cast<std::uint64_t>(m)));
    std::int64_t base = 0;
    std::int64_t span = static_cast<std::int64_t>(next_pow2(static_cast<std::uint64_t>(k)));

    auto one_bit = [](bool b) {
        BitString s;
        s.push_back(b);
        return s;
    };

    while (hi - lo > 1) {
        std::int64_t mid = lo + (hi - lo) / 2;
        std::int64_t xv = x_at(mid);
        std::int64_t yv = y_at(mid);
        if (span >= 1) {
            std::int64_t t = base + std::max<std::int64_t>(1, span / 2);
            bool x_high = xv >= t;
            bool y_high = yv >= t;
            ch.exchange({{v.alice, one_bit(x_high)}, {v.bob, one_bit(y_high)}});
            if (x_high == y_high) {
                if (x_high) base = t;
                span /= 2;
            } else if (x_high) {
                hi = mid;
            } else {
                lo = mid;
            }
        } else {
            // single-value window: x >= y exactly when x >= base >= y
            bool x_ge = xv >= base;
            bool y_le = yv <= base;
            ch.exchange({{v.alice, one_bit(x_ge)}, {v.bob, one_bit(y_le)}});
            if (x_ge && y_le)
                hi = mid;
            else
                lo = mid;
        }
    }
    if (hi > m) throw MalformedInstanceError("mon-crossing search left the instance; inputs are not monotone");
    return {hi, Orientation::XBelowThenAbove};
}

CrossingResult solve_mon_crossing(const MonCrossingInstance& inst) {
    inst.validate();
    CrossingView v;
    v.m = inst.m;
    v.value_max = inst.k;
    v.x = [&inst](std::int64_t i) { return inst.x[static_cast<std::size_t>(i)]; };
    v.y = [&inst](std::int64_t i) { return inst.y[static_cast<std::size_t>(i)]; };
    CrossingResult out;
    Channel ch(out.transcript);
    out.answer = solve_mon_crossing(v, ch);
    out.transcript.finish();
    return out;
}

// ---------------------------------------------------------------------------

PkLift lift_pk(const std::vector<std::vector<std::int64_t>>& xs, const std::vector<std::int64_t>& y, std::int64_t z) {
    const auto k = static_cast<std::int64_t>(xs.size());
    require(k >= 1, "lift needs at least one block");
    require(y.size() >= 2, "y needs m+1 >= 2 entries");
    const auto m = static_cast<std::int64_t>(y.size()) - 1;
    require(z >= 1 && z <= k, "block selector z must lie in 1..k");
    MonCrossingInstance{m, m, xs.front(), y}.validate();
    for (const auto& block : xs) MonCrossingInstance{m, m, block, y}.validate();

    PkLift out;
    out.block_offset = (z - 1) * m;
    out.block_size = m;
    auto& L = out.lifted;
    L.m = k * m;
    L.k = k * m;
    L.x.assign(static_cast<std::size_t>(k * m + 1), 0);
    L.y.assign(static_cast<std::size_t>(k * m + 1), 0);
    for (std::int64_t j = 1; j <= k; ++j)
        for (std::int64_t i = 1; i <= m; ++i)
            L.x[static_cast<std::size_t>((j - 1) * m + i)] = xs[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i)] + (j - 1) * m;
    for (std::int64_t t = 0; t <= k * m; ++t) {
        std::int64_t val;
        if (t <= (z - 1) * m)
            val = m * k;
        else if (t >= z * m)
            val = 0;
        else
            val = y[static_cast<std::size_t>(t - (z - 1) * m)] + (z - 1) * m;
        L.y[static_cast<std::size_t>(t)] = val;
    }
    L.validate();
    return out;
}

std::int64_t PkLift::back_map(std::int64_t lifted_index) const {
    std::int64_t i = lifted_index - block_offset;
    if (i < 1 || i > block_size) throw ReductionContractError("lifted index outside the selected block");
    return i;
}

}  // namespace fairdiv
