#include <algorithm>
#include <array>
#include <optional>

#include "fairdiv/crossing.hpp"
#include "fairdiv/errors.hpp"
#include "fairdiv/protocols.hpp"
#include "wire.hpp"

namespace fairdiv {

namespace {

struct CutPair {
    std::int64_t left = 0;
    std::int64_t right = 0;
    friend bool operator==(const CutPair&, const CutPair&) = default;
};

class Party {
public:
    Party(const DensityValuation& v, std::int64_t m) : v_(&v), m_(m) {}

    Rational at(std::int64_t j) const { return v_->prefix(make_rational(j, m_)); }
    // Smallest grid index j with v([0, j/m]) >= target; m + 1 if none.
    std::int64_t mark(const Rational& target) const {
        if (target > 1) return m_ + 1;
        Rational scaled = v_->point_of_prefix(target) * m_;
        return to_int64(ceil_of(scaled));
    }
    std::array<Rational, 3> pieces(const CutPair& c) const {
        Rational l = at(c.left), r = at(c.right);
        return {l, r - l, 1 - r};
    }
    // Bit q set when piece q is within tol of this party's favourite.
    std::vector<bool> mask(const CutPair& c, const Rational& tol) const {
        auto p = pieces(c);
        Rational best = std::max({p[0], p[1], p[2]});
        return {p[0] >= best - tol, p[1] >= best - tol, p[2] >= best - tol};
    }

private:
    const DensityValuation* v_;
    std::int64_t m_;
};

// Piece index for each party, or nothing if the masks admit no bijection.
std::optional<std::array<int, 3>> assign(const std::vector<std::vector<bool>>& masks, std::size_t offset) {
    std::array<int, 3> piece{0, 1, 2};
    do {
        bool ok = true;
        for (int p = 0; p < 3; ++p) ok = ok && masks[p][offset + static_cast<std::size_t>(piece[p])];
        if (ok) return piece;
    } while (std::next_permutation(piece.begin(), piece.end()));
    return std::nullopt;
}

Allocation allocation_of(const CutPair& c, std::int64_t m, const std::array<int, 3>& piece) {
    Allocation a{{make_rational(c.left, m), make_rational(c.right, m)}, {0, 0, 0}};
    for (int p = 0; p < 3; ++p) a.assignment[static_cast<std::size_t>(piece[p])] = p;
    return a;
}

std::vector<CutPair> candidates(const std::vector<std::int64_t>& fixed, const std::vector<std::int64_t>& moving,
                                bool fixed_is_left, std::int64_t m) {
    std::vector<CutPair> out;
    for (auto f : fixed) {
        for (auto g : moving) {
            f = std::clamp<std::int64_t>(f, 0, m);
            g = std::clamp<std::int64_t>(g, 0, m);
            CutPair c = fixed_is_left ? CutPair{f, g} : CutPair{g, f};
            if (c.left > c.right) continue;
            if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
        }
    }
    return out;
}

}  // namespace

std::int64_t envy_free_grid(const Rational& density_bound, const Rational& eps) {
    return wire::grid_for(10 * density_bound, eps);
}

Allocation envy_free_three(const std::vector<DensityValuation>& valuations, const Rational& eps, Channel& channel,
                           EnvyFreeTrace* trace) {
    if (valuations.size() != 3) throw PreconditionError("envy_free_three needs exactly three valuations");
    if (eps <= 0 || eps >= 1) throw PreconditionError("eps must lie in (0, 1)");
    const std::int64_t m = envy_free_grid(public_density_bound(valuations), eps);
    const int w = width_for(static_cast<std::uint64_t>(m + 1));
    std::vector<Party> party;
    for (const auto& v : valuations) party.emplace_back(v, m);
    EnvyFreeTrace local;
    EnvyFreeTrace& tr = trace ? *trace : local;
    tr = {};

    // 1. marks
    wire::Outgoing marks_out;
    for (int p = 0; p < 3; ++p)
        marks_out.emplace_back(p, std::vector<std::int64_t>{party[p].mark(make_rational(1, 3)),
                                                            party[p].mark(make_rational(1, 2)),
                                                            party[p].mark(make_rational(2, 3))});
    auto marks = wire::exchange_ints(channel, marks_out, w);
    std::array<int, 3> role{0, 1, 2};
    std::sort(role.begin(), role.end(), [&](int a, int b) {
        return marks[a][0] != marks[b][0] ? marks[a][0] < marks[b][0] : a < b;
    });
    const int A = role[0], B = role[1], C = role[2];
    const std::int64_t l_A = marks[A][0], h_A = marks[A][1], r_A = marks[A][2], r_B = marks[B][2];

    // 2. early exit at A's thirds
    const CutPair thirds{l_A, r_A};
    const Rational half_eps = eps / 2;
    auto early = wire::exchange_masks(channel, {{0, party[0].mask(thirds, half_eps)},
                                                {1, party[1].mask(thirds, half_eps)},
                                                {2, party[2].mask(thirds, half_eps)}});
    if (auto piece = assign(early, 0)) {
        tr.early_exit = true;
        return allocation_of(thirds, m, *piece);
    }
    auto favourite = [&](int p) {
        const auto& b = early[p];
        return (b[0] ? 1 : 0) + (b[1] ? 1 : 0) + (b[2] ? 1 : 0) == 1 ? static_cast<int>(std::find(b.begin(), b.end(), true) - b.begin())
                                                                   : -1;
    };
    const int shared = favourite(B);
    if (shared < 1 || shared != favourite(C))
        throw ProtocolError("early-exit masks are inconsistent with the sorted thirds");
    tr.branch = shared;

    // 3. one monotone crossing between A and B
    std::int64_t j0 = 0, k0 = 0;
    SequenceFn seq_a, seq_b;  // A's and B's sequence inside [j0, k0]
    CrossingView view;
    view.m = m;
    view.value_max = m;
    if (shared == 1) {
        // left cut i sweeps [l_A, h_A]; A balances left and right, B ties the
        // middle with its better outside piece
        j0 = l_A;
        k0 = h_A;
        seq_a = [&](std::int64_t i) { return std::max(i, party[A].mark(1 - party[A].at(i))); };
        seq_b = [&](std::int64_t i) {
            Rational pi = party[B].at(i);
            std::int64_t y = std::max({i, party[B].mark(2 * pi), party[B].mark((1 + pi) / 2)});
            return std::min(y, m);
        };
    } else {
        // right cut i sweeps [r_A, r_B]; A balances left and middle, B
        // balances left and right
        j0 = r_A;
        k0 = std::max(r_A, r_B);
        seq_a = [&](std::int64_t i) { return party[A].mark(party[A].at(i) / 2); };
        seq_b = [&](std::int64_t i) { return std::min(party[B].mark(1 - party[B].at(i)), m); };
    }
    if (j0 < 1 || k0 >= m) throw ProtocolError("sweep range touches the ends of the grid");
    // increasing sequence is padded 0 .. M, decreasing one M .. 0
    const SequenceFn& up = shared == 1 ? seq_b : seq_a;
    const SequenceFn& down = shared == 1 ? seq_a : seq_b;
    SequenceFn padded_up = [&, j0, k0](std::int64_t t) { return t < j0 ? 0 : t > k0 ? m : up(t); };
    SequenceFn padded_down = [&, j0, k0](std::int64_t t) { return t < j0 ? m : t > k0 ? 0 : down(t); };
    view.x = padded_up;
    view.y = padded_down;
    view.alice = shared == 1 ? B : A;
    view.bob = shared == 1 ? A : B;
    const auto before = static_cast<std::int64_t>(channel.transcript().rounds().size());
    const std::int64_t t = solve_mon_crossing(view, channel).index;
    tr.crossing_rounds = static_cast<std::int64_t>(channel.transcript().rounds().size()) - before;

    // 4. sequence values around the answer
    auto near = wire::exchange_ints(channel, {{view.alice, {padded_up(t - 1), padded_up(t)}},
                                              {view.bob, {padded_down(t - 1), padded_down(t)}}},
                                    w);
    const std::int64_t up0 = near[0][0], up1 = near[0][1], down0 = near[1][0], down1 = near[1][1];
    // up_{t-1} <= down_{t-1} and up_t >= down_t: the intervals [up_{t-1}, up_t]
    // and [down_t, down_{t-1}] meet; z is the largest common point
    const std::int64_t z = std::min(up1, down0);
    std::vector<std::int64_t> moving{z, z - 1, z + 1, up0, up1, down0, down1};
    auto cands = candidates({t, t - 1}, moving, shared == 1, m);

    // 5. masks over the candidates
    std::vector<std::pair<PartyId, std::vector<bool>>> mask_out;
    for (int p = 0; p < 3; ++p) {
        std::vector<bool> bits;
        for (const auto& c : cands) {
            auto b = party[p].mask(c, eps);
            bits.insert(bits.end(), b.begin(), b.end());
        }
        mask_out.emplace_back(p, std::move(bits));
    }
    auto masks = wire::exchange_masks(channel, mask_out);
    for (std::size_t c = 0; c < cands.size(); ++c)
        if (auto piece = assign(masks, 3 * c)) {
            tr.candidate = static_cast<int>(c);
            return allocation_of(cands[c], m, *piece);
        }
    throw ProtocolError("no candidate cut pair admits an envy-free assignment");
}

ProtocolRun envy_free_three(const std::vector<DensityValuation>& valuations, const Rational& eps,
                            EnvyFreeTrace* trace) {
    ProtocolRun run;
    Channel ch(run.transcript);
    run.allocation = envy_free_three(valuations, eps, ch, trace);
    run.transcript.finish();
    return run;
}

}  // namespace fairdiv
