#include <algorithm>
#include <numeric>
#include <string>

#include "fairdiv/errors.hpp"
#include "fairdiv/protocols.hpp"
#include "wire.hpp"

namespace fairdiv {

namespace {

class ExactOracle final : public RwOracle {
public:
    explicit ExactOracle(const std::vector<DensityValuation>& vals) : vals_(&vals) {}
    Rational eval(PartyId party, const CakePoint& y) override { return at(party).prefix(y.value()); }
    Rational cut(PartyId party, const Rational& alpha) override { return at(party).point_of_prefix(alpha); }

private:
    const DensityValuation& at(PartyId p) const {
        if (p < 0 || p >= static_cast<PartyId>(vals_->size())) throw ProtocolError("query names a missing party");
        return (*vals_)[static_cast<std::size_t>(p)];
    }
    const std::vector<DensityValuation>* vals_;
};

// Every query becomes one round in which only the queried party speaks.
class SimulatedOracle final : public RwOracle {
public:
    SimulatedOracle(std::vector<RoundedGrid> grids, Channel& channel, std::int64_t query_bound)
        : grids_(std::move(grids)), channel_(&channel), query_bound_(query_bound) {}

    Rational eval(PartyId party, const CakePoint& y) override { return ask(party, EvalQuery{y}); }
    Rational cut(PartyId party, const Rational& alpha) override {
        if (alpha < 0 || alpha > 1) throw ProtocolError("cut query needs alpha in [0,1], got " + to_string(alpha));
        return ask(party, CutQuery{alpha});
    }

private:
    Rational ask(PartyId party, const RwQuery& q) {
        if (++asked_ > query_bound_)
            throw ProtocolError("program exceeded its declared bound of " + std::to_string(query_bound_) + " queries");
        if (party < 0 || party >= static_cast<PartyId>(grids_.size())) throw ProtocolError("query names a missing party");
        const auto& grid = grids_[static_cast<std::size_t>(party)];
        channel_->exchange({{party, encode_query_answer(grid, q)}});
        return decode_query_answer(grid.m(), q, channel_->transcript().rounds().back().front().payload);
    }

    std::vector<RoundedGrid> grids_;
    Channel* channel_;
    std::int64_t query_bound_;
    std::int64_t asked_ = 0;
};

Allocation choose_between_halves(RwOracle& o, const Rational& x) {
    Rational left = o.eval(1, x);
    // Bob takes the piece he values more, the left one on ties
    return left >= 1 - left ? Allocation{{x}, {1, 0}} : Allocation{{x}, {0, 1}};
}

struct Piece {
    Rational right;
    PartyId owner;
};

void halve(RwOracle& o, std::vector<PartyId> group, const Rational& a, const Rational& b, std::vector<Piece>& out) {
    const auto s = static_cast<std::int64_t>(group.size());
    if (s == 1) {
        out.push_back({b, group.front()});
        return;
    }
    const std::int64_t h = s / 2;
    std::vector<std::pair<Rational, PartyId>> marks;
    for (PartyId p : group) {
        Rational va = o.eval(p, a);
        Rational vb = o.eval(p, b);
        Rational target = va + (vb - va) * h / s;
        marks.emplace_back(o.cut(p, target), p);
    }
    std::sort(marks.begin(), marks.end());
    const Rational c = marks[static_cast<std::size_t>(h - 1)].first;
    std::vector<PartyId> left, right;
    for (std::size_t j = 0; j < marks.size(); ++j)
        (static_cast<std::int64_t>(j) < h ? left : right).push_back(marks[j].second);
    halve(o, left, a, c, out);
    halve(o, right, c, b, out);
}

}  // namespace

RwProgram cut_and_choose() {
    RwProgram p;
    p.name = "cut-and-choose";
    p.parties = 2;
    p.query_bound = 2;
    p.cut_bound = 1;
    p.run = [](RwOracle& o) { return choose_between_halves(o, o.cut(0, make_rational(1, 2))); };
    return p;
}

std::int64_t even_paz_queries(int n) {
    if (n <= 1) return 0;
    return 3 * n + even_paz_queries(n / 2) + even_paz_queries(n - n / 2);
}

RwProgram even_paz(int n) {
    if (n < 1) throw PreconditionError("even_paz needs n >= 1");
    RwProgram p;
    p.name = "even-paz";
    p.parties = n;
    p.query_bound = even_paz_queries(n);
    p.cut_bound = n - 1;
    p.run = [n](RwOracle& o) {
        std::vector<PartyId> all(static_cast<std::size_t>(n));
        std::iota(all.begin(), all.end(), 0);
        std::vector<Piece> pieces;
        halve(o, all, 0, 1, pieces);
        Allocation a;
        for (std::size_t j = 0; j < pieces.size(); ++j) {
            if (j + 1 < pieces.size()) a.cuts.push_back(pieces[j].right);
            a.assignment.push_back(pieces[j].owner);
        }
        return a;
    };
    return p;
}

RwProgram irrational_guard(const Integer& denominator_limit) {
    RwProgram p;
    p.name = "irrational-guard";
    p.parties = 2;
    p.query_bound = 2;
    p.cut_bound = 1;
    p.run = [denominator_limit](RwOracle& o) {
        Rational x = o.cut(0, make_rational(1, 2));
        if (x.get_den() > denominator_limit) return Allocation{{}, {0}};
        return choose_between_halves(o, x);
    };
    return p;
}

std::int64_t rw_grid(const Rational& density_bound, std::int64_t cut_bound, const Rational& eps) {
    return wire::grid_for((2 * density_bound + 1) * (cut_bound + 1), eps);
}

namespace {

void check_program_input(const RwProgram& program, const std::vector<DensityValuation>& valuations) {
    if (!program.run) throw PreconditionError("program has no body");
    if (static_cast<int>(valuations.size()) != program.parties)
        throw PreconditionError(program.name + " expects " + std::to_string(program.parties) + " valuations");
}

void check_program_output(const RwProgram& program, const Allocation& a) {
    a.validate(program.parties);
    if (static_cast<std::int64_t>(a.cuts.size()) > program.cut_bound)
        throw ProtocolError(program.name + " used more cuts than declared");
}

}  // namespace

Allocation run_rw_simulated(const RwProgram& program, const std::vector<DensityValuation>& valuations,
                            const Rational& eps, Channel& channel) {
    check_program_input(program, valuations);
    if (eps <= 0 || eps >= 1) throw PreconditionError("eps must lie in (0, 1)");
    const std::int64_t m = rw_grid(public_density_bound(valuations), program.cut_bound, eps);
    std::vector<RoundedGrid> grids;
    for (const auto& v : valuations) grids.emplace_back(v, m);
    SimulatedOracle oracle(std::move(grids), channel, program.query_bound);
    Allocation a = program.run(oracle);
    check_program_output(program, a);
    return a;
}

ProtocolRun run_rw_simulated(const RwProgram& program, const std::vector<DensityValuation>& valuations,
                             const Rational& eps) {
    ProtocolRun run;
    Channel ch(run.transcript);
    run.allocation = run_rw_simulated(program, valuations, eps, ch);
    run.transcript.finish();
    return run;
}

Allocation run_rw_exact(const RwProgram& program, const std::vector<DensityValuation>& valuations) {
    check_program_input(program, valuations);
    ExactOracle oracle(valuations);
    Allocation a = program.run(oracle);
    check_program_output(program, a);
    return a;
}

}  // namespace fairdiv
