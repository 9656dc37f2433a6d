#include "fairdiv/valuation.hpp"

#include <algorithm>
#include <string>

namespace fairdiv {

namespace {

void require_interval(const Rational& a, const Rational& b) {
    if (a > b) throw PreconditionError("eval requires a <= b, got a=" + to_string(a) + " b=" + to_string(b));
}

// Shared machinery for valuations defined by integer grid prefixes
// W_k = m * v([0, k/m]) with linear interpolation inside each cell.
template <typename PrefixUnits>
Rational grid_prefix(std::int64_t m, const PrefixUnits& units, const Rational& x) {
    if (x <= 0) return 0;
    if (x >= 1) return 1;
    Rational scaled = x * m;
    std::int64_t k = to_int64(floor_of(scaled));
    std::int64_t wk = units(k);
    if (scaled == k) return make_rational(wk, m);
    std::int64_t wk1 = units(k + 1);
    return (Rational(wk) + (scaled - k) * (wk1 - wk)) / m;
}

// Smallest k in [0, m] with W_k >= target_units.
template <typename PrefixUnits>
std::int64_t first_grid_at_least(std::int64_t m, const PrefixUnits& units, const Rational& target_units) {
    std::int64_t lo = 0;
    std::int64_t hi = m;
    while (lo < hi) {
        std::int64_t mid = lo + (hi - lo) / 2;
        if (Rational(units(mid)) >= target_units)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

template <typename PrefixUnits>
Rational grid_point_of_prefix(std::int64_t m, const PrefixUnits& units, const Rational& target) {
    if (target <= 0) return 0;
    Rational target_units = target * m;
    std::int64_t k = first_grid_at_least(m, units, target_units);
    std::int64_t wk = units(k);
    if (Rational(wk) == target_units) return make_rational(k, m);
    std::int64_t wprev = units(k - 1);
    return (Rational(k - 1) + (target_units - wprev) / (wk - wprev)) / m;
}

template <typename Prefix, typename PointOf>
CakePoint cut_via_prefix(const Prefix& prefix, const PointOf& point_of, const CakePoint& a, const Rational& alpha) {
    if (alpha < 0) throw PreconditionError("cut requires alpha >= 0");
    if (alpha == 0) return a;
    Rational start = prefix(a.value());
    Rational target = start + alpha;
    if (target > 1)
        throw InfeasibleCutError("cut of " + to_string(alpha) + " from " + to_string(a.value()) +
                                 " exceeds remaining mass " + to_string(Rational(1 - start)));
    return point_of(target);
}

template <typename Grid>
BitString encode_grid_answer(const Grid& v, const RwQuery& query) {
    const std::int64_t m = v.m();
    const int w = width_for(static_cast<std::uint64_t>(m));
    auto units = [&](std::int64_t k) { return v.prefix_units(k); };
    BitString out;
    if (const auto* q = std::get_if<EvalQuery>(&query)) {
        Rational scaled = q->y.value() * m;
        std::int64_t k = to_int64(floor_of(scaled));
        if (scaled == k) {
            out.push_back(false);
            out.append_uint(static_cast<std::uint64_t>(k), w);
            out.append_uint(static_cast<std::uint64_t>(units(k)), w);
        } else {
            out.push_back(true);
            out.append_uint(static_cast<std::uint64_t>(k), w);
            out.append_uint(static_cast<std::uint64_t>(units(k)), w);
            out.append_uint(static_cast<std::uint64_t>(units(k + 1)), w);
        }
        return out;
    }
    const auto& q = std::get<CutQuery>(query);
    if (q.alpha < 0 || q.alpha > 1) throw PreconditionError("cut query value must lie in [0,1]");
    Rational target_units = q.alpha * m;
    std::int64_t k = first_grid_at_least(m, units, target_units);
    if (Rational(units(k)) == target_units) {
        out.push_back(false);
        out.append_uint(static_cast<std::uint64_t>(k), w);
    } else {
        out.push_back(true);
        out.append_uint(static_cast<std::uint64_t>(k - 1), w);
        out.append_uint(static_cast<std::uint64_t>(units(k - 1)), w);
        out.append_uint(static_cast<std::uint64_t>(units(k)), w);
    }
    return out;
}

}  // namespace

CakePoint::CakePoint(Rational value) : value_(std::move(value)) {
    value_.canonicalize();
    if (value_ < 0 || value_ > 1) throw PreconditionError("cake point outside [0,1]: " + to_string(value_));
}

// ---------------------------------------------------------------------------

DensityValuation::DensityValuation(std::vector<Rational> breakpoints, std::vector<Rational> densities,
                                   Rational density_bound)
    : breakpoints_(std::move(breakpoints)), densities_(std::move(densities)), density_bound_(std::move(density_bound)) {
    if (breakpoints_.size() < 2 || densities_.size() + 1 != breakpoints_.size())
        throw PreconditionError("need s+1 breakpoints for s >= 1 densities");
    if (breakpoints_.front() != 0 || breakpoints_.back() != 1)
        throw PreconditionError("breakpoints must start at 0 and end at 1");
    cumulative_.reserve(breakpoints_.size());
    cumulative_.emplace_back(0);
    for (std::size_t s = 0; s < densities_.size(); ++s) {
        if (!(breakpoints_[s] < breakpoints_[s + 1]))
            throw PreconditionError("breakpoints must be strictly increasing");
        if (densities_[s] < 0) throw PreconditionError("densities must be nonnegative");
        if (densities_[s] > density_bound_)
            throw PreconditionError("density " + to_string(densities_[s]) + " exceeds bound " +
                                    to_string(density_bound_));
        cumulative_.push_back(cumulative_.back() + densities_[s] * (breakpoints_[s + 1] - breakpoints_[s]));
    }
    if (cumulative_.back() != 1)
        throw PreconditionError("total mass must be exactly 1, got " + to_string(cumulative_.back()));
}

DensityValuation DensityValuation::uniform(Rational density_bound) {
    return DensityValuation({Rational(0), Rational(1)}, {Rational(1)}, std::move(density_bound));
}

Rational DensityValuation::min_density() const { return *std::min_element(densities_.begin(), densities_.end()); }
Rational DensityValuation::max_density() const { return *std::max_element(densities_.begin(), densities_.end()); }

Rational DensityValuation::prefix(const Rational& x) const {
    if (x <= 0) return 0;
    if (x >= 1) return 1;
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    auto s = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    return cumulative_[s] + densities_[s] * (x - breakpoints_[s]);
}

Rational DensityValuation::eval(const CakePoint& a, const CakePoint& b) const {
    require_interval(a.value(), b.value());
    return prefix(b.value()) - prefix(a.value());
}

Rational DensityValuation::point_of_prefix(const Rational& target) const {
    if (target <= 0) return 0;
    if (target > 1) throw InfeasibleCutError("prefix target above total mass");
    // first segment whose right-end cumulative mass reaches the target; its
    // left-end mass is strictly below, so its density is positive.
    auto it = std::lower_bound(cumulative_.begin() + 1, cumulative_.end(), target);
    auto s = static_cast<std::size_t>(it - cumulative_.begin()) - 1;
    return breakpoints_[s] + (target - cumulative_[s]) / densities_[s];
}

CakePoint DensityValuation::cut(const CakePoint& a, const Rational& alpha) const {
    return cut_via_prefix([this](const Rational& x) { return prefix(x); },
                          [this](const Rational& t) { return CakePoint(point_of_prefix(t)); }, a, alpha);
}

// ---------------------------------------------------------------------------

SimpleValuation::SimpleValuation(std::int64_t m, std::vector<std::int64_t> cell_weights)
    : m_(m), cell_weights_(std::move(cell_weights)) {
    if (m_ < 1) throw PreconditionError("grid size must be positive");
    if (static_cast<std::int64_t>(cell_weights_.size()) != m_)
        throw PreconditionError("need exactly m cell weights");
    prefix_.reserve(static_cast<std::size_t>(m_) + 1);
    prefix_.push_back(0);
    for (auto w : cell_weights_) {
        if (w < 0) throw PreconditionError("cell weights must be nonnegative");
        prefix_.push_back(prefix_.back() + w);
    }
    if (prefix_.back() != m_) throw PreconditionError("cell weights must sum to m");
}

std::int64_t SimpleValuation::prefix_units(std::int64_t k) const { return prefix_.at(static_cast<std::size_t>(k)); }

Rational SimpleValuation::prefix(const Rational& x) const {
    return grid_prefix(m_, [this](std::int64_t k) { return prefix_units(k); }, x);
}

Rational SimpleValuation::eval(const CakePoint& a, const CakePoint& b) const {
    require_interval(a.value(), b.value());
    return prefix(b.value()) - prefix(a.value());
}

CakePoint SimpleValuation::cut(const CakePoint& a, const Rational& alpha) const {
    auto units = [this](std::int64_t k) { return prefix_units(k); };
    return cut_via_prefix([&](const Rational& x) { return grid_prefix(m_, units, x); },
                          [&](const Rational& t) { return CakePoint(grid_point_of_prefix(m_, units, t)); }, a, alpha);
}

DensityValuation SimpleValuation::as_density() const {
    std::vector<Rational> bps;
    std::vector<Rational> dens;
    bps.reserve(static_cast<std::size_t>(m_) + 1);
    for (std::int64_t k = 0; k <= m_; ++k) bps.push_back(make_rational(k, m_));
    std::int64_t max_w = 1;
    for (auto w : cell_weights_) {
        dens.emplace_back(w);
        max_w = std::max(max_w, w);
    }
    return DensityValuation(std::move(bps), std::move(dens), Rational(max_w));
}

// ---------------------------------------------------------------------------

RoundedGrid::RoundedGrid(DensityValuation v, std::int64_t m) : source_(std::move(v)), m_(m) {
    if (m_ < 1) throw PreconditionError("grid size must be positive");
}

std::int64_t RoundedGrid::prefix_units(std::int64_t k) const {
    if (k <= 0) return 0;
    if (k >= m_) return m_;
    return to_int64(ceil_of(source_.prefix(make_rational(k, m_)) * m_));
}

Rational RoundedGrid::prefix(const Rational& x) const {
    return grid_prefix(m_, [this](std::int64_t k) { return prefix_units(k); }, x);
}

Rational RoundedGrid::eval(const CakePoint& a, const CakePoint& b) const {
    require_interval(a.value(), b.value());
    return prefix(b.value()) - prefix(a.value());
}

CakePoint RoundedGrid::cut(const CakePoint& a, const Rational& alpha) const {
    auto units = [this](std::int64_t k) { return prefix_units(k); };
    return cut_via_prefix([&](const Rational& x) { return grid_prefix(m_, units, x); },
                          [&](const Rational& t) { return CakePoint(grid_point_of_prefix(m_, units, t)); }, a, alpha);
}

SimpleValuation RoundedGrid::materialize() const { return simplify(source_, m_); }

SimpleValuation simplify(const DensityValuation& v, std::int64_t m) {
    if (m < 2) throw PreconditionError("simplify requires m >= 2");
    std::vector<std::int64_t> weights;
    weights.reserve(static_cast<std::size_t>(m));
    std::int64_t prev = 0;
    for (std::int64_t k = 1; k <= m; ++k) {
        std::int64_t cur = k == m ? m : to_int64(ceil_of(v.prefix(make_rational(k, m)) * m));
        weights.push_back(cur - prev);
        prev = cur;
    }
    return SimpleValuation(m, std::move(weights));
}

DensityValuation make_hungry(const DensityValuation& v, const Rational& eps) {
    if (eps <= 0 || eps >= 1) throw PreconditionError("make_hungry requires 0 < eps < 1");
    Rational half = eps / 2;
    Rational keep = 1 - half;
    std::vector<Rational> dens;
    dens.reserve(v.segments());
    for (const auto& d : v.densities()) dens.push_back(keep * d + half);
    Rational bound = v.density_bound();
    for (const auto& d : dens) bound = std::max(bound, d);
    return DensityValuation(v.breakpoints(), std::move(dens), bound);
}

// ---------------------------------------------------------------------------

BitString encode_query_answer(const SimpleValuation& v, const RwQuery& query) { return encode_grid_answer(v, query); }
BitString encode_query_answer(const RoundedGrid& v, const RwQuery& query) { return encode_grid_answer(v, query); }

Rational decode_query_answer(std::int64_t m, const RwQuery& query, const BitString& bits) {
    const int w = width_for(static_cast<std::uint64_t>(m));
    BitReader in(bits);
    bool interior = in.read_bit();
    auto k = static_cast<std::int64_t>(in.read_uint(w));
    if (const auto* q = std::get_if<EvalQuery>(&query)) {
        auto wk = static_cast<std::int64_t>(in.read_uint(w));
        if (!interior) return make_rational(wk, m);
        auto wk1 = static_cast<std::int64_t>(in.read_uint(w));
        return (Rational(wk) + (q->y.value() * m - k) * (wk1 - wk)) / m;
    }
    const auto& q = std::get<CutQuery>(query);
    if (!interior) return make_rational(k, m);
    auto wk = static_cast<std::int64_t>(in.read_uint(w));
    auto wk1 = static_cast<std::int64_t>(in.read_uint(w));
    return (Rational(k) + (q.alpha * m - wk) / (wk1 - wk)) / m;
}

}  // namespace fairdiv
