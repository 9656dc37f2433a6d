#include "fairdiv/movingknife.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include "fairdiv/errors.hpp"

namespace fairdiv {

namespace {

// [begin, end) ranges of step.devices, one per stage.
std::vector<std::pair<std::size_t, std::size_t>> stage_ranges(const MovingKnifeStep& step) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t d = 0; d < step.devices.size(); ++d) {
        if (out.empty() || step.devices[d].stage != step.devices[out.back().first].stage)
            out.emplace_back(d, d + 1);
        else
            out.back().second = d + 1;
    }
    return out;
}

int bit_length(const Integer& n) { return n <= 0 ? 0 : static_cast<int>(mpz_sizeinbase(n.get_mpz_t(), 2)); }

// Smallest b with 2^-b <= p.
int precision_bits(const Rational& p) {
    Rational inv = 1 / p;
    Integer c = ceil_of(inv);
    return c <= 1 ? 0 : bit_length(Integer(c - 1));
}

void write_integer(BitString& out, const Integer& value, int width) {
    for (int i = width - 1; i >= 0; --i) out.push_back(mpz_tstbit(value.get_mpz_t(), static_cast<mp_bitcnt_t>(i)) != 0);
}

Integer read_integer(BitReader& in, int width) {
    Integer v = 0;
    for (int i = 0; i < width; ++i) v = 2 * v + (in.read_bit() ? 1 : 0);
    return v;
}

// Fixed-width dyadic encoding of one device's announcements.
class Codec {
public:
    Codec(const Device& device, const Rational& precision)
        : knife_(device.kind == DeviceKind::knife), bits_(precision_bits(precision)) {
        scale_ = 1;
        mpz_mul_2exp(scale_.get_mpz_t(), scale_.get_mpz_t(), static_cast<mp_bitcnt_t>(bits_));
        limit_ = knife_ ? scale_ : Integer(ceil_of(Rational(device.magnitude * scale_)) + 1);
        width_ = std::max(1, bit_length(limit_));
    }

    void write(BitString& out, const Rational& value) const {
        Rational scaled = value * scale_ + Rational(1, 2);
        Integer q = floor_of(scaled);
        if (knife_) {
            q = std::clamp<Integer>(q, 0, limit_);
            write_integer(out, q, width_);
            return;
        }
        Integer mag = abs(q);
        if (mag > limit_) throw ProtocolError("device value " + to_string(value) + " exceeds its declared magnitude");
        out.push_back(q < 0);
        write_integer(out, mag, width_);
    }

    Rational read(BitReader& in) const {
        bool negative = !knife_ && in.read_bit();
        Integer mag = read_integer(in, width_);
        Rational v(negative ? Integer(-mag) : mag, scale_);
        v.canonicalize();
        return v;
    }

private:
    bool knife_;
    int bits_;
    int width_ = 1;
    Integer scale_;
    Integer limit_;
};

// Announces stages of device values at public times, one round per call.
class Announcer {
public:
    Announcer(const MovingKnifeStep& step, const Rational& eps, Channel& channel)
        : step_(&step), stages_(stage_ranges(step)), channel_(&channel) {
        for (std::size_t d = 0; d < step.devices.size(); ++d)
            codecs_.emplace_back(step.devices[d], cascade_precision(step, static_cast<int>(d) + 2, eps));
    }

    std::size_t stage_count() const { return stages_.size(); }
    std::size_t stage_of(std::size_t device_pos) const {
        for (std::size_t s = 0; s < stages_.size(); ++s)
            if (device_pos < stages_[s].second) return s;
        throw std::logic_error("device outside every stage");
    }

    // Each request names a point's values (values[0] = t) and the stage to
    // announce there; returns the bits sent.
    std::int64_t round(const std::vector<std::pair<std::vector<Rational>*, std::size_t>>& requests) {
        std::map<PartyId, BitString> payload;
        for (const auto& [values, s] : requests) {
            auto [begin, end] = stages_[s];
            std::vector<Rational> prior(values->begin(), values->begin() + static_cast<std::ptrdiff_t>(begin + 1));
            for (std::size_t d = begin; d < end; ++d) {
                const Device& dev = step_->devices[d];
                codecs_[d].write(payload[dev.controller], dev.dependence(prior));
            }
        }
        std::vector<Message> messages;
        std::int64_t bits = 0;
        for (auto& [sender, p] : payload) {
            bits += static_cast<std::int64_t>(p.size());
            messages.push_back({sender, std::move(p)});
        }
        channel_->exchange(std::move(messages));

        std::map<PartyId, BitReader> readers;
        for (const auto& msg : channel_->transcript().rounds().back()) readers.emplace(msg.sender, BitReader(msg.payload));
        for (const auto& [values, s] : requests) {
            auto [begin, end] = stages_[s];
            for (std::size_t d = begin; d < end; ++d)
                (*values)[d + 1] = codecs_[d].read(readers.at(step_->devices[d].controller));
        }
        return bits;
    }

private:
    const MovingKnifeStep* step_;
    std::vector<std::pair<std::size_t, std::size_t>> stages_;
    std::vector<Codec> codecs_;
    Channel* channel_;
};

void require_time(const MovingKnifeStep& step, const Rational& t) {
    if (t < step.alpha || t > step.omega) throw PreconditionError("time " + to_string(t) + " lies outside the step");
}

}  // namespace

Rational MovingKnifeStep::zeta() const {
    Rational z = 1;
    for (const auto& d : devices) z = std::max(z, d.lipschitz);
    return z;
}

void MovingKnifeStep::validate() const {
    if (alpha < 0 || omega > 1 || alpha > omega) throw PreconditionError("step needs 0 <= alpha <= omega <= 1");
    int last_stage = 1;
    for (std::size_t d = 0; d < devices.size(); ++d) {
        const Device& dev = devices[d];
        const std::string name = "device " + std::to_string(d + 2);
        if (!dev.dependence) throw PreconditionError(name + " has no dependence function");
        if (dev.controller < 0) throw PreconditionError(name + " has no controller");
        if (dev.stage < last_stage) throw PreconditionError(name + " has a decreasing stage");
        if (dev.lipschitz < 0) throw PreconditionError(name + " has a negative Lipschitz bound");
        if (dev.magnitude <= 0) throw PreconditionError(name + " has a non-positive magnitude");
        last_stage = dev.stage;
    }
}

std::vector<Rational> exact_device_values(const MovingKnifeStep& step, const Rational& t) {
    require_time(step, t);
    std::vector<Rational> values(static_cast<std::size_t>(step.size()));
    values[0] = t;
    for (auto [begin, end] : stage_ranges(step)) {
        std::vector<Rational> prior(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(begin + 1));
        for (std::size_t d = begin; d < end; ++d) values[d + 1] = step.devices[d].dependence(prior);
    }
    return values;
}

Rational cascade_precision(const MovingKnifeStep& step, int device, const Rational& eps) {
    const int k = step.size();
    if (device < 1 || device > k) throw PreconditionError("device index out of range");
    std::int64_t r = 1;
    while (r * r < k + 1) ++r;
    Rational base = 4 * step.zeta() * r;
    Rational p = eps;
    for (int i = device; i < k; ++i) p /= base;
    return p;
}

DeviceReading approx_device_values(const MovingKnifeStep& step, const Rational& t, const Rational& eps,
                                   Channel& channel) {
    step.validate();
    require_time(step, t);
    if (eps <= 0) throw PreconditionError("eps must be positive");
    Announcer announcer(step, eps, channel);
    DeviceReading reading;
    reading.values.assign(static_cast<std::size_t>(step.size()), Rational(0));
    reading.values[0] = t;
    for (std::size_t s = 0; s < announcer.stage_count(); ++s) reading.bits += announcer.round({{&reading.values, s}});
    return reading;
}

void verify_lipschitz(const MovingKnifeStep& step, int samples, std::uint64_t seed) {
    step.validate();
    constexpr std::int64_t kSteps = std::int64_t{1} << 20;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> pick(0, kSteps);
    const Rational span = step.omega - step.alpha;
    auto time_at = [&](std::int64_t k) -> Rational { return step.alpha + span * make_rational(k, kSteps); };
    for (int i = 0; i < samples; ++i) {
        std::int64_t a = pick(rng);
        // every other pair is adjacent on the sampling grid
        std::int64_t b = i % 2 == 0 ? pick(rng) : std::min(a + 1, kSteps);
        if (a == b) continue;
        Rational ta = time_at(a), tb = time_at(b);
        auto va = exact_device_values(step, ta);
        auto vb = exact_device_values(step, tb);
        Rational dt = abs_of(Rational(ta - tb));
        for (std::size_t d = 0; d < step.devices.size(); ++d) {
            Rational dx = abs_of(Rational(va[d + 1] - vb[d + 1]));
            if (dx > step.devices[d].lipschitz * dt)
                throw PreconditionError("device " + std::to_string(d + 2) + " moves by " + to_string(dx) +
                                        " between times " + to_string(ta) + " and " + to_string(tb) +
                                        ", beyond its Lipschitz bound " + to_string(step.devices[d].lipschitz));
        }
    }
}

bool is_epsilon_outcome(const MovingKnifeStep& step, const EpsilonOutcome& outcome, const Rational& eps) {
    if (outcome.trigger_index < 2 || outcome.trigger_index > step.size()) return false;
    if (outcome.approx_values.size() != static_cast<std::size_t>(step.size())) return false;
    if (outcome.time < step.alpha || outcome.time > step.omega) return false;
    auto exact = exact_device_values(step, outcome.time);
    if (abs_of(exact[static_cast<std::size_t>(outcome.trigger_index - 1)]) > eps) return false;
    for (std::size_t j = 0; j < exact.size(); ++j)
        if (abs_of(Rational(outcome.approx_values[j] - exact[j])) > eps) return false;
    return true;
}

EpsilonOutcome find_epsilon_outcome(const MovingKnifeStep& step, int trigger_index, const Rational& eps,
                                    Channel& channel, SearchTrace* trace) {
    step.validate();
    if (trigger_index < 2 || trigger_index > step.size()) throw PreconditionError("trigger index out of range");
    if (eps <= 0) throw PreconditionError("eps must be positive");
    verify_lipschitz(step, 16, 0x6b6e696665ULL);

    Announcer announcer(step, eps / 4, channel);
    const std::size_t trig_pos = static_cast<std::size_t>(trigger_index - 2);
    const std::size_t trig_stage = announcer.stage_of(trig_pos);
    const std::size_t stages = announcer.stage_count();
    const Rational half = eps / 2;
    const Integer cap = ceil_of(Rational(2 * step.zeta() / eps));
    SearchTrace local;
    SearchTrace& tr = trace ? *trace : local;
    tr = {};

    struct Point {
        std::vector<Rational> values;
        std::size_t done = 0;  // stages announced
    };
    std::map<Rational, Point> known;
    auto point = [&](const Rational& t) -> Point& {
        auto [it, fresh] = known.try_emplace(t);
        if (fresh) {
            it->second.values.assign(static_cast<std::size_t>(step.size()), Rational(0));
            it->second.values[0] = t;
        }
        return it->second;
    };
    auto reading = [&](const Rational& t) -> std::optional<Rational> {
        auto it = known.find(t);
        if (it == known.end() || it->second.done <= trig_stage) return std::nullopt;
        return it->second.values[trig_pos + 1];
    };

    bool ends_done = false;
    Rational lo, hi, x_lo, x_hi;
    std::optional<Rational> found;
    auto within = [&](const Rational& x) { return abs_of(x) <= half; };
    auto resolve = [&] {
        while (!found) {
            if (!ends_done) {
                auto xa = reading(step.alpha), xo = reading(step.omega);
                if (!xa || !xo) return;
                if (within(*xa)) {
                    found = step.alpha;
                } else if (within(*xo)) {
                    found = step.omega;
                } else {
                    if ((*xa > 0) == (*xo > 0)) throw PreconditionError("trigger does not switch signs over the step");
                    ends_done = true;
                    lo = step.alpha, hi = step.omega, x_lo = *xa, x_hi = *xo;
                }
                continue;
            }
            if (Integer(tr.midpoints) >= cap) {
                tr.capped = true;
                found = lo;
                return;
            }
            Rational mid = (lo + hi) / 2;
            auto xm = reading(mid);
            if (!xm) return;
            ++tr.midpoints;
            if (within(*xm)) {
                found = mid;
            } else if ((*xm > 0) == (x_lo > 0)) {
                lo = mid, x_lo = *xm;
            } else {
                hi = mid, x_hi = *xm;
            }
            if ((x_lo > 0) == (x_hi > 0)) throw std::logic_error("binary search lost its sign change");
        }
    };
    // points the search may need while the trigger stage of the nearest one
    // is still pending; deeper points get their early stages ahead of time
    std::function<void(const Rational&, const Rational&, std::size_t, std::vector<Rational>&)> speculate =
        [&](const Rational& a, const Rational& b, std::size_t depth, std::vector<Rational>& out) {
            if (depth > trig_stage) return;
            Rational mid = (a + b) / 2;
            out.push_back(mid);
            speculate(a, mid, depth + 1, out);
            speculate(mid, b, depth + 1, out);
        };

    while (true) {
        resolve();
        std::vector<std::pair<std::vector<Rational>*, std::size_t>> requests;
        if (found) {
            Point& p = point(*found);
            if (p.done == stages) break;
            requests.emplace_back(&p.values, p.done);
        } else {
            std::vector<Rational> frontier;
            if (!ends_done) {
                frontier = {step.alpha, step.omega};
                speculate(step.alpha, step.omega, 1, frontier);
            } else {
                speculate(lo, hi, 0, frontier);
            }
            std::vector<Rational> seen;
            for (const auto& t : frontier) {
                if (std::find(seen.begin(), seen.end(), t) != seen.end()) continue;
                seen.push_back(t);
                Point& p = point(t);
                if (p.done <= trig_stage) requests.emplace_back(&p.values, p.done);
            }
        }
        if (requests.empty()) throw std::logic_error("time search made no progress");
        announcer.round(requests);
        for (auto& [values, s] : requests) known.at((*values)[0]).done = s + 1;
        ++tr.rounds;
    }
    return EpsilonOutcome{trigger_index, *found, known.at(*found).values};
}

// ---------------------------------------------------------------------------

namespace {

using Shared = std::shared_ptr<const DensityValuation>;

MovingKnifeStep austin_phase1(const Shared& a, const Shared& b, const Rational& d) {
    const Rational half(1, 2);
    MovingKnifeStep step;
    step.devices.push_back({0, DeviceKind::trigger, 1, [a, half](const std::vector<Rational>& p) -> Rational {
                                return a->prefix(p[0]) - half;
                            }, d, 1});
    step.devices.push_back({1, DeviceKind::trigger, 1, [b, half](const std::vector<Rational>& p) -> Rational {
                                return b->prefix(p[0]) - half;
                            }, d, 1});
    step.devices.push_back({0, DeviceKind::trigger, 2, [](const std::vector<Rational>& p) -> Rational {
                                return std::max(p[1], p[2]);
                            }, d, 1});
    return step;
}

MovingKnifeStep austin_phase2(const Shared& caller, PartyId caller_id, const Shared& other, const Rational& d,
                              const Rational& eps, const Rational& omega) {
    const Rational half(1, 2);
    MovingKnifeStep step;
    step.omega = omega;
    // right knife: v'_c between the knives stays 1/2 until it reaches the end
    step.devices.push_back({caller_id, DeviceKind::knife, 1, [caller, half](const std::vector<Rational>& p) -> Rational {
                                Rational target = std::min(Rational(1), Rational(caller->prefix(p[0]) + half));
                                return caller->point_of_prefix(target);
                            }, 2 * d / eps, 1});
    step.devices.push_back({1 - caller_id, DeviceKind::trigger, 2,
                            [other, half](const std::vector<Rational>& p) -> Rational {
                                return other->prefix(p[1]) - other->prefix(p[0]) - half;
                            }, d + 2 * d * d / eps, 1});
    return step;
}

}  // namespace

Allocation austin(const DensityValuation& alice, const DensityValuation& bob, const Rational& eps, Channel& channel,
                  PublicCoins& coins, AustinTrace* trace) {
    if (eps <= 0 || eps >= 1) throw PreconditionError("eps must lie in (0, 1), got " + to_string(eps));
    const Rational d = public_density_bound({alice, bob});
    auto hungry_a = std::make_shared<const DensityValuation>(make_hungry(alice, eps));
    auto hungry_b = std::make_shared<const DensityValuation>(make_hungry(bob, eps));
    AustinTrace local;
    AustinTrace& tr = trace ? *trace : local;
    tr = {};

    tr.eps1 = eps * eps / (256 * d * d);
    tr.phase1 = austin_phase1(hungry_a, hungry_b, d);
    tr.outcome1 = find_epsilon_outcome(tr.phase1, 4, tr.eps1, channel, &tr.search1);
    tr.caller = tr.outcome1.approx_values[2] > tr.outcome1.approx_values[1] ? 1 : 0;

    // the caller's exact half mark lies within 3 eps_1 / eps of t_1
    tr.eps2 = eps / (8 * d);
    Rational omega = std::min(Rational(1), Rational(tr.outcome1.time + 3 * tr.eps1 / eps));
    const Shared& caller = tr.caller == 0 ? hungry_a : hungry_b;
    const Shared& other = tr.caller == 0 ? hungry_b : hungry_a;
    tr.phase2 = austin_phase2(caller, tr.caller, other, d, eps, omega);
    tr.outcome2 = find_epsilon_outcome(tr.phase2, 3, tr.eps2, channel, &tr.search2);

    const Rational& left = tr.outcome2.time;
    Rational right = std::clamp(tr.outcome2.approx_values[1], left, Rational(1));
    const auto middle = static_cast<PartyId>(coins.draw_below(2));
    return Allocation{{left, right}, {1 - middle, middle, 1 - middle}};
}

ProtocolRun austin(const DensityValuation& alice, const DensityValuation& bob, const Rational& eps,
                   std::uint64_t seed, AustinTrace* trace) {
    ProtocolRun run;
    Channel ch(run.transcript);
    PublicCoins coins(seed);
    run.allocation = austin(alice, bob, eps, ch, coins, trace);
    run.transcript.finish();
    return run;
}

}  // namespace fairdiv
