#pragma once

// Hand-rolled generators and independent reference computations shared by
// the unit tests. Nothing here calls into the code under test except the
// constructors of the plain data types.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "fairdiv/rational.hpp"
#include "fairdiv/valuation.hpp"

namespace fairdiv::testing {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
    }
    bool coin() { return range(0, 1) == 1; }

    /// Rational in [0,1] with denominator up to max_den.
    Rational unit(std::int64_t max_den = 64) {
        std::int64_t den = range(1, max_den);
        return make_rational(range(0, den), den);
    }

    /// Piecewise-constant valuation with `segments` pieces and density <= bound.
    /// Built by mixing random weights with the uniform density so the bound holds.
    DensityValuation valuation(int segments, std::int64_t bound = 4) {
        std::vector<Rational> cuts;
        while (static_cast<int>(cuts.size()) < segments - 1) {
            Rational c = make_rational(range(1, 999), 1000);
            if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
        }
        std::sort(cuts.begin(), cuts.end());
        std::vector<Rational> bps{Rational(0)};
        bps.insert(bps.end(), cuts.begin(), cuts.end());
        bps.emplace_back(1);
        std::vector<Rational> raw;
        Rational mass = 0;
        for (int s = 0; s < segments; ++s) {
            raw.emplace_back(range(0, 20));
            mass += raw.back() * (bps[s + 1] - bps[s]);
        }
        if (mass == 0) {
            for (auto& r : raw) r = 1;
            mass = 1;
        }
        Rational top = 0;
        for (auto& r : raw) {
            r /= mass;
            top = std::max(top, r);
        }
        Rational lambda = 1;
        if (top > bound) lambda = Rational(bound - 1) / (top - 1);
        std::vector<Rational> dens;
        for (auto& r : raw) dens.push_back(lambda * r + (1 - lambda));
        return DensityValuation(bps, dens, Rational(bound));
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// Reference integral: sums the overlap of [a,b] with every segment.
inline Rational integral(const DensityValuation& v, const Rational& a, const Rational& b) {
    Rational total = 0;
    const auto& bp = v.breakpoints();
    for (std::size_t s = 0; s + 1 < bp.size(); ++s) {
        Rational lo = std::max(a, bp[s]);
        Rational hi = std::min(b, bp[s + 1]);
        if (lo < hi) total += v.densities()[s] * (hi - lo);
    }
    return total;
}

/// Reference simple valuation value: cells weighted by cell_weights/m.
inline Rational integral(const SimpleValuation& v, const Rational& a, const Rational& b) {
    Rational total = 0;
    for (std::int64_t k = 0; k < v.m(); ++k) {
        Rational lo = std::max(a, make_rational(k, v.m()));
        Rational hi = std::min(b, make_rational(k + 1, v.m()));
        if (lo < hi) total += Rational(v.cell_weights()[static_cast<std::size_t>(k)]) * (hi - lo);
    }
    return total;
}

}  // namespace fairdiv::testing
