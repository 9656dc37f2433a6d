#pragma once

#include <cstddef>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fairdiv/comm.hpp"
#include "fairdiv/rational.hpp"
#include "fairdiv/valuation.hpp"

namespace fairdiv {

/// Interval j = [cuts[j-1], cuts[j]] (with cuts[-1] = 0, cuts[size] = 1) goes
/// to party assignment[j]. A party may receive several intervals.
struct Allocation {
    std::vector<Rational> cuts;
    std::vector<PartyId> assignment;

    std::size_t pieces() const { return assignment.size(); }
    Rational left(std::size_t j) const { return j == 0 ? Rational(0) : cuts[j - 1]; }
    Rational right(std::size_t j) const { return j == cuts.size() ? Rational(1) : cuts[j]; }

    /// Throws PreconditionError unless the intervals tile [0,1] and every
    /// owner is in 0..n-1.
    void validate(int n) const;

    friend bool operator==(const Allocation&, const Allocation&) = default;
};

/// v(A_owner): the total value `v` assigns to everything `owner` receives.
Rational value_of(const DensityValuation& v, const Allocation& a, PartyId owner);

/// {"cuts": ["1/3", ...], "assignment": [2, 0, 1]}
nlohmann::json to_json(const Allocation& a);
Allocation allocation_from_json(const nlohmann::json& j);

}  // namespace fairdiv
