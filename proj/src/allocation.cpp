#include "fairdiv/allocation.hpp"

#include <string>

#include <nlohmann/json.hpp>

#include "fairdiv/errors.hpp"

namespace fairdiv {

void Allocation::validate(int n) const {
    if (assignment.size() != cuts.size() + 1)
        throw PreconditionError("allocation needs exactly one owner per interval (" + std::to_string(cuts.size() + 1) +
                                " intervals, " + std::to_string(assignment.size()) + " owners)");
    for (std::size_t j = 0; j < cuts.size(); ++j) {
        if (cuts[j] < 0 || cuts[j] > 1) throw PreconditionError("cut outside [0,1]: " + to_string(cuts[j]));
        if (j > 0 && cuts[j] < cuts[j - 1]) throw PreconditionError("cuts must be sorted");
    }
    for (auto p : assignment)
        if (p < 0 || p >= n) throw PreconditionError("interval owner " + std::to_string(p) + " is not a party");
}

Rational value_of(const DensityValuation& v, const Allocation& a, PartyId owner) {
    Rational total = 0;
    for (std::size_t j = 0; j < a.pieces(); ++j)
        if (a.assignment[j] == owner) total += v.eval(a.left(j), a.right(j));
    return total;
}

nlohmann::json to_json(const Allocation& a) {
    nlohmann::json cuts = nlohmann::json::array();
    for (const auto& c : a.cuts) cuts.push_back(to_string(c));
    return {{"cuts", cuts}, {"assignment", a.assignment}};
}

Allocation allocation_from_json(const nlohmann::json& j) {
    Allocation a;
    for (const auto& c : j.at("cuts")) a.cuts.push_back(parse_rational(c.get<std::string>()));
    for (const auto& p : j.at("assignment")) a.assignment.push_back(p.get<PartyId>());
    return a;
}

}  // namespace fairdiv
