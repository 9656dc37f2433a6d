#include "fairdiv/json_io.hpp"

#include "fairdiv/errors.hpp"

namespace fairdiv {

namespace {

using nlohmann::json;

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw PreconditionError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

std::vector<Rational> rationals(const json& j) {
    if (!j.is_array()) throw PreconditionError("expected an array of rationals");
    std::vector<Rational> out;
    for (const auto& e : j) out.push_back(rational_from_json(e));
    return out;
}

json rational_array(const std::vector<Rational>& values) {
    json out = json::array();
    for (const auto& v : values) out.push_back(to_string(v));
    return out;
}

std::vector<std::int64_t> integers(const json& j) {
    if (!j.is_array()) throw PreconditionError("expected an array of integers");
    std::vector<std::int64_t> out;
    for (const auto& e : j) {
        if (!e.is_number_integer()) throw PreconditionError("expected an integer, got " + e.dump());
        out.push_back(e.get<std::int64_t>());
    }
    return out;
}

std::int64_t integer(const json& j, const char* key) {
    const json& e = field(j, key);
    if (!e.is_number_integer()) throw PreconditionError(std::string("field \"") + key + "\" must be an integer");
    return e.get<std::int64_t>();
}

}  // namespace

Rational rational_from_json(const json& j) {
    if (j.is_number_integer()) return make_rational(j.get<std::int64_t>());
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const std::invalid_argument&) {
            throw PreconditionError("not a rational: " + j.dump());
        }
    }
    throw PreconditionError("expected a \"p/q\" string, got " + j.dump());
}

json to_json(const DensityValuation& v) {
    return json{{"breakpoints", rational_array(v.breakpoints())},
                {"densities", rational_array(v.densities())},
                {"density_bound", to_string(v.density_bound())}};
}

DensityValuation valuation_from_json(const json& j) {
    return DensityValuation(rationals(field(j, "breakpoints")), rationals(field(j, "densities")),
                            rational_from_json(field(j, "density_bound")));
}

json valuations_to_json(const std::vector<DensityValuation>& vals) {
    json list = json::array();
    for (const auto& v : vals) list.push_back(to_json(v));
    return json{{"valuations", list}};
}

std::vector<DensityValuation> valuations_from_json(const json& j) {
    const json& list = j.is_array() ? j : field(j, "valuations");
    if (!list.is_array()) throw PreconditionError("\"valuations\" must be an array");
    std::vector<DensityValuation> out;
    for (const auto& e : list) out.push_back(valuation_from_json(e));
    return out;
}

json to_json(const CrossingInstance& instance) {
    return json{{"m", instance.m}, {"k", instance.m}, {"x", instance.x}, {"y", instance.y}};
}

json to_json(const MonCrossingInstance& instance) {
    return json{{"m", instance.m}, {"k", instance.k}, {"x", instance.x}, {"y", instance.y}};
}

CrossingInstance crossing_from_json(const json& j) {
    return CrossingInstance{integer(j, "m"), integers(field(j, "x")), integers(field(j, "y"))};
}

MonCrossingInstance mon_crossing_from_json(const json& j) {
    const std::int64_t m = integer(j, "m");
    const std::int64_t k = j.contains("k") ? integer(j, "k") : m;
    return MonCrossingInstance{m, k, integers(field(j, "x")), integers(field(j, "y"))};
}

json to_json(const FairnessReport& report) {
    return json{{"pass", report.pass},
                {"slack", to_string(report.slack)},
                {"witness", json::array({report.witness.first, report.witness.second})}};
}

}  // namespace fairdiv
