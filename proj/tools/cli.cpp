#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fairdiv/crossing.hpp"
#include "fairdiv/errors.hpp"
#include "fairdiv/json_io.hpp"
#include "fairdiv/movingknife.hpp"
#include "fairdiv/oracle.hpp"
#include "fairdiv/protocols.hpp"

namespace fairdiv::cli {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rational "half mark" denominators above this count as irrational.
const Integer kIrrationalLimit = Integer(1) << 40;

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("malformed JSON in " + path + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write " + path);
    file << text;
    if (!file) throw std::runtime_error("cannot write " + path);
}

Rational parse_flag_rational(const std::string& text, const char* flag) {
    try {
        return parse_rational(text);
    } catch (const std::invalid_argument&) {
        throw UsageError(std::string(flag) + " expects a rational such as 1/4096, got '" + text + "'");
    }
}

std::uint64_t default_seed() {
    const char* env = std::getenv("FAIRDIV_SEED");
    if (env == nullptr || *env == '\0') return 0;
    try {
        return std::stoull(env);
    } catch (const std::exception&) {
        throw UsageError(std::string("FAIRDIV_SEED must be an unsigned integer, got '") + env + "'");
    }
}

json cost_json(const CostProfile& c) { return json{{"rounds", c.rounds}, {"t", c.t}, {"total_bits", c.total_bits}}; }

const char* notion_name(Notion n) {
    switch (n) {
        case Notion::Proportional: return "proportional";
        case Notion::EnvyFree: return "envy-free";
        case Notion::Equitable: return "equitable";
        case Notion::Perfect: return "perfect";
    }
    return "?";
}

Notion parse_notion(const std::string& name) {
    for (Notion n : {Notion::Proportional, Notion::EnvyFree, Notion::Equitable, Notion::Perfect})
        if (name == notion_name(n)) return n;
    throw UsageError("unknown notion '" + name + "' (proportional, envy-free, equitable, perfect)");
}

// ---------------------------------------------------------------------------
// protocols

struct Inputs {
    std::vector<DensityValuation> valuations;
    std::optional<json> instance;
};

struct Outcome {
    json result;
    CostProfile cost;
    bool success = false;
};

struct ProtocolSpec {
    bool crossing = false;  // takes an instance rather than valuations
    int parties = 0;        // 0: any number >= 2
    Notion notion = Notion::Perfect;
    // valuation protocols
    std::function<ProtocolRun(const std::vector<DensityValuation>&, const Rational&, std::uint64_t)> run;
};

RwProgram rw_program(const std::string& name, int parties) {
    if (name == "cut-and-choose") return cut_and_choose();
    if (name == "even-paz") return even_paz(parties);
    if (name == "irrational-guard") return irrational_guard(kIrrationalLimit);
    throw UsageError("unknown RW program '" + name + "' (cut-and-choose, even-paz, irrational-guard)");
}

ProtocolSpec lookup(const std::string& protocol) {
    using Vals = std::vector<DensityValuation>;
    ProtocolSpec s;
    if (protocol == "proportional") {
        s.notion = Notion::Proportional;
        s.run = [](const Vals& v, const Rational& e, std::uint64_t) { return proportional_simultaneous(v, e); };
    } else if (protocol == "equitable2") {
        s.parties = 2;
        s.notion = Notion::Equitable;
        s.run = [](const Vals& v, const Rational& e, std::uint64_t) { return equitable_two(v[0], v[1], e); };
    } else if (protocol == "perfect2" || protocol == "perfect2-rand") {
        const bool randomized = protocol == "perfect2-rand";
        s.parties = 2;
        s.run = [randomized](const Vals& v, const Rational& e, std::uint64_t seed) {
            return perfect_two(v[0], v[1], e, PerfectOptions{randomized, seed});
        };
    } else if (protocol == "ef3") {
        s.parties = 3;
        s.notion = Notion::EnvyFree;
        s.run = [](const Vals& v, const Rational& e, std::uint64_t) { return envy_free_three(v, e); };
    } else if (protocol == "perfect-rand-noncomm") {
        s.run = [](const Vals& v, const Rational& e, std::uint64_t seed) {
            ProtocolRun r;
            PublicCoins coins(seed);
            r.allocation = perfect_random_noncomm(v, e, coins);
            r.transcript.finish();
            return r;
        };
    } else if (protocol == "austin") {
        s.parties = 2;
        s.run = [](const Vals& v, const Rational& e, std::uint64_t seed) { return austin(v[0], v[1], e, seed); };
    } else if (protocol.rfind("rw:", 0) == 0) {
        const std::string name = protocol.substr(3);
        rw_program(name, 2);  // reject unknown names early
        s.notion = name == "even-paz" ? Notion::Proportional : Notion::EnvyFree;
        s.parties = name == "even-paz" ? 0 : 2;
        s.run = [name](const Vals& v, const Rational& e, std::uint64_t) {
            return run_rw_simulated(rw_program(name, static_cast<int>(v.size())), v, e);
        };
    } else if (protocol == "crossing" || protocol == "mon-crossing") {
        s.crossing = true;
    } else {
        throw UsageError("unknown protocol '" + protocol + "'");
    }
    return s;
}

Outcome run_crossing(const std::string& protocol, const json& instance_json) {
    Outcome o;
    CrossingResult r;
    std::vector<std::int64_t> valid;
    if (protocol == "crossing") {
        auto inst = crossing_from_json(instance_json);
        r = solve_crossing_det(inst);
        valid = brute_crossing(inst);
    } else {
        auto inst = mon_crossing_from_json(instance_json);
        r = solve_mon_crossing(inst);
        valid = brute_crossing(inst);
    }
    o.cost = cost(r.transcript);
    o.success = std::find(valid.begin(), valid.end(), r.answer.index) != valid.end();
    o.result = json{{"protocol", protocol},
                    {"index", r.answer.index},
                    {"orientation", r.answer.orientation == Orientation::XBelowThenAbove ? "below-then-above"
                                                                                         : "above-then-below"},
                    {"cost", cost_json(o.cost)},
                    {"fairness", json{{"pass", o.success}}}};
    return o;
}

Outcome run_protocol(const std::string& protocol, const Inputs& in, const std::optional<Rational>& eps,
                     std::uint64_t seed) {
    ProtocolSpec spec = lookup(protocol);
    if (spec.crossing) {
        if (!in.instance) throw UsageError(protocol + " needs --instance");
        return run_crossing(protocol, *in.instance);
    }
    if (!eps) throw UsageError(protocol + " needs --epsilon");
    const auto n = static_cast<int>(in.valuations.size());
    if (spec.parties != 0 && n != spec.parties)
        throw std::runtime_error(protocol + " needs " + std::to_string(spec.parties) + " valuations, got " +
                                 std::to_string(n));
    ProtocolRun r = spec.run(in.valuations, *eps, seed);
    Outcome o;
    o.cost = cost(r.transcript);
    FairnessReport report = check_fair(r.allocation, in.valuations, {spec.notion, *eps});
    o.success = report.pass;
    json fairness = to_json(report);
    fairness["notion"] = notion_name(spec.notion);
    fairness["epsilon"] = to_string(*eps);
    o.result = json{{"protocol", protocol},
                    {"allocation", to_json(r.allocation)},
                    {"cost", cost_json(o.cost)},
                    {"fairness", fairness}};
    return o;
}

// ---------------------------------------------------------------------------
// bench

std::vector<Rational> geometric_range(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() < 2 || parts.size() > 3) throw UsageError("--param-range expects LO:HI or LO:HI:FACTOR");
    const Rational lo = parse_flag_rational(parts[0], "--param-range");
    const Rational hi = parse_flag_rational(parts[1], "--param-range");
    const Rational factor = parts.size() == 3 ? parse_flag_rational(parts[2], "--param-range") : Rational(2);
    if (lo <= 0 || hi <= 0 || factor <= 1) throw UsageError("--param-range needs positive ends and a factor above 1");
    std::vector<Rational> out;
    for (Rational p = lo; lo <= hi ? p <= hi : p >= hi; p = lo <= hi ? Rational(p * factor) : Rational(p / factor)) {
        out.push_back(p);
        if (out.size() > 256) throw UsageError("--param-range spans more than 256 values");
    }
    return out;
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t row, std::int64_t trial) {
    return seed * 1000003ULL + static_cast<std::uint64_t>(row) * 100003ULL + static_cast<std::uint64_t>(trial);
}

Inputs bench_inputs(const std::string& protocol, const ProtocolSpec& spec, const Rational& param, int parties,
                    std::uint64_t seed) {
    Inputs in;
    if (spec.crossing) {
        if (param.get_den() != 1 || param < 1) throw UsageError("crossing parameters must be integers m >= 1");
        const std::int64_t m = to_int64(param.get_num());
        in.instance = protocol == "crossing" ? to_json(random_crossing_instance(seed, m))
                                             : to_json(random_mon_crossing_instance(seed, m, m));
        return in;
    }
    const int n = spec.parties != 0 ? spec.parties : parties;
    for (int i = 0; i < n; ++i) in.valuations.push_back(random_valuation(seed * 16 + static_cast<std::uint64_t>(i), 4, 4));
    return in;
}

std::string bench_csv(const std::string& protocol, const std::vector<Rational>& params, std::int64_t trials,
                      int parties, std::uint64_t seed) {
    const ProtocolSpec spec = lookup(protocol);
    std::ostringstream csv;
    csv << "protocol,parameter,trials,rounds_max,bits_total_max,bits_per_round_max,success_rate\n";
    if (trials <= 0) return csv.str();
    for (std::size_t row = 0; row < params.size(); ++row) {
        std::int64_t rounds = 0, total = 0, per_round = 0, successes = 0;
        for (std::int64_t trial = 0; trial < trials; ++trial) {
            const std::uint64_t s = trial_seed(seed, row, trial);
            Inputs in = bench_inputs(protocol, spec, params[row], parties, s);
            std::optional<Rational> eps;
            if (!spec.crossing) eps = params[row];
            Outcome o = run_protocol(protocol, in, eps, s);
            rounds = std::max(rounds, o.cost.rounds);
            total = std::max(total, o.cost.total_bits);
            per_round = std::max(per_round, o.cost.t);
            successes += o.success ? 1 : 0;
        }
        csv << protocol << ',' << to_string(params[row]) << ',' << trials << ',' << rounds << ',' << total << ','
            << per_round << ',' << to_string(make_rational(successes, trials)) << '\n';
    }
    return csv.str();
}

// ---------------------------------------------------------------------------
// gen

struct GenOptions {
    std::string kind;
    std::int64_t m = 8;
    std::int64_t k = 0;  // 0: default for the kind
    std::int64_t z = 1;
    int count = 2;
    int segments = 4;
    std::string density_bound = "4";
    bool monotone = false;
};

json generate(const GenOptions& g, std::uint64_t seed) {
    if (g.m < 1) throw UsageError("--m must be at least 1");
    if (g.kind == "random-valuation") {
        const Rational d = parse_flag_rational(g.density_bound, "--density-bound");
        std::vector<DensityValuation> vals;
        for (int i = 0; i < g.count; ++i)
            vals.push_back(random_valuation(seed + static_cast<std::uint64_t>(i), g.segments, d));
        return valuations_to_json(vals);
    }
    if (g.kind == "crossing-random") {
        if (!g.monotone) return to_json(random_crossing_instance(seed, g.m));
        return to_json(random_mon_crossing_instance(seed, g.m, g.k > 0 ? g.k : g.m));
    }
    if (g.kind == "equitable-hard") {
        auto inst = random_mon_crossing_instance(seed, g.m, g.m);
        auto pair = gen_equitable_hard(inst);
        json out = valuations_to_json({pair.alice, pair.bob});
        out["instance"] = to_json(inst);
        out["epsilon"] = to_string(equitable_hard_eps(g.m));
        return out;
    }
    if (g.kind == "perfect-hard") {
        auto inst = random_crossing_instance(seed, g.m);
        auto padded = pad_for_perfect(inst);
        auto pair = gen_perfect_hard(padded);
        json out = valuations_to_json({pair.alice, pair.bob});
        out["instance"] = to_json(inst);
        out["padded_instance"] = to_json(padded);
        out["epsilon"] = to_string(perfect_hard_eps(padded.m));
        return out;
    }
    if (g.kind == "pk-lift") {
        const std::int64_t blocks = g.k > 0 ? g.k : 2;
        std::vector<std::vector<std::int64_t>> xs;
        for (std::int64_t j = 0; j < blocks; ++j)
            xs.push_back(random_mon_crossing_instance(seed + static_cast<std::uint64_t>(j), g.m, g.m).x);
        auto y = random_mon_crossing_instance(seed + static_cast<std::uint64_t>(blocks), g.m, g.m).y;
        auto lift = lift_pk(xs, y, g.z);
        return json{{"instance", to_json(lift.lifted)},
                    {"block_offset", lift.block_offset},
                    {"block_size", lift.block_size},
                    {"z", g.z}};
    }
    throw UsageError("unknown kind '" + g.kind +
                     "' (random-valuation, crossing-random, equitable-hard, perfect-hard, pk-lift)");
}

}  // namespace

}  // namespace fairdiv::cli

namespace fairdiv::cli {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fair division protocols with exact communication accounting", "fairdiv"};
    app.require_subcommand(1);

    std::string protocol, valuations_path, instance_path, epsilon, csv_path, range, output;
    std::string allocation_path, notion;
    std::optional<std::uint64_t> seed;
    std::int64_t trials = 100;
    int parties = 0;
    GenOptions gen;

    auto* run = app.add_subcommand("run", "run one protocol and check its output");
    run->add_option("--protocol", protocol, "protocol name")->required();
    run->add_option("--valuations", valuations_path, "valuations JSON file");
    run->add_option("--instance", instance_path, "crossing instance JSON file");
    run->add_option("--epsilon", epsilon, "accuracy, e.g. 1/1000");
    run->add_option("--seed", seed, "public-coin seed");
    run->add_option("--output", output, "write the result here instead of stdout");

    auto* bench = app.add_subcommand("bench", "measure communication over a parameter grid");
    bench->add_option("--protocol", protocol, "protocol name")->required();
    bench->add_option("--param-range", range, "LO:HI[:FACTOR], eps or m")->required();
    bench->add_option("--trials", trials, "random instances per parameter");
    bench->add_option("--parties", parties, "party count for n-party protocols");
    bench->add_option("--seed", seed, "base seed");
    bench->add_option("--csv", csv_path, "output CSV path (stdout if absent)");

    auto* verify = app.add_subcommand("verify", "check an allocation against a fairness notion");
    verify->add_option("--allocation", allocation_path, "allocation JSON file")->required();
    verify->add_option("--valuations", valuations_path, "valuations JSON file")->required();
    verify->add_option("--notion", notion, "proportional | envy-free | equitable | perfect")->required();
    verify->add_option("--epsilon", epsilon, "tolerance")->required();

    auto* genc = app.add_subcommand("gen", "generate instances");
    genc->add_option("--kind", gen.kind, "random-valuation | crossing-random | equitable-hard | perfect-hard | pk-lift")
        ->required();
    genc->add_option("--m", gen.m, "instance size");
    genc->add_option("--k", gen.k, "value range (crossing-random) or block count (pk-lift)");
    genc->add_option("--z", gen.z, "selected block for pk-lift");
    genc->add_option("--count", gen.count, "number of random valuations");
    genc->add_option("--segments", gen.segments, "pieces per random valuation");
    genc->add_option("--density-bound", gen.density_bound, "density bound of random valuations");
    genc->add_flag("--monotone", gen.monotone, "monotone crossing instance");
    genc->add_option("--seed", seed, "generator seed");
    genc->add_option("--output", output, "write here instead of stdout");

    std::vector<std::string> argv_store{"fairdiv"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "fairdiv: " << e.what() << "\n";
        return 2;
    }

    try {
        const std::uint64_t s = seed ? *seed : default_seed();
        if (run->parsed()) {
            Inputs in;
            if (!valuations_path.empty()) in.valuations = valuations_from_json(read_json_file(valuations_path));
            if (!instance_path.empty()) {
                json j = read_json_file(instance_path);
                in.instance = j.contains("instance") ? j.at("instance") : j;
            }
            if (valuations_path.empty() && instance_path.empty())
                throw UsageError("run needs --valuations or --instance");
            std::optional<Rational> eps;
            if (!epsilon.empty()) eps = parse_flag_rational(epsilon, "--epsilon");
            Outcome o = run_protocol(protocol, in, eps, s);
            write_text(output, o.result.dump(2) + "\n", out);
            return 0;
        }
        if (bench->parsed()) {
            write_text(csv_path, bench_csv(protocol, geometric_range(range), trials, parties > 0 ? parties : 3, s),
                       out);
            return 0;
        }
        if (verify->parsed()) {
            json a = read_json_file(allocation_path);
            Allocation alloc = allocation_from_json(a.contains("allocation") ? a.at("allocation") : a);
            auto vals = valuations_from_json(read_json_file(valuations_path));
            const Notion n = parse_notion(notion);
            FairnessReport report = check_fair(alloc, vals, {n, parse_flag_rational(epsilon, "--epsilon")});
            out << to_json(report).dump(2) << "\n";
            return report.pass ? 0 : 1;
        }
        write_text(output, generate(gen, s).dump(2) + "\n", out);
        return 0;
    } catch (const UsageError& e) {
        err << "fairdiv: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "fairdiv: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace fairdiv::cli
