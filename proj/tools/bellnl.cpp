// Command-line front end. Every subcommand prints one JSON report; exit code
// 0 = success or "yes", 2 = a well-formed "no" verdict, 1 = error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

#include <CLI11.hpp>

#include "bellnl/equivalence.hpp"
#include "bellnl/games.hpp"
#include "bellnl/io.hpp"
#include "bellnl/npa.hpp"
#include "bellnl/oracle.hpp"
#include "bellnl/parallel.hpp"
#include "bellnl/polytope.hpp"
#include "bellnl/quantum.hpp"
#include "bellnl/symmetry.hpp"
#include "bellnl/zeros.hpp"

using namespace bellnl;

namespace {

constexpr const char* kVersion = "1.0.0";

struct Outcome {
    Json results;
    int code = 0;
};

// FNV-1a over the raw input bytes; stable across runs and platforms.
std::string digest(const std::vector<std::string>& paths)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (const auto& p : paths) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        for (unsigned char c : ss.str()) {
            h ^= c;
            h *= 1099511628211ULL;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

bool is_game_file(const Json& j) { return j.is_object() && j.contains("winning"); }

BellExpression load_expression_or_game(const std::string& path)
{
    const Json j = read_json_file(path);
    if (is_game_file(j))
        return expression_from_game(game_from_json(j));
    return expression_from_json(j);
}

Json strategy_json(const DeterministicStrategy& s) { return Json{{"alice", s.alice}, {"bob", s.bob}}; }

Json number(double v) { return Json{{"decimal", decimal(v)}}; }

template <class T> Json content_json(const LocalContentResultT<T>& r)
{
    Json w = Json::array();
    for (const auto& [s, q] : r.weights) {
        if constexpr (std::is_same_v<T, Rational>)
            w.push_back(Json{{"strategy", strategy_json(s)}, {"weight", exact_number(q)}});
        else
            w.push_back(Json{{"strategy", strategy_json(s)}, {"weight", number(q)}});
    }
    Json out;
    if constexpr (std::is_same_v<T, Rational>) {
        out["q_local"] = exact_number(r.q_local);
        out["q_nonlocal"] = exact_number(r.q_nonlocal);
    } else {
        out["q_local"] = number(r.q_local);
        out["q_nonlocal"] = number(r.q_nonlocal);
    }
    out["decomposition"] = std::move(w);
    out["lp_columns"] = r.columns;
    out["lp_iterations"] = r.iterations;
    return out;
}

Outcome cmd_local_content(const std::string& path, double zero_tol, bool dual_only)
{
    const AnyBehavior p = behavior_from_json(read_json_file(path));
    LocalContentOptions opt;
    opt.zero_tol = zero_tol;
    Outcome o;
    std::visit(
        [&](const auto& b) {
            const auto r = local_content(b, opt);
            if (dual_only) {
                o.results["dual"] = expression_to_json(r.dual);
                o.results["q_local"] = content_json(r)["q_local"];
            } else {
                o.results = content_json(r);
            }
        },
        p);
    return o;
}

Outcome cmd_classical_value(const std::string& path, std::size_t limit, bool list, bool quantum)
{
    const Game g = game_from_json(read_json_file(path));
    GameValueReport r = classical_value(g, limit);
    if (quantum)
        r.quantum_upper_bound = npa_upper_bound(expression_from_game(g)).value;
    Outcome o;
    o.results["omega_classical"] = exact_number(r.omega_classical);
    o.results["optimizer_count"] = r.optimizer_count;
    o.results["omega_ns"] = exact_number(r.omega_ns);
    if (r.quantum_upper_bound)
        o.results["quantum_upper_bound"] = number(*r.quantum_upper_bound);
    if (list) {
        Json l = Json::array();
        for (const auto& s : r.optimizers)
            l.push_back(strategy_json(s));
        o.results["optimizers"] = std::move(l);
        o.results["optimizers_truncated"] = r.optimizers_truncated;
    }
    return o;
}

Outcome cmd_ns_value(const std::string& path)
{
    const BellExpression e = load_expression_or_game(path);
    Outcome o;
    o.results["ns_value"] = exact_number(ns_value(e));
    return o;
}

Outcome cmd_npa_bound(const std::string& path, const std::string& level)
{
    const BellExpression e = load_expression_or_game(path);
    const NpaBound b = npa_upper_bound(e, parse_npa_level(level));
    Outcome o;
    o.results["upper_bound"] = number(b.value);
    o.results["attained"] = number(b.attained);
    o.results["reliable"] = b.reliable;
    o.results["level"] = to_string(b.level);
    o.results["iterations"] = b.iterations;
    return o;
}

Outcome cmd_npa_feasible(const std::string& path, const std::string& level, bool escalate, bool witness)
{
    const TableOfZeros t = zeros_from_json(read_json_file(path));
    const NpaFeasibility r = npa_feasible(t, parse_npa_level(level), escalate);
    Outcome o;
    o.results = npa_report_to_json(r, witness);
    o.code = r.verdict == SdpVerdict::feasible ? 0 : 2;
    return o;
}

Outcome cmd_realizable(const std::string& path, std::optional<std::uint64_t> seed)
{
    const TableOfZeros t = zeros_from_json(read_json_file(path));
    const Realizability r = is_lhv_realizable(t, std::nullopt, seed);
    Outcome o;
    o.results["realizable"] = r.realizable;
    if (r.witness)
        o.results["witness"] = Json{{"alice", r.witness->alice}, {"bob", r.witness->bob}};
    o.code = r.realizable ? 0 : 2;
    return o;
}

Outcome cmd_critical(const std::string& path)
{
    const TableOfZeros t = zeros_from_json(read_json_file(path));
    const Scenario& sc = t.scenario();
    Outcome o;
    const bool nonlocal = !is_lhv_realizable(t).realizable;
    Json removals = Json::array();
    bool all = nonlocal;
    if (nonlocal)
        for (auto c : t.cells()) {
            const Cell z = sc.cell(c);
            const bool ok = is_lhv_realizable(t.without(c)).realizable;
            all = all && ok;
            removals.push_back(Json{{"cell", Json::array({z.x, z.a, z.y, z.b})}, {"realizable_without", ok}});
        }
    o.results["nonlocal"] = nonlocal;
    o.results["critical"] = all;
    o.results["removals"] = std::move(removals);
    o.code = all ? 0 : 2;
    return o;
}

Outcome cmd_cntz_enum(const std::string& scenario, std::uint64_t seed, bool subgroup, bool swap,
                      const std::string& emit_dir, bool verbose)
{
    const Scenario sc = parse_scenario(scenario);
    CntzOptions opt;
    opt.seed = seed;
    opt.use_subgroup = subgroup;
    opt.swap = swap;
    std::mutex io;
    if (verbose)
        opt.progress = [&io](const std::string& m) {
            std::lock_guard lock(io);
            std::cerr << m << std::endl;
        };
    const CntzReport r = enumerate_cntz(sc, opt);
    Outcome o;
    o.results["scenario"] = scenario_to_json(sc);
    o.results["critical_classes"] = r.critical.size();
    o.results["minimal_classes"] = r.minimal.size();
    o.results["blue_classes"] = r.blue_classes;
    o.results["red_tables"] = r.red_tables;
    o.results["pretables"] = r.pretables;
    o.results["candidates"] = r.candidates;
    o.results["max_depth"] = r.max_depth;
    Json tables = Json::array();
    for (const auto& t : r.critical)
        tables.push_back(zeros_to_json(t)["cells"]);
    o.results["critical"] = std::move(tables);
    if (!emit_dir.empty()) {
        std::filesystem::create_directories(emit_dir);
        for (std::size_t i = 0; i < r.critical.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "cntz_%04zu.json", i);
            write_text_file((std::filesystem::path(emit_dir) / name).string(), serialize(zeros_to_json(r.critical[i])));
        }
    }
    return o;
}

Outcome cmd_lift(const std::string& path, int n, bool analyze)
{
    const Game g = lift_game(game_from_json(read_json_file(path)), n);
    Outcome o;
    o.results["game"] = game_to_json(g);
    if (analyze) {
        const GameValueReport r = classical_value(g, std::size_t{1} << 24);
        o.results["omega_classical"] = exact_number(r.omega_classical);
        o.results["optimizer_count"] = r.optimizer_count;
        if (!r.optimizers_truncated) {
            o.results["optimizer_rank"] = vertex_rank(g.scenario, r.optimizers);
            o.results["ns_dimension"] = ns_dimension(g.scenario);
        }
    }
    return o;
}

Outcome cmd_tightness(const std::string& path)
{
    const BellExpression e = load_expression_or_game(path);
    const Rational bound = e.local_bound ? *e.local_bound : local_value(e);
    const TightnessReport r = tightness_verdict(e, bound);
    Outcome o;
    o.results["local_bound"] = exact_number(bound);
    o.results["saturating_vertices"] = r.saturating;
    o.results["linear_rank"] = r.linear_rank;
    o.results["affine_rank"] = r.affine_rank;
    o.results["required_rank"] = r.required_rank;
    o.results["verdict"] = r.tight ? "tight" : "not tight";
    o.code = r.tight ? 0 : 2;
    return o;
}

Outcome cmd_builtin(const std::string& name, const std::string& dir)
{
    std::filesystem::create_directories(dir);
    Outcome o;
    Json files = Json::array();
    auto emit = [&](const std::string& suffix, const Json& j) {
        const std::string path = (std::filesystem::path(dir) / (name + "_" + suffix + ".json")).string();
        write_text_file(path, serialize(j));
        files.push_back(path);
    };
    if (name == "hardy") {
        const TableOfZeros z = TableOfZeros::from_xayb(Scenario(2, 2, 2, 2), {{0, 0, 1, 1}, {1, 0, 1, 0}, {1, 1, 0, 0}});
        const SeesawResult s = hardy_seesaw(z.cells());
        emit("zeros", zeros_to_json(z));
        emit("strategy", strategy_to_json(s.strategy));
        emit("behavior", behavior_to_json(s.behavior));
        o.results["target_probability"] = number(s.value);
    } else {
        const Game g = builtin_game(name);
        emit("game", game_to_json(g));
        if (name == "chsh") {
            SeesawOptions opt;
            opt.restarts = 8;
            const SeesawResult s = seesaw_optimize(expression_from_game(g), 2, 2, opt);
            emit("strategy", strategy_to_json(s.strategy));
            emit("behavior", behavior_to_json(s.behavior));
            o.results["quantum_winning_probability"] = number(s.value);
        } else {
            const QuantumStrategy s = name == "pentagram" ? pentagram_strategy() : magic_square_strategy();
            const ExactBehavior p = snap_dyadic(behavior_from_strategy(s));
            emit("strategy", strategy_to_json(s));
            emit("behavior", behavior_to_json(p));
            o.results["quantum_winning_probability"] = exact_number(winning_probability(g, p));
        }
    }
    o.results["files"] = std::move(files);
    return o;
}

// zeros -> AVN -> game -> omega_C, omega_Q -> local content.
Outcome cmd_verify_equivalence(const std::string& path, double tol)
{
    const AnyBehavior any = behavior_from_json(read_json_file(path));
    const EquivalenceReport r = verify_equivalence(any, tol);
    Outcome o;
    auto yes = [](bool b) { return b ? "yes" : "no"; };
    o.results["scenario"] = scenario_to_json(r.zeros.scenario());
    o.results["zeros"] = r.zeros.size();
    o.results["AVN"] = yes(r.avn);
    o.results["PT"] = yes(r.pt);
    o.results["FN"] = yes(r.fn);
    o.results["FNS"] = yes(r.fns);
    o.results["omega_classical"] = exact_number(r.omega_classical);
    o.results["omega_quantum"] = number(r.omega_quantum);
    o.results["q_nonlocal"] = r.q_nonlocal_exact ? exact_number(*r.q_nonlocal_exact) : number(r.q_nonlocal);
    o.results["consistent"] = r.consistent();
    o.code = !r.consistent() ? 1 : (r.avn ? 0 : 2);
    return o;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bell nonlocality analysis: local content, tables of zeros, games, NPA bounds"};
    app.require_subcommand(1);
    app.fallthrough();
    std::size_t threads = 0;
    std::string output;
    app.add_option("--threads", threads, "Worker cap (default: BELLNL_THREADS or hardware concurrency)");
    app.add_option("--output,-o", output, "Write the report to this file instead of standard output");
    app.set_version_flag("--version", kVersion);

    std::string file, level = "1", scenario, dir = ".", emit_dir;
    double zero_tol = 1e-12, tol = 1e-9;
    std::size_t limit = std::size_t{1} << 22;
    bool list = false, quantum = false, no_escalate = false, witness = false, subgroup = true, swap = false,
         analyze = false, verbose = false;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> rseed;
    int copies = 2;

    auto* lc = app.add_subcommand("local-content", "Largest local weight of a behavior (exact LP in rational mode)");
    lc->add_option("behavior", file)->required()->check(CLI::ExistingFile);
    lc->add_option("--zero-tol", zero_tol, "Float mode: entries at or below are zeros");
    auto* de = app.add_subcommand("dual-expression", "Dual Bell expression certifying the local content");
    de->add_option("behavior", file)->required()->check(CLI::ExistingFile);
    de->add_option("--zero-tol", zero_tol);
    auto* cv = app.add_subcommand("classical-value", "Exact classical value and optimal strategies of a game");
    cv->add_option("game", file)->required()->check(CLI::ExistingFile);
    cv->add_option("--limit", limit, "Maximum number of optimizers to collect");
    cv->add_flag("--list", list, "Include the optimal strategies");
    cv->add_flag("--quantum-bound", quantum, "Add the level-one NPA upper bound");
    auto* ns = app.add_subcommand("ns-value", "Exact nonsignaling value of an expression or game");
    ns->add_option("input", file)->required()->check(CLI::ExistingFile);
    auto* nb = app.add_subcommand("npa-bound", "NPA upper bound on the quantum value");
    nb->add_option("input", file)->required()->check(CLI::ExistingFile);
    nb->add_option("--level", level, "1 or 1+AB");
    auto* nf = app.add_subcommand("npa-feasible", "NPA feasibility of a table of zeros (exit 2 unless feasible)");
    nf->add_option("zeros", file)->required()->check(CLI::ExistingFile);
    nf->add_option("--level", level, "1 or 1+AB");
    nf->add_flag("--no-escalate", no_escalate, "Do not retry an indeterminate level-one answer at 1+AB");
    nf->add_flag("--witness", witness, "Include the moment matrix of a feasible verdict");
    auto* re = app.add_subcommand("realizable", "LHV realizability of a table of zeros (exit 2 if nonlocal)");
    re->add_option("zeros", file)->required()->check(CLI::ExistingFile);
    re->add_option("--seed", rseed, "Randomize the witness");
    auto* cr = app.add_subcommand("critical", "Criticality of a table of zeros (exit 2 if not critical)");
    cr->add_option("zeros", file)->required()->check(CLI::ExistingFile);
    auto* ce = app.add_subcommand("cntz-enum", "Critical nonlocal tables of zeros up to relabeling");
    ce->add_option("scenario", scenario, "e.g. (2,2;2,2)")->required();
    ce->add_option("--seed", seed);
    ce->add_option("--subgroup", subgroup, "Reduce by output relabelings first (true/false)");
    ce->add_flag("--swap", swap, "Split on Bob's outcomes");
    ce->add_option("--emit-dir", emit_dir, "Write each representative as a zeros file");
    ce->add_flag("--verbose", verbose, "Report stage progress on standard error");
    auto* li = app.add_subcommand("lift", "Lift a game to n copies of its question sets");
    li->add_option("game", file)->required()->check(CLI::ExistingFile);
    li->add_option("-n", copies, "Number of copies")->check(CLI::PositiveNumber);
    li->add_flag("--analyze", analyze, "Add classical value, optimizer count and rank");
    auto* ti = app.add_subcommand("tightness", "Facet test by saturating-vertex rank (exit 2 if not tight)");
    ti->add_option("input", file)->required()->check(CLI::ExistingFile);
    auto* bi = app.add_subcommand("builtin", "Emit game, strategy and behavior files for a named example");
    bi->add_option("name", file, "chsh, magic_square, pentagram or hardy")->required();
    bi->add_option("--dir", dir, "Destination directory");
    auto* ve = app.add_subcommand("verify-equivalence", "Check AVN, PT, FN and FNS agree for a behavior");
    ve->add_option("behavior", file)->required()->check(CLI::ExistingFile);
    ve->add_option("--tol", tol, "Float mode zero tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    std::vector<std::string> inputs;
    try {
        if (threads > 0)
            set_thread_count(threads);
        if (!file.empty() && std::filesystem::exists(file))
            inputs.push_back(file);
        if (*lc)
            out = cmd_local_content(file, zero_tol, false);
        else if (*de)
            out = cmd_local_content(file, zero_tol, true);
        else if (*cv)
            out = cmd_classical_value(file, limit, list, quantum);
        else if (*ns)
            out = cmd_ns_value(file);
        else if (*nb)
            out = cmd_npa_bound(file, level);
        else if (*nf)
            out = cmd_npa_feasible(file, level, !no_escalate, witness);
        else if (*re)
            out = cmd_realizable(file, rseed);
        else if (*cr)
            out = cmd_critical(file);
        else if (*ce)
            out = cmd_cntz_enum(scenario, seed, subgroup, swap, emit_dir, verbose);
        else if (*li)
            out = cmd_lift(file, copies, analyze);
        else if (*ti)
            out = cmd_tightness(file);
        else if (*bi)
            out = cmd_builtin(file, dir);
        else if (*ve)
            out = cmd_verify_equivalence(file, tol);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    Json report;
    report["command"] = app.get_subcommands().front()->get_name();
    report["inputs_digest"] = digest(inputs);
    report["results"] = std::move(out.results);
    report["timing_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report["version"] = kVersion;
    try {
        if (output.empty())
            std::cout << serialize(report);
        else
            write_text_file(output, serialize(report));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return out.code;
}
