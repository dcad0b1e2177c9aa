#include "bellnl/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

namespace bellnl {

namespace {

const Json& field(const Json& j, const char* name)
{
    if (!j.is_object())
        throw FormatError(std::string("expected an object with field '") + name + "'");
    auto it = j.find(name);
    if (it == j.end())
        throw FormatError(std::string("missing field '") + name + "'");
    return *it;
}

const Json& array_field(const Json& j, const char* name, std::size_t expected)
{
    const Json& a = field(j, name);
    if (!a.is_array())
        throw FormatError(std::string("field '") + name + "' must be an array");
    if (expected != 0 && a.size() != expected)
        throw FormatError(std::string("field '") + name + "' has " + std::to_string(a.size()) + " entries, expected " +
                          std::to_string(expected));
    return a;
}

Rational rational_entry(const Json& v, const std::string& where)
{
    try {
        if (v.is_string())
            return parse_rational(v.get<std::string>());
        if (v.is_number_integer())
            return Rational(v.get<long>());
    } catch (const std::invalid_argument& e) {
        throw FormatError(where + ": " + e.what());
    }
    throw FormatError(where + ": expected a rational string \"p/q\"");
}

double float_entry(const Json& v, const std::string& where)
{
    if (!v.is_number())
        throw FormatError(where + ": expected a number");
    return v.get<double>();
}

std::string mode_of(const Json& j)
{
    const Json& m = field(j, "mode");
    if (!m.is_string() || (m != "rational" && m != "float"))
        throw FormatError("field 'mode' must be \"rational\" or \"float\"");
    return m.get<std::string>();
}

std::string cell_where(const Scenario& sc, std::size_t i)
{
    const Cell c = sc.cell(i);
    return "entry " + std::to_string(i) + " (x=" + std::to_string(c.x) + ", y=" + std::to_string(c.y) +
           ", a=" + std::to_string(c.a) + ", b=" + std::to_string(c.b) + ")";
}

Json complex_matrix_to_json(const ComplexMatrix& m)
{
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k)
            row.push_back(Json::array({m(i, k).real(), m(i, k).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::complex<double> complex_entry(const Json& v, const std::string& where)
{
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw FormatError(where + ": expected [re, im]");
    return {v[0].get<double>(), v[1].get<double>()};
}

ComplexMatrix complex_matrix_from_json(const Json& j, Eigen::Index d, const std::string& where)
{
    if (!j.is_array() || j.size() != static_cast<std::size_t>(d))
        throw FormatError(where + ": expected " + std::to_string(d) + " rows");
    ComplexMatrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        if (!j[i].is_array() || j[i].size() != static_cast<std::size_t>(d))
            throw FormatError(where + ": row " + std::to_string(i) + " must have " + std::to_string(d) + " entries");
        for (Eigen::Index k = 0; k < d; ++k)
            m(i, k) = complex_entry(j[i][k], where + " (" + std::to_string(i) + "," + std::to_string(k) + ")");
    }
    return m;
}

} // namespace

Json scenario_to_json(const Scenario& sc) { return Json::array({sc.nx(), sc.na(), sc.ny(), sc.nb()}); }

Scenario scenario_from_json(const Json& j)
{
    if (!j.is_array() || j.size() != 4)
        throw FormatError("scenario must be [nX, nA, nY, nB]");
    for (const auto& v : j)
        if (!v.is_number_integer())
            throw FormatError("scenario entries must be integers");
    return Scenario(j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>());
}

Scenario parse_scenario(const std::string& text)
{
    static const std::regex re(R"(^\s*\(?\s*(\d+)\s*[, ]\s*(\d+)\s*[;, ]\s*(\d+)\s*[, ]\s*(\d+)\s*\)?\s*$)");
    std::smatch m;
    if (!std::regex_match(text, m, re))
        throw FormatError("cannot parse scenario '" + text + "' (expected e.g. (3,3;3,2))");
    return Scenario(std::stoi(m[1]), std::stoi(m[2]), std::stoi(m[3]), std::stoi(m[4]));
}

Json behavior_to_json(const ExactBehavior& p)
{
    Json t = Json::array();
    for (const auto& v : p.table())
        t.push_back(rational_to_string(v));
    return Json{{"scenario", scenario_to_json(p.scenario())}, {"mode", "rational"}, {"table", std::move(t)}};
}

Json behavior_to_json(const FloatBehavior& p)
{
    return Json{{"scenario", scenario_to_json(p.scenario())}, {"mode", "float"}, {"table", p.table()}};
}

Json behavior_to_json(const AnyBehavior& p)
{
    return std::visit([](const auto& b) { return behavior_to_json(b); }, p);
}

AnyBehavior behavior_from_json(const Json& j)
{
    const Scenario sc = scenario_from_json(field(j, "scenario"));
    const std::string mode = mode_of(j);
    const Json& t = array_field(j, "table", sc.cell_count());
    if (mode == "rational") {
        ExactBehavior p(sc);
        for (std::size_t i = 0; i < t.size(); ++i)
            p[i] = rational_entry(t[i], cell_where(sc, i));
        return p;
    }
    FloatBehavior p(sc);
    for (std::size_t i = 0; i < t.size(); ++i)
        p[i] = float_entry(t[i], cell_where(sc, i));
    return p;
}

Json expression_to_json(const BellExpression& e)
{
    Json c = Json::array();
    for (const auto& v : e.coefficients) {
        if (e.exact)
            c.push_back(rational_to_string(v));
        else
            c.push_back(v.get_d());
    }
    Json out{{"scenario", scenario_to_json(e.scenario)}, {"mode", e.exact ? "rational" : "float"}, {"coefficients", c}};
    Json bounds = Json::object();
    if (e.local_bound)
        bounds["local"] = rational_to_string(*e.local_bound);
    if (e.quantum_bound)
        bounds["quantum"] = *e.quantum_bound;
    if (e.ns_bound)
        bounds["ns"] = rational_to_string(*e.ns_bound);
    if (!bounds.empty())
        out["bounds"] = std::move(bounds);
    return out;
}

BellExpression expression_from_json(const Json& j)
{
    const Scenario sc = scenario_from_json(field(j, "scenario"));
    const std::string mode = mode_of(j);
    const Json& c = array_field(j, "coefficients", sc.cell_count());
    BellExpression e(sc);
    e.exact = mode == "rational";
    for (std::size_t i = 0; i < c.size(); ++i)
        e.coefficients[i] = e.exact ? rational_entry(c[i], cell_where(sc, i))
                                    : rational_from_double(float_entry(c[i], cell_where(sc, i)));
    if (auto it = j.find("bounds"); it != j.end()) {
        if (!it->is_object())
            throw FormatError("field 'bounds' must be an object");
        if (it->contains("local"))
            e.local_bound = rational_entry((*it)["local"], "bounds.local");
        if (it->contains("quantum"))
            e.quantum_bound = float_entry((*it)["quantum"], "bounds.quantum");
        if (it->contains("ns"))
            e.ns_bound = rational_entry((*it)["ns"], "bounds.ns");
    }
    return e;
}

Json game_to_json(const Game& g)
{
    Json pi = Json::array();
    for (const auto& p : g.pi)
        pi.push_back(rational_to_string(p));
    Json win = Json::array();
    for (auto w : g.win)
        win.push_back(static_cast<int>(w));
    return Json{{"scenario", scenario_to_json(g.scenario)}, {"pi", std::move(pi)}, {"winning", std::move(win)}};
}

Game game_from_json(const Json& j)
{
    const Scenario sc = scenario_from_json(field(j, "scenario"));
    Game g(sc);
    const Json& w = field(j, "winning");
    if (w.is_string()) {
        const Game b = builtin_game(w.get<std::string>());
        if (!(b.scenario == sc))
            throw FormatError("builtin game '" + w.get<std::string>() + "' has scenario " + b.scenario.to_string());
        g.win = b.win;
    } else {
        const Json& t = array_field(j, "winning", sc.cell_count());
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (!t[i].is_number_integer() || (t[i] != 0 && t[i] != 1))
                throw FormatError("winning " + cell_where(sc, i) + ": expected 0 or 1");
            g.win[i] = static_cast<std::uint8_t>(t[i].get<int>());
        }
    }
    if (auto it = j.find("pi"); it != j.end()) {
        if (it->is_array()) {
            const Json& p = array_field(j, "pi", g.pi.size());
            for (std::size_t k = 0; k < p.size(); ++k)
                g.pi[k] = rational_entry(p[k], "pi entry " + std::to_string(k));
        } else if (it->is_object()) {
            std::fill(g.pi.begin(), g.pi.end(), Rational(0));
            static const std::regex key(R"(^\s*(\d+)\s*,\s*(\d+)\s*$)");
            for (const auto& [k, v] : it->items()) {
                std::smatch m;
                if (!std::regex_match(k, m, key))
                    throw FormatError("pi key '" + k + "' must be \"x,y\"");
                const int x = std::stoi(m[1]), y = std::stoi(m[2]);
                if (x >= sc.nx() || y >= sc.ny())
                    throw FormatError("pi key '" + k + "' outside the scenario");
                g.prob(x, y) = rational_entry(v, "pi[" + k + "]");
            }
        } else {
            throw FormatError("field 'pi' must be an array or an object");
        }
    }
    try {
        check_game(g);
    } catch (const StructuralError& e) {
        throw FormatError(e.what());
    }
    return g;
}

Json zeros_to_json(const TableOfZeros& t)
{
    const Scenario& sc = t.scenario();
    Json cells = Json::array();
    std::vector<std::array<int, 4>> xayb;
    for (auto c : t.cells()) {
        const Cell z = sc.cell(c);
        xayb.push_back({z.x, z.a, z.y, z.b});
    }
    std::sort(xayb.begin(), xayb.end());
    for (const auto& q : xayb)
        cells.push_back(Json::array({q[0], q[1], q[2], q[3]}));
    return Json{{"scenario", scenario_to_json(sc)}, {"cells", std::move(cells)}};
}

TableOfZeros zeros_from_json(const Json& j)
{
    const Scenario sc = scenario_from_json(field(j, "scenario"));
    const Json& cells = array_field(j, "cells", 0);
    std::vector<std::array<int, 4>> out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const Json& c = cells[i];
        if (!c.is_array() || c.size() != 4)
            throw FormatError("cell " + std::to_string(i) + ": expected [x, a, y, b]");
        std::array<int, 4> q{};
        for (int k = 0; k < 4; ++k) {
            if (!c[k].is_number_integer())
                throw FormatError("cell " + std::to_string(i) + ": entries must be integers");
            q[k] = c[k].get<int>();
        }
        if (!sc.contains(Cell{q[0], q[2], q[1], q[3]}))
            throw FormatError("cell " + std::to_string(i) + " [" + std::to_string(q[0]) + "," + std::to_string(q[1]) +
                              "," + std::to_string(q[2]) + "," + std::to_string(q[3]) + "] is outside scenario " +
                              sc.to_string());
        out.push_back(q);
    }
    return TableOfZeros::from_xayb(sc, out);
}

Json strategy_to_json(const QuantumStrategy& s)
{
    const Eigen::Index dA = s.alice.empty() ? 0 : s.alice.front().dimension();
    const Eigen::Index dB = s.bob.empty() ? 0 : s.bob.front().dimension();
    Json state = Json::array();
    for (Eigen::Index i = 0; i < s.psi.dimension(); ++i)
        state.push_back(Json::array({s.psi.amplitudes()[i].real(), s.psi.amplitudes()[i].imag()}));
    auto party = [](const std::vector<JointMeasurement>& ms) {
        Json out = Json::array();
        for (const auto& m : ms) {
            Json outcomes = Json::array();
            for (const auto& p : m.projectors)
                outcomes.push_back(complex_matrix_to_json(p));
            out.push_back(std::move(outcomes));
        }
        return out;
    };
    return Json{{"dims", Json::array({dA, dB})}, {"state", std::move(state)}, {"alice", party(s.alice)},
                {"bob", party(s.bob)}};
}

QuantumStrategy strategy_from_json(const Json& j)
{
    const Json& dims = array_field(j, "dims", 2);
    if (!dims[0].is_number_integer() || !dims[1].is_number_integer() || dims[0] < 1 || dims[1] < 1)
        throw FormatError("dims must be two positive integers");
    const Eigen::Index dA = dims[0].get<int>(), dB = dims[1].get<int>();
    const Json& st = array_field(j, "state", static_cast<std::size_t>(dA * dB));
    ComplexVector v(dA * dB);
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v[i] = complex_entry(st[i], "state entry " + std::to_string(i));
    QuantumStrategy s;
    try {
        s.psi = StateVector(v);
    } catch (const StructuralError& e) {
        throw FormatError(e.what());
    }
    auto party = [&](const char* name, Eigen::Index d) {
        std::vector<JointMeasurement> out;
        const Json& ps = array_field(j, name, 0);
        for (std::size_t x = 0; x < ps.size(); ++x) {
            if (!ps[x].is_array() || ps[x].empty())
                throw FormatError(std::string(name) + " setting " + std::to_string(x) + ": expected projector list");
            JointMeasurement m;
            for (std::size_t a = 0; a < ps[x].size(); ++a) {
                m.labels.push_back({static_cast<int>(a)});
                m.projectors.push_back(complex_matrix_from_json(
                    ps[x][a], d, std::string(name) + " setting " + std::to_string(x) + " outcome " + std::to_string(a)));
            }
            out.push_back(std::move(m));
        }
        return out;
    };
    s.alice = party("alice", dA);
    s.bob = party("bob", dB);
    return s;
}

Json npa_report_to_json(const NpaFeasibility& r, bool with_witness)
{
    Json out{{"verdict", to_string(r.verdict)},
             {"lambda_star", std::isfinite(r.lambda_star) ? Json(r.lambda_star) : Json("-inf")},
             {"affine_inconsistent", r.affine_inconsistent},
             {"iterations", r.iterations},
             {"level", to_string(r.level)}};
    if (with_witness && r.witness.size() > 0) {
        Json w = Json::array();
        for (Eigen::Index i = 0; i < r.witness.rows(); ++i) {
            Json row = Json::array();
            for (Eigen::Index k = 0; k < r.witness.cols(); ++k)
                row.push_back(r.witness(i, k));
            w.push_back(std::move(row));
        }
        out["witness"] = std::move(w);
    }
    return out;
}

std::string decimal(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

Json exact_number(const Rational& q) { return Json{{"exact", rational_to_string(q)}, {"decimal", decimal(q.get_d())}}; }

std::string serialize(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json_text(const std::string& text)
{
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("malformed JSON: ") + e.what());
    }
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str());
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        throw FormatError("cannot write '" + path + "'");
}

} // namespace bellnl
