#include "bellnl/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bellnl {

Scenario::Scenario(int alice_settings, int alice_outcomes, int bob_settings, int bob_outcomes)
    : nx_(alice_settings), na_(alice_outcomes), ny_(bob_settings), nb_(bob_outcomes)
{
    if (nx_ < 1 || na_ < 1 || ny_ < 1 || nb_ < 1)
        throw InvalidScenarioError("scenario counts must all be >= 1, got " + to_string());
}

Cell Scenario::cell(std::size_t index) const
{
    Cell c;
    c.b = static_cast<int>(index % nb_);
    index /= nb_;
    c.a = static_cast<int>(index % na_);
    index /= na_;
    c.y = static_cast<int>(index % ny_);
    c.x = static_cast<int>(index / ny_);
    return c;
}

std::string Scenario::to_string() const
{
    std::ostringstream os;
    os << "(" << nx_ << "," << na_ << ";" << ny_ << "," << nb_ << ")";
    return os.str();
}

std::uint64_t strategy_count(const Scenario& sc)
{
    constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t n = 1;
    auto times = [&](std::uint64_t f) {
        if (n > cap / f)
            n = cap;
        else
            n *= f;
    };
    for (int x = 0; x < sc.nx(); ++x)
        times(static_cast<std::uint64_t>(sc.na()));
    for (int y = 0; y < sc.ny(); ++y)
        times(static_cast<std::uint64_t>(sc.nb()));
    return n;
}

long long ns_dimension(const Scenario& sc)
{
    long long da = static_cast<long long>(sc.nx()) * (sc.na() - 1) + 1;
    long long db = static_cast<long long>(sc.ny()) * (sc.nb() - 1) + 1;
    return da * db - 1;
}

void check_strategy(const DeterministicStrategy& s, const Scenario& sc)
{
    if (static_cast<int>(s.alice.size()) != sc.nx() || static_cast<int>(s.bob.size()) != sc.ny())
        throw InvalidStrategyError("strategy is not total on the setting ranges of " + sc.to_string());
    for (std::size_t x = 0; x < s.alice.size(); ++x)
        if (s.alice[x] < 0 || s.alice[x] >= sc.na())
            throw InvalidStrategyError("alice outcome " + std::to_string(s.alice[x]) + " for setting " +
                                       std::to_string(x) + " is out of range");
    for (std::size_t y = 0; y < s.bob.size(); ++y)
        if (s.bob[y] < 0 || s.bob[y] >= sc.nb())
            throw InvalidStrategyError("bob outcome " + std::to_string(s.bob[y]) + " for setting " +
                                       std::to_string(y) + " is out of range");
}

ExactBehavior pr_box()
{
    Scenario sc(2, 2, 2, 2);
    ExactBehavior p(sc);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    if ((a ^ b) == (x & y))
                        p(x, y, a, b) = Rational(1, 2);
    return p;
}

FloatBehavior to_float(const ExactBehavior& p)
{
    FloatBehavior out(p.scenario());
    for (std::size_t i = 0; i < out.table().size(); ++i)
        out[i] = p[i].get_d();
    return out;
}

const Violation* ValidationReport::find(Violation::Kind k) const
{
    for (const auto& v : violations)
        if (v.kind == k)
            return &v;
    return nullptr;
}

std::string to_string(Violation::Kind k)
{
    switch (k) {
    case Violation::Kind::negative: return "nonnegativity";
    case Violation::Kind::normalization: return "normalization";
    case Violation::Kind::signaling: return "nonsignaling";
    }
    return "unknown";
}

namespace {

template <class T> double deviation(const T& v)
{
    return ScalarTraits<T>::magnitude(v);
}

std::string locate(const char* what, int i, int j, int k)
{
    std::ostringstream os;
    os << what << "(" << i << "," << j << "," << k << ")";
    return os.str();
}

} // namespace

template <class T> ValidationReport validate_behavior(const BehaviorT<T>& p, double tol)
{
    const Scenario& sc = p.scenario();
    if (p.table().size() != sc.cell_count())
        throw IncompleteTableError("behavior table is incomplete");
    if constexpr (ScalarTraits<T>::exact)
        tol = 0.0;

    ValidationReport rep;
    auto record = [&](Violation::Kind kind, double mag, std::string where) {
        for (auto& v : rep.violations)
            if (v.kind == kind) {
                if (mag > v.magnitude) {
                    v.magnitude = mag;
                    v.where = std::move(where);
                }
                return;
            }
        rep.violations.push_back({kind, mag, std::move(where)});
    };
    auto exceeds = [&](const T& v) {
        if constexpr (ScalarTraits<T>::exact)
            return sgn(v) != 0;
        else
            return std::fabs(v) > tol;
    };

    for (std::size_t i = 0; i < sc.cell_count(); ++i) {
        bool neg;
        if constexpr (ScalarTraits<T>::exact)
            neg = sgn(p[i]) < 0;
        else
            neg = p[i] < -tol;
        if (neg) {
            Cell c = sc.cell(i);
            std::ostringstream os;
            os << "p(" << c.a << "," << c.b << "|" << c.x << "," << c.y << ")";
            record(Violation::Kind::negative, deviation(p[i]), os.str());
        }
    }
    for (int x = 0; x < sc.nx(); ++x)
        for (int y = 0; y < sc.ny(); ++y) {
            T s = ScalarTraits<T>::zero();
            for (int a = 0; a < sc.na(); ++a)
                for (int b = 0; b < sc.nb(); ++b)
                    s += p(x, y, a, b);
            T d = s - ScalarTraits<T>::one();
            if (exceeds(d))
                record(Violation::Kind::normalization, deviation(d), locate("block", x, y, 0));
        }
    // Alice marginals must not depend on y.
    for (int x = 0; x < sc.nx(); ++x)
        for (int a = 0; a < sc.na(); ++a) {
            T ref = ScalarTraits<T>::zero();
            for (int b = 0; b < sc.nb(); ++b)
                ref += p(x, 0, a, b);
            for (int y = 1; y < sc.ny(); ++y) {
                T s = ScalarTraits<T>::zero();
                for (int b = 0; b < sc.nb(); ++b)
                    s += p(x, y, a, b);
                T d = s - ref;
                if (exceeds(d))
                    record(Violation::Kind::signaling, deviation(d), locate("alice", x, a, y));
            }
        }
    for (int y = 0; y < sc.ny(); ++y)
        for (int b = 0; b < sc.nb(); ++b) {
            T ref = ScalarTraits<T>::zero();
            for (int a = 0; a < sc.na(); ++a)
                ref += p(0, y, a, b);
            for (int x = 1; x < sc.nx(); ++x) {
                T s = ScalarTraits<T>::zero();
                for (int a = 0; a < sc.na(); ++a)
                    s += p(x, y, a, b);
                T d = s - ref;
                if (exceeds(d))
                    record(Violation::Kind::signaling, deviation(d), locate("bob", y, b, x));
            }
        }
    return rep;
}

template ValidationReport validate_behavior(const BehaviorT<Rational>&, double);
template ValidationReport validate_behavior(const BehaviorT<double>&, double);

} // namespace bellnl
