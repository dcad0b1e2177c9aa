#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bellnl/errors.hpp"
#include "bellnl/rational.hpp"

namespace bellnl {

/// Coordinates of one entry p(a,b|x,y) of a behavior.
struct Cell {
    int x = 0;
    int y = 0;
    int a = 0;
    int b = 0;
    friend bool operator==(const Cell&, const Cell&) = default;
};

/// A bipartite Bell scenario (|X|,|A|;|Y|,|B|).
///
/// Every flattening in the library uses the (x, y, a, b) lexicographic order:
/// index = ((x * |Y| + y) * |A| + a) * |B| + b.
class Scenario {
public:
    Scenario() = default;
    Scenario(int alice_settings, int alice_outcomes, int bob_settings, int bob_outcomes);

    int nx() const { return nx_; }
    int na() const { return na_; }
    int ny() const { return ny_; }
    int nb() const { return nb_; }

    std::size_t cell_count() const
    {
        return static_cast<std::size_t>(nx_) * ny_ * na_ * nb_;
    }
    std::size_t index(int x, int y, int a, int b) const
    {
        return ((static_cast<std::size_t>(x) * ny_ + y) * na_ + a) * nb_ + b;
    }
    std::size_t index(const Cell& c) const { return index(c.x, c.y, c.a, c.b); }
    Cell cell(std::size_t index) const;
    bool contains(const Cell& c) const
    {
        return c.x >= 0 && c.x < nx_ && c.y >= 0 && c.y < ny_ && c.a >= 0 && c.a < na_ && c.b >= 0 &&
               c.b < nb_;
    }

    /// The same scenario with the parties' roles exchanged.
    Scenario swapped() const { return Scenario(ny_, nb_, nx_, na_); }

    std::string to_string() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;

private:
    int nx_ = 1;
    int na_ = 1;
    int ny_ = 1;
    int nb_ = 1;
};

/// Local deterministic strategy: one outcome per setting for each party.
struct DeterministicStrategy {
    std::vector<int> alice;
    std::vector<int> bob;
    friend bool operator==(const DeterministicStrategy&, const DeterministicStrategy&) = default;
    friend auto operator<=>(const DeterministicStrategy&, const DeterministicStrategy&) = default;
};

/// Number of deterministic strategies |A|^|X| * |B|^|Y|, saturating at UINT64_MAX.
std::uint64_t strategy_count(const Scenario& sc);

/// Affine dimension of the nonsignaling (and local) polytope.
long long ns_dimension(const Scenario& sc);

/// Throws InvalidStrategyError unless s is total and in range for sc.
void check_strategy(const DeterministicStrategy& s, const Scenario& sc);

/// Full conditional distribution p(a,b|x,y) stored in (x,y,a,b) order. The
/// scalar type is the numeric mode: Rational is exact, double is float.
template <class T> class BehaviorT {
public:
    using value_type = T;

    BehaviorT() = default;
    explicit BehaviorT(Scenario sc) : sc_(sc), p_(sc.cell_count(), ScalarTraits<T>::zero()) {}
    BehaviorT(Scenario sc, std::vector<T> table) : sc_(sc), p_(std::move(table))
    {
        if (p_.size() != sc_.cell_count())
            throw IncompleteTableError("behavior table has " + std::to_string(p_.size()) +
                                       " entries, scenario " + sc_.to_string() + " needs " +
                                       std::to_string(sc_.cell_count()));
    }

    const Scenario& scenario() const { return sc_; }
    const std::vector<T>& table() const { return p_; }
    std::vector<T>& table() { return p_; }

    const T& operator()(int x, int y, int a, int b) const { return p_[sc_.index(x, y, a, b)]; }
    T& operator()(int x, int y, int a, int b) { return p_[sc_.index(x, y, a, b)]; }
    const T& operator[](std::size_t i) const { return p_[i]; }
    T& operator[](std::size_t i) { return p_[i]; }

private:
    Scenario sc_;
    std::vector<T> p_;
};

using ExactBehavior = BehaviorT<Rational>;
using FloatBehavior = BehaviorT<double>;

template <class T> BehaviorT<T> induced_behavior(const DeterministicStrategy& s, const Scenario& sc)
{
    check_strategy(s, sc);
    BehaviorT<T> p(sc);
    for (int x = 0; x < sc.nx(); ++x)
        for (int y = 0; y < sc.ny(); ++y)
            p(x, y, s.alice[x], s.bob[y]) = ScalarTraits<T>::one();
    return p;
}

/// p = 1/(|A||B|) everywhere.
template <class T> BehaviorT<T> uniform_behavior(const Scenario& sc)
{
    BehaviorT<T> p(sc);
    T v;
    if constexpr (ScalarTraits<T>::exact)
        v = Rational(1, static_cast<unsigned long>(sc.na() * sc.nb()));
    else
        v = 1.0 / static_cast<double>(sc.na() * sc.nb());
    for (auto& e : p.table())
        e = v;
    return p;
}

/// The Popescu-Rohrlich box in (2,2;2,2): p(a,b|x,y) = 1/2 iff a xor b = x*y.
ExactBehavior pr_box();

/// Converts an exact behavior to float mode.
FloatBehavior to_float(const ExactBehavior& p);

/// q*p1 + (1-q)*p2.
template <class T> BehaviorT<T> mix(const T& q, const BehaviorT<T>& p1, const BehaviorT<T>& p2)
{
    if (!(p1.scenario() == p2.scenario()))
        throw ScenarioMismatchError("mixing behaviors from different scenarios");
    BehaviorT<T> out(p1.scenario());
    for (std::size_t i = 0; i < out.table().size(); ++i)
        out[i] = q * p1[i] + (ScalarTraits<T>::one() - q) * p2[i];
    return out;
}

struct Violation {
    enum class Kind { negative, normalization, signaling };
    Kind kind;
    double magnitude;   ///< worst deviation found for this kind
    std::string where;  ///< location of the worst deviation
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool valid() const { return violations.empty(); }
    const Violation* find(Violation::Kind k) const;
};

/// Checks nonnegativity, normalization and nonsignaling. Exact behaviors are
/// checked with tolerance 0 regardless of tol.
template <class T> ValidationReport validate_behavior(const BehaviorT<T>& p, double tol);

std::string to_string(Violation::Kind k);

} // namespace bellnl
