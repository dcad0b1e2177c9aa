#include <doctest.h>

#include <random>
#include <set>

#include "bellnl/symmetry.hpp"
#include "oracles.hpp"

using namespace bellnl;

namespace {

TableOfZeros random_table(const Scenario& sc, std::mt19937_64& rng, double density)
{
    std::bernoulli_distribution keep(density);
    std::vector<std::uint32_t> cells;
    for (std::uint32_t c = 0; c < sc.cell_count(); ++c)
        if (keep(rng))
            cells.push_back(c);
    return TableOfZeros(sc, cells);
}

} // namespace

TEST_CASE("group order formula against closure on every small scenario")
{
    int checked = 0;
    for (int nx = 1; nx <= 4; ++nx)
        for (int na = 2; na <= 4; ++na)
            for (int ny = 1; ny <= 4; ++ny)
                for (int nb = 2; nb <= 4; ++nb) {
                    const Scenario sc(nx, na, ny, nb);
                    const mpz_class order = bell_group_order(sc);
                    if (order > 10000)
                        continue;
                    const GroupHandle g = bell_group(sc);
                    CHECK(g.order() == order);
                    CHECK(g.generators().size() <= 4);
                    CHECK(closure_size(g, 20000) == order.get_ui());
                    CHECK(permutation_group_order(g.cell_generators(), sc.cell_count()) == order);
                    ++checked;
                }
    CHECK(checked > 20);
    CHECK(bell_group_order(Scenario(3, 3, 3, 2)) == 62208);
}

TEST_CASE("(2,2;2,2) group equals the directly constructed relabelings")
{
    const Scenario sc(2, 2, 2, 2);
    const auto all = oracle::all_relabelings(sc);
    CHECK(all.size() == 64);
    std::set<std::vector<std::uint32_t>> direct(all.begin(), all.end());
    CHECK(direct.size() == 64);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i)
        CHECK(direct.count(BellGroupElement::random(sc, rng).cell_permutation(sc)) == 1);
    CHECK(closure_size(bell_group(sc), 1000) == 64);
}

TEST_CASE("output subgroup order")
{
    const Scenario sc(3, 3, 3, 2);
    const GroupHandle s = output_subgroup(sc);
    CHECK(s.kind() == GroupHandle::Kind::outputs_only);
    CHECK(s.order() == 216 * 8);
    CHECK(permutation_group_order(s.cell_generators(), sc.cell_count()) == 216 * 8);
}

TEST_CASE("group elements compose as permutations")
{
    const Scenario sc(3, 3, 2, 4);
    std::mt19937_64 rng(9);
    for (int t = 0; t < 20; ++t) {
        const auto g = BellGroupElement::random(sc, rng);
        const auto h = BellGroupElement::random(sc, rng);
        const auto tab = random_table(sc, rng, 0.3);
        CHECK(act(g * h, tab) == act(g, act(h, tab)));
        CHECK(act(g.inverse(), act(g, tab)) == tab);
        CHECK(g * g.inverse() == BellGroupElement::identity(sc));
        for (std::uint32_t c = 0; c < sc.cell_count(); ++c)
            CHECK((g * h).map_cell(sc, c) == g.map_cell(sc, h.map_cell(sc, c)));
    }
}

TEST_CASE("canonical form is an orbit invariant and the orbit minimum")
{
    const Scenario sc(2, 2, 2, 2);
    const auto grp = bell_group(sc);
    const auto all = oracle::all_relabelings(sc);
    std::mt19937_64 rng(4);
    for (int t = 0; t < 50; ++t) {
        const auto tab = random_table(sc, rng, 0.4);
        const auto orb = orbit(tab, grp);
        CHECK(64 % orb.size() == 0);
        std::set<std::uint64_t> direct;
        for (const auto& p : all)
            direct.insert(oracle::apply(p, oracle::to_mask(tab)));
        CHECK(direct.size() == orb.size());
        for (const auto& o : orb)
            CHECK(direct.count(oracle::to_mask(o)) == 1);
        const auto can = canonical_form(tab, grp);
        CHECK(can == *std::min_element(orb.begin(), orb.end(), [](const auto& a, const auto& b) {
            return a.cells() < b.cells();
        }));
        CHECK(canonical_form(act(BellGroupElement::random(sc, rng), tab), grp) == can);
    }

    const Scenario big(3, 3, 3, 2);
    const auto bg = bell_group(big);
    for (int t = 0; t < 5; ++t) {
        const auto tab = random_table(big, rng, 0.2);
        const auto can = canonical_form(tab, bg);
        CHECK(canonical_form(act(BellGroupElement::random(big, rng), tab), bg) == can);
    }
}

TEST_CASE("group reduction keeps one minimal representative per class")
{
    const Scenario sc(2, 2, 2, 2);
    const auto grp = bell_group(sc);
    std::mt19937_64 rng(8);
    const auto a = TableOfZeros(sc, {0, 5});
    const auto b = act(BellGroupElement::random(sc, rng), a);
    const auto sup = act(BellGroupElement::random(sc, rng), a.with(10).with(15));
    const auto out = group_reduce({sup, a, b}, grp);
    REQUIRE(out.size() == 1);
    CHECK(out[0] == canonical_form(a, grp));
    const auto sub = output_subgroup(sc);
    CHECK(group_reduce({sup, a, b}, grp, &sub) == out);
}

TEST_CASE("orbit classes match the brute-force orbit labels")
{
    const Scenario sc(2, 2, 2, 2);
    const auto grp = bell_group(sc);
    const auto all = oracle::all_relabelings(sc);
    std::mt19937_64 rng(9);
    std::vector<TableOfZeros> tables;
    std::set<std::uint64_t> labels;
    for (int t = 0; t < 300; ++t) {
        auto tab = random_table(sc, rng, 0.3);
        if (t % 3 == 0)
            tab = act(BellGroupElement::random(sc, rng), tables.empty() ? tab : tables.back());
        labels.insert(oracle::orbit_min(all, oracle::to_mask(tab)));
        tables.push_back(tab);
    }
    const auto classes = orbit_classes(tables, grp);
    CHECK(classes.size() == labels.size());
    std::set<std::uint64_t> got;
    for (const auto& c : classes) {
        CHECK(c == canonical_form(c, grp));
        got.insert(oracle::orbit_min(all, oracle::to_mask(c)));
    }
    CHECK(got == labels);
    const auto sub = output_subgroup(sc);
    CHECK(orbit_classes(orbit_classes(tables, sub), grp) == classes);
}
