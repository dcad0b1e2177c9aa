#include <doctest.h>

#include <random>
#include <set>

#include "bellnl/io.hpp"
#include "bellnl/zeros.hpp"
#include "oracles.hpp"

using namespace bellnl;

namespace {

TableOfZeros fixture(const std::string& name)
{
    return zeros_from_json(read_json_file(std::string(BELLNL_FIXTURE_DIR) + "/" + name));
}

std::set<std::uint64_t> labels(const std::vector<TableOfZeros>& tables,
                               const std::vector<std::vector<std::uint32_t>>& group)
{
    std::set<std::uint64_t> out;
    for (const auto& t : tables)
        out.insert(oracle::orbit_min(group, oracle::to_mask(t)));
    return out;
}

} // namespace

TEST_CASE("Hardy table is realizable and accepts the textbook witness")
{
    const auto t = fixture("hardy.json");
    const auto r = is_lhv_realizable(t);
    CHECK(r.realizable);
    REQUIRE(r.witness);
    CHECK(assignment_avoids(t, *r.witness));
    CHECK(assignment_avoids(t, LhvAssignment{{1, 0}, {0, 1}}));
    CHECK_FALSE(assignment_avoids(t, LhvAssignment{{0, 0}, {1, 1}}));
    CHECK_FALSE(is_critical(t));
}

TEST_CASE("magic-square zero table is nonlocal, every block deletion is not")
{
    const auto t = fixture("avn_3434.json");
    CHECK(t.size() == 72);
    CHECK_FALSE(is_lhv_realizable(t).realizable);
    CHECK_FALSE(oracle::realizable(t));
    const Scenario& sc = t.scenario();
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) {
            TableOfZeros d = t;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    d = d.without(static_cast<std::uint32_t>(sc.index(x, y, a, b)));
            CHECK(d.size() == 64);
            const auto r = is_lhv_realizable(d);
            CHECK(r.realizable);
            REQUIRE(r.witness);
            CHECK(assignment_avoids(d, *r.witness));
        }
    // Each zero is needed on its own, too.
    CHECK(is_critical(t));
    for (auto c : t.cells())
        CHECK(oracle::realizable(t.without(c)));
}

TEST_CASE("(3,2;3,3) table is critical")
{
    const auto t = fixture("cntz_3233.json");
    CHECK(t.scenario() == Scenario(3, 2, 3, 3));
    CHECK_FALSE(is_lhv_realizable(t).realizable);
    CHECK(is_critical(t));
    for (auto c : t.cells())
        CHECK(oracle::realizable(t.without(c)));
    // Any extra zero is redundant.
    std::uint32_t extra = 0;
    while (t.contains(extra))
        ++extra;
    CHECK_FALSE(is_critical(t.with(extra)));
}

TEST_CASE("realizability against brute force on random tables")
{
    std::mt19937_64 rng(21);
    for (const Scenario sc : {Scenario(2, 3, 3, 2), Scenario(3, 3, 2, 2), Scenario(2, 2, 2, 4)}) {
        std::bernoulli_distribution keep(0.35);
        for (int t = 0; t < 200; ++t) {
            std::vector<std::uint32_t> cells;
            for (std::uint32_t c = 0; c < sc.cell_count(); ++c)
                if (keep(rng))
                    cells.push_back(c);
            const TableOfZeros tab(sc, cells);
            const auto r = is_lhv_realizable(tab, std::nullopt, t);
            CHECK(r.realizable == oracle::realizable(tab));
            if (r.realizable) {
                REQUIRE(r.witness);
                CHECK(assignment_avoids(tab, *r.witness));
            }
            const auto sw = swap_parties(tab);
            CHECK(sw.scenario() == sc.swapped());
            CHECK(swap_parties(sw) == tab);
            CHECK(is_lhv_realizable(sw).realizable == r.realizable);
        }
    }
}

TEST_CASE("regions restrict the allowed outcomes")
{
    const Scenario sc(2, 3, 2, 2);
    // Zeros on outcome 0 of every Alice setting block nothing in the full
    // scenario but everything once Alice may only output 0.
    std::vector<std::uint32_t> cells;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int b = 0; b < 2; ++b)
                cells.push_back(static_cast<std::uint32_t>(sc.index(x, y, 0, b)));
    const TableOfZeros t(sc, cells);
    CHECK(is_lhv_realizable(t).realizable);
    const Region only0{1, 3};
    CHECK_FALSE(is_lhv_realizable(t, only0).realizable);
    CHECK(only0.contains(sc, cells[0]));
    CHECK_FALSE(only0.contains(sc, static_cast<std::uint32_t>(sc.index(0, 0, 1, 0))));
    CHECK(Region::full(sc).alice_outcomes == 7);
}

TEST_CASE("minimal completions of the empty table are the critical tables")
{
    const Scenario sc(2, 2, 2, 2);
    const auto supports = oracle::all_support_masks(sc);
    std::set<std::uint64_t> critical;
    for (std::uint64_t z = 0; z < (1U << 16); ++z) {
        if (oracle::realizable(supports, z))
            continue;
        bool ok = true;
        for (int c = 0; c < 16 && ok; ++c)
            if ((z >> c) & 1U)
                ok = oracle::realizable(supports, z & ~(std::uint64_t{1} << c));
        if (ok)
            critical.insert(z);
    }
    std::set<std::uint64_t> got;
    for (const auto& t : generate_zpb(TableOfZeros(sc), Region::full(sc))) {
        CHECK(is_critical(t));
        got.insert(oracle::to_mask(t));
    }
    CHECK(got == critical);
}

TEST_CASE("CNTZ enumeration matches the brute-force oracle in (2,2;2,2)")
{
    const Scenario sc(2, 2, 2, 2);
    const auto expected = oracle::critical_classes(sc);
    const auto group = oracle::all_relabelings(sc);
    for (bool sub : {true, false})
        for (bool swap : {false, true}) {
            CntzOptions opt;
            opt.use_subgroup = sub;
            opt.swap = swap;
            opt.seed = 17;
            const auto r = enumerate_cntz(sc, opt);
            CHECK(r.critical.size() == expected.size());
            CHECK(r.minimal.size() == expected.size());
            CHECK(labels(r.critical, group) == expected);
            for (const auto& t : r.critical)
                CHECK(is_critical(t));
        }
}

TEST_CASE("CNTZ enumeration is complete in (2,3;2,2)")
{
    const Scenario sc(2, 3, 2, 2);
    const auto expected = oracle::critical_classes(sc);
    const auto r = enumerate_cntz(sc);
    CHECK(labels(r.critical, oracle::all_relabelings(sc)) == expected);
}

TEST_CASE("zeros of behaviors")
{
    CHECK(zeros_from_behavior(pr_box()).size() == 8);
    auto f = to_float(pr_box());
    f(0, 0, 0, 1) = 1e-14;
    f(0, 0, 0, 0) -= 1e-14;
    CHECK(zeros_from_behavior(f, 1e-12).size() == 8);
    CHECK(zeros_from_behavior(f, 1e-16).size() == 7);
}
