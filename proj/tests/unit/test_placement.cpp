#include <doctest.h>

#include <algorithm>
#include <limits>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "stackpnr/error.hpp"
#include "stackpnr/placement.hpp"

using namespace stackpnr;

namespace {

Partition single_tier(int blocks)
{
    Partition p;
    p.tiers = 1;
    p.tier_of.assign(blocks, 0);
    p.tier_sizes = {blocks};
    return p;
}

std::string independent_luts(int n)
{
    std::string s = ".model m\n.inputs a\n.outputs";
    for (int i = 0; i < n; ++i)
        s += " o" + std::to_string(i);
    s += "\n";
    for (int i = 0; i < n; ++i)
        s += ".names a o" + std::to_string(i) + "\n1 1\n";
    return s + ".end\n";
}

} // namespace

TEST_CASE("random placement is legal and reproducible")
{
    Arch3D arch = fixtures::reference_arch();
    arch.tiers = 1;
    BlockNetlist b = fixtures::packed(".model m\n.inputs a\n.outputs w x y z\n.names a w\n1 1\n.names a x\n0 1\n"
                                      ".names a y\n1 1\n.names a z\n0 1\n.end\n");
    Partition p = single_tier(b.block_count());
    Placement pl = random_placement(b, p, arch, 5);
    std::set<std::tuple<int, int, int, int>> used;
    for (auto &blk : b.blocks) {
        const Location &l = pl.location_of[blk.id];
        CHECK(used.insert({l.x, l.y, l.z, l.slot}).second);
        CHECK(pl.block_at(l) == blk.id);
        const bool interior = l.x >= 1 && l.x <= 8 && l.y >= 1 && l.y <= 8;
        CHECK(interior == (blk.kind == BlockKind::Clb));
    }
    CHECK(random_placement(b, p, arch, 5) == pl);
}

TEST_CASE("too many CLBs for the grid")
{
    Arch3D arch = fixtures::reference_arch();
    arch.tiers = 1;
    BlockNetlist b = fixtures::packed(independent_luts(65));
    Partition p = single_tier(b.block_count());
    CHECK_THROWS_AS(random_placement(b, p, arch, 1), Error);
    try {
        random_placement(b, p, arch, 1);
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::GridTooSmall);
    }
    Arch3D fitted = fit_grid(b, p, arch);
    CHECK(fitted.grid_x == 9);
    CHECK_NOTHROW(random_placement(b, p, fitted, 1));
}

TEST_CASE("3D half-perimeter wirelength")
{
    Arch3D arch = fixtures::reference_arch();
    arch.grid_units_per_um = 0.1; // h = 2 grid units
    Net net;
    net.driver = {0, 0};
    net.sinks = {{1, 0}};
    Placement pl(8, 8, 2, 1, 2);
    pl.put(0, {0, 0, 0, 0});
    pl.put(1, {0, 0, 0, 0});
    CHECK(net_hpwl3d(net, pl, arch) == 0.0);
    pl.put(1, {3, 2, 1, 0});
    CHECK(net_hpwl3d(net, pl, arch) == 7.0);
    CHECK(net_cost_scaled(net, pl, tier_hop_scaled(arch)) == 7 * kCostScale);

    // Five terminals against a plain min/max scan.
    Rng rng(3);
    Placement p5(8, 8, 2, 1, 5);
    Net n5;
    n5.driver = {0, 0};
    for (int i = 1; i < 5; ++i)
        n5.sinks.push_back({i, 0});
    for (int trial = 0; trial < 20; ++trial) {
        int xs[5], ys[5], zs[5];
        for (int i = 0; i < 5; ++i) {
            xs[i] = rng.below(10);
            ys[i] = rng.below(10);
            zs[i] = rng.below(2);
            p5.location_of[i] = {xs[i], ys[i], zs[i], 0};
        }
        const double expect = (*std::max_element(xs, xs + 5) - *std::min_element(xs, xs + 5)) +
                              (*std::max_element(ys, ys + 5) - *std::min_element(ys, ys + 5)) +
                              (*std::max_element(zs, zs + 5) - *std::min_element(zs, zs + 5)) * 2.0;
        CHECK(net_hpwl3d(n5, p5, arch) == expect);
    }
}

TEST_CASE("annealing reaches the exhaustive optimum on a three-block net")
{
    Arch3D arch = fixtures::reference_arch();
    arch.tiers = 1;
    arch.io_capacity = 1;
    BlockNetlist b = fixtures::packed(".model m\n.inputs a\n.outputs y\n.names a y\n1 1\n.end\n");
    Partition p = single_tier(b.block_count());
    // Blocks: 0 pad a, 1 clb, 2 pad y.
    const auto pads = pad_sites(8, 8, 0, 1);
    const auto clbs = clb_sites(8, 8, 0);
    int best = std::numeric_limits<int>::max();
    for (auto &pa : pads)
        for (auto &c : clbs)
            for (auto &py : pads)
                if (!(pa == py))
                    best = std::min(best, std::abs(pa.x - c.x) + std::abs(pa.y - c.y) + std::abs(py.x - c.x) +
                                              std::abs(py.y - c.y));
    CHECK(best == 2);

    int64_t best_found = std::numeric_limits<int64_t>::max();
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        SaSchedule s;
        s.seed = seed;
        PlacementResult r = anneal_placement(b, p, arch, s);
        CHECK(r.cost <= r.initial_cost);
        CHECK(r.cost == placement_cost_scaled(b, r.placement, arch));
        best_found = std::min(best_found, r.cost);
    }
    CHECK(best_found == best * kCostScale);
}

TEST_CASE("single block placement")
{
    Arch3D arch = fixtures::reference_arch();
    arch.tiers = 1;
    BlockNetlist b = fixtures::packed(".model m\n.inputs a\n.outputs\n.end\n");
    REQUIRE(b.block_count() == 1);
    PlacementResult r = anneal_placement(b, single_tier(1), arch, SaSchedule{});
    CHECK(r.cost == 0);
    CHECK(r.trace.temperatures.empty());
}

TEST_CASE("tracked cost matches recomputation after every accepted move")
{
    Arch3D arch = fixtures::reference_arch();
    BlockNetlist b = fixtures::packed_fixture("adder4");
    Partition p;
    p.tiers = 2;
    for (int i = 0; i < b.block_count(); ++i)
        p.tier_of.push_back(i % 2);
    p.tier_sizes = {(b.block_count() + 1) / 2, b.block_count() / 2};
    int checked = 0;
    SaSchedule s;
    s.seed = 8;
    PlacementResult r = anneal_placement(b, p, arch, s, [&](const Placement &pl, int64_t cost) {
        CHECK(cost == placement_cost_scaled(b, pl, arch));
        ++checked;
    });
    CHECK(checked > 0);
    CHECK(r.cost == placement_cost_scaled(b, r.placement, arch));
    for (auto &blk : b.blocks)
        CHECK(r.placement.location_of[blk.id].z == p.tier_of[blk.id]);
}

TEST_CASE("placement file round trip")
{
    Arch3D arch = fixtures::reference_arch();
    BlockNetlist b = fixtures::packed_fixture("counter4");
    Partition p;
    p.tiers = 2;
    for (int i = 0; i < b.block_count(); ++i)
        p.tier_of.push_back(i % 2);
    p.tier_sizes = {(b.block_count() + 1) / 2, b.block_count() / 2};
    Placement pl = random_placement(b, p, arch, 4);
    const int64_t cost = placement_cost_scaled(b, pl, arch);
    PlacementFile f = read_placement(write_placement(pl, cost, 12), b.block_count());
    CHECK(f.placement == pl);
    CHECK(f.cost == cost);
    CHECK(f.seed == 12);
}
