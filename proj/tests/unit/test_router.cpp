#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "stackpnr/error.hpp"
#include "stackpnr/partition.hpp"
#include "stackpnr/placement.hpp"
#include "stackpnr/router.hpp"

using namespace stackpnr;

namespace {

Arch3D grid_arch(int side, int tiers)
{
    Arch3D a = fixtures::reference_arch();
    a.grid_x = side;
    a.grid_y = side;
    a.tiers = tiers;
    return a;
}

std::vector<int> site_nodes(const Rrg &g, RrKind kind)
{
    std::vector<int> out;
    for (int i = 0; i < g.node_count(); ++i)
        if (g.node(i).kind == kind)
            out.push_back(i);
    return out;
}

// Connected, acyclic, spans its terminals, follows RRG edges.
void check_tree(const Rrg &g, const RouteRequest &req, const RouteTree &tree)
{
    REQUIRE(!tree.nodes.empty());
    CHECK(tree.nodes[0] == req.source);
    CHECK(tree.parent[0] == -1);
    std::set<int> seen{tree.nodes[0]};
    for (size_t i = 1; i < tree.nodes.size(); ++i) {
        REQUIRE(tree.parent[i] >= 0);
        REQUIRE(tree.parent[i] < static_cast<int>(i));
        CHECK(g.edge_delay(tree.nodes[tree.parent[i]], tree.nodes[i]) >= 0.0);
        CHECK(seen.insert(tree.nodes[i]).second);
    }
    for (int s : req.sinks)
        CHECK(seen.count(s) == 1);
}

void check_usage(const Rrg &g, const RoutingResult &r)
{
    std::vector<int> usage(g.node_count(), 0);
    for (auto &t : r.trees)
        for (int n : t.nodes)
            ++usage[n];
    CHECK(usage == r.usage);
    if (r.success)
        for (int i = 0; i < g.node_count(); ++i)
            CHECK(usage[i] <= g.node(i).capacity);
}

struct Placed
{
    Arch3D arch;
    BlockNetlist blocks;
    Placement placement;
};

Placed place_fixture(const std::string &name, int tiers, uint64_t seed)
{
    Placed p;
    p.blocks = fixtures::packed_fixture(name);
    CircuitGraph g = build_graph(p.blocks);
    SaSchedule s;
    s.seed = seed;
    PartitionResult part = anneal_partition(g, tiers, s);
    Arch3D a = fixtures::reference_arch();
    a.tiers = tiers;
    p.arch = fit_grid(p.blocks, part.partition, a);
    p.placement = anneal_placement(p.blocks, part.partition, p.arch, s).placement;
    return p;
}

} // namespace

TEST_CASE("congestion-free routes match a plain shortest-path search")
{
    Rng rng(17);
    for (int tiers : {1, 2}) {
        const Rrg g = build_rrg(grid_arch(4, tiers), 4);
        const auto sources = site_nodes(g, RrKind::Source);
        const auto sinks = site_nodes(g, RrKind::Sink);
        for (int trial = 0; trial < 15; ++trial) {
            RouteRequest req;
            req.source = sources[rng.below(static_cast<int>(sources.size()))];
            req.sinks = {sinks[rng.below(static_cast<int>(sinks.size()))]};
            RoutingResult r = route_connections(g, {req}, RouterParams{});
            REQUIRE(r.success);
            CHECK(r.path_cost[0][0] == oracle::dijkstra(g, req.source, req.sinks[0]));
            check_tree(g, req, r.trees[0]);
        }
    }
}

TEST_CASE("two nets through a one-track corridor")
{
    Rrg g;
    auto node = [&](RrKind k, double base) {
        RrgNode n;
        n.kind = k;
        n.base_cost = base;
        n.capacity = 1;
        n.track = g.node_count();
        return g.add_node(n);
    };
    const int sa = node(RrKind::Source, 0), sb = node(RrKind::Source, 0);
    const int ta = node(RrKind::Sink, 0), tb = node(RrKind::Sink, 0);
    const int c = node(RrKind::WireX, 1);
    const int d1 = node(RrKind::WireX, 1), d2 = node(RrKind::WireX, 1);
    g.add_edge(sa, c, 0);
    g.add_edge(sb, c, 0);
    g.add_edge(c, ta, 0);
    g.add_edge(c, tb, 0);
    g.add_edge(sb, d1, 0);
    g.add_edge(d1, d2, 0);
    g.add_edge(d2, tb, 0);
    g.finalize();

    std::vector<RouteRequest> reqs = {{0, sa, {ta}, {}}, {1, sb, {tb}, {}}};
    RoutingResult r = route_connections(g, reqs, RouterParams{});
    CHECK(r.success);
    CHECK(r.overuse == 0);
    CHECK(r.iterations <= 50);
    CHECK(r.iterations > 1);
    CHECK(r.log.front().overuse == 1);
    CHECK(r.trees[0].nodes == std::vector<int>{sa, c, ta});
    CHECK(r.trees[1].nodes == std::vector<int>{sb, d1, d2, tb});
    for (int i = 0; i < g.node_count(); ++i)
        CHECK(r.history[i] >= 1.0);
    check_usage(g, r);
}

TEST_CASE("unreachable sink")
{
    Rrg g;
    RrgNode s;
    s.kind = RrKind::Source;
    const int a = g.add_node(s);
    s.kind = RrKind::Sink;
    s.track = 1;
    const int b = g.add_node(s);
    g.finalize();
    try {
        route_connections(g, {{0, a, {b}, {}}}, RouterParams{});
        FAIL("expected an error");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::DisconnectedRrg);
    }
}

TEST_CASE("source and sink on the same site")
{
    const Rrg g = build_rrg(grid_arch(3, 1), 2);
    const SitePins pins = g.site({2, 2, 0, 0});
    RoutingResult r = route_connections(g, {{0, pins.source, {pins.sink}, {}}}, RouterParams{});
    REQUIRE(r.success);
    const auto &t = r.trees[0];
    REQUIRE(t.nodes.size() == 5);
    CHECK(g.node(t.nodes[1]).kind == RrKind::Opin);
    CHECK(is_wire(g.node(t.nodes[2]).kind));
    CHECK(g.node(t.nodes[3]).kind == RrKind::Ipin);
    CHECK(total_wirelength(g, r) == 1);
}

TEST_CASE("placed designs route legally and cross tiers through TSVs")
{
    for (int tiers : {1, 2, 3}) {
        Placed p = place_fixture("adder4", tiers, 3);
        const Rrg g = build_rrg(p.arch, 8);
        RoutingResult r = route_nets(g, p.blocks, p.placement, RouterParams{});
        REQUIRE(r.success);
        CHECK(r.overuse == 0);
        check_usage(g, r);
        for (size_t i = 0; i < r.requests.size(); ++i) {
            check_tree(g, r.requests[i], r.trees[i]);
            const Net &net = p.blocks.nets[r.requests[i].net];
            int zmin = p.placement.location_of[net.driver.block].z, zmax = zmin;
            for (auto &s : net.sinks) {
                zmin = std::min(zmin, p.placement.location_of[s.block].z);
                zmax = std::max(zmax, p.placement.location_of[s.block].z);
            }
            int tsvs = 0;
            for (int n : r.trees[i].nodes)
                tsvs += g.node(n).kind == RrKind::WireZ;
            CHECK(tsvs >= zmax - zmin);
        }
        if (tiers == 1)
            CHECK(tsv_count(g, r) == 0);
    }
}

TEST_CASE("routing is deterministic and survives a file round trip")
{
    Placed p = place_fixture("counter4", 2, 5);
    const Rrg g = build_rrg(p.arch, 4);
    RoutingResult a = route_nets(g, p.blocks, p.placement, RouterParams{});
    RoutingResult b = route_nets(g, p.blocks, p.placement, RouterParams{});
    REQUIRE(a.trees.size() == b.trees.size());
    for (size_t i = 0; i < a.trees.size(); ++i) {
        CHECK(a.trees[i].nodes == b.trees[i].nodes);
        CHECK(a.trees[i].parent == b.trees[i].parent);
    }
    const std::string text = write_routing(g, a);
    CHECK(text == write_routing(g, b));
    CHECK(routing_file_width(text) == 4);
    RoutingResult back = read_routing(text, g, make_requests(g, p.blocks, p.placement, {}));
    CHECK(write_routing(g, back) == text);
    CHECK(back.usage == a.usage);
}

TEST_CASE("minimum width search")
{
    Placed p = place_fixture("adder4", 1, 2);
    WminResult w = find_wmin(p.arch, p.blocks, p.placement, RouterParams{});
    CHECK(w.result.success);
    CHECK(w.width % 2 == 0);
    auto routes = [&](int width) {
        return route_nets(build_rrg(p.arch, width), p.blocks, p.placement, RouterParams{}).success;
    };
    CHECK(routes(w.width));
    CHECK(routes(w.width + 2));
    if (w.width > 2)
        CHECK_FALSE(routes(w.width - 2));
}

TEST_CASE("empty netlist needs the smallest width")
{
    Arch3D a = grid_arch(2, 1);
    BlockNetlist b = fixtures::packed(".model m\n.inputs a\n.outputs\n.end\n");
    Placement pl(2, 2, 1, a.io_capacity, 1);
    pl.put(0, {0, 1, 0, 0});
    WminResult w = find_wmin(a, b, pl, RouterParams{});
    CHECK(w.width == 2);
    CHECK(w.result.success);
}
