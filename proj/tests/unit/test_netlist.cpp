#include <doctest.h>

#include <algorithm>
#include <map>

#include "stackpnr/error.hpp"
#include "stackpnr/netlist.hpp"

using namespace stackpnr;

namespace {

ErrorKind kind_of(const std::string &text, int k = 6)
{
    try {
        parse_blif(text, k);
    } catch (const Error &e) {
        return e.kind();
    }
    FAIL("expected a parse error");
    return ErrorKind::ConfigError;
}

const char *kLatchFixture = R"(# three gates and a flop
.model seq
.inputs a b clk
.outputs y
.names a b t
11 1
.names t q u
1- 1
-1 1
.latch u q re clk 0
.names q y
0 1
.end
)";

} // namespace

TEST_CASE("minimal file")
{
    Netlist nl = parse_blif(".model c\n.inputs a b\n.outputs y\n.names a b y\n11 1\n.end\n");
    CHECK(nl.model_name == "c");
    CHECK(nl.luts.size() == 1);
    CHECK(nl.primary_inputs == std::vector<std::string>{"a", "b"});
    CHECK(nl.primary_outputs == std::vector<std::string>{"y"});
    CHECK(nl.luts[0].inputs == std::vector<std::string>{"a", "b"});
    CHECK(nl.luts[0].rows == std::vector<std::string>{"11 1"});
}

TEST_CASE("latch fields")
{
    Netlist nl = parse_blif(kLatchFixture);
    REQUIRE(nl.latches.size() == 1);
    CHECK(nl.latches[0].input == "u");
    CHECK(nl.latches[0].output == "q");
    CHECK(nl.latches[0].type == "re");
    CHECK(nl.latches[0].clock == "clk");
    CHECK(nl.latches[0].init == "0");
    CHECK(nl.luts.size() == 3);
}

TEST_CASE("comments, continuations and CRLF")
{
    Netlist nl = parse_blif(".model m # trailing\r\n.inputs a \\\r\n b\r\n.outputs y\r\n.names a \\\n b y\n11 1\n.end\n");
    CHECK(nl.primary_inputs.size() == 2);
    CHECK(nl.luts[0].inputs.size() == 2);
}

TEST_CASE("constant drivers")
{
    Netlist nl = parse_blif(".model k\n.outputs one zero\n.names one\n1\n.names zero\n.end\n");
    CHECK(nl.luts.size() == 2);
    CHECK(nl.luts[0].inputs.empty());
}

TEST_CASE("implicit latch clock")
{
    Netlist nl = parse_blif(".model m\n.inputs d\n.outputs q\n.latch d q re gclk 0\n.end\n");
    CHECK(nl.latches[0].clock == "gclk");
}

TEST_CASE("parse errors")
{
    CHECK(kind_of(".model m\n.inputs a\n.outputs y\n.names a y\n1 1\n.names a y\n0 1\n.end\n") == ErrorKind::DuplicateDriver);
    CHECK(kind_of(".model m\n.inputs a b c\n.outputs y\n.names a b c y\n111 1\n.end\n", 2) == ErrorKind::LutTooWide);
    CHECK(kind_of(".model m\n.inputs a\n.outputs y\n.names a b y\n11 1\n.end\n") == ErrorKind::DanglingSignal);
    CHECK(kind_of(".model m\n.inputs a\n.outputs y\n.names a y\n11 1\n.end\n") == ErrorKind::MalformedTruthTableRow);
    CHECK(kind_of(".model m\n.inputs a\n.outputs y\n.names a y\n2 1\n.end\n") == ErrorKind::MalformedTruthTableRow);
    CHECK(kind_of(".model m\n.inputs a\n.outputs y\n.subckt foo a=a y=y\n.end\n") == ErrorKind::UnknownDirective);
    CHECK(kind_of(".model m\n.gate nand2 a=x\n.end\n") == ErrorKind::UnknownDirective);
}

TEST_CASE("emit then parse gives the same netlist")
{
    for (const char *text : {kLatchFixture, ".model c\n.inputs a b\n.outputs y\n.names a b y\n11 1\n.end\n"}) {
        Netlist a = parse_blif(text);
        Netlist b = parse_blif(write_blif(a));
        CHECK(a.model_name == b.model_name);
        CHECK(a.primary_inputs == b.primary_inputs);
        CHECK(a.primary_outputs == b.primary_outputs);
        REQUIRE(a.luts.size() == b.luts.size());
        for (size_t i = 0; i < a.luts.size(); ++i) {
            CHECK(a.luts[i].output == b.luts[i].output);
            CHECK(a.luts[i].inputs == b.luts[i].inputs);
            CHECK(a.luts[i].rows == b.luts[i].rows);
        }
        REQUIRE(a.latches.size() == b.latches.size());
        for (size_t i = 0; i < a.latches.size(); ++i) {
            CHECK(a.latches[i].input == b.latches[i].input);
            CHECK(a.latches[i].output == b.latches[i].output);
            CHECK(a.latches[i].clock == b.latches[i].clock);
        }
    }
}

TEST_CASE("LUT and its only latch share a block")
{
    Netlist nl = parse_blif(".model m\n.inputs a clk\n.outputs q\n.names a d\n0 1\n.latch d q re clk 0\n.end\n");
    BlockNetlist b = pack_blocks(nl, 1);
    int clbs = 0;
    for (auto &blk : b.blocks)
        if (blk.kind == BlockKind::Clb) {
            ++clbs;
            CHECK(blk.primitives.size() == 2);
        }
    CHECK(clbs == 1);
    // a, clk pads; one CLB; q pad.
    CHECK(b.block_count() == 4);
    CHECK(dump_blocks(b) == "0 pad_in a\n1 pad_in clk\n2 clb lut:d latch:q\n3 pad_out q\n");
}

TEST_CASE("clock net is flagged and sinks carry pin -1")
{
    BlockNetlist b = pack_blocks(parse_blif(kLatchFixture), 1);
    auto it = std::find_if(b.nets.begin(), b.nets.end(), [](const Net &n) { return n.signal == "clk"; });
    REQUIRE(it != b.nets.end());
    CHECK(it->is_clock);
    CHECK(it->sinks.size() == 1);
    CHECK(it->sinks[0].pin == -1);
    for (auto &n : b.nets)
        if (n.signal != "clk")
            CHECK_FALSE(n.is_clock);
}

TEST_CASE("independent LUTs pack one per CLB")
{
    Netlist nl = parse_blif(".model m\n.inputs a b c d\n.outputs w x y z\n.names a w\n1 1\n.names b x\n1 1\n"
                            ".names c y\n1 1\n.names d z\n1 1\n.end\n");
    BlockNetlist b = pack_blocks(nl, 1);
    CHECK(std::count_if(b.blocks.begin(), b.blocks.end(), [](auto &blk) { return blk.kind == BlockKind::Clb; }) == 4);
}

TEST_CASE("clustering groups the signal-sharing pairs")
{
    // L1 and L3 share a, b, c; L2 and L4 share d, e, f. Indices interleave so
    // that order alone would pair them wrongly.
    Netlist nl = parse_blif(".model m\n.inputs a b c d e f\n.outputs o1 o2 o3 o4\n"
                            ".names a b c o1\n111 1\n.names d e f o2\n111 1\n"
                            ".names a b c o3\n000 1\n.names d e f o4\n000 1\n.end\n");
    BlockNetlist b = pack_blocks(nl, 2);

    // Oracle: score all three pairings by shared signals.
    auto sig = [&](int i) {
        std::vector<std::string> s = nl.luts[i].inputs;
        s.push_back(nl.luts[i].output);
        return s;
    };
    auto shared = [&](int i, int j) {
        int c = 0;
        for (auto &s : sig(i))
            for (auto &t : sig(j))
                c += s == t;
        return c;
    };
    const std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> pairings = {
        {{0, 1}, {2, 3}}, {{0, 2}, {1, 3}}, {{0, 3}, {1, 2}}};
    int best = -1;
    std::pair<int, int> best_first;
    for (auto &[p, q] : pairings) {
        const int score = shared(p.first, p.second) + shared(q.first, q.second);
        if (score > best) {
            best = score;
            best_first = p;
        }
    }
    CHECK(best_first == std::pair<int, int>{0, 2});

    std::vector<std::vector<int>> groups;
    for (auto &blk : b.blocks)
        if (blk.kind == BlockKind::Clb) {
            std::vector<int> g;
            for (auto &p : blk.primitives)
                g.push_back(p.index);
            std::sort(g.begin(), g.end());
            groups.push_back(g);
        }
    REQUIRE(groups.size() == 2);
    CHECK(groups[0] == std::vector<int>{0, 2});
    CHECK(groups[1] == std::vector<int>{1, 3});
}

TEST_CASE("star expansion")
{
    SUBCASE("one driver, two sinks")
    {
        BlockNetlist b = pack_blocks(parse_blif(".model m\n.inputs a\n.outputs x y\n.names a x\n1 1\n.names a y\n0 1\n.end\n"));
        CircuitGraph g = build_graph(b);
        // blocks: 0 pad a, 1 clb x, 2 clb y, 3 pad x, 4 pad y
        CHECK(g.edges() == std::vector<GraphEdge>{{0, 1, 1}, {0, 2, 1}, {1, 3, 1}, {2, 4, 1}});
    }
    SUBCASE("two nets between the same blocks accumulate")
    {
        CircuitGraph g(2, {{0, 1, 1}, {1, 0, 1}});
        CHECK(g.edges() == std::vector<GraphEdge>{{0, 1, 2}});
        CHECK(g.multiplicity(1, 0) == 2);
        CHECK(g.weighted_degree(0) == 2);
    }
    SUBCASE("5-block fixture against a hand enumeration")
    {
        // a -> L1(x), a,b -> L2(y)... laid out so each net is listed below.
        BlockNetlist b = pack_blocks(
            parse_blif(".model m\n.inputs a b\n.outputs y\n.names a b x\n11 1\n.names x b y\n11 1\n.end\n"));
        // blocks: 0 pad a, 1 pad b, 2 clb x, 3 clb y, 4 pad y
        // nets: a:0->{2}, b:1->{2,3}, x:2->{3}, y:3->{4}
        REQUIRE(b.block_count() == 5);
        CHECK(b.net_count() == 4);
        std::map<std::pair<int, int>, int> hand{{{0, 2}, 1}, {{1, 2}, 1}, {{1, 3}, 1}, {{2, 3}, 1}, {{3, 4}, 1}};
        CircuitGraph g = build_graph(b);
        std::map<std::pair<int, int>, int> got;
        for (auto &e : g.edges())
            got[{e.u, e.v}] = e.multiplicity;
        CHECK(got == hand);
    }
    SUBCASE("self loops are rejected")
    {
        CHECK_THROWS_AS(CircuitGraph(2, {{1, 1, 1}}), Error);
    }
}
