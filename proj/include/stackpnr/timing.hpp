#pragma once

#include <string>
#include <vector>

#include "stackpnr/arch.hpp"
#include "stackpnr/netlist.hpp"
#include "stackpnr/placement.hpp"
#include "stackpnr/router.hpp"

namespace stackpnr {

enum class TimingNodeKind
{
    PadIn,
    PadOut,
    Lut,
    LatchClk,
    LatchQ,
    LatchD,
};

struct TimingNode
{
    TimingNodeKind kind = TimingNodeKind::Lut;
    std::string name;
};

struct TimingEdge
{
    int from = 0;
    int to = 0;
    double delay = 0.0; // seconds
    // Routed connection this edge rides on, or -1 for intra-block edges.
    int net = -1;
    int sink = -1;
};

struct TimingGraph
{
    std::vector<TimingNode> nodes;
    std::vector<TimingEdge> edges;

    int add_node(TimingNodeKind kind, std::string name);
    void add_edge(int from, int to, double delay, int net = -1, int sink = -1);
};

// Per net id and sink index, seconds. Clock nets may be left empty.
using NetDelays = std::vector<std::vector<double>>;

NetDelays routed_net_delays(const Rrg &rrg, const RoutingResult &result, int net_count);

// Pre-route estimate: every sink of a net sees HPWL3D x t_seg(1).
NetDelays estimated_net_delays(const BlockNetlist &blocks, const Placement &pl, const Arch3D &arch);

/// Primitive-level timing graph. Latch outputs launch (clk -> q edge carries
/// clock-to-q) and latch inputs capture (setup added on the edge). Edges into
/// a LUT add t_lut. Connections driven by input pads and connections inside
/// one block carry no wire delay.
TimingGraph build_timing_graph(const BlockNetlist &blocks, const NetDelays &net_delays, const DelayModel &delays);

struct PathReport
{
    double cpd = 0.0;
    std::vector<int> path; // node ids, source first
    std::vector<double> arrival;
    std::vector<double> required;
    std::vector<double> edge_slack;
    std::vector<double> edge_criticality;
};

/// Longest-path analysis. Throws CombinationalLoop naming the nodes of a
/// cycle.
PathReport critical_path(const TimingGraph &tg);

// Per net id and sink index, the largest criticality of any edge riding on
// that connection.
Criticalities connection_criticalities(const TimingGraph &tg, const PathReport &report, const BlockNetlist &blocks);

std::string timing_report_text(const TimingGraph &tg, const PathReport &report);
std::string timing_report_json(const TimingGraph &tg, const PathReport &report);

} // namespace stackpnr
