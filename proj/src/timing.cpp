#include "stackpnr/timing.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <sstream>

#include <json.hpp>

#include "stackpnr/error.hpp"

namespace stackpnr {

int TimingGraph::add_node(TimingNodeKind kind, std::string name)
{
    nodes.push_back({kind, std::move(name)});
    return static_cast<int>(nodes.size()) - 1;
}

void TimingGraph::add_edge(int from, int to, double delay, int net, int sink)
{
    if (delay < 0.0)
        fail(ErrorKind::InvariantViolation, "negative timing edge delay");
    edges.push_back({from, to, delay, net, sink});
}

NetDelays routed_net_delays(const Rrg &rrg, const RoutingResult &result, int net_count)
{
    NetDelays out(net_count);
    auto per_request = connection_delays(rrg, result);
    for (size_t r = 0; r < result.requests.size(); ++r)
        out[result.requests[r].net] = std::move(per_request[r]);
    return out;
}

NetDelays estimated_net_delays(const BlockNetlist &blocks, const Placement &pl, const Arch3D &arch)
{
    NetDelays out(blocks.net_count());
    for (auto &net : blocks.nets) {
        if (net.is_clock)
            continue;
        const double d = net_hpwl3d(net, pl, arch) * arch.delays.seg(1);
        out[net.id].assign(net.sinks.size(), d);
    }
    return out;
}

namespace {

std::string_view node_prefix(TimingNodeKind k)
{
    switch (k) {
    case TimingNodeKind::PadIn:
        return "pad_in";
    case TimingNodeKind::PadOut:
        return "pad_out";
    case TimingNodeKind::Lut:
        return "lut";
    case TimingNodeKind::LatchClk:
        return "latch_clk";
    case TimingNodeKind::LatchQ:
        return "latch_q";
    case TimingNodeKind::LatchD:
        return "latch_d";
    }
    return "?";
}

} // namespace

TimingGraph build_timing_graph(const BlockNetlist &blocks, const NetDelays &net_delays, const DelayModel &delays)
{
    const Netlist &nl = blocks.netlist;
    TimingGraph tg;

    // Driver node and block of every signal.
    std::map<std::string, std::pair<int, int>> driver;
    std::vector<int> lut_node(nl.luts.size(), -1);
    std::vector<int> latch_d(nl.latches.size(), -1);
    std::vector<int> lut_block(nl.luts.size(), -1);
    std::vector<int> latch_block(nl.latches.size(), -1);

    for (auto &blk : blocks.blocks) {
        if (blk.kind == BlockKind::PadIn) {
            driver[blk.name] = {tg.add_node(TimingNodeKind::PadIn, blk.name), blk.id};
            continue;
        }
        for (auto &p : blk.primitives) {
            if (p.kind == PrimitiveKind::Lut) {
                const Lut &lut = nl.luts[p.index];
                lut_node[p.index] = tg.add_node(TimingNodeKind::Lut, lut.output);
                lut_block[p.index] = blk.id;
                driver[lut.output] = {lut_node[p.index], blk.id};
            } else {
                const Latch &l = nl.latches[p.index];
                const int clk = tg.add_node(TimingNodeKind::LatchClk, l.output);
                const int q = tg.add_node(TimingNodeKind::LatchQ, l.output);
                latch_d[p.index] = tg.add_node(TimingNodeKind::LatchD, l.output);
                latch_block[p.index] = blk.id;
                tg.add_edge(clk, q, delays.t_ff_clk_to_q);
                driver[l.output] = {q, blk.id};
            }
        }
    }

    std::map<std::string, int> net_of;
    for (auto &net : blocks.nets)
        net_of[net.signal] = net.id;

    auto connect = [&](const std::string &signal, int to, int to_block, double logic_delay) {
        auto it = driver.find(signal);
        if (it == driver.end())
            return; // implicit clock or constant
        const auto [from, from_block] = it->second;
        if (from_block == to_block) {
            tg.add_edge(from, to, logic_delay);
            return;
        }
        auto nit = net_of.find(signal);
        if (nit == net_of.end())
            fail(ErrorKind::InvariantViolation, "signal '" + signal + "' crosses blocks without a net");
        const Net &net = blocks.nets[nit->second];
        const auto sit = std::find_if(net.sinks.begin(), net.sinks.end(), [&](const PinRef &r) { return r.block == to_block; });
        const int sink = static_cast<int>(sit - net.sinks.begin());
        double wire = 0.0;
        if (blocks.blocks[from_block].kind != BlockKind::PadIn && net.id < static_cast<int>(net_delays.size()) &&
            sink < static_cast<int>(net_delays[net.id].size()))
            wire = net_delays[net.id][sink];
        tg.add_edge(from, to, wire + logic_delay, net.id, sink);
    };

    for (size_t i = 0; i < nl.luts.size(); ++i)
        for (auto &in : nl.luts[i].inputs)
            connect(in, lut_node[i], lut_block[i], delays.t_lut);
    for (size_t i = 0; i < nl.latches.size(); ++i)
        connect(nl.latches[i].input, latch_d[i], latch_block[i], delays.t_ff_setup);
    for (auto &blk : blocks.blocks)
        if (blk.kind == BlockKind::PadOut)
            connect(blk.name, tg.add_node(TimingNodeKind::PadOut, blk.name), blk.id, 0.0);
    return tg;
}

PathReport critical_path(const TimingGraph &tg)
{
    const int n = static_cast<int>(tg.nodes.size());
    std::vector<std::vector<int>> out(n), in(n);
    for (int e = 0; e < static_cast<int>(tg.edges.size()); ++e) {
        out[tg.edges[e].from].push_back(e);
        in[tg.edges[e].to].push_back(e);
    }

    std::vector<int> indeg(n), order;
    order.reserve(n);
    for (int v = 0; v < n; ++v) {
        indeg[v] = static_cast<int>(in[v].size());
        if (indeg[v] == 0)
            order.push_back(v);
    }
    for (size_t i = 0; i < order.size(); ++i)
        for (int e : out[order[i]])
            if (--indeg[tg.edges[e].to] == 0)
                order.push_back(tg.edges[e].to);

    if (static_cast<int>(order.size()) < n) {
        // Every leftover node has a leftover predecessor; walk back until a repeat.
        int v = 0;
        while (indeg[v] == 0)
            ++v;
        std::vector<int> seen(n, -1), walk;
        while (seen[v] < 0) {
            seen[v] = static_cast<int>(walk.size());
            walk.push_back(v);
            for (int e : in[v])
                if (indeg[tg.edges[e].from] > 0) {
                    v = tg.edges[e].from;
                    break;
                }
        }
        std::vector<int> cycle(walk.begin() + seen[v], walk.end());
        std::reverse(cycle.begin(), cycle.end());
        std::string msg = "cycle:";
        for (int c : cycle)
            msg += " " + std::string(node_prefix(tg.nodes[c].kind)) + ":" + tg.nodes[c].name;
        fail(ErrorKind::CombinationalLoop, msg);
    }

    PathReport rep;
    rep.arrival.assign(n, 0.0);
    std::vector<int> pred(n, -1);
    for (int v : order)
        for (int e : out[v]) {
            const TimingEdge &ed = tg.edges[e];
            const double a = rep.arrival[v] + ed.delay;
            if (pred[ed.to] < 0 || a > rep.arrival[ed.to]) {
                rep.arrival[ed.to] = a;
                pred[ed.to] = v;
            }
        }

    int end = -1;
    for (int v = 0; v < n; ++v)
        if (out[v].empty() && (end < 0 || rep.arrival[v] > rep.arrival[end]))
            end = v;
    rep.cpd = end < 0 ? 0.0 : rep.arrival[end];

    rep.required.assign(n, rep.cpd);
    for (auto it = order.rbegin(); it != order.rend(); ++it)
        for (int e : out[*it])
            rep.required[*it] = std::min(rep.required[*it], rep.required[tg.edges[e].to] - tg.edges[e].delay);

    rep.edge_slack.resize(tg.edges.size());
    rep.edge_criticality.resize(tg.edges.size());
    for (size_t e = 0; e < tg.edges.size(); ++e) {
        const TimingEdge &ed = tg.edges[e];
        const double slack = std::max(0.0, rep.required[ed.to] - rep.arrival[ed.from] - ed.delay);
        rep.edge_slack[e] = slack;
        rep.edge_criticality[e] = rep.cpd > 0.0 ? std::clamp(1.0 - slack / rep.cpd, 0.0, 1.0) : 0.0;
    }

    for (int v = end; v >= 0; v = pred[v])
        rep.path.push_back(v);
    std::reverse(rep.path.begin(), rep.path.end());
    return rep;
}

Criticalities connection_criticalities(const TimingGraph &tg, const PathReport &report, const BlockNetlist &blocks)
{
    Criticalities crit(blocks.net_count());
    for (auto &net : blocks.nets)
        crit[net.id].assign(net.sinks.size(), 0.0);
    for (size_t e = 0; e < tg.edges.size(); ++e) {
        const TimingEdge &ed = tg.edges[e];
        if (ed.net < 0)
            continue;
        double &c = crit[ed.net][ed.sink];
        c = std::max(c, report.edge_criticality[e]);
    }
    return crit;
}

std::string timing_report_text(const TimingGraph &tg, const PathReport &report)
{
    std::ostringstream out;
    out << std::fixed << std::setprecision(4);
    out << "critical path delay: " << report.cpd * 1e9 << " ns\n";
    out << "nodes " << tg.nodes.size() << " edges " << tg.edges.size() << "\n\n";
    out << "  arrival(ns)    incr(ns)  node\n";
    double prev = 0.0;
    for (int v : report.path) {
        out << std::setw(13) << report.arrival[v] * 1e9 << std::setw(12) << (report.arrival[v] - prev) * 1e9 << "  "
            << node_prefix(tg.nodes[v].kind) << ":" << tg.nodes[v].name << "\n";
        prev = report.arrival[v];
    }
    return out.str();
}

std::string timing_report_json(const TimingGraph &tg, const PathReport &report)
{
    nlohmann::json j;
    j["cpd"] = report.cpd;
    j["path"] = report.path;
    nlohmann::json names = nlohmann::json::array();
    for (int v : report.path)
        names.push_back(std::string(node_prefix(tg.nodes[v].kind)) + ":" + tg.nodes[v].name);
    j["path_names"] = names;
    j["nodes"] = tg.nodes.size();
    j["edges"] = tg.edges.size();
    return j.dump(2) + "\n";
}

} // namespace stackpnr
