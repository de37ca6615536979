#include "stackpnr/netlist.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "stackpnr/error.hpp"

namespace stackpnr {

namespace {

// Joins `\` continuations, strips comments and splits into token lines.
std::vector<std::pair<int, std::vector<std::string>>> tokenize_blif(std::string_view text)
{
    std::vector<std::pair<int, std::vector<std::string>>> lines;
    std::string pending;
    int pending_line = 0;
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        std::string line(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        if (pending.empty())
            pending_line = line_no;
        bool continued = false;
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        if (!line.empty() && line.back() == '\\') {
            line.pop_back();
            continued = true;
        }
        pending += line;
        pending += ' ';
        if (continued && pos <= text.size())
            continue;
        std::istringstream ss(pending);
        std::vector<std::string> tokens;
        for (std::string tok; ss >> tok;)
            tokens.push_back(tok);
        if (!tokens.empty())
            lines.emplace_back(pending_line, std::move(tokens));
        pending.clear();
    }
    return lines;
}

bool valid_output_bit(const std::string &s) { return s == "0" || s == "1"; }

bool valid_input_plane(const std::string &s, size_t width)
{
    return s.size() == width && std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1' || c == '-'; });
}

std::string at_line(int line) { return " (line " + std::to_string(line) + ")"; }

} // namespace

Netlist parse_blif(std::string_view text, int lut_size)
{
    Netlist nl;
    Lut *open_lut = nullptr;
    bool ended = false;

    for (auto &[line, tokens] : tokenize_blif(text)) {
        if (ended)
            break;
        const std::string &head = tokens.front();
        if (head.empty() || head[0] != '.') {
            if (open_lut == nullptr)
                fail(ErrorKind::MalformedTruthTableRow, "row outside of .names" + at_line(line));
            const size_t width = open_lut->inputs.size();
            if (width == 0) {
                if (tokens.size() != 1 || !valid_output_bit(tokens[0]))
                    fail(ErrorKind::MalformedTruthTableRow, "bad constant row for '" + open_lut->output + "'" + at_line(line));
                open_lut->rows.push_back(tokens[0]);
            } else {
                if (tokens.size() != 2 || !valid_input_plane(tokens[0], width) || !valid_output_bit(tokens[1]))
                    fail(ErrorKind::MalformedTruthTableRow, "bad row for '" + open_lut->output + "'" + at_line(line));
                open_lut->rows.push_back(tokens[0] + " " + tokens[1]);
            }
            continue;
        }
        open_lut = nullptr;
        if (head == ".model") {
            nl.model_name = tokens.size() > 1 ? tokens[1] : std::string();
        } else if (head == ".inputs") {
            nl.primary_inputs.insert(nl.primary_inputs.end(), tokens.begin() + 1, tokens.end());
        } else if (head == ".outputs") {
            nl.primary_outputs.insert(nl.primary_outputs.end(), tokens.begin() + 1, tokens.end());
        } else if (head == ".names") {
            if (tokens.size() < 2)
                fail(ErrorKind::MalformedTruthTableRow, ".names without output" + at_line(line));
            Lut lut;
            lut.output = tokens.back();
            lut.inputs.assign(tokens.begin() + 1, tokens.end() - 1);
            if (static_cast<int>(lut.inputs.size()) > lut_size)
                fail(ErrorKind::LutTooWide, "'" + lut.output + "' has " + std::to_string(lut.inputs.size()) + " inputs, K=" +
                                                std::to_string(lut_size) + at_line(line));
            nl.luts.push_back(std::move(lut));
            open_lut = &nl.luts.back();
        } else if (head == ".latch") {
            Latch latch;
            switch (tokens.size()) {
            case 3:
                break;
            case 4:
                latch.init = tokens[3];
                break;
            case 5:
                latch.type = tokens[3];
                latch.clock = tokens[4];
                break;
            case 6:
                latch.type = tokens[3];
                latch.clock = tokens[4];
                latch.init = tokens[5];
                break;
            default:
                fail(ErrorKind::UnknownDirective, "malformed .latch" + at_line(line));
            }
            latch.input = tokens[1];
            latch.output = tokens[2];
            if (latch.clock == "NIL")
                latch.clock.clear();
            nl.latches.push_back(std::move(latch));
        } else if (head == ".end") {
            ended = true;
        } else {
            fail(ErrorKind::UnknownDirective, "'" + head + "'" + at_line(line));
        }
    }

    std::unordered_set<std::string> driven;
    auto drive = [&](const std::string &sig) {
        if (!driven.insert(sig).second)
            fail(ErrorKind::DuplicateDriver, "signal '" + sig + "' has more than one driver");
    };
    for (auto &pi : nl.primary_inputs)
        drive(pi);
    for (auto &lut : nl.luts)
        drive(lut.output);
    for (auto &latch : nl.latches)
        drive(latch.output);

    auto require = [&](const std::string &sig) {
        if (!driven.count(sig))
            fail(ErrorKind::DanglingSignal, "signal '" + sig + "' is used but never driven");
    };
    for (auto &lut : nl.luts)
        for (auto &in : lut.inputs)
            require(in);
    for (auto &latch : nl.latches)
        require(latch.input);
    for (auto &po : nl.primary_outputs)
        require(po);
    return nl;
}

std::string write_blif(const Netlist &netlist)
{
    std::ostringstream out;
    out << ".model " << netlist.model_name << "\n";
    out << ".inputs";
    for (auto &pi : netlist.primary_inputs)
        out << " " << pi;
    out << "\n.outputs";
    for (auto &po : netlist.primary_outputs)
        out << " " << po;
    out << "\n";
    for (auto &lut : netlist.luts) {
        out << ".names";
        for (auto &in : lut.inputs)
            out << " " << in;
        out << " " << lut.output << "\n";
        for (auto &row : lut.rows)
            out << row << "\n";
    }
    for (auto &latch : netlist.latches) {
        out << ".latch " << latch.input << " " << latch.output;
        if (!latch.type.empty() || !latch.clock.empty())
            out << " " << (latch.type.empty() ? "re" : latch.type) << " " << (latch.clock.empty() ? "NIL" : latch.clock);
        if (!latch.init.empty())
            out << " " << latch.init;
        out << "\n";
    }
    out << ".end\n";
    return out.str();
}

std::string_view block_kind_name(BlockKind kind)
{
    switch (kind) {
    case BlockKind::PadIn:
        return "pad_in";
    case BlockKind::PadOut:
        return "pad_out";
    case BlockKind::Clb:
        return "clb";
    }
    return "?";
}

BlockNetlist pack_blocks(const Netlist &netlist, int cluster_size)
{
    if (cluster_size < 1)
        fail(ErrorKind::InvariantViolation, "cluster_size must be >= 1");

    BlockNetlist result;
    result.netlist = netlist;
    result.cluster_size = cluster_size;

    // Data fanout per signal (clock uses are global and not counted).
    std::unordered_map<std::string, int> fanout;
    for (auto &lut : netlist.luts)
        for (auto &in : lut.inputs)
            ++fanout[in];
    for (auto &latch : netlist.latches)
        ++fanout[latch.input];
    for (auto &po : netlist.primary_outputs)
        ++fanout[po];
    std::unordered_map<std::string, int> latch_of_input;
    for (int i = 0; i < static_cast<int>(netlist.latches.size()); ++i)
        latch_of_input.emplace(netlist.latches[i].input, i);

    // BLE formation: a LUT absorbs the latch that is its only fanout.
    std::vector<std::vector<PrimitiveRef>> bles;
    std::vector<bool> latch_used(netlist.latches.size(), false);
    for (int i = 0; i < static_cast<int>(netlist.luts.size()); ++i) {
        std::vector<PrimitiveRef> ble{{PrimitiveKind::Lut, i}};
        const std::string &out = netlist.luts[i].output;
        auto it = latch_of_input.find(out);
        if (it != latch_of_input.end() && fanout[out] == 1 && !latch_used[it->second]) {
            latch_used[it->second] = true;
            ble.push_back({PrimitiveKind::Latch, it->second});
        }
        bles.push_back(std::move(ble));
    }
    for (int i = 0; i < static_cast<int>(netlist.latches.size()); ++i)
        if (!latch_used[i])
            bles.push_back({{PrimitiveKind::Latch, i}});

    auto primitive_inputs = [&](const PrimitiveRef &p) -> std::vector<std::string> {
        if (p.kind == PrimitiveKind::Lut)
            return netlist.luts[p.index].inputs;
        return {netlist.latches[p.index].input};
    };
    auto primitive_output = [&](const PrimitiveRef &p) -> const std::string & {
        return p.kind == PrimitiveKind::Lut ? netlist.luts[p.index].output : netlist.latches[p.index].output;
    };

    std::vector<std::set<std::string>> ble_signals(bles.size());
    for (size_t b = 0; b < bles.size(); ++b) {
        for (auto &p : bles[b]) {
            for (auto &s : primitive_inputs(p))
                ble_signals[b].insert(s);
            ble_signals[b].insert(primitive_output(p));
        }
    }

    // Greedy clustering by shared-signal count.
    std::vector<std::vector<int>> clusters;
    std::vector<bool> clustered(bles.size(), false);
    for (size_t seed = 0; seed < bles.size(); ++seed) {
        if (clustered[seed])
            continue;
        std::vector<int> members{static_cast<int>(seed)};
        clustered[seed] = true;
        std::set<std::string> signals = ble_signals[seed];
        while (static_cast<int>(members.size()) < cluster_size) {
            int best = -1;
            int best_shared = -1;
            for (size_t b = 0; b < bles.size(); ++b) {
                if (clustered[b])
                    continue;
                int shared = 0;
                for (auto &s : ble_signals[b])
                    shared += signals.count(s) ? 1 : 0;
                if (shared > best_shared) {
                    best_shared = shared;
                    best = static_cast<int>(b);
                }
            }
            if (best < 0)
                break;
            clustered[best] = true;
            members.push_back(best);
            signals.insert(ble_signals[best].begin(), ble_signals[best].end());
        }
        clusters.push_back(std::move(members));
    }

    auto add_block = [&](BlockKind kind, std::string name) -> LogicBlock & {
        LogicBlock blk;
        blk.id = static_cast<int>(result.blocks.size());
        blk.kind = kind;
        blk.name = std::move(name);
        result.blocks.push_back(std::move(blk));
        return result.blocks.back();
    };

    for (auto &pi : netlist.primary_inputs)
        add_block(BlockKind::PadIn, pi).output_signals.push_back(pi);
    const int first_clb = result.block_count();
    for (auto &members : clusters) {
        std::vector<PrimitiveRef> prims;
        for (int b : members)
            prims.insert(prims.end(), bles[b].begin(), bles[b].end());
        LogicBlock &blk = add_block(BlockKind::Clb, primitive_output(prims.front()));
        blk.primitives = std::move(prims);
    }
    const int first_pad_out = result.block_count();
    for (auto &po : netlist.primary_outputs)
        add_block(BlockKind::PadOut, po).input_signals.push_back(po);

    // Signal -> consuming blocks (data and clock), in block order.
    std::map<std::string, std::vector<int>> data_users;
    std::map<std::string, std::vector<int>> clock_users;
    for (int b = first_clb; b < first_pad_out; ++b) {
        auto &blk = result.blocks[b];
        std::set<std::string> produced;
        for (auto &p : blk.primitives)
            produced.insert(primitive_output(p));
        for (auto &p : blk.primitives) {
            for (auto &s : primitive_inputs(p)) {
                if (produced.count(s))
                    continue;
                if (std::find(blk.input_signals.begin(), blk.input_signals.end(), s) == blk.input_signals.end()) {
                    blk.input_signals.push_back(s);
                    data_users[s].push_back(b);
                }
            }
            if (p.kind == PrimitiveKind::Latch) {
                const std::string &clk = netlist.latches[p.index].clock;
                if (!clk.empty()) {
                    auto &users = clock_users[clk];
                    if (users.empty() || users.back() != b)
                        users.push_back(b);
                }
            }
        }
    }
    for (int b = first_pad_out; b < result.block_count(); ++b)
        data_users[result.blocks[b].input_signals.front()].push_back(b);

    // Block outputs: produced signals with an external consumer.
    for (int b = first_clb; b < first_pad_out; ++b) {
        auto &blk = result.blocks[b];
        for (auto &p : blk.primitives) {
            const std::string &s = primitive_output(p);
            bool external = false;
            for (int u : data_users[s])
                external |= (u != b);
            for (int u : clock_users[s])
                external |= (u != b);
            if (external)
                blk.output_signals.push_back(s);
        }
    }

    for (int b = 0; b < result.block_count(); ++b) {
        const auto &blk = result.blocks[b];
        for (int pin = 0; pin < static_cast<int>(blk.output_signals.size()); ++pin) {
            const std::string &s = blk.output_signals[pin];
            Net net;
            net.id = result.net_count();
            net.signal = s;
            net.driver = {b, pin};
            auto cu = clock_users.find(s);
            net.is_clock = cu != clock_users.end() && !cu->second.empty();
            std::vector<PinRef> sinks;
            for (int u : data_users[s]) {
                if (u == b)
                    continue;
                auto &ins = result.blocks[u].input_signals;
                int in_pin = static_cast<int>(std::find(ins.begin(), ins.end(), s) - ins.begin());
                sinks.push_back({u, in_pin});
            }
            for (int u : clock_users[s]) {
                if (u == b)
                    continue;
                bool seen = std::any_of(sinks.begin(), sinks.end(), [&](const PinRef &r) { return r.block == u; });
                if (!seen)
                    sinks.push_back({u, -1});
            }
            if (sinks.empty())
                continue;
            std::sort(sinks.begin(), sinks.end(), [](const PinRef &a, const PinRef &c) { return a.block < c.block; });
            net.sinks = std::move(sinks);
            result.nets.push_back(std::move(net));
        }
    }
    return result;
}

std::string dump_blocks(const BlockNetlist &blocks)
{
    std::ostringstream out;
    for (auto &blk : blocks.blocks) {
        out << blk.id << " " << block_kind_name(blk.kind);
        if (blk.kind == BlockKind::Clb) {
            for (auto &p : blk.primitives) {
                if (p.kind == PrimitiveKind::Lut)
                    out << " lut:" << blocks.netlist.luts[p.index].output;
                else
                    out << " latch:" << blocks.netlist.latches[p.index].output;
            }
        } else {
            out << " " << blk.name;
        }
        out << "\n";
    }
    return out.str();
}

CircuitGraph::CircuitGraph(int vertex_count, std::vector<GraphEdge> edges) : vertex_count_(vertex_count)
{
    std::map<std::pair<int, int>, int> merged;
    for (auto &e : edges) {
        if (e.u == e.v)
            fail(ErrorKind::InvariantViolation, "self-loop on vertex " + std::to_string(e.u));
        if (e.u < 0 || e.v < 0 || e.u >= vertex_count || e.v >= vertex_count)
            fail(ErrorKind::InvariantViolation, "edge endpoint out of range");
        if (e.multiplicity < 1)
            fail(ErrorKind::InvariantViolation, "edge multiplicity must be >= 1");
        merged[{std::min(e.u, e.v), std::max(e.u, e.v)}] += e.multiplicity;
    }
    adjacency_.assign(vertex_count, {});
    degree_.assign(vertex_count, 0);
    for (auto &[uv, m] : merged) {
        edges_.push_back({uv.first, uv.second, m});
        adjacency_[uv.first].push_back({uv.second, m});
        adjacency_[uv.second].push_back({uv.first, m});
        degree_[uv.first] += m;
        degree_[uv.second] += m;
    }
    for (auto &adj : adjacency_)
        std::sort(adj.begin(), adj.end(), [](const Neighbor &a, const Neighbor &b) { return a.vertex < b.vertex; });
}

int CircuitGraph::multiplicity(int u, int v) const
{
    const auto &adj = adjacency_[u];
    auto it = std::lower_bound(adj.begin(), adj.end(), v, [](const Neighbor &n, int x) { return n.vertex < x; });
    return (it != adj.end() && it->vertex == v) ? it->multiplicity : 0;
}

int64_t CircuitGraph::total_multiplicity() const
{
    int64_t total = 0;
    for (auto &e : edges_)
        total += e.multiplicity;
    return total;
}

CircuitGraph build_graph(const BlockNetlist &blocks)
{
    std::vector<GraphEdge> edges;
    for (auto &net : blocks.nets) {
        if (net.is_clock)
            continue;
        for (auto &sink : net.sinks)
            if (sink.block != net.driver.block)
                edges.push_back({net.driver.block, sink.block, 1});
    }
    return CircuitGraph(blocks.block_count(), std::move(edges));
}

} // namespace stackpnr
