#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stackpnr {

struct Lut
{
    std::string output;
    std::vector<std::string> inputs;
    // Truth-table rows exactly as written, e.g. "1-0 1".
    std::vector<std::string> rows;
};

struct Latch
{
    std::string input;
    std::string output;
    // Empty when the file gives no control signal.
    std::string clock;
    // Optional fields carried through for re-emission.
    std::string type;
    std::string init;
};

// Technology-mapped netlist: primary I/O, LUTs and latches.
struct Netlist
{
    std::string model_name;
    std::vector<std::string> primary_inputs;
    std::vector<std::string> primary_outputs;
    std::vector<Lut> luts;
    std::vector<Latch> latches;
};

/// Parses the `.model/.inputs/.outputs/.names/.latch/.end` subset of BLIF.
/// Handles `#` comments and `\` line continuations. LUTs wider than
/// `lut_size` are rejected. Latch clocks that are never driven are accepted
/// as implicit global clocks; every other referenced signal must be driven.
Netlist parse_blif(std::string_view text, int lut_size = 6);

std::string write_blif(const Netlist &netlist);

enum class BlockKind
{
    PadIn,
    PadOut,
    Clb,
};

std::string_view block_kind_name(BlockKind kind);

enum class PrimitiveKind
{
    Lut,
    Latch,
};

struct PrimitiveRef
{
    PrimitiveKind kind;
    int index; // into Netlist::luts or Netlist::latches

    bool operator==(const PrimitiveRef &) const = default;
};

struct LogicBlock
{
    int id = 0;
    BlockKind kind = BlockKind::Clb;
    // Pads carry their port name here; CLBs the output signal of the first
    // primitive.
    std::string name;
    std::vector<PrimitiveRef> primitives;
    // Signals entering/leaving the block, pin index = position.
    std::vector<std::string> input_signals;
    std::vector<std::string> output_signals;
};

struct PinRef
{
    int block = 0;
    int pin = 0;

    bool operator==(const PinRef &) const = default;
};

struct Net
{
    int id = 0;
    std::string signal;
    PinRef driver;
    std::vector<PinRef> sinks; // one entry per distinct sink block
    bool is_clock = false;
};

struct BlockNetlist
{
    Netlist netlist;
    int cluster_size = 1;
    std::vector<LogicBlock> blocks;
    std::vector<Net> nets;

    int block_count() const { return static_cast<int>(blocks.size()); }
    int net_count() const { return static_cast<int>(nets.size()); }
};

/// Pairs each LUT with a latch it exclusively drives (one BLE), then greedily
/// fills CLBs of up to `cluster_size` BLEs, seeding each CLB with the lowest
/// unclustered BLE and repeatedly adding the BLE sharing the most signals
/// with it. PIs and POs become pad blocks.
BlockNetlist pack_blocks(const Netlist &netlist, int cluster_size = 1);

// One block per line: `id kind primitive-list`.
std::string dump_blocks(const BlockNetlist &blocks);

struct GraphEdge
{
    int u = 0;
    int v = 0;
    int multiplicity = 0;

    bool operator==(const GraphEdge &) const = default;
};

struct Neighbor
{
    int vertex = 0;
    int multiplicity = 0;
};

// Undirected, self-loop-free graph with integer edge multiplicities.
class CircuitGraph
{
  public:
    CircuitGraph() = default;
    CircuitGraph(int vertex_count, std::vector<GraphEdge> edges);

    int vertex_count() const { return vertex_count_; }
    // Sorted by (u, v) with u < v.
    const std::vector<GraphEdge> &edges() const { return edges_; }
    // Sorted by neighbour id.
    const std::vector<Neighbor> &neighbors(int v) const { return adjacency_[v]; }
    int weighted_degree(int v) const { return degree_[v]; }
    // Multiplicity of edge {u, v}, 0 if absent.
    int multiplicity(int u, int v) const;
    int64_t total_multiplicity() const;

  private:
    int vertex_count_ = 0;
    std::vector<GraphEdge> edges_;
    std::vector<std::vector<Neighbor>> adjacency_;
    std::vector<int> degree_;
};

/// Star expansion: every non-clock net adds a driver-sink edge per sink.
CircuitGraph build_graph(const BlockNetlist &blocks);

} // namespace stackpnr
