#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stackpnr/arch.hpp"
#include "stackpnr/placement.hpp"

namespace stackpnr {

enum class RrKind : uint8_t
{
    Source,
    Sink,
    Opin,
    Ipin,
    WireX,
    WireY,
    WireZ,
};

std::string_view rr_kind_name(RrKind kind);
RrKind rr_kind_from_name(std::string_view name);

constexpr bool is_wire(RrKind k) { return k == RrKind::WireX || k == RrKind::WireY || k == RrKind::WireZ; }

// Planar wires: (x, y) is the first tile the segment covers and `length` the
// number of tiles. TSVs: (x, y) is the switch box, z the lower tier. Pins
// and terminals: (x, y, z) is the site; `track` encodes slot and pin index.
struct RrgNode
{
    RrKind kind = RrKind::WireX;
    int16_t x = 0;
    int16_t y = 0;
    int16_t z = 0;
    int track = 0;
    int length = 0;
    int capacity = 1;
    double base_cost = 1.0;
    double delay = 0.0; // intrinsic, seconds
};

struct RrgEdge
{
    int to = 0;
    double delay = 0.0; // switch delay, seconds
};

struct SitePins
{
    int source = -1;
    int sink = -1;
};

class Rrg
{
  public:
    int add_node(const RrgNode &node);
    void add_edge(int from, int to, double delay);
    // Packs edges into per-node fanout lists; call once after construction.
    void finalize();

    int node_count() const { return static_cast<int>(nodes_.size()); }
    int64_t edge_count() const { return static_cast<int64_t>(edges_.size()); }
    const RrgNode &node(int id) const { return nodes_[id]; }
    std::span<const RrgEdge> fanout(int id) const
    {
        return {edges_.data() + first_edge_[id], edges_.data() + first_edge_[id + 1]};
    }
    // Switch delay of from->to; negative if there is no such edge.
    double edge_delay(int from, int to) const;

    // Planar channel width (0 for hand-built graphs).
    int width = 0;
    int tsv_tracks = 0;
    int grid_x = 0;
    int grid_y = 0;
    int tiers = 0;
    int io_capacity = 1;
    // Site-pin lookup is only present for graphs from build_rrg; A*
    // lookahead is only used when the node coordinates are geometric.
    bool geometric = false;
    double min_tsv_base_cost = 1.0;
    // Delay of one Single segment; the router's timing-cost unit.
    double unit_delay = 1e-10;
    // Per-track segment length.
    std::vector<int> track_length;

    SitePins site(const Location &loc) const;
    void set_site(const Location &loc, SitePins pins);

    // Finds a node by its dump descriptor; -1 if absent.
    int find(RrKind kind, int x, int y, int z, int track) const;

  private:
    std::vector<RrgNode> nodes_;
    std::vector<std::pair<int, RrgEdge>> pending_;
    std::vector<RrgEdge> edges_;
    std::vector<int64_t> first_edge_;
    std::vector<SitePins> sites_;
    std::unordered_map<uint64_t, int> index_;
};

struct TrackPlan
{
    std::vector<int> length; // per track
    std::vector<int> offset; // stagger, per track
};

/// Splits w tracks into Single/Double/Quad by the segment mix (rounded,
/// remainder to Single), shortest lengths first.
TrackPlan plan_tracks(const Arch3D &arch, int w);

/// Builds the routing-resource graph for channel width w (even, >= 2):
/// subset switch boxes with F_s = 3, full CB connectivity (F_c = 1), and
/// ceil(r_z w) TSV tracks per adjacent tier pair at every 3D switch box.
Rrg build_rrg(const Arch3D &arch, int w);

} // namespace stackpnr
