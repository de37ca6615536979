#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "stackpnr/anneal.hpp"
#include "stackpnr/arch.hpp"
#include "stackpnr/netlist.hpp"
#include "stackpnr/partition.hpp"

namespace stackpnr {

struct Location
{
    int x = 0;
    int y = 0;
    int z = 0;
    // I/O sites hold io_capacity pads; always 0 for CLB sites.
    int slot = 0;

    bool operator==(const Location &) const = default;
};

// CLBs sit at 1..grid_x x 1..grid_y; pads on the perimeter ring just outside
// it (corners excluded), io_capacity per site.
struct Placement
{
    int grid_x = 0;
    int grid_y = 0;
    int tiers = 1;
    int io_capacity = 1;
    std::vector<Location> location_of;
    // Per tier, block id at each (x, y, slot) cell or -1.
    std::vector<std::vector<int>> occupancy;

    Placement() = default;
    Placement(int grid_x, int grid_y, int tiers, int io_capacity, int block_count);

    size_t cell(int x, int y, int slot) const
    {
        return (static_cast<size_t>(y) * (grid_x + 2) + x) * io_capacity + slot;
    }
    int block_at(const Location &loc) const { return occupancy[loc.z][cell(loc.x, loc.y, loc.slot)]; }
    void put(int block, const Location &loc);
    void clear(const Location &loc) { occupancy[loc.z][cell(loc.x, loc.y, loc.slot)] = -1; }

    bool operator==(const Placement &) const = default;
};

std::vector<Location> clb_sites(int grid_x, int grid_y, int z);
std::vector<Location> pad_sites(int grid_x, int grid_y, int z, int io_capacity);

// Placement costs are tracked as integers in 1/kCostScale grid units.
inline constexpr int64_t kCostScale = 1000;

/// Smallest square grid that fits the CLBs and pads of the fullest tier.
Arch3D fit_grid(const BlockNetlist &blocks, const Partition &p, Arch3D arch);

Placement random_placement(const BlockNetlist &blocks, const Partition &p, const Arch3D &arch, uint64_t seed);

/// 3D half-perimeter wirelength: bbox width + height + tier span * h_tsv,
/// with the TSV height in grid units.
double net_hpwl3d(const Net &net, const Placement &pl, const Arch3D &arch);

// Scaled integer version used for incremental bookkeeping.
int64_t net_cost_scaled(const Net &net, const Placement &pl, int64_t tier_hop_scaled);
int64_t tier_hop_scaled(const Arch3D &arch);
int64_t placement_cost_scaled(const BlockNetlist &blocks, const Placement &pl, const Arch3D &arch);

struct PlacementResult
{
    Placement placement;
    int64_t cost = 0; // scaled
    int64_t initial_cost = 0;
    AnnealTrace trace;
};

// Called after every accepted move with the placement and the tracked cost.
using PlacementObserver = std::function<void(const Placement &, int64_t)>;

/// Annealing placement: random start, then same-tier swaps or moves to an
/// empty same-tier site of the same type. Only nets on moved blocks are
/// re-evaluated. Returns the best placement seen.
PlacementResult anneal_placement(const BlockNetlist &blocks, const Partition &p, const Arch3D &arch,
                                 const SaSchedule &schedule, const PlacementObserver &observer = {});

std::string write_placement(const Placement &pl, int64_t cost_scaled, uint64_t seed);

struct PlacementFile
{
    Placement placement;
    int64_t cost = 0;
    uint64_t seed = 0;
};

PlacementFile read_placement(std::string_view text, int block_count);

} // namespace stackpnr
