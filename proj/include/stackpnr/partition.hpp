#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "stackpnr/anneal.hpp"
#include "stackpnr/netlist.hpp"

namespace stackpnr {

struct Partition
{
    int tiers = 1;
    std::vector<int> tier_of;
    std::vector<int> tier_sizes;

    int vertex_count() const { return static_cast<int>(tier_of.size()); }
    bool operator==(const Partition &) const = default;
};

/// Per-vertex external/internal edge weight. Connectivity to every tier is
/// kept so that swaps stay exact for more than two tiers.
class GainTable
{
  public:
    GainTable() = default;
    GainTable(int vertex_count, int tiers);

    int tiers() const { return tiers_; }
    // Total multiplicity from v into tier t.
    int connection(int v, int t) const { return conn_[static_cast<size_t>(v) * tiers_ + t]; }
    int &connection(int v, int t) { return conn_[static_cast<size_t>(v) * tiers_ + t]; }

    int internal(int v, const Partition &p) const { return connection(v, p.tier_of[v]); }
    int external(int v, const Partition &p, int weighted_degree) const { return weighted_degree - internal(v, p); }
    int gain(int v, const Partition &p, int weighted_degree) const
    {
        return external(v, p, weighted_degree) - internal(v, p);
    }

    bool operator==(const GainTable &) const = default;

  private:
    int tiers_ = 0;
    std::vector<int> conn_;
};

struct SwapMove
{
    int v_i = 0;
    int v_j = 0;
    int64_t delta_cost = 0;
};

Partition random_balanced_partition(const CircuitGraph &graph, int tiers, uint64_t seed);

GainTable setup_gains(const CircuitGraph &graph, const Partition &p);

int64_t cut_size(const CircuitGraph &graph, const Partition &p);

/// Change in cut size if v_i and v_j exchange tiers. For two tiers this is
/// (I_i + I_j) - (E_i + E_j) + 2 C_ij. With more tiers the external terms are
/// restricted to edges into the partner's tier, since edges into a third
/// tier stay cut either way.
int64_t swap_delta_cost(const CircuitGraph &graph, const Partition &p, const GainTable &gains, int v_i, int v_j);

/// Exchanges the tiers of the move's vertices and updates the gain rows of
/// every neighbour incrementally.
void apply_swap(const CircuitGraph &graph, Partition &p, GainTable &gains, const SwapMove &move);

struct PartitionResult
{
    Partition partition;
    int64_t cut = 0;
    int64_t initial_cut = 0;
    AnnealTrace trace;
};

// Called after every accepted move with the running state and Cost_current.
using PartitionObserver = std::function<void(const Partition &, const GainTable &, int64_t)>;

/// Simulated-annealing balanced partitioning. Starts from a random balanced
/// partition, runs N pairwise swaps per temperature and cools geometrically
/// until T <= Tmin or a stall. Returns the best partition seen.
PartitionResult anneal_partition(const CircuitGraph &graph, int tiers, const SaSchedule &schedule,
                                 const PartitionObserver &observer = {});

std::string write_partition(const Partition &p, int64_t cut, uint64_t seed);

struct PartitionFile
{
    Partition partition;
    int64_t cut = 0;
    uint64_t seed = 0;
};

PartitionFile read_partition(std::string_view text);

} // namespace stackpnr
