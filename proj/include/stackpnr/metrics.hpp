#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stackpnr/arch.hpp"
#include "stackpnr/netlist.hpp"
#include "stackpnr/placement.hpp"
#include "stackpnr/router.hpp"
#include "stackpnr/rrg.hpp"

namespace stackpnr {

struct TransistorBreakdown
{
    int64_t switch_boxes = 0;
    int64_t clbs = 0;
    int64_t connection_blocks = 0;
    int64_t total = 0;

    bool operator==(const TransistorBreakdown &) const = default;
};

/// Area proxy summed over every tier: switch boxes (1.5w or 2.5w each),
/// CLBs, and connection-block tracks of all channel tiles.
TransistorBreakdown transistor_breakdown(const Arch3D &arch, int w);
int64_t transistor_count(const Arch3D &arch, int w);

struct TierMetrics
{
    int tier = 0;
    int clbs = 0;
    int pads = 0;
    int64_t wirelength = 0;
    int64_t transistors = 0;

    bool operator==(const TierMetrics &) const = default;
};

struct FlowMetrics
{
    std::string circuit;
    int tiers = 1;
    int64_t tsv_used = 0;
    int64_t tsv_cut = 0;
    int wmin = 0;
    double cpd = 0.0; // seconds
    int64_t total_wirelength = 0;
    int64_t transistor_total = 0;
    int grid_x = 0;
    int grid_y = 0;
    std::vector<TierMetrics> per_tier;

    bool operator==(const FlowMetrics &) const = default;
};

// Stage results feeding collect_metrics; any null entry raises StageMissing.
struct MetricsInputs
{
    std::string circuit;
    const Arch3D *arch = nullptr;
    const BlockNetlist *blocks = nullptr;
    std::optional<int64_t> cut_size;
    const Placement *placement = nullptr;
    const Rrg *rrg = nullptr;
    const RoutingResult *routing = nullptr;
    std::optional<double> cpd;
};

FlowMetrics collect_metrics(const MetricsInputs &in);

enum class ReportFormat
{
    Text,
    Machine,
};

std::string emit_report(const FlowMetrics &m, ReportFormat format);
// Text table with one row per design.
std::string emit_table(const std::vector<FlowMetrics> &rows);

std::string metrics_to_json(const FlowMetrics &m);
FlowMetrics metrics_from_json(std::string_view text);

// Flat `circuit,metric,tiers,value` rows for bar charts.
std::string chart_series(const std::vector<FlowMetrics> &rows);

// Signed change of `value` relative to `base`, in percent.
double percent_change(double base, double value);

} // namespace stackpnr
