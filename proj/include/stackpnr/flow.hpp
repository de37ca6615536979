#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "stackpnr/metrics.hpp"

namespace stackpnr {

struct FlowConfig
{
    std::string arch_path;
    std::string blif_path;
    int tiers = 1;
    uint64_t seed = 1;
    // Fixed channel width; when unset the minimum width is searched.
    std::optional<int> width;
    std::string out_dir = "out";
    int moves_per_temp = 0;
    int max_route_iters = 50;
    // Size the grid to the circuit instead of using the arch file's grid.
    bool auto_grid = false;
    int w_max = 128;
};

// Artifact file names inside FlowConfig::out_dir.
namespace artifacts {
inline constexpr const char *blocks = "blocks.txt";
inline constexpr const char *partition = "partition.txt";
inline constexpr const char *placement = "placement.txt";
inline constexpr const char *routing = "routing.txt";
inline constexpr const char *timing_text = "timing.txt";
inline constexpr const char *timing_json = "timing.json";
inline constexpr const char *report_text = "report.txt";
inline constexpr const char *report_json = "report.json";
} // namespace artifacts

// Each stage reads its prerequisites from out_dir and writes its artifact
// there. Errors are rethrown with the stage name prepended.
void run_partition_stage(const FlowConfig &config);
void run_place_stage(const FlowConfig &config);
void run_route_stage(const FlowConfig &config);
void run_sta_stage(const FlowConfig &config);
FlowMetrics run_report_stage(const FlowConfig &config);

/// parse -> pack -> partition -> place -> route -> sta -> report, with the
/// same file handoff as the individual stages.
FlowMetrics run_flow(const FlowConfig &config);

std::string read_text_file(const std::string &path);
void write_text_file(const std::string &path, const std::string &text);

} // namespace stackpnr
