#include "stackpnr/flow.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stackpnr/error.hpp"
#include "stackpnr/netlist.hpp"
#include "stackpnr/partition.hpp"
#include "stackpnr/placement.hpp"
#include "stackpnr/rng.hpp"
#include "stackpnr/router.hpp"
#include "stackpnr/rrg.hpp"
#include "stackpnr/timing.hpp"

namespace fs = std::filesystem;

namespace stackpnr {

std::string read_text_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(ErrorKind::ConfigError, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        fail(ErrorKind::ConfigError, "cannot write '" + path + "'");
    out << text;
}

namespace {

struct Design
{
    std::string circuit;
    Arch3D arch;
    BlockNetlist blocks;
};

Design load_design(const FlowConfig &config)
{
    if (config.tiers < 1)
        fail(ErrorKind::ConfigError, "tiers must be >= 1");
    if (config.width && (*config.width < 2 || *config.width % 2 != 0))
        fail(ErrorKind::ConfigError, "width must be even and >= 2");
    Design d;
    d.arch = load_arch_file(config.arch_path);
    d.arch.tiers = config.tiers;
    const Netlist nl = parse_blif(read_text_file(config.blif_path), d.arch.lut_size);
    d.circuit = nl.model_name.empty() ? fs::path(config.blif_path).stem().string() : nl.model_name;
    d.blocks = pack_blocks(nl, d.arch.cluster_size);
    return d;
}

std::string artifact(const FlowConfig &config, const char *name) { return (fs::path(config.out_dir) / name).string(); }

std::string prerequisite(const FlowConfig &config, const char *name, const char *stage)
{
    const std::string path = artifact(config, name);
    if (!fs::exists(path))
        fail(ErrorKind::MissingPrerequisite, std::string(stage) + " (" + path + " not found)");
    return read_text_file(path);
}

Partition load_partition(const FlowConfig &config, const Design &d, int64_t *cut = nullptr)
{
    PartitionFile pf = read_partition(prerequisite(config, artifacts::partition, "partition"));
    if (pf.partition.tiers != d.arch.tiers)
        fail(ErrorKind::ConfigError, "partition file has " + std::to_string(pf.partition.tiers) + " tiers, config asks for " +
                                         std::to_string(d.arch.tiers));
    if (static_cast<int>(pf.partition.tier_of.size()) != d.blocks.block_count())
        fail(ErrorKind::MalformedFile, "partition file does not match the netlist's block count");
    if (cut)
        *cut = pf.cut;
    return pf.partition;
}

// Arch with the grid recorded in the placement file.
Placement load_placement(const FlowConfig &config, Design &d)
{
    PlacementFile pf = read_placement(prerequisite(config, artifacts::placement, "place"), d.blocks.block_count());
    if (pf.placement.tiers != d.arch.tiers || pf.placement.io_capacity != d.arch.io_capacity)
        fail(ErrorKind::ConfigError, "placement file does not match the architecture");
    d.arch.grid_x = pf.placement.grid_x;
    d.arch.grid_y = pf.placement.grid_y;
    return pf.placement;
}

SaSchedule stage_schedule(const FlowConfig &config, Stage stage)
{
    SaSchedule s;
    s.seed = derive_seed(config.seed, stage);
    s.moves_per_temperature = config.moves_per_temp;
    return s;
}

RouterParams router_params(const FlowConfig &config)
{
    RouterParams p;
    p.max_iterations = config.max_route_iters;
    return p;
}

template <typename F>
auto staged(const char *stage, F &&body)
{
    try {
        return body();
    } catch (const Error &e) {
        throw Error(e.kind(), std::string("stage ") + stage + ": " + e.what());
    }
}

} // namespace

void run_partition_stage(const FlowConfig &config)
{
    staged("partition", [&] {
        Design d = load_design(config);
        fs::create_directories(config.out_dir);
        write_text_file(artifact(config, artifacts::blocks), dump_blocks(d.blocks));
        const CircuitGraph graph = build_graph(d.blocks);
        const SaSchedule schedule = stage_schedule(config, Stage::Partition);
        PartitionResult r = anneal_partition(graph, d.arch.tiers, schedule);
        write_text_file(artifact(config, artifacts::partition), write_partition(r.partition, r.cut, schedule.seed));
    });
}

void run_place_stage(const FlowConfig &config)
{
    staged("place", [&] {
        Design d = load_design(config);
        const Partition p = load_partition(config, d);
        const Arch3D arch = config.auto_grid ? fit_grid(d.blocks, p, d.arch) : d.arch;
        const SaSchedule schedule = stage_schedule(config, Stage::Place);
        PlacementResult r = anneal_placement(d.blocks, p, arch, schedule);
        write_text_file(artifact(config, artifacts::placement), write_placement(r.placement, r.cost, schedule.seed));
    });
}

void run_route_stage(const FlowConfig &config)
{
    staged("route", [&] {
        Design d = load_design(config);
        const Placement pl = load_placement(config, d);

        // Criticalities from the placement-based delay estimate.
        const TimingGraph pre = build_timing_graph(d.blocks, estimated_net_delays(d.blocks, pl, d.arch), d.arch.delays);
        const Criticalities crit = connection_criticalities(pre, critical_path(pre), d.blocks);

        const RouterParams params = router_params(config);
        if (config.width) {
            const Rrg rrg = build_rrg(d.arch, *config.width);
            const RoutingResult r = route_nets(rrg, d.blocks, pl, params, crit);
            require_routed(r, params.max_iterations);
            write_text_file(artifact(config, artifacts::routing), write_routing(rrg, r));
        } else {
            const WminResult w = find_wmin(d.arch, d.blocks, pl, params, crit, config.w_max);
            const Rrg rrg = build_rrg(d.arch, w.width);
            write_text_file(artifact(config, artifacts::routing), write_routing(rrg, w.result));
        }
    });
}

void run_sta_stage(const FlowConfig &config)
{
    staged("sta", [&] {
        Design d = load_design(config);
        const Placement pl = load_placement(config, d);
        const std::string text = prerequisite(config, artifacts::routing, "route");
        const Rrg rrg = build_rrg(d.arch, routing_file_width(text));
        const RoutingResult r = read_routing(text, rrg, make_requests(rrg, d.blocks, pl, {}));
        const TimingGraph tg = build_timing_graph(d.blocks, routed_net_delays(rrg, r, d.blocks.net_count()), d.arch.delays);
        const PathReport rep = critical_path(tg);
        write_text_file(artifact(config, artifacts::timing_text), timing_report_text(tg, rep));
        write_text_file(artifact(config, artifacts::timing_json), timing_report_json(tg, rep));
    });
}

FlowMetrics run_report_stage(const FlowConfig &config)
{
    return staged("report", [&] {
        Design d = load_design(config);
        int64_t cut = 0;
        load_partition(config, d, &cut);
        const Placement pl = load_placement(config, d);
        const std::string text = prerequisite(config, artifacts::routing, "route");
        const Rrg rrg = build_rrg(d.arch, routing_file_width(text));
        const RoutingResult r = read_routing(text, rrg, make_requests(rrg, d.blocks, pl, {}));
        double cpd = 0.0;
        try {
            cpd = nlohmann::json::parse(prerequisite(config, artifacts::timing_json, "sta")).at("cpd").get<double>();
        } catch (const nlohmann::json::exception &e) {
            fail(ErrorKind::MalformedFile, std::string("timing summary: ") + e.what());
        }

        MetricsInputs in;
        in.circuit = d.circuit;
        in.arch = &d.arch;
        in.blocks = &d.blocks;
        in.cut_size = cut;
        in.placement = &pl;
        in.rrg = &rrg;
        in.routing = &r;
        in.cpd = cpd;
        FlowMetrics m = collect_metrics(in);
        write_text_file(artifact(config, artifacts::report_text), emit_report(m, ReportFormat::Text));
        write_text_file(artifact(config, artifacts::report_json), emit_report(m, ReportFormat::Machine));
        return m;
    });
}

FlowMetrics run_flow(const FlowConfig &config)
{
    run_partition_stage(config);
    run_place_stage(config);
    run_route_stage(config);
    run_sta_stage(config);
    return run_report_stage(config);
}

} // namespace stackpnr
