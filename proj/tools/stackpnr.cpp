#include <iostream>

#include <CLI11.hpp>

#include "stackpnr/error.hpp"
#include "stackpnr/flow.hpp"

using namespace stackpnr;

namespace {

int exit_code(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::ConfigError:
    case ErrorKind::UnknownKey:
    case ErrorKind::MissingField:
        return 2;
    default:
        return 1;
    }
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"stackpnr: partition, place and route for stacked 3D FPGAs"};
    app.require_subcommand(1);

    FlowConfig config;
    std::string format = "text";
    int width = 0;
    bool wmin_search = false;

    auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("--arch", config.arch_path, "Architecture description (YAML)")->required()->check(CLI::ExistingFile);
        cmd->add_option("--blif", config.blif_path, "Technology-mapped BLIF netlist")->required()->check(CLI::ExistingFile);
        cmd->add_option("--tiers", config.tiers, "Number of stacked tiers")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", config.seed, "Flow seed; stage seeds derive from it");
        cmd->add_option("--out-dir", config.out_dir, "Directory for stage artifacts");
        cmd->add_option("--moves-per-temp", config.moves_per_temp, "Annealing moves per temperature (0 = 10 x size)");
        cmd->add_option("--max-route-iters", config.max_route_iters, "Router iteration limit");
        cmd->add_flag("--auto-grid", config.auto_grid, "Size the grid to the circuit");
        auto *w = cmd->add_option("--width", width, "Route at this channel width");
        auto *s = cmd->add_flag("--wmin-search", wmin_search, "Search for the minimum channel width (default)");
        w->excludes(s);
        cmd->add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "machine"}));
    };

    auto *run = app.add_subcommand("run", "Run the whole flow");
    auto *partition = app.add_subcommand("partition", "Partition blocks into tiers");
    auto *place = app.add_subcommand("place", "Place blocks on their tiers");
    auto *route = app.add_subcommand("route", "Route the placed design");
    auto *sta = app.add_subcommand("sta", "Static timing analysis of the routed design");
    auto *report = app.add_subcommand("report", "Collect metrics from stage artifacts");
    for (auto *cmd : {run, partition, place, route, sta, report})
        add_common(cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    if (width > 0)
        config.width = width;

    const ReportFormat fmt = format == "machine" ? ReportFormat::Machine : ReportFormat::Text;
    try {
        if (run->parsed()) {
            std::cout << emit_report(run_flow(config), fmt);
        } else if (partition->parsed()) {
            run_partition_stage(config);
        } else if (place->parsed()) {
            run_place_stage(config);
        } else if (route->parsed()) {
            run_route_stage(config);
        } else if (sta->parsed()) {
            run_sta_stage(config);
        } else if (report->parsed()) {
            std::cout << emit_report(run_report_stage(config), fmt);
        }
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
