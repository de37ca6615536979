#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "stackpnr/arch.hpp"
#include "stackpnr/netlist.hpp"
#include "stackpnr/placement.hpp"
#include "stackpnr/rrg.hpp"

namespace stackpnr {

struct RouterParams
{
    int max_iterations = 50;
    double pres_fac_initial = 0.5;
    double pres_fac_mult = 1.8;
    double hist_fac = 1.0;
    // Rip up every net each iteration instead of only congested ones.
    bool rip_up_all = false;
    double max_criticality = 0.99;
    // Seconds mapped to one cost unit in the timing term; 0 picks the
    // Single-segment delay of the graph's architecture (or 1e-10).
    double delay_unit = 0.0;
};

// One net to route: RRG source, RRG sinks and per-sink criticality.
struct RouteRequest
{
    int net = 0;
    int source = 0;
    std::vector<int> sinks;
    std::vector<double> criticality;
};

// Route tree in insertion order; parent indexes into `nodes`, -1 at root.
struct RouteTree
{
    std::vector<int> nodes;
    std::vector<int> parent;
};

struct IterationStats
{
    int iteration = 0;
    int rerouted = 0;
    int64_t overuse = 0;
    int overused_nodes = 0;
};

struct RoutingResult
{
    int width = 0;
    bool success = false;
    int iterations = 0;
    int64_t overuse = 0;
    std::vector<RouteRequest> requests;
    std::vector<RouteTree> trees; // parallel to requests
    std::vector<int> usage;       // per RRG node
    std::vector<double> history;  // per RRG node
    std::vector<IterationStats> log;
    // Per request and sink: summed node cost along the tree path, from the
    // iteration that produced the final tree.
    std::vector<std::vector<double>> path_cost;
};

/// Negotiated-congestion routing of explicit requests. Iteration 1 routes
/// every net with congestion ignored; later iterations rip up and re-route
/// nets that touch over-used nodes with node cost
///   crit * delay + (1 - crit) * b * h * p,
/// growing sink by sink from the existing tree. Nets are processed in
/// request order.
RoutingResult route_connections(const Rrg &rrg, std::vector<RouteRequest> requests, const RouterParams &params);

// Per net id and sink index; empty means wirelength-only routing.
using Criticalities = std::vector<std::vector<double>>;

std::vector<RouteRequest> make_requests(const Rrg &rrg, const BlockNetlist &blocks, const Placement &pl,
                                        const Criticalities &crit);

RoutingResult route_nets(const Rrg &rrg, const BlockNetlist &blocks, const Placement &pl, const RouterParams &params,
                         const Criticalities &crit = {});

// Throws Unroutable when the result did not converge.
void require_routed(const RoutingResult &result, int max_iterations);

struct WidthProbe
{
    int width = 0;
    bool success = false;
};

struct WminResult
{
    int width = 0;
    RoutingResult result;
    std::vector<WidthProbe> probes;
};

/// Smallest even width that routes: doubles from 2 until a probe succeeds,
/// then bisects between the last failing and the first passing width.
WminResult find_wmin(const Arch3D &arch, const BlockNetlist &blocks, const Placement &pl, const RouterParams &params,
                     const Criticalities &crit = {}, int w_max = 128);

// Per request and sink: summed intrinsic node delays and switch delays from
// the source down the tree to the sink.
std::vector<std::vector<double>> connection_delays(const Rrg &rrg, const RoutingResult &result);

int64_t total_wirelength(const Rrg &rrg, const RoutingResult &result);
int64_t tsv_count(const Rrg &rrg, const RoutingResult &result);

std::string write_routing(const Rrg &rrg, const RoutingResult &result);
RoutingResult read_routing(std::string_view text, const Rrg &rrg, std::vector<RouteRequest> requests);

// Width recorded in a routing dump header.
int routing_file_width(std::string_view text);

} // namespace stackpnr
