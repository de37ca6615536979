#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stackpnr/anneal.hpp"
#include "stackpnr/arch.hpp"
#include "stackpnr/error.hpp"
#include "stackpnr/flow.hpp"
#include "stackpnr/metrics.hpp"
#include "stackpnr/netlist.hpp"
#include "stackpnr/partition.hpp"
#include "stackpnr/placement.hpp"
#include "stackpnr/router.hpp"
#include "stackpnr/rrg.hpp"
#include "stackpnr/timing.hpp"

namespace py = pybind11;
using namespace stackpnr;

namespace {

SaSchedule schedule(uint64_t seed, int moves_per_temperature)
{
    SaSchedule s;
    s.seed = seed;
    s.moves_per_temperature = moves_per_temperature;
    return s;
}

Partition partition_from(const std::vector<int> &tier_of, int tiers)
{
    Partition p;
    p.tiers = tiers;
    p.tier_of = tier_of;
    p.tier_sizes.assign(tiers, 0);
    for (int t : tier_of) {
        if (t < 0 || t >= tiers)
            fail(ErrorKind::InvariantViolation, "tier index out of range");
        ++p.tier_sizes[t];
    }
    return p;
}

py::dict routing_summary(const Rrg &rrg, const RoutingResult &r)
{
    py::dict d;
    d["width"] = r.width;
    d["success"] = r.success;
    d["iterations"] = r.iterations;
    d["overuse"] = r.overuse;
    d["wirelength"] = total_wirelength(rrg, r);
    d["tsv_used"] = tsv_count(rrg, r);
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "3D FPGA place-and-route core";

    static py::exception<Error> error_type(m, "StackpnrError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const Error &e) {
            py::object exc = py::reinterpret_borrow<py::object>(error_type.ptr())(e.what());
            exc.attr("kind") = std::string(error_kind_name(e.kind()));
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    py::class_<Netlist>(m, "Netlist")
        .def_readonly("model_name", &Netlist::model_name)
        .def_readonly("primary_inputs", &Netlist::primary_inputs)
        .def_readonly("primary_outputs", &Netlist::primary_outputs)
        .def_property_readonly("lut_count", [](const Netlist &n) { return n.luts.size(); })
        .def_property_readonly("latch_count", [](const Netlist &n) { return n.latches.size(); })
        .def("to_blif", &write_blif);
    m.def("parse_blif", [](const std::string &text, int lut_size) { return parse_blif(text, lut_size); },
          py::arg("text"), py::arg("lut_size") = 6);

    py::class_<BlockNetlist>(m, "BlockNetlist")
        .def_property_readonly("block_count", &BlockNetlist::block_count)
        .def_property_readonly("net_count", &BlockNetlist::net_count)
        .def("dump", &dump_blocks);
    m.def("pack_blocks", &pack_blocks, py::arg("netlist"), py::arg("cluster_size") = 1);

    py::class_<CircuitGraph>(m, "CircuitGraph")
        .def(py::init([](int n, const std::vector<std::tuple<int, int, int>> &edges) {
                 std::vector<GraphEdge> e;
                 for (auto [u, v, k] : edges)
                     e.push_back({u, v, k});
                 return CircuitGraph(n, e);
             }),
             py::arg("vertex_count"), py::arg("edges"))
        .def_property_readonly("vertex_count", &CircuitGraph::vertex_count)
        .def_property_readonly("edges", [](const CircuitGraph &g) {
            std::vector<std::tuple<int, int, int>> out;
            for (auto &e : g.edges())
                out.emplace_back(e.u, e.v, e.multiplicity);
            return out;
        });
    m.def("build_graph", &build_graph);

    py::class_<TsvParams>(m, "TsvParams")
        .def_readwrite("resistance", &TsvParams::resistance)
        .def_readwrite("capacitance", &TsvParams::capacitance)
        .def_readwrite("diameter", &TsvParams::diameter)
        .def_readwrite("pitch", &TsvParams::pitch)
        .def_readwrite("height", &TsvParams::height);

    py::class_<Arch3D>(m, "Arch3D")
        .def_readwrite("tiers", &Arch3D::tiers)
        .def_readwrite("grid_x", &Arch3D::grid_x)
        .def_readwrite("grid_y", &Arch3D::grid_y)
        .def_readwrite("lut_size", &Arch3D::lut_size)
        .def_readwrite("cluster_size", &Arch3D::cluster_size)
        .def_readwrite("io_capacity", &Arch3D::io_capacity)
        .def_readwrite("tsv", &Arch3D::tsv);
    m.def("load_arch", [](const std::string &text) { return load_arch(text); });
    m.def("load_arch_file", &load_arch_file);
    m.def("is_3d_sb", &is_3d_sb, py::arg("x"), py::arg("y"), py::arg("arch"));
    m.def("max_manhattan_distance", &max_manhattan_distance, py::arg("x"), py::arg("y"), py::arg("tiers"),
          py::arg("tsv_height"));
    m.def("dmax", &dmax);
    m.def("sb_switch_count", &sb_switch_count, py::arg("w"), py::arg("is_3d"));
    m.def("tsv_rc_delay", &tsv_rc_delay);
    m.def("transistor_count", &transistor_count, py::arg("arch"), py::arg("w"));

    m.def("cut_size", [](const CircuitGraph &g, const std::vector<int> &tier_of, int tiers) {
        return cut_size(g, partition_from(tier_of, tiers));
    }, py::arg("graph"), py::arg("tier_of"), py::arg("tiers"));
    m.def("swap_delta_cost", [](const CircuitGraph &g, const std::vector<int> &tier_of, int tiers, int a, int b) {
        const Partition p = partition_from(tier_of, tiers);
        return swap_delta_cost(g, p, setup_gains(g, p), a, b);
    }, py::arg("graph"), py::arg("tier_of"), py::arg("tiers"), py::arg("v_i"), py::arg("v_j"));
    m.def("partition", [](const CircuitGraph &g, int tiers, uint64_t seed, int moves) {
        PartitionResult r = anneal_partition(g, tiers, schedule(seed, moves));
        py::dict d;
        d["tier_of"] = r.partition.tier_of;
        d["cut"] = r.cut;
        d["initial_cut"] = r.initial_cut;
        d["temperatures"] = r.trace.temperatures.size();
        d["stop"] = std::string(stop_reason_name(r.trace.stop));
        return d;
    }, py::arg("graph"), py::arg("tiers"), py::arg("seed") = 1, py::arg("moves_per_temperature") = 0);

    m.def("place_and_route", [](const BlockNetlist &b, const std::vector<int> &tier_of, const Arch3D &arch,
                                uint64_t seed, bool auto_grid, std::optional<int> width) {
        const Partition p = partition_from(tier_of, arch.tiers);
        const Arch3D a = auto_grid ? fit_grid(b, p, arch) : arch;
        const PlacementResult pr = anneal_placement(b, p, a, schedule(seed, 0));
        const RouterParams params;
        RoutingResult r;
        if (width) {
            r = route_nets(build_rrg(a, *width), b, pr.placement, params);
        } else {
            r = find_wmin(a, b, pr.placement, params).result;
        }
        const Rrg rrg = build_rrg(a, r.width);
        const TimingGraph tg = build_timing_graph(b, routed_net_delays(rrg, r, b.net_count()), a.delays);
        py::dict d = routing_summary(rrg, r);
        d["grid_x"] = a.grid_x;
        d["grid_y"] = a.grid_y;
        d["placement_cost"] = static_cast<double>(pr.cost) / kCostScale;
        d["cpd"] = r.success ? critical_path(tg).cpd : 0.0;
        return d;
    }, py::arg("blocks"), py::arg("tier_of"), py::arg("arch"), py::arg("seed") = 1, py::arg("auto_grid") = true,
          py::arg("width") = py::none());

    m.def("critical_path", [](const std::vector<std::string> &names,
                              const std::vector<std::tuple<int, int, double>> &edges) {
        TimingGraph tg;
        for (auto &n : names)
            tg.add_node(TimingNodeKind::Lut, n);
        for (auto [u, v, d] : edges)
            tg.add_edge(u, v, d);
        const PathReport r = critical_path(tg);
        py::dict d;
        d["cpd"] = r.cpd;
        d["path"] = r.path;
        d["edge_slack"] = r.edge_slack;
        d["edge_criticality"] = r.edge_criticality;
        return d;
    }, py::arg("names"), py::arg("edges"));

    py::class_<TierMetrics>(m, "TierMetrics")
        .def_readonly("tier", &TierMetrics::tier)
        .def_readonly("clbs", &TierMetrics::clbs)
        .def_readonly("pads", &TierMetrics::pads)
        .def_readonly("wirelength", &TierMetrics::wirelength)
        .def_readonly("transistors", &TierMetrics::transistors);

    py::class_<FlowMetrics>(m, "FlowMetrics")
        .def_readonly("circuit", &FlowMetrics::circuit)
        .def_readonly("tiers", &FlowMetrics::tiers)
        .def_readonly("tsv_used", &FlowMetrics::tsv_used)
        .def_readonly("tsv_cut", &FlowMetrics::tsv_cut)
        .def_readonly("wmin", &FlowMetrics::wmin)
        .def_readonly("cpd", &FlowMetrics::cpd)
        .def_readonly("total_wirelength", &FlowMetrics::total_wirelength)
        .def_readonly("transistor_total", &FlowMetrics::transistor_total)
        .def_readonly("grid_x", &FlowMetrics::grid_x)
        .def_readonly("grid_y", &FlowMetrics::grid_y)
        .def_readonly("per_tier", &FlowMetrics::per_tier)
        .def("to_json", &metrics_to_json)
        .def_static("from_json", [](const std::string &text) { return metrics_from_json(text); })
        .def("__eq__", [](const FlowMetrics &a, const FlowMetrics &b) { return a == b; });
    m.def("emit_table", &emit_table);
    m.def("chart_series", &chart_series);

    m.def("run_flow", [](const std::string &arch, const std::string &blif, int tiers, uint64_t seed,
                         const std::string &out_dir, std::optional<int> width, bool auto_grid, int moves_per_temp,
                         int max_route_iters) {
        FlowConfig c;
        c.arch_path = arch;
        c.blif_path = blif;
        c.tiers = tiers;
        c.seed = seed;
        c.out_dir = out_dir;
        c.width = width;
        c.auto_grid = auto_grid;
        c.moves_per_temp = moves_per_temp;
        c.max_route_iters = max_route_iters;
        py::gil_scoped_release release;
        return run_flow(c);
    }, py::arg("arch"), py::arg("blif"), py::arg("tiers") = 1, py::arg("seed") = 1, py::arg("out_dir") = "out",
          py::arg("width") = py::none(), py::arg("auto_grid") = false, py::arg("moves_per_temp") = 0,
          py::arg("max_route_iters") = 50);
}
