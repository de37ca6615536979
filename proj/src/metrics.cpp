#include "stackpnr/metrics.hpp"

#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "stackpnr/error.hpp"

namespace stackpnr {

namespace {

struct TierArea
{
    int64_t sb = 0;
    int64_t clb = 0;
    int64_t cb = 0;
};

TierArea tier_area(const Arch3D &arch, int w)
{
    TierArea a;
    const bool stacked = arch.tiers > 1;
    for (int y = 0; y <= arch.grid_y; ++y)
        for (int x = 0; x <= arch.grid_x; ++x)
            a.sb += sb_switch_count(w, stacked && is_3d_sb(x, y, arch));
    a.clb = static_cast<int64_t>(arch.grid_x) * arch.grid_y * arch.area.transistors_per_clb;
    const int64_t channel_tiles =
        static_cast<int64_t>(arch.grid_x) * (arch.grid_y + 1) + static_cast<int64_t>(arch.grid_x + 1) * arch.grid_y;
    a.cb = channel_tiles * w * arch.area.transistors_per_cb_per_track;
    return a;
}

} // namespace

TransistorBreakdown transistor_breakdown(const Arch3D &arch, int w)
{
    const TierArea a = tier_area(arch, w);
    TransistorBreakdown b;
    b.switch_boxes = a.sb * arch.tiers;
    b.clbs = a.clb * arch.tiers;
    b.connection_blocks = a.cb * arch.tiers;
    b.total = b.switch_boxes + b.clbs + b.connection_blocks;
    return b;
}

int64_t transistor_count(const Arch3D &arch, int w) { return transistor_breakdown(arch, w).total; }

FlowMetrics collect_metrics(const MetricsInputs &in)
{
    auto need = [](bool present, const char *stage) {
        if (!present)
            fail(ErrorKind::StageMissing, stage);
    };
    need(in.arch, "arch");
    need(in.blocks, "pack");
    need(in.cut_size.has_value(), "partition");
    need(in.placement, "place");
    need(in.rrg && in.routing, "route");
    need(in.cpd.has_value(), "sta");

    const Arch3D &arch = *in.arch;
    FlowMetrics m;
    m.circuit = in.circuit;
    m.tiers = arch.tiers;
    m.grid_x = arch.grid_x;
    m.grid_y = arch.grid_y;
    m.tsv_cut = *in.cut_size;
    m.wmin = in.routing->width;
    m.cpd = *in.cpd;
    m.tsv_used = tsv_count(*in.rrg, *in.routing);
    m.total_wirelength = total_wirelength(*in.rrg, *in.routing);
    m.transistor_total = transistor_count(arch, m.wmin);

    const TierArea area = tier_area(arch, m.wmin);
    m.per_tier.resize(arch.tiers);
    for (int t = 0; t < arch.tiers; ++t) {
        m.per_tier[t].tier = t;
        m.per_tier[t].transistors = area.sb + area.clb + area.cb;
    }
    for (auto &blk : in.blocks->blocks) {
        auto &tm = m.per_tier[in.placement->location_of[blk.id].z];
        (blk.kind == BlockKind::Clb ? tm.clbs : tm.pads)++;
    }
    for (auto &tree : in.routing->trees)
        for (int n : tree.nodes) {
            const RrgNode &node = in.rrg->node(n);
            if (node.kind == RrKind::WireX || node.kind == RrKind::WireY)
                m.per_tier[node.z].wirelength += node.length;
        }
    return m;
}

namespace {

void table_header(std::ostream &out)
{
    out << std::left << std::setw(16) << "circuit" << std::right << std::setw(6) << "tiers" << std::setw(10) << "CPD(ns)"
        << std::setw(7) << "W_min" << std::setw(13) << "Area(x10^6)" << std::setw(7) << "TSV#" << std::setw(9) << "TSV_cut"
        << std::setw(10) << "WL" << "\n";
}

void table_row(std::ostream &out, const FlowMetrics &m)
{
    out << std::left << std::setw(16) << (m.circuit.empty() ? "-" : m.circuit) << std::right << std::setw(6) << m.tiers
        << std::fixed << std::setprecision(2) << std::setw(10) << m.cpd * 1e9 << std::setw(7) << m.wmin
        << std::setprecision(4) << std::setw(13) << static_cast<double>(m.transistor_total) / 1e6 << std::setw(7)
        << m.tsv_used << std::setw(9) << m.tsv_cut << std::setw(10) << m.total_wirelength << "\n";
}

} // namespace

std::string emit_table(const std::vector<FlowMetrics> &rows)
{
    std::ostringstream out;
    table_header(out);
    for (auto &m : rows)
        table_row(out, m);
    return out.str();
}

std::string emit_report(const FlowMetrics &m, ReportFormat format)
{
    if (format == ReportFormat::Machine)
        return metrics_to_json(m);
    std::ostringstream out;
    table_header(out);
    table_row(out, m);
    if (!m.per_tier.empty()) {
        out << "\n" << std::setw(6) << "tier" << std::setw(8) << "CLBs" << std::setw(8) << "pads" << std::setw(10) << "WL"
            << std::setw(14) << "transistors" << "\n";
        for (auto &t : m.per_tier)
            out << std::setw(6) << t.tier << std::setw(8) << t.clbs << std::setw(8) << t.pads << std::setw(10)
                << t.wirelength << std::setw(14) << t.transistors << "\n";
    }
    return out.str();
}

std::string metrics_to_json(const FlowMetrics &m)
{
    nlohmann::ordered_json j;
    j["circuit"] = m.circuit;
    j["tiers"] = m.tiers;
    j["grid"] = {m.grid_x, m.grid_y};
    j["cpd"] = m.cpd;
    j["wmin"] = m.wmin;
    j["transistor_total"] = m.transistor_total;
    j["tsv_used"] = m.tsv_used;
    j["tsv_cut"] = m.tsv_cut;
    j["total_wirelength"] = m.total_wirelength;
    auto tiers = nlohmann::ordered_json::array();
    for (auto &t : m.per_tier)
        tiers.push_back({{"tier", t.tier},
                         {"clbs", t.clbs},
                         {"pads", t.pads},
                         {"wirelength", t.wirelength},
                         {"transistors", t.transistors}});
    j["per_tier"] = tiers;
    return j.dump(2) + "\n";
}

FlowMetrics metrics_from_json(std::string_view text)
{
    try {
        const auto j = nlohmann::json::parse(text);
        FlowMetrics m;
        m.circuit = j.at("circuit").get<std::string>();
        m.tiers = j.at("tiers").get<int>();
        m.grid_x = j.at("grid").at(0).get<int>();
        m.grid_y = j.at("grid").at(1).get<int>();
        m.cpd = j.at("cpd").get<double>();
        m.wmin = j.at("wmin").get<int>();
        m.transistor_total = j.at("transistor_total").get<int64_t>();
        m.tsv_used = j.at("tsv_used").get<int64_t>();
        m.tsv_cut = j.at("tsv_cut").get<int64_t>();
        m.total_wirelength = j.at("total_wirelength").get<int64_t>();
        for (auto &t : j.at("per_tier"))
            m.per_tier.push_back({t.at("tier").get<int>(), t.at("clbs").get<int>(), t.at("pads").get<int>(),
                                  t.at("wirelength").get<int64_t>(), t.at("transistors").get<int64_t>()});
        return m;
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorKind::MalformedFile, std::string("metrics document: ") + e.what());
    }
}

std::string chart_series(const std::vector<FlowMetrics> &rows)
{
    std::ostringstream out;
    out << "circuit,metric,tiers,value\n";
    out << std::setprecision(10);
    for (auto &m : rows) {
        out << m.circuit << ",tsv_used," << m.tiers << "," << m.tsv_used << "\n";
        out << m.circuit << ",tsv_cut," << m.tiers << "," << m.tsv_cut << "\n";
        out << m.circuit << ",wirelength," << m.tiers << "," << m.total_wirelength << "\n";
        out << m.circuit << ",cpd_ns," << m.tiers << "," << m.cpd * 1e9 << "\n";
        out << m.circuit << ",wmin," << m.tiers << "," << m.wmin << "\n";
        out << m.circuit << ",transistors," << m.tiers << "," << m.transistor_total << "\n";
    }
    return out.str();
}

double percent_change(double base, double value) { return base == 0.0 ? 0.0 : (value - base) / base * 100.0; }

} // namespace stackpnr
