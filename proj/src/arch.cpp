#include "stackpnr/arch.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "stackpnr/error.hpp"

namespace stackpnr {

namespace {

void check_keys(const YAML::Node &node, const std::string &section, std::initializer_list<const char *> allowed)
{
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = node.begin(); it != node.end(); ++it) {
        auto key = it->first.as<std::string>();
        if (!ok.count(key))
            fail(ErrorKind::UnknownKey, section.empty() ? key : section + "." + key);
    }
}

YAML::Node require_map(const YAML::Node &parent, const std::string &key, const std::string &path)
{
    YAML::Node n = parent[key];
    if (!n)
        fail(ErrorKind::MissingField, path);
    if (!n.IsMap())
        fail(ErrorKind::InvariantViolation, path + ": expected a mapping");
    return n;
}

template <typename T> T read_value(const YAML::Node &parent, const std::string &key, const std::string &path)
{
    YAML::Node n = parent[key];
    if (!n)
        fail(ErrorKind::MissingField, path);
    try {
        return n.as<T>();
    } catch (const YAML::Exception &) {
        fail(ErrorKind::InvariantViolation, path + ": cannot convert '" + n.Scalar() + "'");
    }
}

template <typename T> T read_optional(const YAML::Node &parent, const std::string &key, const std::string &path, T fallback)
{
    if (!parent[key])
        return fallback;
    return read_value<T>(parent, key, path);
}

void invariant(bool ok, const std::string &field, const std::string &reason)
{
    if (!ok)
        fail(ErrorKind::InvariantViolation, field + ": " + reason);
}

} // namespace

int Arch3D::tsv_tracks(int w) const
{
    // Small epsilon so that e.g. 0.5 * 4 is not bumped to 3 by rounding noise.
    return static_cast<int>(std::ceil(vertical_track_ratio * w - 1e-9));
}

Arch3D load_arch(std::string_view text)
{
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception &e) {
        fail(ErrorKind::MalformedFile, std::string("architecture file: ") + e.what());
    }
    if (!root.IsMap())
        fail(ErrorKind::MalformedFile, "architecture file: top level must be a mapping");

    check_keys(root, "",
               {"tiers", "grid_x", "grid_y", "lut_size", "cluster_size", "fs", "io_capacity", "segment_mix", "sb3d_fraction",
                "vertical_track_ratio", "grid_units_per_um", "tsv_area_overhead", "tsv", "delays", "area"});

    Arch3D arch;
    arch.tiers = read_value<int>(root, "tiers", "tiers");
    arch.grid_x = read_value<int>(root, "grid_x", "grid_x");
    arch.grid_y = read_value<int>(root, "grid_y", "grid_y");
    arch.lut_size = read_value<int>(root, "lut_size", "lut_size");
    arch.fs = read_value<int>(root, "fs", "fs");
    arch.cluster_size = read_optional<int>(root, "cluster_size", "cluster_size", 1);
    arch.io_capacity = read_optional<int>(root, "io_capacity", "io_capacity", 1);
    arch.sb3d_fraction = read_optional<double>(root, "sb3d_fraction", "sb3d_fraction", 1.0 / 3.0);
    arch.vertical_track_ratio = read_optional<double>(root, "vertical_track_ratio", "vertical_track_ratio", 0.5);
    arch.grid_units_per_um = read_value<double>(root, "grid_units_per_um", "grid_units_per_um");
    arch.tsv_area_overhead = read_optional<double>(root, "tsv_area_overhead", "tsv_area_overhead", 0.0);

    YAML::Node mix = require_map(root, "segment_mix", "segment_mix");
    arch.segment_mix = {0.0, 0.0, 0.0};
    for (auto it = mix.begin(); it != mix.end(); ++it) {
        auto key = it->first.as<std::string>();
        int cls = -1;
        try {
            cls = segment_class(std::stoi(key));
        } catch (const std::exception &) {
        }
        if (cls < 0 || std::to_string(kSegmentLengths[cls]) != key)
            fail(ErrorKind::UnknownKey, "segment_mix." + key);
        arch.segment_mix[cls] = read_value<double>(mix, key, "segment_mix." + key);
    }

    YAML::Node tsv = require_map(root, "tsv", "tsv");
    check_keys(tsv, "tsv", {"r", "c", "diameter", "pitch", "height"});
    arch.tsv.resistance = read_value<double>(tsv, "r", "tsv.r");
    arch.tsv.capacitance = read_value<double>(tsv, "c", "tsv.c");
    arch.tsv.diameter = read_value<double>(tsv, "diameter", "tsv.diameter");
    arch.tsv.pitch = read_value<double>(tsv, "pitch", "tsv.pitch");
    arch.tsv.height = read_value<double>(tsv, "height", "tsv.height");

    YAML::Node delays = require_map(root, "delays", "delays");
    check_keys(delays, "delays", {"t_lut", "t_ff_clk_to_q", "t_ff_setup", "t_seg", "t_sb_switch", "t_cb", "t_tsv"});
    arch.delays.t_lut = read_value<double>(delays, "t_lut", "delays.t_lut");
    arch.delays.t_ff_clk_to_q = read_value<double>(delays, "t_ff_clk_to_q", "delays.t_ff_clk_to_q");
    arch.delays.t_ff_setup = read_value<double>(delays, "t_ff_setup", "delays.t_ff_setup");
    arch.delays.t_sb_switch = read_value<double>(delays, "t_sb_switch", "delays.t_sb_switch");
    arch.delays.t_cb = read_value<double>(delays, "t_cb", "delays.t_cb");
    arch.delays.t_tsv = read_value<double>(delays, "t_tsv", "delays.t_tsv");
    YAML::Node tseg = require_map(delays, "t_seg", "delays.t_seg");
    check_keys(tseg, "delays.t_seg", {"1", "2", "4"});
    for (int len : kSegmentLengths) {
        auto key = std::to_string(len);
        arch.delays.t_seg[segment_class(len)] = read_value<double>(tseg, key, "delays.t_seg." + key);
    }

    YAML::Node area = require_map(root, "area", "area");
    check_keys(area, "area", {"transistors_per_clb", "transistors_per_cb_per_track"});
    arch.area.transistors_per_clb = read_value<int64_t>(area, "transistors_per_clb", "area.transistors_per_clb");
    arch.area.transistors_per_cb_per_track =
            read_value<int64_t>(area, "transistors_per_cb_per_track", "area.transistors_per_cb_per_track");

    validate_arch(arch);
    return arch;
}

Arch3D load_arch_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorKind::ConfigError, "cannot open architecture file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_arch(ss.str());
}

void validate_arch(const Arch3D &arch)
{
    invariant(arch.tiers >= 1, "tiers", "must be >= 1");
    invariant(arch.grid_x >= 1, "grid_x", "must be >= 1");
    invariant(arch.grid_y >= 1, "grid_y", "must be >= 1");
    invariant(arch.lut_size >= 2, "lut_size", "must be >= 2");
    invariant(arch.fs >= 1, "fs", "must be >= 1");
    invariant(arch.cluster_size >= 1, "cluster_size", "must be >= 1");
    invariant(arch.io_capacity >= 1, "io_capacity", "must be >= 1");
    double sum = 0.0;
    for (double f : arch.segment_mix) {
        invariant(f >= 0.0, "segment_mix", "fractions must be nonnegative");
        sum += f;
    }
    invariant(std::abs(sum - 1.0) <= 1e-9, "segment_mix", "fractions sum to " + std::to_string(sum) + ", expected 1");
    invariant(arch.sb3d_fraction > 0.0 && arch.sb3d_fraction <= 1.0, "sb3d_fraction", "must be in (0, 1]");
    invariant(arch.vertical_track_ratio > 0.0 && arch.vertical_track_ratio <= 1.0, "vertical_track_ratio", "must be in (0, 1]");
    invariant(arch.grid_units_per_um > 0.0, "grid_units_per_um", "must be > 0");
    invariant(arch.tsv_area_overhead >= 0.0, "tsv_area_overhead", "must be >= 0");
    invariant(arch.tsv.resistance > 0.0, "tsv.r", "must be > 0");
    invariant(arch.tsv.capacitance > 0.0, "tsv.c", "must be > 0");
    invariant(arch.tsv.diameter > 0.0, "tsv.diameter", "must be > 0");
    invariant(arch.tsv.pitch > 0.0, "tsv.pitch", "must be > 0");
    invariant(arch.tsv.height > 0.0, "tsv.height", "must be > 0");
    const auto &d = arch.delays;
    for (double v : {d.t_lut, d.t_ff_clk_to_q, d.t_ff_setup, d.t_seg[0], d.t_seg[1], d.t_seg[2], d.t_sb_switch, d.t_cb, d.t_tsv})
        invariant(v >= 0.0, "delays", "all delays must be >= 0");
    invariant(arch.area.transistors_per_clb > 0, "area.transistors_per_clb", "must be > 0");
    invariant(arch.area.transistors_per_cb_per_track > 0, "area.transistors_per_cb_per_track", "must be > 0");
}

bool is_3d_sb(int x, int y, const Arch3D &arch)
{
    if (x < 0 || y < 0 || x > arch.grid_x || y > arch.grid_y)
        fail(ErrorKind::OutOfGrid, "switch box (" + std::to_string(x) + ", " + std::to_string(y) + ") outside " +
                                           std::to_string(arch.grid_x + 1) + "x" + std::to_string(arch.grid_y + 1) + " grid");
    const int period = std::max(1, static_cast<int>(std::lround(1.0 / arch.sb3d_fraction)));
    return (x + y) % period == 0;
}

double max_manhattan_distance(double x, double y, int tiers, double tsv_height) { return (x + y) + (tiers - 1) * tsv_height; }

double dmax(const Arch3D &arch) { return max_manhattan_distance(arch.grid_x, arch.grid_y, arch.tiers, arch.tsv_height_grid()); }

int64_t sb_switch_count(int w, bool is_3d)
{
    // 1.5w and 2.5w rounded half up, in integer arithmetic.
    const int64_t halves = static_cast<int64_t>(w) * (is_3d ? 5 : 3);
    return (halves + 1) / 2;
}

double tsv_rc_delay(const TsvParams &tsv) { return tsv.resistance * tsv.capacitance; }

} // namespace stackpnr
