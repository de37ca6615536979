#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace stackpnr {

struct TsvParams
{
    double resistance = 0.0;  // ohm
    double capacitance = 0.0; // farad
    double diameter = 0.0;    // um
    double pitch = 0.0;       // um
    double height = 0.0;      // um

    bool operator==(const TsvParams &) const = default;
};

// Supported wire segment lengths: Single, Double, Quad.
inline constexpr std::array<int, 3> kSegmentLengths{1, 2, 4};

constexpr int segment_class(int length) { return length == 1 ? 0 : length == 2 ? 1 : length == 4 ? 2 : -1; }

struct DelayModel
{
    double t_lut = 0.0;
    double t_ff_clk_to_q = 0.0;
    double t_ff_setup = 0.0;
    std::array<double, 3> t_seg{}; // indexed by segment_class()
    double t_sb_switch = 0.0;
    double t_cb = 0.0;
    double t_tsv = 0.0;

    double seg(int length) const { return t_seg[segment_class(length)]; }
};

struct AreaModel
{
    int64_t transistors_per_clb = 0;
    int64_t transistors_per_cb_per_track = 0;
};

struct Arch3D
{
    int tiers = 1;
    int grid_x = 1;
    int grid_y = 1;
    int lut_size = 6;
    int cluster_size = 1;
    int fs = 3;
    int io_capacity = 1;
    std::array<double, 3> segment_mix{1.0, 0.0, 0.0}; // indexed by segment_class()
    double sb3d_fraction = 1.0 / 3.0;
    double vertical_track_ratio = 0.5;
    double grid_units_per_um = 1.0;
    double tsv_area_overhead = 0.0;
    TsvParams tsv;
    DelayModel delays;
    AreaModel area;

    // TSV height expressed in grid units.
    double tsv_height_grid() const { return tsv.height * grid_units_per_um; }
    // TSV tracks per 3D switch box for planar channel width w.
    int tsv_tracks(int w) const;
};

/// Reads the YAML architecture description, fills defaults for optional
/// keys (vertical_track_ratio, cluster_size, sb3d_fraction, io_capacity,
/// tsv_area_overhead) and checks every invariant.
Arch3D load_arch(std::string_view text);
Arch3D load_arch_file(const std::string &path);
void validate_arch(const Arch3D &arch);

/// 3D switch-box site pattern on the (grid_x+1) x (grid_y+1) SB grid. With
/// the default fraction of one third this is (x + y) mod 3 == 0; in general
/// the period is round(1 / sb3d_fraction). Identical on every tier.
bool is_3d_sb(int x, int y, const Arch3D &arch);

/// Maximum Manhattan distance across an n-tier stack: (X + Y) + (n - 1) h.
double max_manhattan_distance(double x, double y, int tiers, double tsv_height);
double dmax(const Arch3D &arch);

/// Pass transistors in one switch box: 1.5 w (2D) or 2.5 w (3D), rounded
/// half up.
int64_t sb_switch_count(int w, bool is_3d);

/// Single-pole R*C estimate of a TSV.
double tsv_rc_delay(const TsvParams &tsv);

} // namespace stackpnr
