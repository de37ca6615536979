#include "stackpnr/rrg.hpp"

#include <algorithm>
#include <cmath>

#include "stackpnr/error.hpp"

namespace stackpnr {

std::string_view rr_kind_name(RrKind kind)
{
    switch (kind) {
    case RrKind::Source:
        return "source";
    case RrKind::Sink:
        return "sink";
    case RrKind::Opin:
        return "opin";
    case RrKind::Ipin:
        return "ipin";
    case RrKind::WireX:
        return "wire_x";
    case RrKind::WireY:
        return "wire_y";
    case RrKind::WireZ:
        return "wire_z";
    }
    return "?";
}

RrKind rr_kind_from_name(std::string_view name)
{
    for (RrKind k : {RrKind::Source, RrKind::Sink, RrKind::Opin, RrKind::Ipin, RrKind::WireX, RrKind::WireY, RrKind::WireZ})
        if (rr_kind_name(k) == name)
            return k;
    fail(ErrorKind::MalformedFile, "unknown routing node kind '" + std::string(name) + "'");
}

namespace {

uint64_t node_key(RrKind kind, int x, int y, int z, int track)
{
    return (static_cast<uint64_t>(kind) << 60) | (static_cast<uint64_t>(z & 0xff) << 52) |
           (static_cast<uint64_t>(x & 0x3fff) << 38) | (static_cast<uint64_t>(y & 0x3fff) << 24) |
           static_cast<uint64_t>(track & 0xffffff);
}

} // namespace

int Rrg::add_node(const RrgNode &node)
{
    const int id = node_count();
    nodes_.push_back(node);
    index_.emplace(node_key(node.kind, node.x, node.y, node.z, node.track), id);
    return id;
}

void Rrg::add_edge(int from, int to, double delay) { pending_.push_back({from, RrgEdge{to, delay}}); }

void Rrg::finalize()
{
    first_edge_.assign(nodes_.size() + 1, 0);
    for (auto &[from, e] : pending_)
        ++first_edge_[from + 1];
    for (size_t i = 1; i < first_edge_.size(); ++i)
        first_edge_[i] += first_edge_[i - 1];
    edges_.resize(pending_.size());
    std::vector<int64_t> cursor(first_edge_.begin(), first_edge_.end() - 1);
    for (auto &[from, e] : pending_)
        edges_[cursor[from]++] = e;
    pending_.clear();
    pending_.shrink_to_fit();
}

double Rrg::edge_delay(int from, int to) const
{
    for (auto &e : fanout(from))
        if (e.to == to)
            return e.delay;
    return -1.0;
}

SitePins Rrg::site(const Location &loc) const
{
    if (sites_.empty() || loc.z < 0 || loc.z >= tiers || loc.x < 0 || loc.x > grid_x + 1 || loc.y < 0 || loc.y > grid_y + 1)
        return {};
    const size_t cell = ((static_cast<size_t>(loc.z) * (grid_y + 2) + loc.y) * (grid_x + 2) + loc.x) * io_capacity + loc.slot;
    return sites_[cell];
}

void Rrg::set_site(const Location &loc, SitePins pins)
{
    if (sites_.empty())
        sites_.assign(static_cast<size_t>(tiers) * (grid_y + 2) * (grid_x + 2) * io_capacity, SitePins{});
    const size_t cell = ((static_cast<size_t>(loc.z) * (grid_y + 2) + loc.y) * (grid_x + 2) + loc.x) * io_capacity + loc.slot;
    sites_[cell] = pins;
}

int Rrg::find(RrKind kind, int x, int y, int z, int track) const
{
    auto it = index_.find(node_key(kind, x, y, z, track));
    return it == index_.end() ? -1 : it->second;
}

TrackPlan plan_tracks(const Arch3D &arch, int w)
{
    int doubles = static_cast<int>(std::llround(arch.segment_mix[1] * w));
    int quads = static_cast<int>(std::llround(arch.segment_mix[2] * w));
    while (doubles + quads > w) {
        if (quads > 0)
            --quads;
        else
            --doubles;
    }
    const int singles = w - doubles - quads;
    TrackPlan plan;
    auto add = [&](int count, int len) {
        for (int j = 0; j < count; ++j) {
            plan.length.push_back(len);
            plan.offset.push_back(j % len);
        }
    };
    add(singles, 1);
    add(doubles, 2);
    add(quads, 4);
    return plan;
}

namespace {

// Splits a channel of `units` tiles (numbered 1..units) into segments for a
// track of the given length and stagger. Returns (first, last) pairs.
std::vector<std::pair<int, int>> channel_segments(int units, int len, int offset)
{
    std::vector<std::pair<int, int>> segs;
    int u = 1;
    while (u <= units) {
        const int key = (u - 1 + offset) / len;
        const int last = std::min(units, (key + 1) * len - offset);
        segs.push_back({u, last});
        u = last + 1;
    }
    return segs;
}

} // namespace

Rrg build_rrg(const Arch3D &arch, int w)
{
    if (w < 2 || w % 2 != 0)
        fail(ErrorKind::InvalidWidth, "channel width must be even and >= 2, got " + std::to_string(w));
    if (arch.fs != 3)
        fail(ErrorKind::InvariantViolation, "fs: only the subset switch box with F_s = 3 is supported");

    const int X = arch.grid_x;
    const int Y = arch.grid_y;
    const int n = arch.tiers;
    const int cap = arch.io_capacity;
    const TrackPlan plan = plan_tracks(arch, w);
    const int nz = n > 1 ? arch.tsv_tracks(w) : 0;
    const auto &d = arch.delays;

    Rrg g;
    g.width = w;
    g.tsv_tracks = nz;
    g.grid_x = X;
    g.grid_y = Y;
    g.tiers = n;
    g.io_capacity = cap;
    g.geometric = true;
    g.min_tsv_base_cost = std::max(1.0, arch.tsv_height_grid());
    g.track_length = plan.length;
    if (d.seg(1) > 0.0)
        g.unit_delay = d.seg(1);

    const int clb_in = arch.lut_size * arch.cluster_size;
    const int clb_out = arch.cluster_size;

    struct PinGroup
    {
        Location loc;
        int first_opin, num_opin, first_ipin, num_ipin;
    };
    std::vector<PinGroup> groups;

    auto add_site = [&](const Location &loc, int n_out, int n_in, int track_base) {
        PinGroup grp{loc, 0, n_out, 0, n_in};
        RrgNode src{RrKind::Source, static_cast<int16_t>(loc.x), static_cast<int16_t>(loc.y), static_cast<int16_t>(loc.z),
                    loc.slot, 0, n_out, 0.0, 0.0};
        RrgNode snk = src;
        snk.kind = RrKind::Sink;
        snk.capacity = n_in;
        const int source = g.add_node(src);
        const int sink = g.add_node(snk);
        grp.first_opin = g.node_count();
        for (int j = 0; j < n_out; ++j) {
            RrgNode pin = src;
            pin.kind = RrKind::Opin;
            pin.track = track_base + j;
            pin.capacity = 1;
            pin.base_cost = 1.0;
            int id = g.add_node(pin);
            g.add_edge(source, id, 0.0);
        }
        grp.first_ipin = g.node_count();
        for (int j = 0; j < n_in; ++j) {
            RrgNode pin = src;
            pin.kind = RrKind::Ipin;
            pin.track = track_base + j;
            pin.capacity = 1;
            pin.base_cost = 1.0;
            int id = g.add_node(pin);
            g.add_edge(id, sink, 0.0);
        }
        g.set_site(loc, {source, sink});
        groups.push_back(grp);
    };

    // chanx[z][(y * (X + 1) + x) * w + t], x in 1..X, y in 0..Y
    // chany[z][(x * (Y + 1) + y) * w + t], x in 0..X, y in 1..Y
    std::vector<std::vector<int>> chanx(n, std::vector<int>(static_cast<size_t>(X + 1) * (Y + 1) * w, -1));
    std::vector<std::vector<int>> chany(n, std::vector<int>(static_cast<size_t>(X + 1) * (Y + 1) * w, -1));
    auto cx = [&](int z, int x, int y, int t) -> int & { return chanx[z][(static_cast<size_t>(y) * (X + 1) + x) * w + t]; };
    auto cy = [&](int z, int x, int y, int t) -> int & { return chany[z][(static_cast<size_t>(x) * (Y + 1) + y) * w + t]; };

    auto wire_delay = [&](int t, int span) {
        const int len = plan.length[t];
        return d.seg(len) * span / len;
    };

    for (int z = 0; z < n; ++z) {
        for (auto &loc : clb_sites(X, Y, z))
            add_site(loc, clb_out, clb_in, 0);
        for (auto &loc : pad_sites(X, Y, z, cap))
            add_site(loc, 1, 1, loc.slot);

        for (int y = 0; y <= Y; ++y) {
            for (int t = 0; t < w; ++t) {
                for (auto [a, b] : channel_segments(X, plan.length[t], plan.offset[t])) {
                    const int span = b - a + 1;
                    RrgNode wire{RrKind::WireX, static_cast<int16_t>(a), static_cast<int16_t>(y), static_cast<int16_t>(z),
                                 t, span, 1, static_cast<double>(span), wire_delay(t, span)};
                    const int id = g.add_node(wire);
                    for (int u = a; u <= b; ++u)
                        cx(z, u, y, t) = id;
                }
            }
        }
        for (int x = 0; x <= X; ++x) {
            for (int t = 0; t < w; ++t) {
                for (auto [a, b] : channel_segments(Y, plan.length[t], plan.offset[t])) {
                    const int span = b - a + 1;
                    RrgNode wire{RrKind::WireY, static_cast<int16_t>(x), static_cast<int16_t>(a), static_cast<int16_t>(z),
                                 t, span, 1, static_cast<double>(span), wire_delay(t, span)};
                    const int id = g.add_node(wire);
                    for (int u = a; u <= b; ++u)
                        cy(z, x, u, t) = id;
                }
            }
        }
    }

    // wirez[z][(y * (X + 1) + x) * nz + t] joins tier z and z + 1.
    std::vector<std::vector<int>> wirez(std::max(0, n - 1), std::vector<int>(static_cast<size_t>(X + 1) * (Y + 1) * std::max(nz, 1), -1));
    auto wz = [&](int z, int x, int y, int t) -> int & { return wirez[z][(static_cast<size_t>(y) * (X + 1) + x) * nz + t]; };
    for (int z = 0; z + 1 < n; ++z) {
        for (int x = 0; x <= X; ++x) {
            for (int y = 0; y <= Y; ++y) {
                if (!is_3d_sb(x, y, arch))
                    continue;
                for (int t = 0; t < nz; ++t) {
                    RrgNode tsv{RrKind::WireZ, static_cast<int16_t>(x), static_cast<int16_t>(y), static_cast<int16_t>(z),
                                t, 0, 1, g.min_tsv_base_cost, d.t_tsv};
                    wz(z, x, y, t) = g.add_node(tsv);
                }
            }
        }
    }

    // Connection blocks, F_c = 1: every pin sees every track of each
    // adjacent channel tile.
    for (auto &grp : groups) {
        const Location &l = grp.loc;
        std::vector<std::pair<bool, std::pair<int, int>>> tiles; // (is_x, (x, y))
        if (l.x >= 1 && l.x <= X && l.y >= 1 && l.y <= Y) {
            tiles = {{true, {l.x, l.y - 1}}, {true, {l.x, l.y}}, {false, {l.x - 1, l.y}}, {false, {l.x, l.y}}};
        } else if (l.y == 0) {
            tiles = {{true, {l.x, 0}}};
        } else if (l.y == Y + 1) {
            tiles = {{true, {l.x, Y}}};
        } else if (l.x == 0) {
            tiles = {{false, {0, l.y}}};
        } else {
            tiles = {{false, {X, l.y}}};
        }
        for (auto &[is_x, xy] : tiles) {
            for (int t = 0; t < w; ++t) {
                const int wire = is_x ? cx(l.z, xy.first, xy.second, t) : cy(l.z, xy.first, xy.second, t);
                for (int j = 0; j < grp.num_opin; ++j)
                    g.add_edge(grp.first_opin + j, wire, d.t_cb);
                for (int j = 0; j < grp.num_ipin; ++j)
                    g.add_edge(wire, grp.first_ipin + j, d.t_cb);
            }
        }
    }

    // Subset switch boxes: track t meets track t on every face where a
    // segment ends, including the TSV faces at 3D sites.
    std::vector<int> faces;
    for (int z = 0; z < n; ++z) {
        for (int sx = 0; sx <= X; ++sx) {
            for (int sy = 0; sy <= Y; ++sy) {
                for (int t = 0; t < w; ++t) {
                    faces.clear();
                    if (sx >= 1) {
                        int id = cx(z, sx, sy, t);
                        if (g.node(id).x + g.node(id).length - 1 == sx)
                            faces.push_back(id);
                    }
                    if (sx + 1 <= X) {
                        int id = cx(z, sx + 1, sy, t);
                        if (g.node(id).x == sx + 1)
                            faces.push_back(id);
                    }
                    if (sy >= 1) {
                        int id = cy(z, sx, sy, t);
                        if (g.node(id).y + g.node(id).length - 1 == sy)
                            faces.push_back(id);
                    }
                    if (sy + 1 <= Y) {
                        int id = cy(z, sx, sy + 1, t);
                        if (g.node(id).y == sy + 1)
                            faces.push_back(id);
                    }
                    if (t < nz) {
                        if (z + 1 < n && wz(z, sx, sy, t) >= 0)
                            faces.push_back(wz(z, sx, sy, t));
                        if (z >= 1 && wz(z - 1, sx, sy, t) >= 0)
                            faces.push_back(wz(z - 1, sx, sy, t));
                    }
                    for (size_t i = 0; i < faces.size(); ++i)
                        for (size_t j = 0; j < faces.size(); ++j)
                            if (i != j)
                                g.add_edge(faces[i], faces[j], d.t_sb_switch);
                }
            }
        }
    }

    g.finalize();
    return g;
}

} // namespace stackpnr
