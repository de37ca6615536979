#include "stackpnr/placement.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "stackpnr/error.hpp"
#include "stackpnr/rng.hpp"

namespace stackpnr {

Placement::Placement(int gx, int gy, int n, int cap, int block_count)
    : grid_x(gx), grid_y(gy), tiers(n), io_capacity(cap), location_of(block_count),
      occupancy(n, std::vector<int>(static_cast<size_t>(gx + 2) * (gy + 2) * cap, -1))
{
}

void Placement::put(int block, const Location &loc)
{
    location_of[block] = loc;
    occupancy[loc.z][cell(loc.x, loc.y, loc.slot)] = block;
}

std::vector<Location> clb_sites(int grid_x, int grid_y, int z)
{
    std::vector<Location> sites;
    for (int x = 1; x <= grid_x; ++x)
        for (int y = 1; y <= grid_y; ++y)
            sites.push_back({x, y, z, 0});
    return sites;
}

std::vector<Location> pad_sites(int grid_x, int grid_y, int z, int io_capacity)
{
    std::vector<Location> sites;
    auto add = [&](int x, int y) {
        for (int s = 0; s < io_capacity; ++s)
            sites.push_back({x, y, z, s});
    };
    for (int x = 1; x <= grid_x; ++x)
        add(x, 0);
    for (int x = 1; x <= grid_x; ++x)
        add(x, grid_y + 1);
    for (int y = 1; y <= grid_y; ++y)
        add(0, y);
    for (int y = 1; y <= grid_y; ++y)
        add(grid_x + 1, y);
    return sites;
}

namespace {

bool is_pad(const LogicBlock &b) { return b.kind != BlockKind::Clb; }

struct TierCounts
{
    std::vector<int> clbs;
    std::vector<int> pads;
};

TierCounts count_per_tier(const BlockNetlist &blocks, const Partition &p)
{
    TierCounts c{std::vector<int>(p.tiers, 0), std::vector<int>(p.tiers, 0)};
    for (auto &b : blocks.blocks)
        ++(is_pad(b) ? c.pads : c.clbs)[p.tier_of[b.id]];
    return c;
}

} // namespace

Arch3D fit_grid(const BlockNetlist &blocks, const Partition &p, Arch3D arch)
{
    auto counts = count_per_tier(blocks, p);
    int side = 1;
    for (int t = 0; t < p.tiers; ++t) {
        while (side * side < counts.clbs[t])
            ++side;
        while (4 * side * arch.io_capacity < counts.pads[t])
            ++side;
    }
    arch.grid_x = side;
    arch.grid_y = side;
    arch.tiers = p.tiers;
    return arch;
}

Placement random_placement(const BlockNetlist &blocks, const Partition &p, const Arch3D &arch, uint64_t seed)
{
    if (p.vertex_count() != blocks.block_count())
        fail(ErrorKind::InvariantViolation, "partition covers " + std::to_string(p.vertex_count()) + " vertices, netlist has " +
                                                    std::to_string(blocks.block_count()) + " blocks");
    Placement pl(arch.grid_x, arch.grid_y, p.tiers, arch.io_capacity, blocks.block_count());
    Rng rng(seed);
    for (int z = 0; z < p.tiers; ++z) {
        std::vector<int> clbs, pads;
        for (auto &b : blocks.blocks)
            if (p.tier_of[b.id] == z)
                (is_pad(b) ? pads : clbs).push_back(b.id);
        auto csites = clb_sites(arch.grid_x, arch.grid_y, z);
        auto psites = pad_sites(arch.grid_x, arch.grid_y, z, arch.io_capacity);
        if (clbs.size() > csites.size())
            fail(ErrorKind::GridTooSmall, "tier " + std::to_string(z) + ": needed " + std::to_string(clbs.size()) +
                                                  " CLB sites, available " + std::to_string(csites.size()));
        if (pads.size() > psites.size())
            fail(ErrorKind::GridTooSmall, "tier " + std::to_string(z) + ": needed " + std::to_string(pads.size()) +
                                                  " pad sites, available " + std::to_string(psites.size()));
        rng.shuffle(csites);
        rng.shuffle(psites);
        for (size_t i = 0; i < clbs.size(); ++i)
            pl.put(clbs[i], csites[i]);
        for (size_t i = 0; i < pads.size(); ++i)
            pl.put(pads[i], psites[i]);
    }
    return pl;
}

namespace {

struct Box
{
    int xmin, xmax, ymin, ymax, zmin, zmax;
};

Box net_box(const Net &net, const Placement &pl)
{
    const Location &d = pl.location_of[net.driver.block];
    Box b{d.x, d.x, d.y, d.y, d.z, d.z};
    for (auto &s : net.sinks) {
        const Location &l = pl.location_of[s.block];
        b.xmin = std::min(b.xmin, l.x);
        b.xmax = std::max(b.xmax, l.x);
        b.ymin = std::min(b.ymin, l.y);
        b.ymax = std::max(b.ymax, l.y);
        b.zmin = std::min(b.zmin, l.z);
        b.zmax = std::max(b.zmax, l.z);
    }
    return b;
}

} // namespace

double net_hpwl3d(const Net &net, const Placement &pl, const Arch3D &arch)
{
    Box b = net_box(net, pl);
    return (b.xmax - b.xmin) + (b.ymax - b.ymin) + (b.zmax - b.zmin) * arch.tsv_height_grid();
}

int64_t tier_hop_scaled(const Arch3D &arch) { return std::llround(arch.tsv_height_grid() * kCostScale); }

int64_t net_cost_scaled(const Net &net, const Placement &pl, int64_t hop)
{
    Box b = net_box(net, pl);
    return kCostScale * ((b.xmax - b.xmin) + (b.ymax - b.ymin)) + hop * (b.zmax - b.zmin);
}

int64_t placement_cost_scaled(const BlockNetlist &blocks, const Placement &pl, const Arch3D &arch)
{
    const int64_t hop = tier_hop_scaled(arch);
    int64_t total = 0;
    for (auto &net : blocks.nets)
        if (!net.is_clock)
            total += net_cost_scaled(net, pl, hop);
    return total;
}

PlacementResult anneal_placement(const BlockNetlist &blocks, const Partition &p, const Arch3D &arch,
                                 const SaSchedule &schedule, const PlacementObserver &observer)
{
    PlacementResult result;
    Placement pl = random_placement(blocks, p, arch, schedule.seed);
    const int64_t hop = tier_hop_scaled(arch);

    std::vector<std::vector<int>> nets_of(blocks.block_count());
    std::vector<int64_t> net_cost(blocks.net_count(), 0);
    int64_t cost = 0;
    for (auto &net : blocks.nets) {
        if (net.is_clock)
            continue;
        nets_of[net.driver.block].push_back(net.id);
        for (auto &s : net.sinks)
            nets_of[s.block].push_back(net.id);
        net_cost[net.id] = net_cost_scaled(net, pl, hop);
        cost += net_cost[net.id];
    }

    result.placement = pl;
    result.cost = cost;
    result.initial_cost = cost;

    AnnealTrace &trace = result.trace;
    double temperature = schedule.initial_temperature.value_or(static_cast<double>(cost) / kCostScale);
    trace.initial_cost = static_cast<double>(cost) / kCostScale;
    trace.initial_temperature = temperature;
    const int n = std::max(1, p.tiers);
    const int64_t moves = schedule.moves_per_temperature > 0
                                  ? schedule.moves_per_temperature
                                  : 10 * static_cast<int64_t>((blocks.block_count() + n - 1) / n);
    trace.moves_per_temperature = moves;

    if (cost == 0 || temperature <= 0.0 || blocks.block_count() == 0) {
        trace.stop = StopReason::ZeroInitialCost;
        return result;
    }

    std::vector<std::vector<Location>> tier_clb_sites(p.tiers), tier_pad_sites(p.tiers);
    for (int z = 0; z < p.tiers; ++z) {
        tier_clb_sites[z] = clb_sites(arch.grid_x, arch.grid_y, z);
        tier_pad_sites[z] = pad_sites(arch.grid_x, arch.grid_y, z, arch.io_capacity);
    }

    Rng rng(mix_seed(schedule.seed));
    StallDetector stall(schedule, moves);
    trace.stop = StopReason::MinTemperature;

    std::vector<int> touched;
    std::vector<int64_t> stamp(blocks.net_count(), -1);
    std::vector<int64_t> new_cost(blocks.net_count(), 0);
    int64_t move_id = 0;

    while (temperature > schedule.min_temperature) {
        CoolingTracker cooling;
        TemperatureRecord rec;
        rec.temperature = temperature;
        for (int64_t m = 0; m < moves; ++m, ++move_id) {
            const int a = rng.below(blocks.block_count());
            const Location from = pl.location_of[a];
            const auto &sites = is_pad(blocks.blocks[a]) ? tier_pad_sites[from.z] : tier_clb_sites[from.z];
            const Location to = sites[rng.below(static_cast<int>(sites.size()))];
            const int b = pl.block_at(to);

            // Tentatively apply, evaluate the touched nets, revert if rejected.
            pl.clear(from);
            if (b >= 0)
                pl.put(b, from);
            pl.put(a, to);

            touched.clear();
            int64_t delta = 0;
            auto visit = [&](int blk) {
                for (int nid : nets_of[blk]) {
                    if (stamp[nid] == move_id)
                        continue;
                    stamp[nid] = move_id;
                    touched.push_back(nid);
                    new_cost[nid] = net_cost_scaled(blocks.nets[nid], pl, hop);
                    delta += new_cost[nid] - net_cost[nid];
                }
            };
            visit(a);
            if (b >= 0 && b != a)
                visit(b);

            const double delta_units = static_cast<double>(delta) / kCostScale;
            const bool accepted = delta < 0 || accept_move(delta_units, temperature, rng.uniform());
            ++rec.moves;
            stall.record_move(accepted);
            if (!accepted) {
                pl.clear(to);
                if (b >= 0)
                    pl.put(b, to);
                pl.put(a, from);
                continue;
            }
            ++rec.accepted;
            for (int nid : touched)
                net_cost[nid] = new_cost[nid];
            cost += delta;
            if (delta < 0)
                cooling.record_improvement(static_cast<double>(cost) / kCostScale);
            if (cost < result.cost) {
                result.cost = cost;
                result.placement = pl;
            }
            if (observer)
                observer(pl, cost);
        }
        rec.improvements = cooling.improvements();
        rec.alpha = cooling.alpha(schedule);
        rec.cost = static_cast<double>(cost) / kCostScale;
        rec.best_cost = static_cast<double>(result.cost) / kCostScale;
        trace.temperatures.push_back(rec);

        if (result.cost == 0) {
            trace.stop = StopReason::ZeroCost;
            break;
        }
        stall.end_temperature(static_cast<double>(result.cost));
        if (stall.stalled()) {
            trace.stop = *stall.reason();
            break;
        }
        temperature *= rec.alpha;
    }
    return result;
}

std::string write_placement(const Placement &pl, int64_t cost_scaled, uint64_t seed)
{
    std::ostringstream out;
    out << "# stackpnr placement\n";
    out << "grid " << pl.grid_x << " " << pl.grid_y << "\n";
    out << "tiers " << pl.tiers << "\n";
    out << "io_capacity " << pl.io_capacity << "\n";
    out << "blocks " << pl.location_of.size() << "\n";
    out << "cost " << cost_scaled / kCostScale << "." << std::setw(3) << std::setfill('0') << cost_scaled % kCostScale
        << std::setfill(' ') << "\n";
    out << "seed " << seed << "\n";
    for (size_t b = 0; b < pl.location_of.size(); ++b) {
        const Location &l = pl.location_of[b];
        out << b << " " << l.x << " " << l.y << " " << l.z << " " << l.slot << "\n";
    }
    return out.str();
}

PlacementFile read_placement(std::string_view text, int block_count)
{
    PlacementFile file;
    std::istringstream in{std::string(text)};
    auto bad = [](const std::string &why) { fail(ErrorKind::MalformedFile, "placement file: " + why); };
    int gx = -1, gy = -1, tiers = -1, cap = -1, count = -1;
    std::vector<std::pair<int, Location>> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "grid") {
            ls >> gx >> gy;
        } else if (key == "tiers") {
            ls >> tiers;
        } else if (key == "io_capacity") {
            ls >> cap;
        } else if (key == "blocks") {
            ls >> count;
        } else if (key == "cost") {
            double c = 0;
            ls >> c;
            file.cost = std::llround(c * kCostScale);
        } else if (key == "seed") {
            ls >> file.seed;
        } else {
            int b = -1;
            try {
                b = std::stoi(key);
            } catch (const std::exception &) {
                bad("unexpected line '" + line + "'");
            }
            Location l;
            ls >> l.x >> l.y >> l.z >> l.slot;
            entries.push_back({b, l});
        }
        if (ls.fail())
            bad("unreadable line '" + line + "'");
    }
    if (gx < 1 || gy < 1 || tiers < 1 || cap < 1)
        bad("missing or invalid header");
    if (count != block_count || static_cast<int>(entries.size()) != block_count)
        bad("expected " + std::to_string(block_count) + " blocks");
    file.placement = Placement(gx, gy, tiers, cap, block_count);
    for (auto &[b, l] : entries) {
        if (b < 0 || b >= block_count || l.x < 0 || l.x > gx + 1 || l.y < 0 || l.y > gy + 1 || l.z < 0 || l.z >= tiers ||
            l.slot < 0 || l.slot >= cap)
            bad("block " + std::to_string(b) + " out of range");
        if (file.placement.block_at(l) >= 0)
            bad("site occupied twice");
        file.placement.put(b, l);
    }
    return file;
}

} // namespace stackpnr
