#include "stackpnr/partition.hpp"

#include <sstream>

#include "stackpnr/error.hpp"
#include "stackpnr/rng.hpp"

namespace stackpnr {

GainTable::GainTable(int vertex_count, int tiers) : tiers_(tiers), conn_(static_cast<size_t>(vertex_count) * tiers, 0) {}

Partition random_balanced_partition(const CircuitGraph &graph, int tiers, uint64_t seed)
{
    const int n = graph.vertex_count();
    if (tiers < 1)
        fail(ErrorKind::InvariantViolation, "tier count must be >= 1");
    if (n < tiers)
        fail(ErrorKind::TooFewVertices, std::to_string(n) + " vertices for " + std::to_string(tiers) + " tiers");

    std::vector<int> slots(n);
    for (int i = 0; i < n; ++i)
        slots[i] = i % tiers;
    Rng rng(seed);
    rng.shuffle(slots);

    Partition p;
    p.tiers = tiers;
    p.tier_of = std::move(slots);
    p.tier_sizes.assign(tiers, 0);
    for (int t : p.tier_of)
        ++p.tier_sizes[t];
    return p;
}

GainTable setup_gains(const CircuitGraph &graph, const Partition &p)
{
    GainTable gains(graph.vertex_count(), p.tiers);
    for (auto &e : graph.edges()) {
        gains.connection(e.u, p.tier_of[e.v]) += e.multiplicity;
        gains.connection(e.v, p.tier_of[e.u]) += e.multiplicity;
    }
    return gains;
}

int64_t cut_size(const CircuitGraph &graph, const Partition &p)
{
    int64_t cut = 0;
    for (auto &e : graph.edges())
        if (p.tier_of[e.u] != p.tier_of[e.v])
            cut += e.multiplicity;
    return cut;
}

int64_t swap_delta_cost(const CircuitGraph &graph, const Partition &p, const GainTable &gains, int v_i, int v_j)
{
    const int ti = p.tier_of[v_i];
    const int tj = p.tier_of[v_j];
    if (ti == tj)
        fail(ErrorKind::SameTier, "vertices " + std::to_string(v_i) + " and " + std::to_string(v_j) + " share tier " +
                                          std::to_string(ti));
    const int64_t c_ij = graph.multiplicity(v_i, v_j);
    const int64_t i_i = gains.internal(v_i, p);
    const int64_t i_j = gains.internal(v_j, p);
    if (p.tiers == 2) {
        const int64_t e_i = gains.external(v_i, p, graph.weighted_degree(v_i));
        const int64_t e_j = gains.external(v_j, p, graph.weighted_degree(v_j));
        return (i_i + i_j) - (e_i + e_j) + 2 * c_ij;
    }
    const int64_t e_i = gains.connection(v_i, tj);
    const int64_t e_j = gains.connection(v_j, ti);
    return (i_i + i_j) - (e_i + e_j) + 2 * c_ij;
}

void apply_swap(const CircuitGraph &graph, Partition &p, GainTable &gains, const SwapMove &move)
{
    const int ti = p.tier_of[move.v_i];
    const int tj = p.tier_of[move.v_j];
    for (auto &nb : graph.neighbors(move.v_i)) {
        gains.connection(nb.vertex, ti) -= nb.multiplicity;
        gains.connection(nb.vertex, tj) += nb.multiplicity;
    }
    for (auto &nb : graph.neighbors(move.v_j)) {
        gains.connection(nb.vertex, tj) -= nb.multiplicity;
        gains.connection(nb.vertex, ti) += nb.multiplicity;
    }
    p.tier_of[move.v_i] = tj;
    p.tier_of[move.v_j] = ti;
}

PartitionResult anneal_partition(const CircuitGraph &graph, int tiers, const SaSchedule &schedule,
                                 const PartitionObserver &observer)
{
    PartitionResult result;
    Partition p = random_balanced_partition(graph, tiers, schedule.seed);
    GainTable gains = setup_gains(graph, p);
    int64_t cost = cut_size(graph, p);

    result.initial_cut = cost;
    result.partition = p;
    result.cut = cost;

    AnnealTrace &trace = result.trace;
    double temperature = schedule.initial_temperature.value_or(static_cast<double>(cost));
    trace.initial_cost = static_cast<double>(cost);
    trace.initial_temperature = temperature;
    const int64_t moves = schedule.moves_per_temperature > 0 ? schedule.moves_per_temperature
                                                             : 10 * static_cast<int64_t>(graph.vertex_count());
    trace.moves_per_temperature = moves;

    if (cost == 0 || temperature <= 0.0 || tiers == 1) {
        trace.stop = StopReason::ZeroInitialCost;
        return result;
    }

    std::vector<std::vector<int>> members(tiers);
    std::vector<int> slot(graph.vertex_count());
    for (int v = 0; v < graph.vertex_count(); ++v) {
        slot[v] = static_cast<int>(members[p.tier_of[v]].size());
        members[p.tier_of[v]].push_back(v);
    }

    Rng rng(mix_seed(schedule.seed));
    StallDetector stall(schedule, moves);
    trace.stop = StopReason::MinTemperature;

    while (temperature > schedule.min_temperature) {
        CoolingTracker cooling;
        TemperatureRecord rec;
        rec.temperature = temperature;
        for (int64_t m = 0; m < moves; ++m) {
            const int ta = rng.below(tiers);
            int tb = rng.below(tiers - 1);
            if (tb >= ta)
                ++tb;
            const int v_i = members[ta][rng.below(static_cast<int>(members[ta].size()))];
            const int v_j = members[tb][rng.below(static_cast<int>(members[tb].size()))];
            const int64_t delta = swap_delta_cost(graph, p, gains, v_i, v_j);
            const bool accepted = delta < 0 || accept_move(static_cast<double>(delta), temperature, rng.uniform());
            ++rec.moves;
            stall.record_move(accepted);
            if (!accepted)
                continue;
            ++rec.accepted;
            apply_swap(graph, p, gains, {v_i, v_j, delta});
            std::swap(members[ta][slot[v_i]], members[tb][slot[v_j]]);
            std::swap(slot[v_i], slot[v_j]);
            cost += delta;
            if (delta < 0)
                cooling.record_improvement(static_cast<double>(cost));
            if (cost < result.cut) {
                result.cut = cost;
                result.partition = p;
            }
            if (observer)
                observer(p, gains, cost);
        }
        rec.improvements = cooling.improvements();
        rec.alpha = cooling.alpha(schedule);
        rec.cost = static_cast<double>(cost);
        rec.best_cost = static_cast<double>(result.cut);
        trace.temperatures.push_back(rec);

        if (result.cut == 0) {
            trace.stop = StopReason::ZeroCost;
            break;
        }
        stall.end_temperature(static_cast<double>(result.cut));
        if (stall.stalled()) {
            trace.stop = *stall.reason();
            break;
        }
        temperature *= rec.alpha;
    }
    return result;
}

std::string write_partition(const Partition &p, int64_t cut, uint64_t seed)
{
    std::ostringstream out;
    out << "# stackpnr partition\n";
    out << "tiers " << p.tiers << "\n";
    out << "vertices " << p.vertex_count() << "\n";
    out << "cut_size " << cut << "\n";
    out << "seed " << seed << "\n";
    for (int v = 0; v < p.vertex_count(); ++v)
        out << v << " " << p.tier_of[v] << "\n";
    return out.str();
}

PartitionFile read_partition(std::string_view text)
{
    PartitionFile file;
    std::istringstream in{std::string(text)};
    int vertices = -1;
    std::string line;
    auto bad = [](const std::string &why) { fail(ErrorKind::MalformedFile, "partition file: " + why); };
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "tiers") {
            ls >> file.partition.tiers;
        } else if (key == "vertices") {
            ls >> vertices;
            if (vertices < 0)
                bad("negative vertex count");
            file.partition.tier_of.assign(vertices, -1);
        } else if (key == "cut_size") {
            ls >> file.cut;
        } else if (key == "seed") {
            ls >> file.seed;
        } else {
            int v = -1, t = -1;
            try {
                v = std::stoi(key);
            } catch (const std::exception &) {
                bad("unexpected line '" + line + "'");
            }
            ls >> t;
            if (v < 0 || v >= vertices || t < 0 || t >= file.partition.tiers)
                bad("bad assignment line '" + line + "'");
            file.partition.tier_of[v] = t;
        }
        if (ls.fail())
            bad("unreadable line '" + line + "'");
    }
    if (vertices < 0)
        bad("missing vertices header");
    file.partition.tier_sizes.assign(file.partition.tiers, 0);
    for (int t : file.partition.tier_of) {
        if (t < 0)
            bad("vertex without tier");
        ++file.partition.tier_sizes[t];
    }
    return file;
}

} // namespace stackpnr
