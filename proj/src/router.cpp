#include "stackpnr/router.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

#include "stackpnr/error.hpp"

namespace stackpnr {

namespace {

struct QueueEntry
{
    double f;
    double g;
    int node;

    bool operator>(const QueueEntry &o) const { return f > o.f || (f == o.f && node > o.node); }
};

class PathFinder
{
  public:
    PathFinder(const Rrg &g, const RouterParams &params)
        : g_(g), params_(params), usage_(g.node_count(), 0), history_(g.node_count(), 1.0),
          best_(g.node_count(), std::numeric_limits<double>::infinity()), prev_(g.node_count(), -1),
          tree_pos_(g.node_count(), -1)
    {
        delay_unit_ = params.delay_unit > 0.0 ? params.delay_unit : g.unit_delay;
    }

    std::vector<int> &usage() { return usage_; }
    std::vector<double> &history() { return history_; }
    void set_pres_fac(double f) { pres_fac_ = f; }

    void rip_up(const RouteTree &tree)
    {
        for (int n : tree.nodes)
            --usage_[n];
    }

    bool congested(const RouteTree &tree) const
    {
        return std::any_of(tree.nodes.begin(), tree.nodes.end(), [&](int n) { return usage_[n] > g_.node(n).capacity; });
    }

    // Routes one net from scratch, sinks in decreasing criticality.
    RouteTree route(const RouteRequest &req, std::vector<double> &path_cost)
    {
        RouteTree tree;
        tree.nodes.push_back(req.source);
        tree.parent.push_back(-1);
        tree_pos_[req.source] = 0;
        path_cost.assign(req.sinks.size(), 0.0);

        std::vector<int> order(req.sinks.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return crit_of(req, a) > crit_of(req, b); });
        for (int s : order) {
            const int target = req.sinks[s];
            if (tree_pos_[target] >= 0)
                continue;
            path_cost[s] = expand_to(tree, target, crit_of(req, s), req.net);
        }
        for (int n : tree.nodes) {
            tree_pos_[n] = -1;
            ++usage_[n];
        }
        return tree;
    }

  private:
    double crit_of(const RouteRequest &req, int s) const
    {
        if (req.criticality.empty())
            return 0.0;
        return std::clamp(req.criticality[s], 0.0, params_.max_criticality);
    }

    double node_cost(int v, double edge_delay, double crit) const
    {
        const RrgNode &n = g_.node(v);
        const double pres = 1.0 + std::max(0, usage_[v] + 1 - n.capacity) * pres_fac_;
        return crit * (edge_delay + n.delay) / delay_unit_ + (1.0 - crit) * n.base_cost * history_[v] * pres;
    }

    // Admissible lower bound on the wirelength term from v to the target site.
    double lookahead(int v, const RrgNode &target, double crit) const
    {
        if (!g_.geometric)
            return 0.0;
        const RrgNode &n = g_.node(v);
        const int tx = target.x, ty = target.y, tz = target.z;
        int dx = 0, dy = 0, dz = 0;
        switch (n.kind) {
        case RrKind::WireX: {
            const int xa = n.x, xb = n.x + n.length - 1;
            dx = std::max({0, tx - 1 - xb, xa - 1 - tx});
            dy = std::max({0, n.y - ty, ty - 1 - n.y});
            dz = std::abs(n.z - tz);
            break;
        }
        case RrKind::WireY: {
            const int ya = n.y, yb = n.y + n.length - 1;
            dx = std::max({0, n.x - tx, tx - 1 - n.x});
            dy = std::max({0, ty - 1 - yb, ya - 1 - ty});
            dz = std::abs(n.z - tz);
            break;
        }
        case RrKind::WireZ:
            dx = std::max({0, tx - 1 - n.x, n.x - tx});
            dy = std::max({0, ty - 1 - n.y, n.y - ty});
            dz = std::min(std::abs(n.z - tz), std::abs(n.z + 1 - tz));
            break;
        default:
            return 0.0;
        }
        return (1.0 - crit) * (dx + dy + dz * g_.min_tsv_base_cost);
    }

    // A* from every tree node (at zero cost) to target; appends the path.
    double expand_to(RouteTree &tree, int target, double crit, int net)
    {
        const RrgNode &tnode = g_.node(target);
        std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> heap;
        touched_.clear();
        for (int n : tree.nodes) {
            best_[n] = 0.0;
            prev_[n] = -1;
            touched_.push_back(n);
            heap.push({lookahead(n, tnode, crit), 0.0, n});
        }
        bool found = false;
        while (!heap.empty()) {
            QueueEntry top = heap.top();
            heap.pop();
            if (top.g > best_[top.node])
                continue;
            if (top.node == target) {
                found = true;
                break;
            }
            for (const RrgEdge &e : g_.fanout(top.node)) {
                const int v = e.to;
                const RrKind k = g_.node(v).kind;
                if (k == RrKind::Sink && v != target)
                    continue;
                if (k == RrKind::Ipin) {
                    auto out = g_.fanout(v);
                    if (out.empty() || out.front().to != target)
                        continue;
                }
                if (tree_pos_[v] >= 0)
                    continue;
                const double cost = top.g + node_cost(v, e.delay, crit);
                if (cost < best_[v]) {
                    if (std::isinf(best_[v]))
                        touched_.push_back(v);
                    best_[v] = cost;
                    prev_[v] = top.node;
                    heap.push({cost + lookahead(v, tnode, crit), cost, v});
                }
            }
        }
        if (!found)
            fail(ErrorKind::DisconnectedRrg, "net " + std::to_string(net) + " cannot reach sink node " + std::to_string(target));

        const double cost = best_[target];
        std::vector<int> path;
        for (int v = target; tree_pos_[v] < 0; v = prev_[v])
            path.push_back(v);
        int parent_node = prev_[path.back()];
        for (auto it = path.rbegin(); it != path.rend(); ++it) {
            tree_pos_[*it] = static_cast<int>(tree.nodes.size());
            tree.nodes.push_back(*it);
            tree.parent.push_back(tree_pos_[parent_node]);
            parent_node = *it;
        }
        for (int n : touched_) {
            best_[n] = std::numeric_limits<double>::infinity();
            prev_[n] = -1;
        }
        return cost;
    }

    const Rrg &g_;
    const RouterParams &params_;
    std::vector<int> usage_;
    std::vector<double> history_;
    double pres_fac_ = 0.0;
    double delay_unit_ = 1e-10;
    std::vector<double> best_;
    std::vector<int> prev_;
    std::vector<int> tree_pos_;
    std::vector<int> touched_;
};

} // namespace

RoutingResult route_connections(const Rrg &rrg, std::vector<RouteRequest> requests, const RouterParams &params)
{
    RoutingResult result;
    result.width = rrg.width;
    result.requests = std::move(requests);
    const size_t nreq = result.requests.size();
    result.trees.assign(nreq, {});
    result.path_cost.assign(nreq, {});

    PathFinder pf(rrg, params);
    for (int iter = 1; iter <= params.max_iterations; ++iter) {
        // Iteration 1 ignores congestion entirely.
        pf.set_pres_fac(iter == 1 ? 0.0 : params.pres_fac_initial * std::pow(params.pres_fac_mult, iter - 2));
        IterationStats stats;
        stats.iteration = iter;
        for (size_t r = 0; r < nreq; ++r) {
            if (iter > 1) {
                if (!params.rip_up_all && !pf.congested(result.trees[r]))
                    continue;
                pf.rip_up(result.trees[r]);
            }
            result.trees[r] = pf.route(result.requests[r], result.path_cost[r]);
            ++stats.rerouted;
        }
        const auto &usage = pf.usage();
        for (int n = 0; n < rrg.node_count(); ++n) {
            const int over = usage[n] - rrg.node(n).capacity;
            if (over > 0) {
                stats.overuse += over;
                ++stats.overused_nodes;
            }
        }
        result.log.push_back(stats);
        result.iterations = iter;
        result.overuse = stats.overuse;
        if (stats.overuse == 0) {
            result.success = true;
            break;
        }
        auto &hist = pf.history();
        for (int n = 0; n < rrg.node_count(); ++n) {
            const int over = usage[n] - rrg.node(n).capacity;
            if (over > 0)
                hist[n] += params.hist_fac * over;
        }
    }
    result.usage = std::move(pf.usage());
    result.history = std::move(pf.history());
    return result;
}

std::vector<RouteRequest> make_requests(const Rrg &rrg, const BlockNetlist &blocks, const Placement &pl,
                                        const Criticalities &crit)
{
    std::vector<RouteRequest> reqs;
    for (auto &net : blocks.nets) {
        if (net.is_clock)
            continue;
        RouteRequest req;
        req.net = net.id;
        const SitePins src = rrg.site(pl.location_of[net.driver.block]);
        if (src.source < 0)
            fail(ErrorKind::InvariantViolation, "net '" + net.signal + "': driver site has no routing source");
        req.source = src.source;
        for (size_t s = 0; s < net.sinks.size(); ++s) {
            const SitePins dst = rrg.site(pl.location_of[net.sinks[s].block]);
            if (dst.sink < 0)
                fail(ErrorKind::InvariantViolation, "net '" + net.signal + "': sink site has no routing sink");
            req.sinks.push_back(dst.sink);
            if (!crit.empty())
                req.criticality.push_back(crit[net.id][s]);
        }
        reqs.push_back(std::move(req));
    }
    return reqs;
}

RoutingResult route_nets(const Rrg &rrg, const BlockNetlist &blocks, const Placement &pl, const RouterParams &params,
                         const Criticalities &crit)
{
    return route_connections(rrg, make_requests(rrg, blocks, pl, crit), params);
}

void require_routed(const RoutingResult &result, int max_iterations)
{
    if (!result.success)
        fail(ErrorKind::Unroutable, "width " + std::to_string(result.width) + ": overuse " + std::to_string(result.overuse) +
                                            " after " + std::to_string(max_iterations) + " iterations");
}

WminResult find_wmin(const Arch3D &arch, const BlockNetlist &blocks, const Placement &pl, const RouterParams &params,
                     const Criticalities &crit, int w_max)
{
    WminResult out;
    auto probe = [&](int w) {
        Rrg rrg = build_rrg(arch, w);
        RoutingResult r = route_nets(rrg, blocks, pl, params, crit);
        out.probes.push_back({w, r.success});
        return r;
    };

    int last_fail = 0;
    int first_ok = -1;
    RoutingResult ok_result;
    const int w_top = std::max(2, w_max - w_max % 2);
    for (int w = 2;; w = std::min(w * 2, w_top)) {
        RoutingResult r = probe(w);
        if (r.success) {
            first_ok = w;
            ok_result = std::move(r);
            break;
        }
        last_fail = w;
        if (w >= w_top)
            break;
    }
    if (first_ok < 0)
        fail(ErrorKind::UnroutableAtMax, "not routable at width " + std::to_string(w_max));

    while (first_ok - last_fail > 2) {
        int mid = (first_ok + last_fail) / 2;
        mid -= mid % 2;
        if (mid <= last_fail)
            mid = last_fail + 2;
        RoutingResult r = probe(mid);
        if (r.success) {
            first_ok = mid;
            ok_result = std::move(r);
        } else {
            last_fail = mid;
        }
    }
    out.width = first_ok;
    out.result = std::move(ok_result);
    return out;
}

std::vector<std::vector<double>> connection_delays(const Rrg &rrg, const RoutingResult &result)
{
    std::vector<std::vector<double>> delays(result.requests.size());
    for (size_t r = 0; r < result.requests.size(); ++r) {
        const RouteTree &tree = result.trees[r];
        // Arrival at each tree node, in insertion order (parents first).
        std::vector<double> at(tree.nodes.size(), 0.0);
        for (size_t i = 1; i < tree.nodes.size(); ++i) {
            const int p = tree.parent[i];
            at[i] = at[p] + rrg.edge_delay(tree.nodes[p], tree.nodes[i]) + rrg.node(tree.nodes[i]).delay;
        }
        for (int sink : result.requests[r].sinks) {
            auto it = std::find(tree.nodes.begin(), tree.nodes.end(), sink);
            delays[r].push_back(it == tree.nodes.end() ? 0.0 : at[it - tree.nodes.begin()]);
        }
    }
    return delays;
}

int64_t total_wirelength(const Rrg &rrg, const RoutingResult &result)
{
    int64_t wl = 0;
    for (auto &tree : result.trees)
        for (int n : tree.nodes) {
            const RrgNode &node = rrg.node(n);
            if (node.kind == RrKind::WireX || node.kind == RrKind::WireY)
                wl += node.length;
        }
    return wl;
}

int64_t tsv_count(const Rrg &rrg, const RoutingResult &result)
{
    std::vector<char> used(rrg.node_count(), 0);
    int64_t count = 0;
    for (auto &tree : result.trees)
        for (int n : tree.nodes)
            if (rrg.node(n).kind == RrKind::WireZ && !used[n]) {
                used[n] = 1;
                ++count;
            }
    return count;
}

std::string write_routing(const Rrg &rrg, const RoutingResult &result)
{
    std::ostringstream out;
    out << "# stackpnr routing\n";
    out << "width " << result.width << "\n";
    out << "success " << (result.success ? 1 : 0) << "\n";
    out << "iterations " << result.iterations << "\n";
    out << "overuse " << result.overuse << "\n";
    out << "wirelength " << total_wirelength(rrg, result) << "\n";
    out << "tsv_used " << tsv_count(rrg, result) << "\n";
    out << "nets " << result.requests.size() << "\n";
    for (size_t r = 0; r < result.requests.size(); ++r) {
        const RouteTree &tree = result.trees[r];
        out << "net " << result.requests[r].net << " " << tree.nodes.size() << "\n";
        for (size_t i = 0; i < tree.nodes.size(); ++i) {
            const RrgNode &n = rrg.node(tree.nodes[i]);
            out << rr_kind_name(n.kind) << " " << n.x << " " << n.y << " " << n.z << " " << n.track << " " << tree.parent[i]
                << "\n";
        }
    }
    return out.str();
}

int routing_file_width(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string key;
        int w = 0;
        if (ls >> key && key == "width" && ls >> w)
            return w;
    }
    fail(ErrorKind::MalformedFile, "routing file: missing width header");
}

RoutingResult read_routing(std::string_view text, const Rrg &rrg, std::vector<RouteRequest> requests)
{
    RoutingResult result;
    result.requests = std::move(requests);
    result.trees.assign(result.requests.size(), {});
    result.path_cost.assign(result.requests.size(), {});
    result.usage.assign(rrg.node_count(), 0);
    result.history.assign(rrg.node_count(), 1.0);
    auto bad = [](const std::string &why) { fail(ErrorKind::MalformedFile, "routing file: " + why); };

    std::vector<int> slot_of_net;
    for (size_t r = 0; r < result.requests.size(); ++r) {
        const int net = result.requests[r].net;
        if (net >= static_cast<int>(slot_of_net.size()))
            slot_of_net.resize(net + 1, -1);
        slot_of_net[net] = static_cast<int>(r);
    }

    std::istringstream in{std::string(text)};
    std::string line;
    RouteTree *current = nullptr;
    size_t remaining = 0;
    size_t nets_seen = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (remaining > 0) {
            int x, y, z, track, parent;
            ls >> x >> y >> z >> track >> parent;
            if (ls.fail())
                bad("unreadable node line '" + line + "'");
            const int id = rrg.find(rr_kind_from_name(key), x, y, z, track);
            if (id < 0)
                bad("node '" + line + "' does not exist at width " + std::to_string(rrg.width));
            if (parent >= static_cast<int>(current->nodes.size()))
                bad("parent index out of order");
            current->nodes.push_back(id);
            current->parent.push_back(parent);
            ++result.usage[id];
            --remaining;
            continue;
        }
        if (key == "width") {
            ls >> result.width;
        } else if (key == "success") {
            int s = 0;
            ls >> s;
            result.success = s != 0;
        } else if (key == "iterations") {
            ls >> result.iterations;
        } else if (key == "overuse") {
            ls >> result.overuse;
        } else if (key == "wirelength" || key == "tsv_used" || key == "nets") {
            // derived values, recomputed on demand
        } else if (key == "net") {
            int net = -1;
            ls >> net >> remaining;
            if (ls.fail() || net < 0 || net >= static_cast<int>(slot_of_net.size()) || slot_of_net[net] < 0)
                bad("unknown net in '" + line + "'");
            current = &result.trees[slot_of_net[net]];
            ++nets_seen;
        } else {
            bad("unexpected line '" + line + "'");
        }
    }
    if (remaining > 0)
        bad("truncated net");
    if (nets_seen != result.requests.size())
        bad("expected " + std::to_string(result.requests.size()) + " nets, found " + std::to_string(nets_seen));
    return result;
}

} // namespace stackpnr
