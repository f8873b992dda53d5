#include "srtk/routing.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace srtk {

Router::Router(const Network& net) : net_(net) {
    validate_network(net_);
    const int n = net_.vertex_count;
    out_.assign(n, {});
    in_.assign(n, {});
    for (int i = 0; i < static_cast<int>(net_.edges.size()); ++i) {
        const Edge& e = net_.edges[i];
        out_[e.u].push_back({e.v, e.weight, i, true});
        in_[e.v].push_back({e.u, e.weight, i, true});
        if (net_.mode != Mode::Directed) {
            out_[e.v].push_back({e.u, e.weight, i, false});
            in_[e.u].push_back({e.v, e.weight, i, false});
        }
    }
    from_cache_.resize(n);
    to_cache_.resize(n);
}

const std::vector<long long>& Router::from_source(int s) const {
    {
        std::shared_lock lock(mutex_);
        if (from_cache_[s]) return *from_cache_[s];
    }
    auto dist = std::make_unique<std::vector<long long>>(net_.vertex_count, kUnreachable);
    using Item = std::pair<long long, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    (*dist)[s] = 0;
    heap.push({0, s});
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > (*dist)[u]) continue;
        for (const OutArc& a : out_[u]) {
            long long nd = d + a.weight;
            if (nd < (*dist)[a.to]) {
                (*dist)[a.to] = nd;
                heap.push({nd, a.to});
            }
        }
    }
    std::unique_lock lock(mutex_);
    if (!from_cache_[s]) from_cache_[s] = std::move(dist);
    return *from_cache_[s];
}

const std::vector<long long>& Router::to_target(int t) const {
    {
        std::shared_lock lock(mutex_);
        if (to_cache_[t]) return *to_cache_[t];
    }
    auto dist = std::make_unique<std::vector<long long>>(net_.vertex_count, kUnreachable);
    using Item = std::pair<long long, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    (*dist)[t] = 0;
    heap.push({0, t});
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > (*dist)[u]) continue;
        for (const OutArc& a : in_[u]) {
            long long nd = d + a.weight;
            if (nd < (*dist)[a.to]) {
                (*dist)[a.to] = nd;
                heap.push({nd, a.to});
            }
        }
    }
    std::unique_lock lock(mutex_);
    if (!to_cache_[t]) to_cache_[t] = std::move(dist);
    return *to_cache_[t];
}

long long Router::distance(int from, int to) const { return from_source(from)[to]; }

std::vector<std::vector<long long>> Router::all_pairs() const {
    std::vector<std::vector<long long>> result;
    result.reserve(net_.vertex_count);
    for (int s = 0; s < net_.vertex_count; ++s) result.push_back(from_source(s));
    return result;
}

std::vector<std::vector<long long>> all_pairs_shortest_distances(const Network& net) {
    return Router(net).all_pairs();
}

ForwardingGraph Router::forwarding_graph(int u, int v) const {
    ForwardingGraph fg;
    fg.source = u;
    fg.target = v;
    if (u == v) return fg;
    const auto& df = from_source(u);
    const auto& dt = to_target(v);
    if (df[v] >= kUnreachable) throw UnreachableError(u, v);
    const long long total = df[v];

    for (int i = 0; i < static_cast<int>(net_.edges.size()); ++i) {
        const Edge& e = net_.edges[i];
        auto on_path = [&](int a, int b) {
            return df[a] < kUnreachable && dt[b] < kUnreachable && df[a] + e.weight + dt[b] == total;
        };
        if (on_path(e.u, e.v)) fg.arcs.push_back({i, true, e.u, e.v, e.weight});
        if (net_.mode != Mode::Directed && on_path(e.v, e.u))
            fg.arcs.push_back({i, false, e.v, e.u, e.weight});
    }
    std::sort(fg.arcs.begin(), fg.arcs.end(), [&](const auto& a, const auto& b) {
        return std::tuple(df[a.tail], a.tail, a.head) < std::tuple(df[b.tail], b.tail, b.head);
    });

    // ECMP shares in topological order (arcs strictly increase df).
    std::vector<Fraction> inflow(net_.vertex_count, Fraction(0));
    std::vector<int> outdeg(net_.vertex_count, 0);
    for (const auto& a : fg.arcs) ++outdeg[a.tail];
    inflow[u] = 1;
    fg.fractions.resize(fg.arcs.size());
    for (size_t i = 0; i < fg.arcs.size(); ++i) {
        const auto& a = fg.arcs[i];
        Fraction share = inflow[a.tail] / outdeg[a.tail];
        fg.fractions[i] = share;
        inflow[a.head] += share;
    }
    return fg;
}

bool is_ecmp_free(const ForwardingGraph& fg) {
    std::vector<int> outdeg;
    int maxv = -1;
    for (const auto& a : fg.arcs) maxv = std::max({maxv, a.tail, a.head});
    outdeg.assign(maxv + 1, 0);
    for (const auto& a : fg.arcs)
        if (++outdeg[a.tail] > 1) return false;
    return true;
}

LoadMap scheme_loads(const Router& router, const std::vector<Demand>& demands,
                     const RoutingScheme& scheme) {
    const Network& net = router.network();
    LoadMap result;
    result.mode = net.mode;
    result.loads.assign(net.mode == Mode::Bidirected ? 2 * net.edges.size() : net.edges.size(),
                        Fraction(0));
    for (const SegmentPath& path : scheme.paths) {
        const Demand& demand = demands.at(path.demand_index);
        for (size_t i = 0; i + 1 < path.stops.size(); ++i) {
            int a = path.stops[i], b = path.stops[i + 1];
            if (a == b) continue; // FG(u,u) carries no flow
            ForwardingGraph fg;
            try {
                fg = router.forwarding_graph(a, b);
            } catch (const UnreachableError&) {
                throw UnreachableSegmentError(path.demand_index, a, b);
            }
            for (size_t j = 0; j < fg.arcs.size(); ++j) {
                int key = LoadMap::key_of(net.mode, fg.arcs[j].edge_index, fg.arcs[j].forward);
                result.loads[key] += fg.fractions[j] * demand.bandwidth;
            }
        }
    }
    return result;
}

FeasibilityVerdict check_feasible(const Instance& inst, const RoutingScheme& scheme,
                                  const Router& router) {
    if (scheme.paths.size() != inst.demands.size())
        throw std::invalid_argument("scheme does not cover every demand exactly once");
    for (size_t i = 0; i < scheme.paths.size(); ++i) {
        const SegmentPath& p = scheme.paths[i];
        if (p.demand_index != static_cast<int>(i) || p.stops.size() < 2 ||
            p.stops.front() != inst.demands[i].s || p.stops.back() != inst.demands[i].t)
            throw std::invalid_argument("segment path " + std::to_string(i) +
                                        " does not match its demand");
    }

    FeasibilityVerdict verdict;
    for (size_t i = 0; i < scheme.paths.size(); ++i) {
        if (scheme.paths[i].waypoint_count() > inst.budget) {
            verdict.kind = FeasibilityKind::BudgetExceeded;
            verdict.witness_demand = static_cast<int>(i);
            return verdict;
        }
    }
    verdict.loads = scheme_loads(router, inst.demands, scheme);
    const Network& net = inst.network;
    for (int i = 0; i < static_cast<int>(net.edges.size()); ++i) {
        if (net.mode == Mode::Bidirected) {
            for (int dir = 0; dir < 2; ++dir) {
                if (verdict.loads.loads[2 * i + dir] > net.edges[i].capacity) {
                    verdict.kind = FeasibilityKind::CapacityExceeded;
                    verdict.witness_edge = i;
                    verdict.witness_forward = dir == 0;
                    return verdict;
                }
            }
        } else if (verdict.loads.loads[i] > net.edges[i].capacity) {
            verdict.kind = FeasibilityKind::CapacityExceeded;
            verdict.witness_edge = i;
            return verdict;
        }
    }
    return verdict;
}

FeasibilityVerdict check_feasible(const Instance& inst, const RoutingScheme& scheme) {
    Router router(inst.network);
    return check_feasible(inst, scheme, router);
}

std::string format_load_map(const LoadMap& loads, const Network& net) {
    std::ostringstream out;
    for (int i = 0; i < static_cast<int>(net.edges.size()); ++i) {
        const Edge& e = net.edges[i];
        if (net.mode == Mode::Bidirected) {
            out << "load " << e.u << " " << e.v << " " << fraction_to_string(loads.loads[2 * i])
                << "\n";
            out << "load " << e.v << " " << e.u << " " << fraction_to_string(loads.loads[2 * i + 1])
                << "\n";
        } else {
            out << "load " << e.u << " " << e.v << " " << fraction_to_string(loads.loads[i])
                << "\n";
        }
    }
    return out.str();
}

RoutingScheme direct_scheme(const Instance& inst) {
    RoutingScheme scheme;
    scheme.paths.reserve(inst.demands.size());
    for (size_t i = 0; i < inst.demands.size(); ++i)
        scheme.paths.push_back(
            {static_cast<int>(i), {inst.demands[i].s, inst.demands[i].t}});
    return scheme;
}

} // namespace srtk
