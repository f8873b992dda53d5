#include "support/test_oracles.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>

namespace srtk::testing {

namespace {

struct Adjacency {
    // arcs as (to, weight)
    std::vector<std::vector<std::pair<int, long long>>> out;
    explicit Adjacency(const Network& net) : out(net.vertex_count) {
        for (const Edge& e : net.edges) {
            out[e.u].push_back({e.v, e.weight});
            if (net.mode != Mode::Directed) out[e.v].push_back({e.u, e.weight});
        }
    }
};

} // namespace

std::vector<std::vector<long long>> distances_by_enumeration(const Network& net) {
    const int n = net.vertex_count;
    Adjacency adj(net);
    std::vector<std::vector<long long>> dist(n, std::vector<long long>(n, kUnreachable));
    for (int s = 0; s < n; ++s) {
        dist[s][s] = 0;
        std::vector<bool> visited(n, false);
        std::function<void(int, long long)> dfs = [&](int u, long long acc) {
            visited[u] = true;
            if (acc < dist[s][u]) dist[s][u] = acc;
            for (auto [v, w] : adj.out[u])
                if (!visited[v]) dfs(v, acc + w);
            visited[u] = false;
        };
        dfs(s, 0);
    }
    return dist;
}

std::map<std::pair<int, int>, Fraction> fractions_by_enumeration(const Network& net, int u,
                                                                 int v) {
    std::map<std::pair<int, int>, Fraction> result;
    if (u == v) return result;
    Adjacency adj(net);
    auto dist = distances_by_enumeration(net);
    long long total = dist[u][v];
    if (total >= kUnreachable) return result;

    // All shortest u->v paths as vertex sequences.
    std::vector<std::vector<int>> paths;
    std::vector<int> cur{u};
    std::function<void(int, long long)> dfs = [&](int x, long long acc) {
        if (x == v && acc == total) {
            paths.push_back(cur);
            return;
        }
        for (auto [y, w] : adj.out[x]) {
            if (acc + w + dist[y][v] == total && dist[y][v] < kUnreachable) {
                cur.push_back(y);
                dfs(y, acc + w);
                cur.pop_back();
            }
        }
    };
    dfs(u, 0);

    std::vector<std::set<int>> successors(net.vertex_count);
    for (const auto& p : paths)
        for (size_t i = 0; i + 1 < p.size(); ++i) successors[p[i]].insert(p[i + 1]);

    for (const auto& p : paths) {
        Fraction prob = 1;
        for (size_t i = 0; i + 1 < p.size(); ++i)
            prob /= static_cast<long long>(successors[p[i]].size());
        for (size_t i = 0; i + 1 < p.size(); ++i) result[{p[i], p[i + 1]}] += prob;
    }
    return result;
}

std::vector<Fraction> loads_by_enumeration(const Instance& inst, const RoutingScheme& scheme) {
    const Network& net = inst.network;
    const int keys =
        net.mode == Mode::Bidirected ? 2 * static_cast<int>(net.edges.size())
                                     : static_cast<int>(net.edges.size());
    std::vector<Fraction> loads(keys, Fraction(0));
    std::map<std::pair<int, int>, std::pair<int, bool>> arc_key; // (tail,head) -> (edge, fwd)
    for (int i = 0; i < static_cast<int>(net.edges.size()); ++i) {
        arc_key[{net.edges[i].u, net.edges[i].v}] = {i, true};
        if (net.mode != Mode::Directed) arc_key[{net.edges[i].v, net.edges[i].u}] = {i, false};
    }
    for (const SegmentPath& p : scheme.paths) {
        const Demand& d = inst.demands[p.demand_index];
        for (size_t i = 0; i + 1 < p.stops.size(); ++i) {
            if (p.stops[i] == p.stops[i + 1]) continue;
            auto fr = fractions_by_enumeration(net, p.stops[i], p.stops[i + 1]);
            for (const auto& [arc, f] : fr) {
                auto [edge, fwd] = arc_key.at(arc);
                loads[LoadMap::key_of(net.mode, edge, fwd)] += f * d.bandwidth;
            }
        }
    }
    return loads;
}

std::vector<std::vector<int>> enumerate_simple_cycles(const Network& net) {
    const int n = net.vertex_count;
    std::vector<std::vector<int>> adj(n);
    for (const Edge& e : net.edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    std::vector<std::vector<int>> cycles;
    std::vector<int> path;
    std::vector<bool> on_path(n, false);
    std::function<void(int, int)> dfs = [&](int start, int u) {
        for (int v : adj[u]) {
            if (v == start && path.size() >= 3) {
                if (path[1] < path.back()) cycles.push_back(path); // one orientation only
            } else if (v > start && !on_path[v]) {
                path.push_back(v);
                on_path[v] = true;
                dfs(start, v);
                on_path[v] = false;
                path.pop_back();
            }
        }
    };
    for (int s = 0; s < n; ++s) {
        path = {s};
        on_path.assign(n, false);
        on_path[s] = true;
        dfs(s, s);
    }
    return cycles;
}

namespace {

// Loads scaled by 2 so ECMP halves stay integral; ring edge i joins vertices
// i and i+1 (mod length).
using RingLoads = std::vector<int>;

void add_segment(int length, int a, int b, RingLoads& loads) {
    if (a == b) return;
    int cw = (b - a + length) % length;
    int ccw = length - cw;
    if (cw < ccw) {
        for (int s = 0; s < cw; ++s) loads[(a + s) % length] += 2;
    } else if (ccw < cw) {
        for (int s = 1; s <= ccw; ++s) loads[(a - s + length) % length] += 2;
    } else {
        for (int i = 0; i < length; ++i) loads[i] += 1;
    }
}

struct LoadClass {
    RingLoads loads;
    int min_waypoints;
};

// Distinct self-feasible load vectors reachable by <= budget waypoints for one
// (s,t) demand, with the fewest waypoints realizing each vector.
std::vector<LoadClass> demand_classes(int length, int s, int t, int budget) {
    std::unordered_map<std::string, int> best;
    std::vector<RingLoads> vecs;
    std::vector<int> counts;
    std::vector<int> seq;
    std::function<void(int)> emit = [&](int waypoints) {
        RingLoads loads(length, 0);
        int prev = s;
        for (int w : seq) {
            add_segment(length, prev, w, loads);
            prev = w;
        }
        add_segment(length, prev, t, loads);
        for (int x : loads)
            if (x > 2) return; // exceeds unit capacity on its own
        std::string key(loads.begin(), loads.end());
        auto it = best.find(key);
        if (it == best.end()) {
            best[key] = static_cast<int>(counts.size());
            vecs.push_back(loads);
            counts.push_back(waypoints);
        } else if (waypoints < counts[it->second]) {
            counts[it->second] = waypoints;
        }
    };
    std::function<void(int)> gen = [&](int remaining) {
        emit(static_cast<int>(seq.size()));
        if (remaining == 0) return;
        for (int w = 0; w < length; ++w) {
            seq.push_back(w);
            gen(remaining - 1);
            seq.pop_back();
        }
    };
    gen(budget);
    std::vector<LoadClass> out;
    out.reserve(vecs.size());
    for (size_t i = 0; i < vecs.size(); ++i) out.push_back({vecs[i], counts[i]});
    std::sort(out.begin(), out.end(),
              [](const LoadClass& a, const LoadClass& b) { return a.min_waypoints < b.min_waypoints; });
    return out;
}

} // namespace

std::optional<int> cycle_min_waypoints_oracle(int length,
                                              const std::vector<std::pair<int, int>>& demands,
                                              int per_demand_budget) {
    // Per-(length,budget,pair) classes are cached: the acceptance sweep asks
    // for the same pairs thousands of times.
    static std::map<std::tuple<int, int, int, int>, std::vector<LoadClass>> cache;
    std::vector<const std::vector<LoadClass>*> classes;
    for (auto [s, t] : demands) {
        auto key = std::make_tuple(length, per_demand_budget, s, t);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, demand_classes(length, s, t, per_demand_budget)).first;
        classes.push_back(&it->second);
    }

    std::optional<int> best;
    RingLoads acc(length, 0);
    std::function<void(size_t, int)> dfs = [&](size_t i, int used) {
        if (best && used >= *best) return;
        if (i == classes.size()) {
            best = used;
            return;
        }
        for (const LoadClass& c : *classes[i]) {
            if (best && used + c.min_waypoints >= *best) break; // sorted by count
            bool ok = true;
            for (int e = 0; e < length; ++e)
                if (acc[e] + c.loads[e] > 2) { ok = false; break; }
            if (!ok) continue;
            for (int e = 0; e < length; ++e) acc[e] += c.loads[e];
            dfs(i + 1, used + c.min_waypoints);
            for (int e = 0; e < length; ++e) acc[e] -= c.loads[e];
        }
    };
    dfs(0, 0);
    return best;
}

} // namespace srtk::testing
