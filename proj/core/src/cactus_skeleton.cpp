#include "srtk/cactus.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace srtk {

namespace {

struct BlockDecomposition {
    std::vector<std::vector<int>> cycles;  // edge index lists
    std::vector<int> bridges;              // edge indices
    bool connected = true;
    bool cactus = true;
};

// Iterative lowpoint DFS splitting the edge set into biconnected components.
BlockDecomposition decompose(const Network& net) {
    const int n = net.vertex_count;
    std::vector<std::vector<std::pair<int, int>>> adj(n); // (to, edge)
    for (int i = 0; i < static_cast<int>(net.edges.size()); ++i) {
        adj[net.edges[i].u].push_back({net.edges[i].v, i});
        adj[net.edges[i].v].push_back({net.edges[i].u, i});
    }

    BlockDecomposition result;
    std::vector<int> disc(n, -1), low(n, -1);
    std::vector<int> edge_stack;
    int timer = 0;

    struct Frame {
        int v;
        int parent_edge;
        size_t next;
    };

    auto flush_component = [&](int until_edge) {
        std::vector<int> comp;
        while (!edge_stack.empty()) {
            int e = edge_stack.back();
            edge_stack.pop_back();
            comp.push_back(e);
            if (e == until_edge) break;
        }
        if (comp.size() == 1) {
            result.bridges.push_back(comp[0]);
            return;
        }
        std::set<int> verts;
        for (int e : comp) {
            verts.insert(net.edges[e].u);
            verts.insert(net.edges[e].v);
        }
        if (verts.size() != comp.size()) {
            result.cactus = false; // biconnected but not a simple cycle
            return;
        }
        std::sort(comp.begin(), comp.end());
        result.cycles.push_back(std::move(comp));
    };

    for (int start = 0; start < n; ++start) {
        if (disc[start] != -1) continue;
        if (start > 0) result.connected = false;
        std::vector<Frame> stack{{start, -1, 0}};
        disc[start] = low[start] = timer++;
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.next < adj[f.v].size()) {
                auto [to, e] = adj[f.v][f.next++];
                if (e == f.parent_edge) continue;
                if (disc[to] == -1) {
                    edge_stack.push_back(e);
                    disc[to] = low[to] = timer++;
                    stack.push_back({to, e, 0});
                } else if (disc[to] < disc[f.v]) {
                    edge_stack.push_back(e);
                    low[f.v] = std::min(low[f.v], disc[to]);
                }
            } else {
                int v = f.v;
                int pe = f.parent_edge;
                stack.pop_back();
                if (!stack.empty()) {
                    int p = stack.back().v;
                    low[p] = std::min(low[p], low[v]);
                    if (low[v] >= disc[p]) flush_component(pe);
                }
            }
        }
    }
    return result;
}

std::vector<int> ring_order(const Network& net, const std::vector<int>& cycle_edges) {
    std::map<int, std::vector<int>> adj;
    for (int e : cycle_edges) {
        adj[net.edges[e].u].push_back(net.edges[e].v);
        adj[net.edges[e].v].push_back(net.edges[e].u);
    }
    int start = adj.begin()->first;
    int next = std::min(adj[start][0], adj[start][1]);
    std::vector<int> order{start};
    int prev = start, cur = next;
    while (cur != start) {
        order.push_back(cur);
        int a = adj[cur][0], b = adj[cur][1];
        int nxt = a == prev ? b : a;
        prev = cur;
        cur = nxt;
    }
    return order;
}

} // namespace

bool is_cactus(const Network& net) {
    if (net.mode != Mode::Undirected)
        throw ValidationError("cactus recognition requires an undirected network");
    validate_network(net);
    BlockDecomposition dec = decompose(net);
    if (!dec.connected) throw DisconnectedError("graph is disconnected");
    return dec.cactus;
}

Skeleton build_skeleton(const Network& net) {
    if (!is_cactus(net)) throw NotCactusError("network is not a cactus");
    BlockDecomposition dec = decompose(net);
    const int n = net.vertex_count;

    Skeleton skel;
    std::vector<int> degree(n, 0);
    for (const Edge& e : net.edges) {
        ++degree[e.u];
        ++degree[e.v];
    }
    std::vector<int> cycle_count(n, 0);

    std::vector<Skeleton::Block> blocks;
    for (const auto& cyc : dec.cycles) {
        Skeleton::Block b;
        b.kind = Skeleton::BlockKind::Cycle;
        b.vertices = ring_order(net, cyc);
        for (size_t i = 0; i < b.vertices.size(); ++i)
            b.edges.push_back({b.vertices[i], b.vertices[(i + 1) % b.vertices.size()]});
        for (int v : b.vertices) ++cycle_count[v];
        blocks.push_back(std::move(b));
    }

    std::vector<bool> is_hinge(n, false);
    for (int v = 0; v < n; ++v) is_hinge[v] = cycle_count[v] >= 1 && degree[v] >= 3;

    // Grafts: bridge edges grouped through non-hinge vertices; hinges have
    // degree one in every graft they belong to.
    std::vector<std::vector<std::pair<int, int>>> bridge_adj(n); // (to, bridge idx)
    for (size_t i = 0; i < dec.bridges.size(); ++i) {
        const Edge& e = net.edges[dec.bridges[i]];
        bridge_adj[e.u].push_back({e.v, static_cast<int>(i)});
        bridge_adj[e.v].push_back({e.u, static_cast<int>(i)});
    }
    std::vector<bool> bridge_used(dec.bridges.size(), false);
    for (size_t i = 0; i < dec.bridges.size(); ++i) {
        if (bridge_used[i]) continue;
        std::set<int> verts;
        std::vector<std::pair<int, int>> edges;
        std::vector<int> queue_edges{static_cast<int>(i)};
        bridge_used[i] = true;
        while (!queue_edges.empty()) {
            int bi = queue_edges.back();
            queue_edges.pop_back();
            const Edge& e = net.edges[dec.bridges[bi]];
            edges.push_back({std::min(e.u, e.v), std::max(e.u, e.v)});
            for (int v : {e.u, e.v}) {
                verts.insert(v);
                if (is_hinge[v]) continue;
                for (auto [to, bj] : bridge_adj[v]) {
                    (void)to;
                    if (!bridge_used[bj]) {
                        bridge_used[bj] = true;
                        queue_edges.push_back(bj);
                    }
                }
            }
        }
        Skeleton::Block b;
        b.kind = Skeleton::BlockKind::Graft;
        b.vertices.assign(verts.begin(), verts.end());
        std::sort(edges.begin(), edges.end());
        b.edges = std::move(edges);
        blocks.push_back(std::move(b));
    }

    if (blocks.empty()) {
        Skeleton::Block b;
        b.kind = Skeleton::BlockKind::Graft;
        if (n > 0) b.vertices = {0};
        blocks.push_back(std::move(b));
    }

    std::sort(blocks.begin(), blocks.end(), [](const auto& a, const auto& b) {
        std::vector<int> ka = a.vertices, kb = b.vertices;
        std::sort(ka.begin(), ka.end());
        std::sort(kb.begin(), kb.end());
        return ka < kb;
    });
    skel.blocks = std::move(blocks);
    skel.root_block = 0;

    for (int v = 0; v < n; ++v)
        if (is_hinge[v]) skel.hinges.push_back(v);
    skel.block_hinges.assign(skel.blocks.size(), {});
    skel.hinge_blocks.assign(skel.hinges.size(), {});
    for (int b = 0; b < skel.block_count(); ++b) {
        for (int v : skel.blocks[b].vertices) {
            auto it = std::lower_bound(skel.hinges.begin(), skel.hinges.end(), v);
            if (it != skel.hinges.end() && *it == v) {
                int h = static_cast<int>(it - skel.hinges.begin());
                skel.block_hinges[b].push_back(h);
                skel.hinge_blocks[h].push_back(b);
            }
        }
    }
    return skel;
}

std::string dump_skeleton(const Skeleton& skel) {
    std::ostringstream out;
    for (int b = 0; b < skel.block_count(); ++b) {
        out << "block "
            << (skel.blocks[b].kind == Skeleton::BlockKind::Cycle ? "cycle" : "graft") << " " << b
            << " :";
        for (int v : skel.blocks[b].vertices) out << " " << v;
        out << "\n";
    }
    for (int h = 0; h < skel.hinge_count(); ++h) {
        out << "hinge " << h << " " << skel.hinges[h] << " :";
        for (int b : skel.hinge_blocks[h]) out << " " << b;
        out << "\n";
    }
    return out.str();
}

CactusAnalysis analyze_cactus(const Network& net, const std::vector<Demand>& demands) {
    CactusAnalysis an;
    an.skeleton = build_skeleton(net);
    const Skeleton& skel = an.skeleton;
    const int nodes = skel.node_count();
    const int B = skel.block_count();

    std::vector<std::vector<int>> adj(nodes);
    for (int b = 0; b < B; ++b)
        for (int h : skel.block_hinges[b]) {
            adj[b].push_back(B + h);
            adj[B + h].push_back(b);
        }

    an.parent.assign(nodes, -1);
    an.children.assign(nodes, {});
    std::vector<int> depth(nodes, -1);
    std::vector<int> bfs{skel.root_block};
    depth[skel.root_block] = 0;
    for (size_t i = 0; i < bfs.size(); ++i) {
        int u = bfs[i];
        for (int v : adj[u]) {
            if (depth[v] != -1) continue;
            depth[v] = depth[u] + 1;
            an.parent[v] = u;
            an.children[u].push_back(v);
            bfs.push_back(v);
        }
    }

    an.vertex_node.assign(net.vertex_count, -1);
    for (int h = 0; h < skel.hinge_count(); ++h) an.vertex_node[skel.hinges[h]] = B + h;
    for (int b = 0; b < B; ++b)
        for (int v : skel.blocks[b].vertices)
            if (an.vertex_node[v] == -1) an.vertex_node[v] = b;

    auto tree_path = [&](int a, int b) {
        std::vector<int> up_a, up_b;
        int x = a, y = b;
        while (depth[x] > depth[y]) {
            up_a.push_back(x);
            x = an.parent[x];
        }
        while (depth[y] > depth[x]) {
            up_b.push_back(y);
            y = an.parent[y];
        }
        while (x != y) {
            up_a.push_back(x);
            up_b.push_back(y);
            x = an.parent[x];
            y = an.parent[y];
        }
        up_a.push_back(x);
        up_a.insert(up_a.end(), up_b.rbegin(), up_b.rend());
        return up_a;
    };

    an.crossing.assign(nodes, {});
    an.demand_paths.resize(demands.size());
    for (size_t di = 0; di < demands.size(); ++di) {
        std::vector<int> path =
            tree_path(an.vertex_node[demands[di].s], an.vertex_node[demands[di].t]);
        // a demand visits a hinge node only when it uses two incident blocks,
        // so endpoint hinge nodes are not visited
        while (!path.empty() && !skel.node_is_block(path.front())) path.erase(path.begin());
        while (!path.empty() && !skel.node_is_block(path.back())) path.pop_back();
        for (size_t i = 0; i + 1 < path.size(); ++i) {
            int child = an.parent[path[i]] == path[i + 1] ? path[i] : path[i + 1];
            an.crossing[child].push_back(static_cast<int>(di));
        }
        an.demand_paths[di] = std::move(path);
    }
    for (auto& c : an.crossing) {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
    }
    return an;
}

RuleOutcome apply_reduction_rules(const CactusAnalysis& an) {
    RuleOutcome out;
    const Skeleton& skel = an.skeleton;
    for (int s = 0; s < skel.node_count(); ++s) {
        if (an.parent[s] == -1) continue;
        int block_side = skel.node_is_block(s) ? s : an.parent[s];
        size_t bound = skel.blocks[block_side].kind == Skeleton::BlockKind::Cycle ? 2 : 1;
        if (an.crossing[s].size() > bound) {
            out.no_solution = true;
            out.violated_node = s;
            return out;
        }
    }
    // cut every parent edge no demand crosses, keep the induced subtrees
    std::vector<int> comp(skel.node_count(), -1);
    for (int s = 0; s < skel.node_count(); ++s) {
        if (comp[s] != -1) continue;
        int root = s;
        while (an.parent[root] != -1 && !an.crossing[root].empty()) root = an.parent[root];
        std::vector<int> stack{root};
        std::vector<int> nodes;
        int id = static_cast<int>(out.components.size());
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            if (comp[u] != -1) continue;
            comp[u] = id;
            nodes.push_back(u);
            for (int c : an.children[u])
                if (!an.crossing[c].empty()) stack.push_back(c);
        }
        std::sort(nodes.begin(), nodes.end());
        out.components.push_back(std::move(nodes));
    }
    std::sort(out.components.begin(), out.components.end());
    return out;
}

DependencyMultigraph build_dependency_multigraph(const CactusAnalysis& an, int node) {
    DependencyMultigraph dm;
    std::map<int, int> position;
    for (int c : an.children[node]) {
        position[c] = static_cast<int>(dm.vertices.size());
        dm.vertices.push_back(c);
    }
    if (an.parent[node] != -1) {
        dm.parent_position = static_cast<int>(dm.vertices.size());
        dm.vertices.push_back(an.parent[node]);
    }
    for (size_t di = 0; di < an.demand_paths.size(); ++di) {
        const auto& path = an.demand_paths[di];
        auto it = std::find(path.begin(), path.end(), node);
        if (it == path.end()) continue;
        size_t i = static_cast<size_t>(it - path.begin());
        int side_a = i > 0 ? path[i - 1] : -1;
        int side_b = i + 1 < path.size() ? path[i + 1] : -1;
        auto classify = [&](int side) -> int {
            if (side == -1) return -1;
            if (side == an.parent[node]) return dm.parent_position;
            auto pit = position.find(side);
            return pit == position.end() ? -1 : pit->second;
        };
        int pa = classify(side_a), pb = classify(side_b);
        if (pa != -1 && pb != -1) dm.edges.push_back({pa, pb, static_cast<int>(di)});
    }
    return dm;
}

} // namespace srtk
