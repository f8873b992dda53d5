#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <vector>

#include "srtk/fraction.hpp"
#include "srtk/model.hpp"

namespace srtk {

inline constexpr long long kUnreachable = (1LL << 62);

struct UnreachableError : std::runtime_error {
    int from, to;
    UnreachableError(int from_, int to_)
        : std::runtime_error("vertex " + std::to_string(to_) + " unreachable from " +
                             std::to_string(from_)),
          from(from_), to(to_) {}
};

struct UnreachableSegmentError : std::runtime_error {
    int demand_index, from, to;
    UnreachableSegmentError(int demand_, int from_, int to_)
        : std::runtime_error("demand " + std::to_string(demand_) + ": segment " +
                             std::to_string(from_) + " -> " + std::to_string(to_) +
                             " is unreachable"),
          demand_index(demand_), from(from_), to(to_) {}
};

// Union of all shortest u->v paths, oriented with the flow. Arc fractions are
// the exact ECMP shares: the inflow of every vertex splits evenly over its
// outgoing arcs in the forwarding graph.
struct ForwardingGraph {
    int source = 0;
    int target = 0;

    struct Arc {
        int edge_index;  // index into Network::edges
        bool forward;    // tail==edges[i].u (true) or the reverse orientation
        int tail, head;
        long long weight;
    };
    std::vector<Arc> arcs;            // sorted by (dist(source,tail), tail, head)
    std::vector<Fraction> fractions;  // parallel to arcs
};

bool is_ecmp_free(const ForwardingGraph& fg);

// Total flow per capacity unit. Undirected networks have one entry per edge
// (both directions accumulate onto it, sharing the capacity); directed and
// bidirected networks have one entry per arc.
struct LoadMap {
    Mode mode = Mode::Undirected;
    std::vector<Fraction> loads; // undirected/directed: edge index; bidirected: 2*edge + (0 fwd | 1 rev)

    int key_count() const { return static_cast<int>(loads.size()); }
    static int key_of(Mode mode, int edge_index, bool forward) {
        return mode == Mode::Bidirected ? 2 * edge_index + (forward ? 0 : 1) : edge_index;
    }
};

// Per-network shortest-path engine with cached single-source runs. Distance
// queries and forwarding-graph construction are safe to call concurrently.
class Router {
public:
    explicit Router(const Network& net);

    const Network& network() const { return net_; }

    long long distance(int from, int to) const;
    bool reachable(int from, int to) const { return distance(from, to) < kUnreachable; }
    std::vector<std::vector<long long>> all_pairs() const;

    ForwardingGraph forwarding_graph(int u, int v) const;

private:
    struct OutArc {
        int to;
        long long weight;
        int edge_index;
        bool forward;
    };

    const std::vector<long long>& from_source(int s) const;
    const std::vector<long long>& to_target(int t) const;

    Network net_;
    std::vector<std::vector<OutArc>> out_, in_;
    mutable std::shared_mutex mutex_;
    mutable std::vector<std::unique_ptr<std::vector<long long>>> from_cache_, to_cache_;
};

std::vector<std::vector<long long>> all_pairs_shortest_distances(const Network& net);

LoadMap scheme_loads(const Router& router, const std::vector<Demand>& demands,
                     const RoutingScheme& scheme);

enum class FeasibilityKind { Feasible, CapacityExceeded, BudgetExceeded };

struct FeasibilityVerdict {
    FeasibilityKind kind = FeasibilityKind::Feasible;
    int witness_edge = -1;    // edge index for CapacityExceeded
    bool witness_forward = true; // arc direction for bidirected witnesses
    int witness_demand = -1;  // demand index for BudgetExceeded
    LoadMap loads;

    bool feasible() const { return kind == FeasibilityKind::Feasible; }
};

// Budget check first (first offending demand), then capacities in edge
// declaration order. Throws UnreachableSegmentError if a segment cannot be
// routed, std::invalid_argument if the scheme does not match the demands.
FeasibilityVerdict check_feasible(const Instance& inst, const RoutingScheme& scheme);
FeasibilityVerdict check_feasible(const Instance& inst, const RoutingScheme& scheme,
                                  const Router& router);

// Text export, one `load <u> <v> <num>/<den>` line per capacity unit.
std::string format_load_map(const LoadMap& loads, const Network& net);

RoutingScheme direct_scheme(const Instance& inst);

} // namespace srtk
