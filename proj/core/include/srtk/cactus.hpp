#pragma once

#include <string>

#include "srtk/solver.hpp"

namespace srtk {

struct NotCactusError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotUnitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DisconnectedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// True iff every edge lies on at most one simple cycle, i.e. every
// biconnected component is a single edge or a cycle. Requires an undirected
// connected network.
bool is_cactus(const Network& net);

// Blocks (cycles and grafts) attached through hinges; the skeleton itself is
// a tree whose leaves are blocks.
struct Skeleton {
    enum class BlockKind { Cycle, Graft };

    struct Block {
        BlockKind kind;
        std::vector<int> vertices; // cycles: ring order starting at the lowest vertex
        std::vector<std::pair<int, int>> edges;
    };

    std::vector<Block> blocks;               // canonically ordered
    std::vector<int> hinges;                 // hinge vertices, ascending
    std::vector<std::vector<int>> block_hinges; // block id -> hinge ids
    std::vector<std::vector<int>> hinge_blocks; // hinge id -> block ids
    int root_block = 0;                      // block containing the lowest vertex

    int block_count() const { return static_cast<int>(blocks.size()); }
    int hinge_count() const { return static_cast<int>(hinges.size()); }
    int node_count() const { return block_count() + hinge_count(); }
    // skeleton nodes: 0..B-1 blocks, then B..B+H-1 hinges
    bool node_is_block(int node) const { return node < block_count(); }
    int hinge_vertex(int node) const { return hinges[node - block_count()]; }
};

Skeleton build_skeleton(const Network& net);

// `block cycle|graft <id> : <vertices>` / `hinge <id> <vertex> : <blocks>`
std::string dump_skeleton(const Skeleton& skel);

// ---- cycle instances (Min Unit Segment Routing on an undirected ring) ----

struct CycleDemandSpec {
    int entry = 0, exit = 0; // ring positions, entry != exit
};

struct CycleAssignment {
    // waypoint ring positions per demand, ordered along the travel direction
    std::vector<std::vector<int>> waypoints;

    int count(int demand) const { return static_cast<int>(waypoints[demand].size()); }
};

struct CycleVerdict {
    enum class Status { Infeasible, Unique, TwoSolutions };
    Status status = Status::Infeasible;
    std::vector<CycleAssignment> solutions; // one or two minimal assignments

    bool feasible() const { return status != Status::Infeasible; }
};

// Full case analysis for unit demands/capacities on a cycle of `length`
// vertices; minimal waypoint counts with concrete placements.
CycleVerdict solve_cycle_min(int length, const std::vector<CycleDemandSpec>& demands);

// ---- skeleton analysis shared by the reduction rules and the DP ----

struct CactusAnalysis {
    Skeleton skeleton;
    std::vector<int> parent;                 // node id -> parent node id (-1 for root)
    std::vector<std::vector<int>> children;  // rooted at skeleton.root_block
    std::vector<std::vector<int>> demand_paths; // trimmed skeleton node paths, source to target
    std::vector<std::vector<int>> crossing;  // node -> demands crossing (node, parent) edge
    std::vector<int> vertex_node;            // vertex -> owning node id
};

CactusAnalysis analyze_cactus(const Network& net, const std::vector<Demand>& demands);

struct RuleOutcome {
    bool no_solution = false;
    int violated_node = -1;                     // node whose parent edge exceeds its bound
    std::vector<std::vector<int>> components;   // independent sub-instances (skeleton nodes)
};

// Reduction rule 1 (crossing-demand bounds per skeleton edge) and rule 2
// (split off subtrees no demand leaves).
RuleOutcome apply_reduction_rules(const CactusAnalysis& analysis);

struct DependencyMultigraph {
    std::vector<int> vertices;   // children of the node, plus the parent entry last
    int parent_position = -1;    // index into vertices, -1 when the node is the root
    struct MultiEdge {
        int a, b;                // positions into vertices
        int demand;
    };
    std::vector<MultiEdge> edges;

    std::vector<int> degrees() const {
        std::vector<int> deg(vertices.size(), 0);
        for (const MultiEdge& e : edges) {
            ++deg[e.a];
            ++deg[e.b];
        }
        return deg;
    }
};

DependencyMultigraph build_dependency_multigraph(const CactusAnalysis& analysis, int node);

// Decision procedure for unit instances on undirected cacti, with witness
// reconstruction. Throws NotUnitError / NotCactusError.
SolveResult solve_unit_cactus(const Instance& inst);

} // namespace srtk
