#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace srtk {

enum class Mode { Undirected, Bidirected, Directed };

std::string to_string(Mode mode);

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& what_)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

// A declared edge. In bidirected mode the symmetric arc exists implicitly
// with the same weight and capacity; in directed mode this is the arc u->v.
struct Edge {
    int u = 0;
    int v = 0;
    long long weight = 1;
    long long capacity = 1;

    bool operator==(const Edge&) const = default;
};

struct Network {
    Mode mode = Mode::Undirected;
    int vertex_count = 0;
    std::vector<Edge> edges;

    bool operator==(const Network&) const = default;
};

struct Demand {
    int s = 0;
    int t = 0;
    long long bandwidth = 1;

    bool operator==(const Demand&) const = default;
};

// Stop sequence [s, w_1, ..., w_l, t]; source and target are not waypoints.
struct SegmentPath {
    int demand_index = 0;
    std::vector<int> stops;

    int waypoint_count() const { return static_cast<int>(stops.size()) - 2; }

    bool operator==(const SegmentPath&) const = default;
};

struct RoutingScheme {
    std::vector<SegmentPath> paths; // one per demand, in demand order

    bool operator==(const RoutingScheme&) const = default;
};

struct Instance {
    Network network;
    std::vector<Demand> demands;
    long long budget = 0;

    bool operator==(const Instance&) const = default;
};

// Throws ValidationError on self-loops, parallel edges, out-of-range
// endpoints or non-positive weights/capacities.
void validate_network(const Network& net);
void validate_instance(const Instance& inst);

bool is_unit(const Instance& inst);

} // namespace srtk
