#pragma once

#include <optional>

#include "srtk/routing.hpp"

namespace srtk {

struct SolveLimits {
    long long max_nodes = 100'000'000;
    long long max_millis = 60'000;
    int threads = 1;
};

enum class SolveStatus { Yes, No, Aborted };

struct SolveResult {
    SolveStatus status = SolveStatus::No;
    std::optional<RoutingScheme> scheme;
    long long explored = 0; // schemes (brute) or partial schemes (backtrack) visited
};

// Full enumeration: per demand all waypoint sequences of length 0..k over V,
// ordered lexicographically by demand index, then sequence length, then
// vertex indices. Returns the first feasible scheme in that order.
SolveResult solve_brute(const Instance& inst, const SolveLimits& limits = {});

// Demand-at-a-time assignment (descending bandwidth, ties by index) with
// incremental loads; prunes any partial assignment that exceeds a capacity.
// Same yes/no answer as solve_brute.
SolveResult solve_backtrack(const Instance& inst, const SolveLimits& limits = {});

struct MluOptions {
    enum class Mode { Exact, Binary };
    Mode mode = Mode::Exact;
    Fraction epsilon = Fraction(1, 100); // binary mode interval width
    SolveLimits limits;
};

struct MluResult {
    SolveStatus status = SolveStatus::Yes;
    Fraction lower = 0, upper = 0; // exact mode: lower == upper == optimum
    std::optional<RoutingScheme> scheme;
    long long explored = 0;
};

// Minimal maximum link utilization. Exact mode enumerates all schemes and
// returns min over schemes of max over edges of load/capacity; binary mode
// brackets the optimum by re-solving with scaled capacities until the
// interval is narrower than epsilon. Requires every demand to be routable.
MluResult minimize_mlu(const Instance& inst, const MluOptions& options = {});

// Number of waypoint sequences of length 0..k over n vertices.
long long waypoint_sequence_count(int n, long long k);

} // namespace srtk
