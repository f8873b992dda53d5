#include "srtk/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <numeric>
#include <thread>

namespace srtk {

namespace {

constexpr long long kCountCap = (1LL << 62);
constexpr long long kSeqMaterializeCap = 1LL << 20;

using Clock = std::chrono::steady_clock;

long long saturating_mul(long long a, long long b) {
    if (a == 0 || b == 0) return 0;
    if (a > kCountCap / b) return kCountCap;
    return a * b;
}

// Enumerates waypoint sequences of length 0..k over vertices 0..n-1 in the
// solver order: shorter sequences first, then lexicographic.
template <typename F>
bool for_each_sequence(int n, long long k, F&& fn) {
    std::vector<int> seq;
    for (long long len = 0; len <= k; ++len) {
        seq.assign(static_cast<size_t>(len), 0);
        if (len > 0 && n == 0) break;
        while (true) {
            if (fn(seq)) return true;
            int pos = static_cast<int>(len) - 1;
            while (pos >= 0 && seq[pos] == n - 1) seq[pos--] = 0;
            if (pos < 0) break;
            ++seq[pos];
        }
        if (len == 0 && n == 0) break;
    }
    return false;
}

struct PairLoads {
    bool reachable = false;
    std::vector<Fraction> loads;
};

// Shared per-instance context: per ordered pair (a,b) the exact per-key load
// vector of FG(a,b), plus the common-denominator integer fast path when all
// involved numbers fit comfortably in 64 bits.
struct SolveContext {
    const Instance& inst;
    Router router;
    int n, keys;
    long long k;
    bool int_mode = false;
    BigInt denom{1};

    std::vector<PairLoads> pair_table; // (a*n+b), filled upfront for n <= 64
    std::map<std::pair<int, int>, PairLoads> lazy_pairs;
    bool lazy = false;

    std::vector<long long> cap_int;  // capacity * denom (int mode)
    std::vector<Fraction> cap_frac;

    struct Candidate {
        std::vector<int> stops;
        bool ok = false;
        std::vector<long long> vi;
        std::vector<Fraction> vf;
    };
    std::vector<std::vector<Candidate>> cands; // per demand, empty when not materialized
    std::vector<long long> seq_count;          // per demand
    bool materialized = false;

    explicit SolveContext(const Instance& instance)
        : inst(instance), router(instance.network), n(instance.network.vertex_count),
          k(instance.budget) {
        keys = inst.network.mode == Mode::Bidirected
                   ? 2 * static_cast<int>(inst.network.edges.size())
                   : static_cast<int>(inst.network.edges.size());
        lazy = n > 64;
        if (!lazy) {
            pair_table.assign(static_cast<size_t>(n) * n, {});
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    if (a != b) pair_table[a * n + b] = compute_pair(a, b);
            decide_int_mode();
        }
        cap_frac.reserve(keys);
        for (int key = 0; key < keys; ++key) cap_frac.push_back(Fraction(capacity_of(key)));
        if (int_mode) {
            cap_int.reserve(keys);
            for (int key = 0; key < keys; ++key) {
                BigInt c = BigInt(capacity_of(key)) * denom;
                cap_int.push_back(static_cast<long long>(c));
            }
        }
        materialize();
    }

    long long capacity_of(int key) const {
        int edge = inst.network.mode == Mode::Bidirected ? key / 2 : key;
        return inst.network.edges[edge].capacity;
    }

    PairLoads compute_pair(int a, int b) {
        PairLoads pl;
        if (!router.reachable(a, b)) return pl;
        pl.reachable = true;
        pl.loads.assign(keys, Fraction(0));
        ForwardingGraph fg = router.forwarding_graph(a, b);
        for (size_t j = 0; j < fg.arcs.size(); ++j)
            pl.loads[LoadMap::key_of(inst.network.mode, fg.arcs[j].edge_index,
                                     fg.arcs[j].forward)] += fg.fractions[j];
        return pl;
    }

    const PairLoads& pair(int a, int b) {
        if (!lazy) return pair_table[a * n + b];
        auto it = lazy_pairs.find({a, b});
        if (it == lazy_pairs.end())
            it = lazy_pairs.emplace(std::pair(a, b), compute_pair(a, b)).first;
        return it->second;
    }

    void decide_int_mode() {
        BigInt lcm_den = 1;
        for (const PairLoads& pl : pair_table)
            for (const Fraction& f : pl.loads)
                lcm_den = boost::multiprecision::lcm(lcm_den, denominator(f));
        BigInt band_total = 0;
        long long max_cap = 1;
        for (const Demand& d : inst.demands) band_total += d.bandwidth;
        for (const Edge& e : inst.network.edges) max_cap = std::max(max_cap, e.capacity);
        BigInt load_bound = lcm_den * band_total * (BigInt(std::min<long long>(k, 1 << 20)) + 1);
        BigInt cap_bound = lcm_den * max_cap;
        if (load_bound < (BigInt(1) << 62) && cap_bound < (BigInt(1) << 62)) {
            int_mode = true;
            denom = lcm_den;
        }
    }

    // Sum of segment load vectors for the stop list; false when a segment is
    // unreachable.
    bool segment_sum_frac(const std::vector<int>& stops, std::vector<Fraction>& out) {
        std::fill(out.begin(), out.end(), Fraction(0));
        for (size_t i = 0; i + 1 < stops.size(); ++i) {
            if (stops[i] == stops[i + 1]) continue;
            const PairLoads& pl = pair(stops[i], stops[i + 1]);
            if (!pl.reachable) return false;
            for (int key = 0; key < keys; ++key) out[key] += pl.loads[key];
        }
        return true;
    }

    void materialize() {
        const int d = static_cast<int>(inst.demands.size());
        seq_count.assign(d, 0);
        for (int i = 0; i < d; ++i) seq_count[i] = waypoint_sequence_count(n, k);
        bool ok = true;
        for (int i = 0; i < d; ++i)
            if (seq_count[i] > kSeqMaterializeCap) ok = false;
        if (!ok) return;
        cands.assign(d, {});
        std::vector<Fraction> scratch(keys);
        for (int i = 0; i < d; ++i) {
            const Demand& demand = inst.demands[i];
            cands[i].reserve(static_cast<size_t>(seq_count[i]));
            for_each_sequence(n, k, [&](const std::vector<int>& waypoints) {
                Candidate c;
                c.stops.reserve(waypoints.size() + 2);
                c.stops.push_back(demand.s);
                c.stops.insert(c.stops.end(), waypoints.begin(), waypoints.end());
                c.stops.push_back(demand.t);
                c.ok = segment_sum_frac(c.stops, scratch);
                if (c.ok) {
                    if (int_mode) {
                        c.vi.resize(keys);
                        for (int key = 0; key < keys; ++key) {
                            Fraction scaled = scratch[key] * demand.bandwidth * Fraction(denom);
                            c.vi[key] = static_cast<long long>(numerator(scaled));
                        }
                    } else {
                        c.vf.resize(keys);
                        for (int key = 0; key < keys; ++key)
                            c.vf[key] = scratch[key] * demand.bandwidth;
                    }
                }
                cands[i].push_back(std::move(c));
                return false;
            });
        }
        materialized = true;
    }
};

struct Deadline {
    Clock::time_point end;
    bool enabled;
    explicit Deadline(long long millis)
        : end(Clock::now() + std::chrono::milliseconds(millis)), enabled(millis > 0) {}
    bool expired() const { return enabled && Clock::now() > end; }
};

template <typename LoadT>
struct SearchEngine {
    SolveContext& ctx;
    const std::vector<int>& order; // depth -> demand index
    const std::vector<LoadT>& thresholds;
    const SolveLimits& limits;
    Deadline deadline;
    std::atomic<long long>* shared_nodes;
    std::atomic<long long>* stop_index; // parallel: best found top-level index

    long long explored = 0;
    bool aborted = false;
    bool count_leaves; // brute counts schemes; backtrack counts attempts
    std::vector<std::vector<LoadT>> partial;
    std::vector<const std::vector<int>*> chosen;
    std::vector<long long> suffix;

    SearchEngine(SolveContext& c, const std::vector<int>& ord, const std::vector<LoadT>& thr,
                 const SolveLimits& lim, bool leaves)
        : ctx(c), order(ord), thresholds(thr), limits(lim), deadline(lim.max_millis),
          shared_nodes(nullptr), stop_index(nullptr), count_leaves(leaves) {
        const int d = static_cast<int>(order.size());
        partial.assign(d + 1, std::vector<LoadT>(ctx.keys, LoadT(0)));
        chosen.assign(d, nullptr);
        suffix.assign(d + 1, 1);
        for (int i = d - 1; i >= 0; --i)
            suffix[i] = saturating_mul(suffix[i + 1], ctx.seq_count[order[i]]);
    }

    bool over_limit() {
        long long total = explored;
        if (shared_nodes) total = shared_nodes->load(std::memory_order_relaxed);
        if (limits.max_nodes > 0 && total > limits.max_nodes) return true;
        if ((explored & 0xfff) == 0 && deadline.expired()) return true;
        return false;
    }

    void bump(long long amount) {
        explored += amount;
        if (shared_nodes) shared_nodes->fetch_add(amount, std::memory_order_relaxed);
    }

    const std::vector<LoadT>& vec_of(const SolveContext::Candidate& c) const {
        if constexpr (std::is_same_v<LoadT, long long>)
            return c.vi;
        else
            return c.vf;
    }

    // Adds cand onto partial[depth]; returns true when all keys stay within
    // thresholds.
    bool apply(int depth, const SolveContext::Candidate& c) {
        auto& dst = partial[depth + 1];
        const auto& src = partial[depth];
        const auto& add = vec_of(c);
        bool fits = true;
        for (int key = 0; key < ctx.keys; ++key) {
            dst[key] = src[key] + add[key];
            if (dst[key] > thresholds[key]) fits = false;
        }
        return fits;
    }

    // Returns true when a feasible completion was found (stops recorded in
    // chosen); aborted flag set when a limit tripped.
    bool search(int depth, int stride_from = 0, int stride_step = 1) {
        const int d = static_cast<int>(order.size());
        if (depth == d) return true; // only for d == 0
        auto& list = ctx.cands[order[depth]];
        for (size_t ci = depth == 0 ? stride_from : 0; ci < list.size();
             ci += depth == 0 ? stride_step : 1) {
            if (depth == 0 && stop_index &&
                static_cast<long long>(ci) > stop_index->load(std::memory_order_relaxed))
                return false;
            const auto& cand = list[ci];
            bool fits = cand.ok && apply(depth, cand);
            if (!count_leaves) bump(1);
            if (!fits) {
                if (count_leaves) bump(suffix[depth + 1]);
                if (over_limit()) { aborted = true; return false; }
                continue;
            }
            if (depth + 1 == d) {
                if (count_leaves) bump(1);
                chosen[depth] = &cand.stops;
                if (depth == 0 && stop_index) {
                    long long current = stop_index->load(std::memory_order_relaxed);
                    while (static_cast<long long>(ci) < current &&
                           !stop_index->compare_exchange_weak(current, static_cast<long long>(ci)))
                        ;
                }
                return true;
            }
            if (over_limit()) { aborted = true; return false; }
            chosen[depth] = &cand.stops;
            if (search(depth + 1)) {
                if (depth == 0 && stop_index) {
                    long long current = stop_index->load(std::memory_order_relaxed);
                    while (static_cast<long long>(ci) < current &&
                           !stop_index->compare_exchange_weak(current, static_cast<long long>(ci)))
                        ;
                }
                return true;
            }
            if (aborted) return false;
        }
        return false;
    }

    RoutingScheme scheme() const {
        RoutingScheme s;
        s.paths.resize(order.size());
        for (size_t depth = 0; depth < order.size(); ++depth) {
            int demand = order[depth];
            s.paths[demand] = SegmentPath{demand, *chosen[depth]};
        }
        return s;
    }
};

template <typename LoadT>
std::vector<LoadT> base_thresholds(const SolveContext& ctx) {
    if constexpr (std::is_same_v<LoadT, long long>)
        return ctx.cap_int;
    else
        return ctx.cap_frac;
}

template <typename LoadT>
SolveResult run_search(SolveContext& ctx, const std::vector<int>& order,
                       const std::vector<LoadT>& thresholds, const SolveLimits& limits,
                       bool count_leaves) {
    SolveResult result;
    if (order.empty()) {
        result.status = SolveStatus::Yes;
        result.scheme = RoutingScheme{};
        result.explored = 1;
        return result;
    }
    int threads = std::max(1, limits.threads);
    if (threads == 1 || !ctx.materialized || ctx.cands[order[0]].size() < 2) {
        SearchEngine<LoadT> engine(ctx, order, thresholds, limits, count_leaves);
        bool found = engine.search(0);
        result.explored = engine.explored;
        if (found) {
            result.status = SolveStatus::Yes;
            result.scheme = engine.scheme();
        } else {
            result.status = engine.aborted ? SolveStatus::Aborted : SolveStatus::No;
        }
        return result;
    }

    // Parallel mode: partition the first demand's candidates by stride; the
    // scheme with the smallest top-level index wins, which matches the
    // single-threaded enumeration order.
    std::atomic<long long> shared_nodes{0};
    std::atomic<long long> stop_index{kCountCap};
    threads = std::min<long long>(threads, static_cast<long long>(ctx.cands[order[0]].size()));
    struct WorkerResult {
        bool found = false, aborted = false;
        long long index = kCountCap;
        RoutingScheme scheme;
        long long explored = 0;
    };
    std::vector<WorkerResult> results(threads);
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            SearchEngine<LoadT> engine(ctx, order, thresholds, limits, count_leaves);
            engine.shared_nodes = &shared_nodes;
            engine.stop_index = &stop_index;
            bool found = engine.search(0, w, threads);
            results[w].found = found;
            results[w].aborted = engine.aborted;
            results[w].explored = engine.explored;
            if (found) {
                results[w].scheme = engine.scheme();
                for (size_t ci = w; ci < ctx.cands[order[0]].size(); ci += threads)
                    if (&ctx.cands[order[0]][ci].stops == engine.chosen[0]) {
                        results[w].index = static_cast<long long>(ci);
                        break;
                    }
            }
        });
    }
    for (auto& t : pool) t.join();
    const WorkerResult* best = nullptr;
    bool any_aborted = false;
    for (const auto& r : results) {
        result.explored += r.explored;
        any_aborted = any_aborted || r.aborted;
        if (r.found && (!best || r.index < best->index)) best = &r;
    }
    if (best) {
        result.status = SolveStatus::Yes;
        result.scheme = best->scheme;
    } else {
        result.status = any_aborted ? SolveStatus::Aborted : SolveStatus::No;
    }
    return result;
}

std::vector<int> identity_order(const Instance& inst) {
    std::vector<int> order(inst.demands.size());
    std::iota(order.begin(), order.end(), 0);
    return order;
}

std::vector<int> backtrack_order(const Instance& inst) {
    std::vector<int> order = identity_order(inst);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return inst.demands[a].bandwidth > inst.demands[b].bandwidth;
    });
    return order;
}

SolveResult dispatch_search(const Instance& inst, const SolveLimits& limits,
                            const std::vector<int>& order, bool count_leaves) {
    validate_instance(inst);
    SolveContext ctx(inst);
    if (!ctx.materialized) {
        // Search space too large to materialize; enumerate nothing and report
        // the abort instead of thrashing.
        SolveResult r;
        r.status = SolveStatus::Aborted;
        return r;
    }
    if (ctx.int_mode)
        return run_search<long long>(ctx, order, ctx.cap_int, limits, count_leaves);
    return run_search<Fraction>(ctx, order, ctx.cap_frac, limits, count_leaves);
}

} // namespace

SolveResult solve_brute(const Instance& inst, const SolveLimits& limits) {
    return dispatch_search(inst, limits, identity_order(inst), true);
}

SolveResult solve_backtrack(const Instance& inst, const SolveLimits& limits) {
    return dispatch_search(inst, limits, backtrack_order(inst), false);
}

long long waypoint_sequence_count(int n, long long k) {
    long long total = 1, power = 1;
    for (long long i = 1; i <= k; ++i) {
        power = saturating_mul(power, n);
        total += power;
        if (total >= kCountCap || power >= kCountCap) return kCountCap;
    }
    return total;
}

namespace {

// Max over keys of load/capacity for one scheme's accumulated loads.
template <typename LoadT>
struct RatioTracker;

template <>
struct RatioTracker<long long> {
    // ratio = load / cap_int (cap_int already includes the denominator)
    static bool less(std::pair<long long, long long> a, std::pair<long long, long long> b) {
        return static_cast<__int128>(a.first) * b.second <
               static_cast<__int128>(b.first) * a.second;
    }
};

} // namespace

MluResult minimize_mlu(const Instance& inst, const MluOptions& options) {
    validate_instance(inst);
    MluResult result;
    if (inst.demands.empty()) {
        result.scheme = RoutingScheme{};
        return result;
    }
    Router probe(inst.network);
    for (size_t i = 0; i < inst.demands.size(); ++i)
        if (!probe.reachable(inst.demands[i].s, inst.demands[i].t))
            throw UnreachableSegmentError(static_cast<int>(i), inst.demands[i].s,
                                          inst.demands[i].t);

    SolveContext ctx(inst);
    if (!ctx.materialized) {
        result.status = SolveStatus::Aborted;
        return result;
    }
    const std::vector<int> order = identity_order(inst);

    if (options.mode == MluOptions::Mode::Exact) {
        // Exhaustive minimum over schemes of the max edge utilization, with
        // subtree skipping once the partial maximum already ties the best.
        Deadline deadline(options.limits.max_millis);
        long long explored = 0;
        bool aborted = false;
        Fraction best;
        bool have_best = false;
        std::vector<SegmentPath> chosen(inst.demands.size());
        std::vector<SegmentPath> best_scheme(inst.demands.size());
        std::vector<std::vector<Fraction>> partial(
            inst.demands.size() + 1, std::vector<Fraction>(ctx.keys, Fraction(0)));
        std::vector<long long> suffix(inst.demands.size() + 1, 1);
        for (int i = static_cast<int>(inst.demands.size()) - 1; i >= 0; --i)
            suffix[i] = saturating_mul(suffix[i + 1], ctx.seq_count[i]);

        auto ratio_of = [&](const std::vector<Fraction>& loads) {
            Fraction r(0);
            for (int key = 0; key < ctx.keys; ++key) {
                Fraction q = loads[key] / ctx.capacity_of(key);
                if (q > r) r = q;
            }
            return r;
        };

        std::function<void(int)> rec = [&](int depth) {
            if (aborted) return;
            if (depth == static_cast<int>(inst.demands.size())) {
                ++explored;
                Fraction r = ratio_of(partial[depth]);
                if (!have_best || r < best) {
                    best = r;
                    have_best = true;
                    best_scheme = chosen;
                }
                return;
            }
            auto& list = ctx.cands[depth];
            for (const auto& cand : list) {
                if (options.limits.max_nodes > 0 && explored > options.limits.max_nodes) {
                    aborted = true;
                    return;
                }
                if ((explored & 0xfff) == 0 && deadline.expired()) {
                    aborted = true;
                    return;
                }
                if (!cand.ok) {
                    explored += suffix[depth + 1];
                    continue;
                }
                for (int key = 0; key < ctx.keys; ++key)
                    partial[depth + 1][key] =
                        partial[depth][key] +
                        (ctx.int_mode ? Fraction(cand.vi[key], ctx.denom) : cand.vf[key]);
                if (have_best && ratio_of(partial[depth + 1]) >= best) {
                    explored += suffix[depth + 1];
                    continue;
                }
                chosen[depth] = SegmentPath{depth, cand.stops};
                rec(depth + 1);
                if (aborted) return;
            }
        };
        rec(0);
        result.explored = explored;
        if (!have_best) {
            result.status = SolveStatus::Aborted;
            return result;
        }
        result.status = aborted ? SolveStatus::Aborted : SolveStatus::Yes;
        result.lower = aborted ? Fraction(0) : best;
        result.upper = best;
        result.scheme = RoutingScheme{best_scheme};
        return result;
    }

    // Binary mode: bracket the optimum by re-solving the decision problem
    // with all capacities scaled by the midpoint.
    auto feasible_at = [&](const Fraction& x, long long& nodes_used,
                           std::optional<RoutingScheme>& witness) -> std::optional<bool> {
        SolveResult sub;
        if (ctx.int_mode) {
            std::vector<long long> thresholds(ctx.keys);
            for (int key = 0; key < ctx.keys; ++key) {
                // loads are integers scaled by denom: load <= x * cap * denom
                BigInt t = numerator(x) * ctx.capacity_of(key) * ctx.denom / denominator(x);
                thresholds[key] =
                    t > (BigInt(1) << 62) ? (1LL << 62) : static_cast<long long>(t);
            }
            sub = run_search<long long>(ctx, backtrack_order(inst), thresholds, options.limits,
                                        false);
        } else {
            std::vector<Fraction> thresholds(ctx.keys);
            for (int key = 0; key < ctx.keys; ++key)
                thresholds[key] = x * ctx.capacity_of(key);
            sub = run_search<Fraction>(ctx, backtrack_order(inst), thresholds, options.limits,
                                       false);
        }
        nodes_used += sub.explored;
        if (sub.status == SolveStatus::Aborted) return std::nullopt;
        if (sub.status == SolveStatus::Yes) witness = sub.scheme;
        return sub.status == SolveStatus::Yes;
    };

    LoadMap direct = scheme_loads(probe, inst.demands, direct_scheme(inst));
    Fraction hi(0);
    for (int key = 0; key < ctx.keys; ++key) {
        Fraction q = direct.loads[key] / ctx.capacity_of(key);
        if (q > hi) hi = q;
    }
    Fraction lo(0);
    std::optional<RoutingScheme> witness = direct_scheme(inst);
    long long nodes = 0;
    while (hi - lo > options.epsilon) {
        Fraction mid = (lo + hi) / 2;
        auto ok = feasible_at(mid, nodes, witness);
        if (!ok) {
            result.status = SolveStatus::Aborted;
            break;
        }
        if (*ok)
            hi = mid;
        else
            lo = mid;
    }
    result.lower = lo;
    result.upper = hi;
    result.scheme = witness;
    result.explored = nodes;
    return result;
}

} // namespace srtk
