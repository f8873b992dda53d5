#include "doctest.h"

#include <array>

#include <map>

#include "srtk/format.hpp"
#include "srtk/routing.hpp"
#include "support/test_instances.hpp"
#include "support/test_oracles.hpp"

using namespace srtk;
using namespace srtk::testing;

namespace {

std::map<std::pair<int, int>, Fraction> fraction_map(const ForwardingGraph& fg) {
    std::map<std::pair<int, int>, Fraction> m;
    for (size_t i = 0; i < fg.arcs.size(); ++i) m[{fg.arcs[i].tail, fg.arcs[i].head}] = fg.fractions[i];
    return m;
}

} // namespace

TEST_CASE("fig1 distances") {
    Router router(fig1_instance(1).network);
    CHECK(router.distance(0, 6) == 3);
    for (int v = 0; v < 7; ++v) CHECK(router.distance(v, v) == 0);
}

TEST_CASE("distances agree with exhaustive path enumeration") {
    Rng rng(7);
    for (int iter = 0; iter < 60; ++iter) {
        Mode mode = std::array{Mode::Undirected, Mode::Bidirected, Mode::Directed}[rng.below(3)];
        Network net = random_connected_network(rng, mode, 8, rng.below(8));
        auto expected = distances_by_enumeration(net);
        auto actual = all_pairs_shortest_distances(net);
        CHECK(actual == expected);
    }
}

TEST_CASE("fig1 forwarding graph fractions") {
    Router router(fig1_instance(1).network);
    SUBCASE("FG(a,g)") {
        auto m = fraction_map(router.forwarding_graph(0, 6));
        CHECK(m.size() == 8);
        CHECK(m[{0, 1}] == Fraction(1, 2));
        CHECK(m[{0, 2}] == Fraction(1, 2));
        CHECK(m[{1, 3}] == Fraction(1, 2));
        CHECK(m[{2, 4}] == Fraction(1, 4));
        CHECK(m[{2, 5}] == Fraction(1, 4));
        CHECK(m[{3, 6}] == Fraction(1, 2));
        CHECK(m[{4, 6}] == Fraction(1, 4));
        CHECK(m[{5, 6}] == Fraction(1, 4));
    }
    SUBCASE("FG(c,g) and FG(a,c) as with waypoint c") {
        auto m = fraction_map(router.forwarding_graph(2, 6));
        CHECK(m.size() == 4);
        CHECK(m[{2, 4}] == Fraction(1, 2));
        CHECK(m[{2, 5}] == Fraction(1, 2));
        CHECK(m[{4, 6}] == Fraction(1, 2));
        CHECK(m[{5, 6}] == Fraction(1, 2));
        auto ac = fraction_map(router.forwarding_graph(0, 2));
        CHECK(ac.size() == 1);
        CHECK(ac[{0, 2}] == Fraction(1));
    }
    SUBCASE("FG(u,u) is empty") {
        ForwardingGraph fg = router.forwarding_graph(3, 3);
        CHECK(fg.arcs.empty());
    }
}

TEST_CASE("forwarding graph fractions match path enumeration") {
    Rng rng(99);
    for (int iter = 0; iter < 40; ++iter) {
        Mode mode = std::array{Mode::Undirected, Mode::Bidirected, Mode::Directed}[rng.below(3)];
        Network net = random_connected_network(rng, mode, rng.range(3, 8), rng.below(8));
        Router router(net);
        int u = rng.below(net.vertex_count), v = rng.below(net.vertex_count);
        if (u == v || !router.reachable(u, v)) continue;
        CHECK(fraction_map(router.forwarding_graph(u, v)) ==
              fractions_by_enumeration(net, u, v));
    }
}

TEST_CASE("forwarding graph invariants on random graphs") {
    Rng rng(4242);
    for (int iter = 0; iter < 120; ++iter) {
        Mode mode = std::array{Mode::Undirected, Mode::Bidirected, Mode::Directed}[rng.below(3)];
        Network net = random_connected_network(rng, mode, rng.range(2, 10), rng.below(10));
        Router router(net);
        int u = rng.below(net.vertex_count), v = rng.below(net.vertex_count);
        if (u == v || !router.reachable(u, v)) continue;
        ForwardingGraph fg = router.forwarding_graph(u, v);

        // membership criterion against the distance matrix
        auto dist = router.all_pairs();
        for (const auto& a : fg.arcs) {
            CHECK(dist[u][a.tail] + a.weight + dist[a.head][v] == dist[u][v]);
        }

        // conservation: source outflow 1, target inflow 1, internal balance
        std::map<int, Fraction> in, out;
        for (size_t i = 0; i < fg.arcs.size(); ++i) {
            out[fg.arcs[i].tail] += fg.fractions[i];
            in[fg.arcs[i].head] += fg.fractions[i];
            CHECK(fg.fractions[i] > 0);
            CHECK(fg.fractions[i] <= 1);
        }
        CHECK(out[u] == Fraction(1));
        CHECK(in[v] == Fraction(1));
        for (int x = 0; x < net.vertex_count; ++x) {
            if (x == u || x == v) continue;
            CHECK(in[x] == out[x]);
        }
    }
}

TEST_CASE("is_ecmp_free") {
    Router router(fig1_instance(1).network);
    CHECK_FALSE(is_ecmp_free(router.forwarding_graph(0, 6)));
    CHECK(is_ecmp_free(router.forwarding_graph(0, 2)));

    Network path;
    path.mode = Mode::Undirected;
    path.vertex_count = 4;
    path.edges = {{0, 1, 1, 1}, {1, 2, 1, 1}, {2, 3, 1, 1}};
    CHECK(is_ecmp_free(Router(path).forwarding_graph(0, 3)));
}

TEST_CASE("fig2 published scheme loads and feasibility") {
    Fig2 fixture = fig2();
    Router router(fixture.instance.network);
    LoadMap loads = scheme_loads(router, fixture.instance.demands, fixture.published);

    auto edge_load = [&](int u, int v) {
        for (int i = 0; i < static_cast<int>(fixture.instance.network.edges.size()); ++i) {
            const Edge& e = fixture.instance.network.edges[i];
            if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) return loads.loads[i];
        }
        FAIL("edge not found");
        return Fraction(0);
    };
    // middle-path edges carry 1/2 in each direction, summing to 1
    CHECK(edge_load(4, 5) == Fraction(1));
    CHECK(edge_load(5, 6) == Fraction(1));
    CHECK(edge_load(6, 7) == Fraction(1));
    CHECK(edge_load(7, 8) == Fraction(1));
    CHECK(edge_load(8, 9) == Fraction(1));
    for (const Fraction& f : loads.loads) CHECK(f <= 1);

    FeasibilityVerdict verdict = check_feasible(fixture.instance, fixture.published);
    CHECK(verdict.feasible());
}

TEST_CASE("empty scheme over zero demands") {
    Instance inst;
    inst.network.mode = Mode::Undirected;
    inst.network.vertex_count = 3;
    inst.network.edges = {{0, 1, 1, 1}, {1, 2, 1, 1}};
    Router router(inst.network);
    LoadMap loads = scheme_loads(router, inst.demands, RoutingScheme{});
    for (const Fraction& f : loads.loads) CHECK(f == 0);
}

TEST_CASE("scheme loads match the independent enumeration implementation") {
    Rng rng(555);
    for (int iter = 0; iter < 30; ++iter) {
        Mode mode = std::array{Mode::Undirected, Mode::Bidirected, Mode::Directed}[rng.below(3)];
        Instance inst = random_instance(rng, mode, rng.range(3, 7), rng.below(6), 2, 2);
        Router router(inst.network);
        RoutingScheme scheme;
        bool ok = true;
        for (size_t i = 0; i < inst.demands.size(); ++i) {
            SegmentPath p;
            p.demand_index = static_cast<int>(i);
            p.stops.push_back(inst.demands[i].s);
            int w = rng.below(inst.network.vertex_count);
            if (rng.chance(1, 2)) p.stops.push_back(w);
            p.stops.push_back(inst.demands[i].t);
            for (size_t j = 0; j + 1 < p.stops.size(); ++j)
                if (p.stops[j] != p.stops[j + 1] && !router.reachable(p.stops[j], p.stops[j + 1]))
                    ok = false;
            scheme.paths.push_back(std::move(p));
        }
        if (!ok) continue;
        LoadMap loads = scheme_loads(router, inst.demands, scheme);
        CHECK(loads.loads == loads_by_enumeration(inst, scheme));
    }
}

TEST_CASE("loads are additive over demand sets") {
    Rng rng(808);
    for (int iter = 0; iter < 40; ++iter) {
        Mode mode = std::array{Mode::Undirected, Mode::Bidirected, Mode::Directed}[rng.below(3)];
        Instance inst = random_instance(rng, mode, rng.range(3, 8), rng.below(6), 4, 1);
        Router router(inst.network);
        if (inst.demands.size() < 2) continue;
        bool reachable = true;
        for (const Demand& d : inst.demands)
            if (!router.reachable(d.s, d.t)) reachable = false;
        if (!reachable) continue;

        size_t split = inst.demands.size() / 2;
        std::vector<Demand> d1(inst.demands.begin(), inst.demands.begin() + split);
        std::vector<Demand> d2(inst.demands.begin() + split, inst.demands.end());
        RoutingScheme s1, s2, all;
        for (size_t i = 0; i < d1.size(); ++i)
            s1.paths.push_back({static_cast<int>(i), {d1[i].s, d1[i].t}});
        for (size_t i = 0; i < d2.size(); ++i)
            s2.paths.push_back({static_cast<int>(i), {d2[i].s, d2[i].t}});
        for (size_t i = 0; i < inst.demands.size(); ++i)
            all.paths.push_back({static_cast<int>(i), {inst.demands[i].s, inst.demands[i].t}});
        LoadMap l1 = scheme_loads(router, d1, s1);
        LoadMap l2 = scheme_loads(router, d2, s2);
        LoadMap lall = scheme_loads(router, inst.demands, all);
        for (size_t k = 0; k < lall.loads.size(); ++k)
            CHECK(lall.loads[k] == l1.loads[k] + l2.loads[k]);
    }
}

TEST_CASE("cycle: undirected loads of FG(s,t) equal FG(t,s)") {
    for (int len = 3; len <= 8; ++len) {
        Network ring;
        ring.mode = Mode::Undirected;
        ring.vertex_count = len;
        for (int i = 0; i < len; ++i) ring.edges.push_back({i, (i + 1) % len, 1, 1});
        Router router(ring);
        std::vector<Demand> demand{{0, len / 2, 1}};
        RoutingScheme fwd{{{0, {0, len / 2}}}};
        std::vector<Demand> rdemand{{len / 2, 0, 1}};
        RoutingScheme rev{{{0, {len / 2, 0}}}};
        CHECK(scheme_loads(router, demand, fwd).loads == scheme_loads(router, rdemand, rev).loads);
    }
}

TEST_CASE("check_feasible verdicts") {
    SUBCASE("fig1 direct demand feasible with unit capacities") {
        Instance inst = fig1_instance(0);
        CHECK(check_feasible(inst, direct_scheme(inst)).feasible());
    }
    SUBCASE("scaling edge ab down forces a witness on it") {
        Instance inst = fig1_instance(0);
        // fractions put 1/2 on edge 0; with bandwidth 3 the load is 3/2 > 1
        inst.demands[0].bandwidth = 3;
        FeasibilityVerdict v = check_feasible(inst, direct_scheme(inst));
        CHECK(v.kind == FeasibilityKind::CapacityExceeded);
        CHECK(v.witness_edge == 0);
    }
    SUBCASE("budget violation witness") {
        Instance inst = fig1_instance(0);
        RoutingScheme s{{{0, {0, 2, 6}}}};
        FeasibilityVerdict v = check_feasible(inst, s);
        CHECK(v.kind == FeasibilityKind::BudgetExceeded);
        CHECK(v.witness_demand == 0);
    }
    SUBCASE("unreachable segment propagates") {
        Instance inst;
        inst.network.mode = Mode::Directed;
        inst.network.vertex_count = 2;
        inst.network.edges = {{0, 1, 1, 1}};
        inst.demands = {{1, 0, 1}};
        inst.budget = 0;
        CHECK_THROWS_AS(check_feasible(inst, direct_scheme(inst)), UnreachableSegmentError);
    }
}

TEST_CASE("load map export format") {
    Instance inst = fig1_instance(0);
    Router router(inst.network);
    LoadMap loads = scheme_loads(router, inst.demands, direct_scheme(inst));
    std::string text = format_load_map(loads, inst.network);
    CHECK(text.find("load 0 1 1/2\n") != std::string::npos);
    CHECK(text.find("load 2 4 1/4\n") != std::string::npos);
}
