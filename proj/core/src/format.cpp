#include "srtk/format.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace srtk {

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::Undirected: return "undirected";
        case Mode::Bidirected: return "bidirected";
        case Mode::Directed: return "directed";
    }
    return "?";
}

void validate_network(const Network& net) {
    if (net.vertex_count < 0) throw ValidationError("negative vertex count");
    std::set<std::pair<int, int>> seen;
    for (const Edge& e : net.edges) {
        if (e.u < 0 || e.u >= net.vertex_count || e.v < 0 || e.v >= net.vertex_count)
            throw ValidationError("edge endpoint out of range: " + std::to_string(e.u) + " " +
                                  std::to_string(e.v));
        if (e.u == e.v)
            throw ValidationError("self-loop at vertex " + std::to_string(e.u));
        if (e.weight < 1) throw ValidationError("edge weight must be >= 1");
        if (e.capacity < 1) throw ValidationError("edge capacity must be >= 1");
        // In undirected/bidirected mode {u,v} identifies the edge; in directed
        // mode (u,v) and (v,u) are distinct arcs.
        std::pair<int, int> key(e.u, e.v);
        if (net.mode != Mode::Directed && key.first > key.second) std::swap(key.first, key.second);
        if (!seen.insert(key).second)
            throw ValidationError("parallel edge " + std::to_string(e.u) + " " + std::to_string(e.v));
    }
}

void validate_instance(const Instance& inst) {
    validate_network(inst.network);
    if (inst.budget < 0) throw ValidationError("budget must be >= 0");
    for (const Demand& d : inst.demands) {
        if (d.s < 0 || d.s >= inst.network.vertex_count || d.t < 0 ||
            d.t >= inst.network.vertex_count)
            throw ValidationError("demand terminal out of range");
        if (d.s == d.t) throw ValidationError("demand with equal terminals after normalization");
        if (d.bandwidth < 1) throw ValidationError("demand bandwidth must be >= 1");
    }
}

bool is_unit(const Instance& inst) {
    for (const Edge& e : inst.network.edges)
        if (e.weight != 1 || e.capacity != 1) return false;
    for (const Demand& d : inst.demands)
        if (d.bandwidth != 1) return false;
    return true;
}

namespace {

long long parse_number(const std::string& token, int line) {
    if (token.empty()) throw ParseError(line, "expected a number");
    for (char c : token)
        if (c < '0' || c > '9') throw ParseError(line, "expected a non-negative integer, got '" + token + "'");
    try {
        return std::stoll(token);
    } catch (const std::exception&) {
        throw ParseError(line, "number out of range: '" + token + "'");
    }
}

} // namespace

Instance parse_instance(std::istream& in) {
    Instance inst;
    bool have_mode = false, have_vertices = false, have_budget = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::istringstream ss(line);
        std::string directive;
        if (!(ss >> directive)) continue;
        std::vector<std::string> args;
        std::string tok;
        while (ss >> tok) args.push_back(tok);

        if (directive == "mode") {
            if (have_mode) throw ParseError(lineno, "duplicate mode directive");
            if (args.size() != 1) throw ParseError(lineno, "mode takes one argument");
            if (args[0] == "undirected") inst.network.mode = Mode::Undirected;
            else if (args[0] == "bidirected") inst.network.mode = Mode::Bidirected;
            else if (args[0] == "directed") inst.network.mode = Mode::Directed;
            else throw ParseError(lineno, "unknown mode '" + args[0] + "'");
            have_mode = true;
        } else if (directive == "vertices") {
            if (have_vertices) throw ParseError(lineno, "duplicate vertices directive");
            if (args.size() != 1) throw ParseError(lineno, "vertices takes one argument");
            inst.network.vertex_count = static_cast<int>(parse_number(args[0], lineno));
            have_vertices = true;
        } else if (directive == "edge") {
            if (!have_vertices) throw ParseError(lineno, "edge before vertices directive");
            if (args.size() != 4) throw ParseError(lineno, "edge takes u v weight capacity");
            Edge e;
            e.u = static_cast<int>(parse_number(args[0], lineno));
            e.v = static_cast<int>(parse_number(args[1], lineno));
            e.weight = parse_number(args[2], lineno);
            e.capacity = parse_number(args[3], lineno);
            inst.network.edges.push_back(e);
        } else if (directive == "demand") {
            if (!have_vertices) throw ParseError(lineno, "demand before vertices directive");
            if (args.size() != 3) throw ParseError(lineno, "demand takes s t b");
            Demand d;
            d.s = static_cast<int>(parse_number(args[0], lineno));
            d.t = static_cast<int>(parse_number(args[1], lineno));
            d.bandwidth = parse_number(args[2], lineno);
            if (d.s == d.t) continue; // uses no edge, ignore
            inst.demands.push_back(d);
        } else if (directive == "budget") {
            if (have_budget) throw ParseError(lineno, "duplicate budget directive");
            if (args.size() != 1) throw ParseError(lineno, "budget takes one argument");
            inst.budget = parse_number(args[0], lineno);
            have_budget = true;
        } else {
            throw ParseError(lineno, "unknown directive '" + directive + "'");
        }
    }
    if (!have_mode) throw ParseError(lineno, "missing mode directive");
    if (!have_vertices) throw ParseError(lineno, "missing vertices directive");
    if (!have_budget) throw ParseError(lineno, "missing budget directive");
    validate_instance(inst);
    return inst;
}

Instance parse_instance(std::string_view text) {
    std::istringstream ss{std::string(text)};
    return parse_instance(ss);
}

std::string serialize_instance(const Instance& inst) {
    std::ostringstream out;
    out << "mode " << to_string(inst.network.mode) << "\n";
    out << "vertices " << inst.network.vertex_count << "\n";
    for (const Edge& e : inst.network.edges)
        out << "edge " << e.u << " " << e.v << " " << e.weight << " " << e.capacity << "\n";
    for (const Demand& d : inst.demands)
        out << "demand " << d.s << " " << d.t << " " << d.bandwidth << "\n";
    out << "budget " << inst.budget << "\n";
    return out.str();
}

RoutingScheme parse_scheme(std::istream& in, const Instance& inst) {
    const int d = static_cast<int>(inst.demands.size());
    RoutingScheme scheme;
    scheme.paths.resize(d);
    std::vector<bool> seen(d, false);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::istringstream ss(line);
        std::string directive;
        if (!(ss >> directive)) continue;
        if (directive != "path") throw ParseError(lineno, "unknown directive '" + directive + "'");
        std::vector<std::string> args;
        std::string tok;
        while (ss >> tok) args.push_back(tok);
        if (args.size() < 3) throw ParseError(lineno, "path takes demand_index and at least two stops");
        int idx = static_cast<int>(parse_number(args[0], lineno));
        if (idx < 0 || idx >= d) throw ParseError(lineno, "demand index out of range");
        if (seen[idx]) throw ParseError(lineno, "duplicate path for demand " + std::to_string(idx));
        seen[idx] = true;
        SegmentPath path;
        path.demand_index = idx;
        for (size_t i = 1; i < args.size(); ++i) {
            int v = static_cast<int>(parse_number(args[i], lineno));
            if (v < 0 || v >= inst.network.vertex_count)
                throw ParseError(lineno, "stop out of range: " + std::to_string(v));
            path.stops.push_back(v);
        }
        if (path.stops.front() != inst.demands[idx].s || path.stops.back() != inst.demands[idx].t)
            throw ParseError(lineno, "path endpoints do not match demand " + std::to_string(idx));
        scheme.paths[idx] = std::move(path);
    }
    for (int i = 0; i < d; ++i)
        if (!seen[i]) throw ParseError(lineno, "missing path for demand " + std::to_string(i));
    return scheme;
}

RoutingScheme parse_scheme(std::string_view text, const Instance& inst) {
    std::istringstream ss{std::string(text)};
    return parse_scheme(ss, inst);
}

std::string serialize_scheme(const RoutingScheme& scheme) {
    std::ostringstream out;
    for (const SegmentPath& p : scheme.paths) {
        out << "path " << p.demand_index;
        for (int v : p.stops) out << " " << v;
        out << "\n";
    }
    return out.str();
}

} // namespace srtk
