#pragma once

#include <istream>
#include <string>
#include <string_view>

#include "srtk/model.hpp"

namespace srtk {

// Instance text format, one directive per line, '#' starts a comment:
//   mode undirected|bidirected|directed
//   vertices <n>
//   edge <u> <v> <weight> <capacity>
//   demand <s> <t> <b>
//   budget <k>
// Directives may appear in any order except that `vertices` must precede
// any `edge`/`demand`. Demands with s == t are dropped at parse time.
Instance parse_instance(std::istream& in);
Instance parse_instance(std::string_view text);

std::string serialize_instance(const Instance& inst);

// Scheme format: one line per demand, `path <demand_index> <v0> ... <vm>`.
RoutingScheme parse_scheme(std::istream& in, const Instance& inst);
RoutingScheme parse_scheme(std::string_view text, const Instance& inst);

std::string serialize_scheme(const RoutingScheme& scheme);

} // namespace srtk
