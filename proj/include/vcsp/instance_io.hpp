#pragma once

#include <string>
#include <string_view>

#include "vcsp/csp.hpp"

namespace vcsp {

// Text instance format, one directive per line, '#' starts a comment:
//
//   csp <num_variables>
//   dom <var> <label> <label> ...
//   una <var> <count> <label> ...              (optional; restricts the domain)
//   con <i> <j> allow|forbid <count> <a1> <b1> <a2> <b2> ...
//
// `csp` comes first and every variable needs exactly one `dom` line. Constraint
// pairs name value labels; `forbid` lists nogoods, `allow` lists supports.

/// Throws ParseError for malformed text and ValidationError for a well-formed
/// document that describes an invalid instance. Both carry line and column.
Instance parse_instance(std::string_view text);

/// Canonical text: dom lines in variable order, constraints in instance order, each
/// written with whichever of allow/forbid lists fewer pairs (forbid on a tie).
std::string serialize_instance(const Instance& instance);

Instance read_instance_file(const std::string& path);
void write_instance_file(const std::string& path, const Instance& instance);

}  // namespace vcsp
