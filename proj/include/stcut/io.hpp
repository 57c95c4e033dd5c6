#pragma once

#include <string>
#include <string_view>

#include "stcut/instance.hpp"

namespace stcut {

// Line format, '#' starts a comment:
//   graph <n> <s> <t>
//   cap <u> <v> <w>        u < v, w > 0, repeated pairs are summed
//   dem product | dem general
//   mu <v> <p>             product mode, once per vertex
//   dem_edge <u> <v> <w>   general mode
// Errors: kParseError (with line), kMissingTerminals, kBadProbability.
Instance parse_instance(std::string_view text);
Instance read_instance_file(const std::string& path);

// Writes the raw instance; doubles use 17 significant digits.
std::string write_instance(const Instance& inst);
void write_instance_file(const Instance& inst, const std::string& path);

// Same terminals, raw capacities and demands within `tol` (relative).
bool same_instance(const Instance& a, const Instance& b, double tol = 1e-15);

}  // namespace stcut
