#pragma once

#include <string>

#include "factum/ast.hpp"

namespace factum {

// Canonical concrete syntax. Operators are printed in their ASCII
// spellings; `parse_pattern(pretty_print(p))` is structurally equal to `p`.
std::string pretty_print(const Pattern& pattern);

std::string print_formula(const Formula& formula);
std::string print_term(const Term& term);

// Graphviz rendering of the component types: one cluster per type, input
// ports as outlined circles, output ports as filled circles, one edge per
// `connects` target.
std::string render_dot(const Pattern& pattern);

}  // namespace factum
