#pragma once

#include <string>

#include "evl/syntax.hpp"

namespace evl {

// Canonical term syntax; parse_term(pretty_term(t)) reproduces t exactly.
std::string pretty_term(const Tm& t);

std::string show_literal(const Lit& lit);
std::string format_float(double d);

}  // namespace evl
