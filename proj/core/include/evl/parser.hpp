#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evl/lexer.hpp"
#include "evl/syntax.hpp"
#include "evl/types.hpp"

namespace evl {

// Term syntax. Core mode rejects letrec; extended mode accepts it.
Tm parse_term(const SourceProgram& src, Mode mode = Mode::Extended);

// Type syntax: `forall a::U. ...` prefixes, arrows, record types, List (extended).
PolyType parse_scheme(const SourceProgram& src, Mode mode = Mode::Extended);
Ty parse_type(const SourceProgram& src, Mode mode = Mode::Extended);

// A relate operand is either a term or a literal scheme introduced by `type`.
struct RelateInput {
  std::optional<PolyType> scheme;
  Tm term;  // null when scheme is set
};
RelateInput parse_relate_input(const SourceProgram& src, Mode mode = Mode::Extended);

// Assumption files: one entry per top-level line, either `name : SCHEME` or
// `name params... = TERM`. Lines reaching the entry inside brackets continue it.
struct Assumption {
  std::string name;
  std::optional<PolyType> scheme;
  Tm term;  // null when scheme is set
};
std::vector<Assumption> parse_assume_file(const SourceProgram& src, Mode mode = Mode::Extended);

}  // namespace evl
