#pragma once

#include "evl/infer.hpp"
#include "evl/syntax.hpp"
#include "evl/types.hpp"

namespace evl {

// The initial typing environment for the operator constants.
// Arithmetic and comparison are fixed at Float, equality at String:
// every typed use in the example programs is at those instances, and
// the calculus has no overloading or polymorphic equality.  The
// dynamic delta rules are more permissive (per-base arithmetic); the
// surplus is unreachable from programs typed under this environment.
TypingEnv prelude_env(Mode mode = Mode::Extended);

// Kinding assumptions for the prelude: none (all schemes above
// quantify only U-kinded variables, introduced by their own prefixes).
KindingEnv prelude_kinds();

// Names of the derived list combinators available in extended mode.
extern const char* const kLibraryNames[4];  // filter transform aggregater aggregatel

// Wraps `user` in letrec definitions of any library combinator that
// occurs free in it (extended mode only; core terms are returned
// unchanged).  Definitions that are not referenced are not injected,
// so inference and evaluation of plain terms are unaffected.
Tm inject_library(const Tm& user, Mode mode = Mode::Extended);

// The library combinators' source text, exposed for tests.
const char* library_source(const std::string& name);

}  // namespace evl
