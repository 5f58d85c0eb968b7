#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "evl/syntax.hpp"
#include "evl/types.hpp"

namespace evl {

struct TypeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Cls(K, env, t): quantifies eftv(K,t) \ eftv(K,env), moving those kinds
// out of K into the prefix. Prefix order: a variable mentioned in another's
// kind comes first; ties and cycles resolve by name.
std::pair<KindingEnv, PolyType> closure(const KindingEnv& K, const TypingEnv& env, const Ty& t);

// K |- general >= specific. When a witness pointer is given and the check
// succeeds, *witness receives the instantiation of general's prefix
// (keyed by the original prefix names).
bool generic_instance(const KindingEnv& K, const PolyType& general, const PolyType& specific,
                      Subst* witness = nullptr);

// Event types: zero or more argument arrows ending in a record whose fields
// are field types (variable, base, or arrow chain ending in one of those).
bool is_event_type(const Ty& t);
// Kind-aware variant: also accepts a variable whose kind is a record kind
// with field-type entries in place of the final record.
bool is_event_type_kinded(const KindingEnv& K, const Ty& t);

struct InferResult {
  KindingEnv kinds;
  Subst subst;
  Ty type;
};

// A fresh-name supply clear of every variable mentioned in K and env.
NameSupply supply_avoiding(const KindingEnv& K, const TypingEnv& env);

// Algorithm WK. Throws TypeError (unbound variables, letEv on a non-event,
// unification failures).
InferResult infer(const KindingEnv& K, const TypingEnv& env, const Tm& term, NameSupply& names);
InferResult infer(const KindingEnv& K, const TypingEnv& env, const Tm& term);

// Principal scheme of a term: infer, then close over the substituted env.
std::pair<KindingEnv, PolyType> principal(const KindingEnv& K, const TypingEnv& env,
                                          const Tm& term, NameSupply& names);

// True when the term's principal scheme instantiates to the given one.
bool check(const KindingEnv& K, const TypingEnv& env, const Tm& term, const PolyType& scheme);

}  // namespace evl
