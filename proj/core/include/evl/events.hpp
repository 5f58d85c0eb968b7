#pragma once

#include <optional>
#include <string>

#include "evl/infer.hpp"
#include "evl/syntax.hpp"
#include "evl/types.hpp"

namespace evl {

// An event scheme: a named polymorphic type whose body has the event
// shape, together with the constructor term it was bound to.
struct GenericEvent {
  std::string name;    // capitalized by convention
  PolyType scheme;     // is_event_type_kinded holds on the body
  Tm definition;       // the letEv-bound constructor
};

// A ground event: a record value and its (ground) record type.
struct SpecificEvent {
  Tm value;
  Ty type;
};

// Checks the GenericEvent invariants (capitalized name, event-shaped
// scheme body under the prefix kinds and K).
bool valid_generic_event(const KindingEnv& K, const GenericEvent& ge);

// Types a ground value: constants at their bases, records pointwise.
// nullopt for anything non-ground (lambdas, applications, variables).
std::optional<Ty> ground_type_of_value(const Tm& v);

std::optional<SpecificEvent> specific_event_of(const Tm& value);

// Part closures of an event scheme: the final codomain (resp. the
// domain after `index` arrows) with the prefix restricted to the
// variables its eftv reaches. nullopt when the body has no such arrow.
// part_scheme is the general form for an arbitrary subterm of the body.
PolyType part_scheme(const KindingEnv& K, const PolyType& s, const Ty& part);
PolyType codomain_scheme(const KindingEnv& K, const PolyType& s);
std::optional<PolyType> domain_scheme(const KindingEnv& K, const PolyType& s,
                                      std::size_t index = 0);

// Every instance of ge1 is an instance of ge2. Decided by one matching
// check against ge1's body under fresh rigid variables (the hardest
// instance). On failure, *witness (if given) receives a small ground
// instance of ge1 that ge2 does not cover, when one is found.
bool membership(const KindingEnv& K, const PolyType& ge1, const PolyType& ge2,
                Ty* witness = nullptr);

// ge1 covers ge2: K |- ge1 >= ge2.
bool generalization(const KindingEnv& K, const PolyType& ge1, const PolyType& ge2);

// Dual of generalization.
bool specialization(const KindingEnv& K, const PolyType& ge1, const PolyType& ge2);

// e's type instantiates ge's output event class (the codomain closure
// of its scheme).
bool instantiates(const KindingEnv& K, const SpecificEvent& e, const GenericEvent& ge);

struct EpaInfo {
  PolyType scheme;          // principal scheme when inference succeeded
  KindingEnv kinds;         // residual kinding context
  std::string diagnostic;   // inference failure, if any
};

// True when M's principal type under the prelude plus Γ is an event
// type (an event-processing agent). Inference failures yield false and
// a diagnostic in *info.
bool is_epa(const KindingEnv& K, const TypingEnv& env, const Tm& m,
            EpaInfo* info = nullptr, Mode mode = Mode::Extended);

}  // namespace evl
