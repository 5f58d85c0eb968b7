#pragma once

#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "evl/types.hpp"

namespace evl {

using TyPair = std::pair<Ty, Ty>;

struct UnifyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnifyResult {
  KindingEnv kinds;
  Subst subst;
};

// F1 +- F2: union of the field maps, F1 winning on shared labels.
std::map<std::string, Ty> field_merge(const std::map<std::string, Ty>& f1,
                                      const std::map<std::string, Ty>& f2);

// Kinded unification. Picks the first applicable rule for the front pair,
// prepends decomposed pairs in label order, and applies substitutions eagerly
// to the pending pairs, the kinding env, and the accumulated substitution.
// Variables in `rigid` are never substituted away and their kinds never grow;
// a nonempty rigid set turns this into the matching mode used by
// generic-instance checks. Throws UnifyError on failure.
UnifyResult unify(const KindingEnv& kinds, const std::vector<TyPair>& eqs,
                  const std::set<std::string>& rigid = {});

// One entry per rule application, plus the initial state.
struct UnifyStep {
  std::string rule;
  std::deque<TyPair> pending;
  KindingEnv kinds;
  Subst subst;
};
UnifyResult unify_trace(const KindingEnv& kinds, const std::vector<TyPair>& eqs,
                        const std::set<std::string>& rigid, std::vector<UnifyStep>& steps);

}  // namespace evl
