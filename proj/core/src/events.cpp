#include "evl/events.hpp"

#include <cctype>
#include <set>

#include "evl/prelude.hpp"

namespace evl {

namespace {

}  // namespace

PolyType part_scheme(const KindingEnv& K, const PolyType& s, const Ty& part) {
  KindingEnv full = K;
  for (const auto& [n, k] : s.prefix) full[n] = k;
  // forward closure only: the part's variables plus what their kinds
  // mention, so binders the part never reaches are dropped
  std::set<std::string> keep = ftv(part);
  bool grew = true;
  while (grew) {
    grew = false;
    std::set<std::string> next = keep;
    for (const auto& n : keep) {
      auto it = full.find(n);
      if (it == full.end()) continue;
      for (const auto& m : ftv(it->second))
        if (next.insert(m).second) grew = true;
    }
    keep.swap(next);
  }
  PolyType out;
  out.body = part;
  for (const auto& [n, k] : s.prefix)
    if (keep.count(n)) out.prefix.emplace_back(n, k);
  return out;
}

bool valid_generic_event(const KindingEnv& K, const GenericEvent& ge) {
  if (ge.name.empty() || !std::isupper(static_cast<unsigned char>(ge.name[0])))
    return false;
  KindingEnv full = K;
  for (const auto& [n, k] : ge.scheme.prefix) full[n] = k;
  return is_event_type_kinded(full, ge.scheme.body);
}

std::optional<Ty> ground_type_of_value(const Tm& v) {
  if (const auto* c = term_as<Term::Const>(v)) return tbase(c->base);
  if (const auto* r = term_as<Term::Record>(v)) {
    std::map<std::string, Ty> fs;
    for (const auto& [l, f] : r->fields) {
      auto t = ground_type_of_value(f);
      if (!t) return std::nullopt;
      fs[l] = *t;
    }
    return trecord(std::move(fs));
  }
  return std::nullopt;
}

std::optional<SpecificEvent> specific_event_of(const Tm& value) {
  auto t = ground_type_of_value(value);
  if (!t || !as_record(*t)) return std::nullopt;
  return SpecificEvent{value, *t};
}

PolyType codomain_scheme(const KindingEnv& K, const PolyType& s) {
  Ty cod = s.body;
  while (const auto* a = as_arrow(cod)) cod = a->cod;
  return part_scheme(K, s, cod);
}

std::optional<PolyType> domain_scheme(const KindingEnv& K, const PolyType& s,
                                      std::size_t index) {
  Ty cur = s.body;
  for (std::size_t i = 0; i < index; ++i) {
    const auto* a = as_arrow(cur);
    if (!a) return std::nullopt;
    cur = a->cod;
  }
  const auto* a = as_arrow(cur);
  if (!a) return std::nullopt;
  return part_scheme(K, s, a->dom);
}

namespace {

const Ty kWitnessBases[4] = {ty_float(), ty_int(), ty_bool(), ty_string()};

// Resolves the record-kinded prefix variables of `asg`'s residue to
// minimal records, dependency order discovered by iteration. Returns
// false on cyclic kinds or stray variables.
bool resolve_record_vars(const std::vector<std::pair<std::string, Kind>>& prefix,
                         Subst& asg) {
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& [n, k] : prefix) {
      if (asg.count(n) || k.universal()) continue;
      std::map<std::string, Ty> fs;
      bool ground = true;
      for (const auto& [l, ft] : *k.fields) {
        Ty t = apply_subst(asg, ft);
        if (!ftv(t).empty()) {  // unresolved dependency: not ready yet
          ground = false;
          break;
        }
        fs[l] = t;
      }
      if (!ground) continue;
      asg[n] = trecord(std::move(fs));
      progress = true;
    }
  }
  for (const auto& [n, k] : prefix) {
    (void)k;
    if (!asg.count(n)) return false;
  }
  return true;
}

// Searches small ground instances of ge1 for one that ge2 misses.
Ty find_witness(const KindingEnv& K, const PolyType& ge1, const PolyType& ge2) {
  std::vector<std::string> uvars;
  for (const auto& [n, k] : ge1.prefix)
    if (k.universal()) uvars.push_back(n);
  std::size_t combos = 1;
  for (std::size_t i = 0; i < uvars.size() && combos < 256; ++i) combos *= 4;
  if (combos > 256) combos = 256;
  for (std::size_t c = 0; c < combos; ++c) {
    Subst asg;
    std::size_t rest = c;
    // first variable varies slowest, so Float-heavy combos come first
    for (std::size_t i = uvars.size(); i-- > 0;) {
      asg[uvars[i]] = kWitnessBases[rest % 4];
      rest /= 4;
    }
    if (!resolve_record_vars(ge1.prefix, asg)) return nullptr;
    Ty inst = apply_subst(asg, ge1.body);
    if (!ftv(inst).empty()) return nullptr;  // open scheme; no ground witness
    if (!generic_instance(K, ge2, PolyType::mono(inst))) return inst;
  }
  return nullptr;
}

}  // namespace

bool membership(const KindingEnv& K, const PolyType& ge1, const PolyType& ge2,
                Ty* witness) {
  // Opening ge1 with rigid fresh variables gives its hardest instance;
  // generic_instance does exactly that with its specific argument.
  if (generic_instance(K, ge2, ge1)) return true;
  if (witness) {
    if (Ty w = find_witness(K, ge1, ge2)) *witness = w;
  }
  return false;
}

bool generalization(const KindingEnv& K, const PolyType& ge1, const PolyType& ge2) {
  return generic_instance(K, ge1, ge2);
}

bool specialization(const KindingEnv& K, const PolyType& ge1, const PolyType& ge2) {
  return generalization(K, ge2, ge1);
}

bool instantiates(const KindingEnv& K, const SpecificEvent& e, const GenericEvent& ge) {
  PolyType out = codomain_scheme(K, ge.scheme);
  return generic_instance(K, out, PolyType::mono(e.type));
}

bool is_epa(const KindingEnv& K, const TypingEnv& env, const Tm& m, EpaInfo* info,
            Mode mode) {
  TypingEnv g = prelude_env(mode);
  for (const auto& [n, s] : env) g[n] = s;
  Tm term = inject_library(m, mode);
  NameSupply ns = supply_avoiding(K, g);
  try {
    auto [k1, s] = principal(K, g, term, ns);
    KindingEnv full = k1;
    for (const auto& [n, kk] : s.prefix) full[n] = kk;
    if (info) {
      info->scheme = s;
      info->kinds = k1;
      info->diagnostic.clear();
    }
    return is_event_type_kinded(full, s.body);
  } catch (const TypeError& e) {
    if (info) info->diagnostic = e.what();
    return false;
  }
}

}  // namespace evl
