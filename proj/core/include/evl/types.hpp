#ifndef EVL_TYPES_HPP
#define EVL_TYPES_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace evl {

// Base types. Bool is mandatory; the rest cover the examples this
// implementation ships with.
bool is_base_type(const std::string& name);

struct MonoType;
using Ty = std::shared_ptr<const MonoType>;

// Monotypes tau: variables, base types, arrows, records, and (extended
// mode only) builtin lists.
struct MonoType {
  struct Var {
    std::string name;
  };
  struct Base {
    std::string name;
  };
  struct Arrow {
    Ty dom, cod;
  };
  struct Rec {
    std::map<std::string, Ty> fields;  // label-sorted, >= 1 entry
  };
  struct List {
    Ty elem;
  };
  std::variant<Var, Base, Arrow, Rec, List> v;
};

Ty tvar(std::string name);
Ty tbase(std::string name);
Ty tarrow(Ty dom, Ty cod);
Ty trecord(std::map<std::string, Ty> fields);
Ty tlist(Ty elem);

Ty ty_bool();
Ty ty_int();
Ty ty_float();
Ty ty_string();

const MonoType::Var* as_var(const Ty& t);
const MonoType::Base* as_base(const Ty& t);
const MonoType::Arrow* as_arrow(const Ty& t);
const MonoType::Rec* as_record(const Ty& t);
const MonoType::List* as_list(const Ty& t);

bool type_eq(const Ty& a, const Ty& b);

// A kind is either the universal kind U or a record kind <<l1:t1,...>>.
struct Kind {
  // nullopt = universal
  std::optional<std::map<std::string, Ty>> fields;

  bool universal() const { return !fields.has_value(); }
  static Kind u() { return Kind{}; }
  static Kind rec(std::map<std::string, Ty> f) { return Kind{std::move(f)}; }
};

bool kind_eq(const Kind& a, const Kind& b);

// forall a1::k1 ... an::kn. tau — prefix order is significant for
// printing; comparison is up to alpha-equivalence.
struct PolyType {
  std::vector<std::pair<std::string, Kind>> prefix;
  Ty body;

  static PolyType mono(Ty t) { return PolyType{{}, std::move(t)}; }
};

using KindingEnv = std::map<std::string, Kind>;
using TypingEnv = std::map<std::string, PolyType>;
using Subst = std::map<std::string, Ty>;

// Free type variables.
std::set<std::string> ftv(const Ty& t);
std::set<std::string> ftv(const Kind& k);
std::set<std::string> ftv(const PolyType& s);
std::set<std::string> ftv(const TypingEnv& env);

// Essentially free type variables: the smallest superset of ftv(t)
// closed under the kinding environment in both directions — if a is in
// the set then ftv(K(a)) joins it, and any b in dom(K) whose kind
// mentions a member joins it too. The backward step is what keeps
// closure from quantifying a variable while leaving behind a kind that
// mentions it.
std::set<std::string> eftv(const KindingEnv& K, const Ty& t);
std::set<std::string> eftv(const KindingEnv& K, const PolyType& s);
std::set<std::string> eftv(const KindingEnv& K, const TypingEnv& env);

// Substitution application. PolyType application is capture-avoiding:
// bound variables clashing with dom(S) or ftv(range S) are renamed
// first.
Ty apply_subst(const Subst& s, const Ty& t);
Kind apply_subst(const Subst& s, const Kind& k);
PolyType apply_subst(const Subst& s, const PolyType& p);
TypingEnv apply_subst(const Subst& s, const TypingEnv& env);
// Applies to the kinds only; the domain is left alone.
KindingEnv apply_subst(const Subst& s, const KindingEnv& K);
// apply(compose(s2, s1), t) == apply(s2, apply(s1, t))
Subst compose(const Subst& s2, const Subst& s1);

bool well_formed(const KindingEnv& K, const Ty& t);
bool well_formed(const KindingEnv& K, const Kind& k);
bool well_formed(const KindingEnv& K);

// K |- t :: k. A List behaves like its three-field record view
// {empty: Bool, head: t, tail: List t} for record kinds.
bool has_kind(const KindingEnv& K, const Ty& t, const Kind& k);

// (K1, S) respects K2: for every a in dom(K2), K1 |- S(a) :: S(K2(a)).
bool subst_respects(const KindingEnv& K1, const Subst& S, const KindingEnv& K2);

// Alpha-equivalence of schemes (prefix order must correspond; kinds
// compared under the renaming).
bool alpha_equal(const PolyType& a, const PolyType& b);
// Alpha-equivalence modulo permutation of the prefix.
bool alpha_equal_any_order(const PolyType& a, const PolyType& b);

// Canonical printing. Records print label-sorted as {l1: T1, l2: T2};
// kinds as U or {{l: T}}; schemes as forall a::U. ...
std::string show_type(const Ty& t);
std::string show_kind(const Kind& k);
std::string show_scheme(const PolyType& s);
std::string show_kinding_env(const KindingEnv& K);
std::string show_subst(const Subst& s);

// Fresh-variable supply; one per inference session. Names (t0, t1, ...)
// are not writable in source, so they never collide with user
// variables. skolem() names are rigid constants used by matching.
class NameSupply {
 public:
  std::string fresh() { return "t" + std::to_string(n_++); }
  std::string skolem() { return "!s" + std::to_string(sk_++); }

  // Keeps future fresh() names clear of `name` if it has the t<digits> shape.
  void avoid(const std::string& name) {
    if (name.size() < 2 || name[0] != 't') return;
    std::uint64_t v = 0;
    for (size_t i = 1; i < name.size(); ++i) {
      if (name[i] < '0' || name[i] > '9') return;
      v = v * 10 + std::uint64_t(name[i] - '0');
    }
    if (v >= n_) n_ = v + 1;
  }

 private:
  std::uint64_t n_ = 0;
  std::uint64_t sk_ = 0;
};

}  // namespace evl

#endif
