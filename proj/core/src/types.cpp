#include "evl/types.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace evl {

namespace {
const std::set<std::string> kBaseTypes = {"Bool", "Int", "Float", "String"};
}

bool is_base_type(const std::string& name) { return kBaseTypes.count(name) > 0; }

Ty tvar(std::string name) {
  return std::make_shared<MonoType>(MonoType{MonoType::Var{std::move(name)}});
}
Ty tbase(std::string name) {
  return std::make_shared<MonoType>(MonoType{MonoType::Base{std::move(name)}});
}
Ty tarrow(Ty dom, Ty cod) {
  return std::make_shared<MonoType>(
      MonoType{MonoType::Arrow{std::move(dom), std::move(cod)}});
}
Ty trecord(std::map<std::string, Ty> fields) {
  return std::make_shared<MonoType>(MonoType{MonoType::Rec{std::move(fields)}});
}
Ty tlist(Ty elem) {
  return std::make_shared<MonoType>(MonoType{MonoType::List{std::move(elem)}});
}

Ty ty_bool() {
  static const Ty t = tbase("Bool");
  return t;
}
Ty ty_int() {
  static const Ty t = tbase("Int");
  return t;
}
Ty ty_float() {
  static const Ty t = tbase("Float");
  return t;
}
Ty ty_string() {
  static const Ty t = tbase("String");
  return t;
}

const MonoType::Var* as_var(const Ty& t) { return std::get_if<MonoType::Var>(&t->v); }
const MonoType::Base* as_base(const Ty& t) { return std::get_if<MonoType::Base>(&t->v); }
const MonoType::Arrow* as_arrow(const Ty& t) { return std::get_if<MonoType::Arrow>(&t->v); }
const MonoType::Rec* as_record(const Ty& t) { return std::get_if<MonoType::Rec>(&t->v); }
const MonoType::List* as_list(const Ty& t) { return std::get_if<MonoType::List>(&t->v); }

bool type_eq(const Ty& a, const Ty& b) {
  if (a == b) return true;
  if (a->v.index() != b->v.index()) return false;
  if (auto* va = as_var(a)) return va->name == as_var(b)->name;
  if (auto* ba = as_base(a)) return ba->name == as_base(b)->name;
  if (auto* aa = as_arrow(a)) {
    auto* ab = as_arrow(b);
    return type_eq(aa->dom, ab->dom) && type_eq(aa->cod, ab->cod);
  }
  if (auto* ra = as_record(a)) {
    auto* rb = as_record(b);
    if (ra->fields.size() != rb->fields.size()) return false;
    auto it = rb->fields.begin();
    for (const auto& [l, t] : ra->fields) {
      if (it->first != l || !type_eq(t, it->second)) return false;
      ++it;
    }
    return true;
  }
  auto* la = as_list(a);
  return type_eq(la->elem, as_list(b)->elem);
}

bool kind_eq(const Kind& a, const Kind& b) {
  if (a.universal() != b.universal()) return false;
  if (a.universal()) return true;
  if (a.fields->size() != b.fields->size()) return false;
  auto it = b.fields->begin();
  for (const auto& [l, t] : *a.fields) {
    if (it->first != l || !type_eq(t, it->second)) return false;
    ++it;
  }
  return true;
}

namespace {
void ftv_into(const Ty& t, std::set<std::string>& out) {
  if (auto* v = as_var(t)) {
    out.insert(v->name);
  } else if (auto* a = as_arrow(t)) {
    ftv_into(a->dom, out);
    ftv_into(a->cod, out);
  } else if (auto* r = as_record(t)) {
    for (const auto& [l, ft] : r->fields) ftv_into(ft, out);
  } else if (auto* lst = as_list(t)) {
    ftv_into(lst->elem, out);
  }
}
}  // namespace

std::set<std::string> ftv(const Ty& t) {
  std::set<std::string> out;
  ftv_into(t, out);
  return out;
}

std::set<std::string> ftv(const Kind& k) {
  std::set<std::string> out;
  if (!k.universal())
    for (const auto& [l, t] : *k.fields) ftv_into(t, out);
  return out;
}

std::set<std::string> ftv(const PolyType& s) {
  // A prefix variable is bound in its own kind's scope as well as in
  // every later kind and the body (kinds may be cyclic).
  std::set<std::string> out = ftv(s.body);
  for (const auto& [a, k] : s.prefix) {
    auto kv = ftv(k);
    out.insert(kv.begin(), kv.end());
  }
  for (const auto& [a, k] : s.prefix) out.erase(a);
  return out;
}

std::set<std::string> ftv(const TypingEnv& env) {
  std::set<std::string> out;
  for (const auto& [x, s] : env) {
    auto sv = ftv(s);
    out.insert(sv.begin(), sv.end());
  }
  return out;
}

namespace {
std::set<std::string> eftv_close(const KindingEnv& K, std::set<std::string> s) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [b, k] : K) {
      auto kv = ftv(k);
      bool b_in = s.count(b) > 0;
      if (b_in) {
        for (const auto& v : kv)
          if (s.insert(v).second) changed = true;
      } else {
        for (const auto& v : kv)
          if (s.count(v)) {
            s.insert(b);
            changed = true;
            break;
          }
      }
    }
  }
  return s;
}
}  // namespace

std::set<std::string> eftv(const KindingEnv& K, const Ty& t) {
  return eftv_close(K, ftv(t));
}
std::set<std::string> eftv(const KindingEnv& K, const PolyType& s) {
  return eftv_close(K, ftv(s));
}
std::set<std::string> eftv(const KindingEnv& K, const TypingEnv& env) {
  return eftv_close(K, ftv(env));
}

Ty apply_subst(const Subst& s, const Ty& t) {
  if (s.empty()) return t;
  if (auto* v = as_var(t)) {
    auto it = s.find(v->name);
    return it == s.end() ? t : it->second;
  }
  if (auto* a = as_arrow(t)) {
    Ty d = apply_subst(s, a->dom), c = apply_subst(s, a->cod);
    if (d == a->dom && c == a->cod) return t;
    return tarrow(std::move(d), std::move(c));
  }
  if (auto* r = as_record(t)) {
    std::map<std::string, Ty> fs;
    bool same = true;
    for (const auto& [l, ft] : r->fields) {
      Ty nt = apply_subst(s, ft);
      same = same && nt == ft;
      fs.emplace(l, std::move(nt));
    }
    return same ? t : trecord(std::move(fs));
  }
  if (auto* lst = as_list(t)) {
    Ty e = apply_subst(s, lst->elem);
    return e == lst->elem ? t : tlist(std::move(e));
  }
  return t;
}

Kind apply_subst(const Subst& s, const Kind& k) {
  if (k.universal() || s.empty()) return k;
  std::map<std::string, Ty> fs;
  for (const auto& [l, t] : *k.fields) fs.emplace(l, apply_subst(s, t));
  return Kind::rec(std::move(fs));
}

PolyType apply_subst(const Subst& s, const PolyType& p) {
  if (p.prefix.empty()) return PolyType::mono(apply_subst(s, p.body));
  // Avoid capture: rename any bound variable that clashes with the
  // substitution's domain or the free variables of its range.
  std::set<std::string> avoid;
  for (const auto& [a, t] : s) {
    avoid.insert(a);
    ftv_into(t, avoid);
  }
  std::set<std::string> pfree = ftv(p);
  Subst rename;
  std::vector<std::pair<std::string, Kind>> prefix = p.prefix;
  for (auto& [a, k] : prefix) {
    if (avoid.count(a)) {
      std::string base = a;
      int i = 0;
      std::string fresh;
      do {
        fresh = base + "'" + (i ? std::to_string(i) : "");
        ++i;
      } while (avoid.count(fresh) || pfree.count(fresh));
      rename[a] = tvar(fresh);
      avoid.insert(fresh);
      a = fresh;
    }
  }
  PolyType out;
  out.prefix = std::move(prefix);
  for (auto& [a, k] : out.prefix) k = apply_subst(s, apply_subst(rename, k));
  out.body = apply_subst(s, apply_subst(rename, p.body));
  return out;
}

TypingEnv apply_subst(const Subst& s, const TypingEnv& env) {
  if (s.empty()) return env;
  TypingEnv out;
  for (const auto& [x, p] : env) out.emplace(x, apply_subst(s, p));
  return out;
}

KindingEnv apply_subst(const Subst& s, const KindingEnv& K) {
  if (s.empty()) return K;
  KindingEnv out;
  for (const auto& [a, k] : K) out.emplace(a, apply_subst(s, k));
  return out;
}

Subst compose(const Subst& s2, const Subst& s1) {
  Subst out;
  for (const auto& [a, t] : s1) out.emplace(a, apply_subst(s2, t));
  for (const auto& [a, t] : s2) out.emplace(a, t);  // no-op where s1 bound a
  return out;
}

bool well_formed(const KindingEnv& K, const Ty& t) {
  for (const auto& v : ftv(t))
    if (!K.count(v)) return false;
  return true;
}

bool well_formed(const KindingEnv& K, const Kind& k) {
  for (const auto& v : ftv(k))
    if (!K.count(v)) return false;
  return true;
}

bool well_formed(const KindingEnv& K) {
  for (const auto& [a, k] : K)
    if (!well_formed(K, k)) return false;
  return true;
}

bool has_kind(const KindingEnv& K, const Ty& t, const Kind& k) {
  if (k.universal()) return well_formed(K, t);
  if (!well_formed(K, t) || !well_formed(K, k)) return false;
  if (auto* v = as_var(t)) {
    auto it = K.find(v->name);
    if (it == K.end() || it->second.universal()) return false;
    const auto& have = *it->second.fields;
    for (const auto& [l, want] : *k.fields) {
      auto f = have.find(l);
      if (f == have.end() || !type_eq(f->second, want)) return false;
    }
    return true;
  }
  if (auto* r = as_record(t)) {
    for (const auto& [l, want] : *k.fields) {
      auto f = r->fields.find(l);
      if (f == r->fields.end() || !type_eq(f->second, want)) return false;
    }
    return true;
  }
  if (auto* lst = as_list(t)) {
    // List t observes as {empty: Bool, head: t, tail: List t}.
    for (const auto& [l, want] : *k.fields) {
      if (l == "empty") {
        if (!type_eq(want, ty_bool())) return false;
      } else if (l == "head") {
        if (!type_eq(want, lst->elem)) return false;
      } else if (l == "tail") {
        if (!type_eq(want, t)) return false;
      } else {
        return false;
      }
    }
    return true;
  }
  return false;
}

bool subst_respects(const KindingEnv& K1, const Subst& S, const KindingEnv& K2) {
  for (const auto& [a, k] : K2) {
    Ty image = apply_subst(S, tvar(a));
    if (!has_kind(K1, image, apply_subst(S, k))) return false;
  }
  return true;
}

namespace {
bool alpha_equal_ty(const Ty& a, const Ty& b,
                    const std::map<std::string, std::string>& m) {
  if (a->v.index() != b->v.index()) return false;
  if (auto* va = as_var(a)) {
    auto it = m.find(va->name);
    const std::string& want = it == m.end() ? va->name : it->second;
    return want == as_var(b)->name;
  }
  if (auto* ba = as_base(a)) return ba->name == as_base(b)->name;
  if (auto* aa = as_arrow(a)) {
    auto* ab = as_arrow(b);
    return alpha_equal_ty(aa->dom, ab->dom, m) && alpha_equal_ty(aa->cod, ab->cod, m);
  }
  if (auto* ra = as_record(a)) {
    auto* rb = as_record(b);
    if (ra->fields.size() != rb->fields.size()) return false;
    auto it = rb->fields.begin();
    for (const auto& [l, t] : ra->fields) {
      if (it->first != l || !alpha_equal_ty(t, it->second, m)) return false;
      ++it;
    }
    return true;
  }
  return alpha_equal_ty(as_list(a)->elem, as_list(b)->elem, m);
}

bool alpha_equal_kind(const Kind& a, const Kind& b,
                      const std::map<std::string, std::string>& m) {
  if (a.universal() != b.universal()) return false;
  if (a.universal()) return true;
  if (a.fields->size() != b.fields->size()) return false;
  auto it = b.fields->begin();
  for (const auto& [l, t] : *a.fields) {
    if (it->first != l || !alpha_equal_ty(t, it->second, m)) return false;
    ++it;
  }
  return true;
}
}  // namespace

bool alpha_equal(const PolyType& a, const PolyType& b) {
  if (a.prefix.size() != b.prefix.size()) return false;
  std::map<std::string, std::string> m;
  for (size_t i = 0; i < a.prefix.size(); ++i)
    m[a.prefix[i].first] = b.prefix[i].first;
  for (size_t i = 0; i < a.prefix.size(); ++i)
    if (!alpha_equal_kind(a.prefix[i].second, b.prefix[i].second, m)) return false;
  return alpha_equal_ty(a.body, b.body, m);
}

bool alpha_equal_any_order(const PolyType& a, const PolyType& b) {
  if (a.prefix.size() != b.prefix.size()) return false;
  if (alpha_equal(a, b)) return true;
  std::vector<size_t> idx(b.prefix.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end());
  do {
    PolyType bp;
    bp.body = b.body;
    for (size_t i : idx) bp.prefix.push_back(b.prefix[i]);
    if (alpha_equal(a, bp)) return true;
  } while (std::next_permutation(idx.begin(), idx.end()));
  return false;
}

namespace {
bool arrow_needs_parens(const Ty& t) { return as_arrow(t) != nullptr; }
}  // namespace

std::string show_type(const Ty& t) {
  if (auto* v = as_var(t)) return v->name;
  if (auto* b = as_base(t)) return b->name;
  if (auto* a = as_arrow(t)) {
    std::string d = show_type(a->dom);
    if (arrow_needs_parens(a->dom)) d = "(" + d + ")";
    return d + " -> " + show_type(a->cod);
  }
  if (auto* r = as_record(t)) {
    std::string out = "{";
    bool first = true;
    for (const auto& [l, ft] : r->fields) {
      if (!first) out += ", ";
      first = false;
      out += l + ": " + show_type(ft);
    }
    return out + "}";
  }
  auto* lst = as_list(t);
  const Ty& e = lst->elem;
  std::string es = show_type(e);
  if (as_arrow(e) || as_list(e)) es = "(" + es + ")";
  return "List " + es;
}

std::string show_kind(const Kind& k) {
  if (k.universal()) return "U";
  std::string out = "{{";
  bool first = true;
  for (const auto& [l, t] : *k.fields) {
    if (!first) out += ", ";
    first = false;
    out += l + ": " + show_type(t);
  }
  return out + "}}";
}

std::string show_scheme(const PolyType& s) {
  std::string out;
  for (const auto& [a, k] : s.prefix)
    out += "forall " + a + "::" + show_kind(k) + ". ";
  return out + show_type(s.body);
}

std::string show_kinding_env(const KindingEnv& K) {
  std::string out = "{";
  bool first = true;
  for (const auto& [a, k] : K) {
    if (!first) out += ", ";
    first = false;
    out += a + " :: " + show_kind(k);
  }
  return out + "}";
}

std::string show_subst(const Subst& s) {
  std::string out = "[";
  bool first = true;
  for (const auto& [a, t] : s) {
    if (!first) out += ", ";
    first = false;
    out += show_type(t) + "/" + a;
  }
  return out + "]";
}

}  // namespace evl
