#include "evl/infer.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "evl/unify.hpp"

namespace evl {

namespace {

// Kahn's algorithm over the quantified set; edge b -> a when b occurs in
// a's kind. Among ready nodes the smallest name wins; a kind cycle falls
// back to name order.
std::vector<std::string> dependency_order(const std::set<std::string>& vars, const KindingEnv& K) {
  std::map<std::string, std::set<std::string>> preds;
  for (const auto& a : vars) {
    preds[a];
    auto it = K.find(a);
    if (it == K.end()) continue;
    for (const auto& b : ftv(it->second))
      if (vars.count(b) && b != a) preds[a].insert(b);
  }
  std::vector<std::string> out;
  std::set<std::string> remaining = vars;
  while (!remaining.empty()) {
    std::string pick;
    for (const auto& a : remaining) {
      bool ready = std::all_of(preds[a].begin(), preds[a].end(),
                               [&](const std::string& b) { return !remaining.count(b); });
      if (ready) {
        pick = a;
        break;
      }
    }
    if (pick.empty()) pick = *remaining.begin();
    out.push_back(pick);
    remaining.erase(pick);
  }
  return out;
}

void avoid_all(NameSupply& names, const KindingEnv& K) {
  for (const auto& [v, k] : K) {
    names.avoid(v);
    for (const auto& f : ftv(k)) names.avoid(f);
  }
}

void avoid_all(NameSupply& names, const PolyType& s) {
  for (const auto& [a, k] : s.prefix) {
    names.avoid(a);
    for (const auto& f : ftv(k)) names.avoid(f);
  }
  for (const auto& f : ftv(s.body)) names.avoid(f);
}

bool is_field_type(const Ty& t) {
  if (as_var(t) || as_base(t)) return true;
  if (auto* a = as_arrow(t)) return is_field_type(a->cod);
  return false;
}

bool record_of_field_types(const std::map<std::string, Ty>& fields) {
  return std::all_of(fields.begin(), fields.end(),
                     [](const auto& f) { return is_field_type(f.second); });
}

Ty final_codomain(const Ty& t) {
  Ty cur = t;
  while (const auto* a = as_arrow(cur)) cur = a->cod;
  return cur;
}

}  // namespace

std::pair<KindingEnv, PolyType> closure(const KindingEnv& K, const TypingEnv& env, const Ty& t) {
  std::set<std::string> quant = eftv(K, t);
  for (const auto& v : eftv(K, env)) quant.erase(v);
  std::vector<std::pair<std::string, Kind>> prefix;
  KindingEnv rest = K;
  for (const auto& a : dependency_order(quant, K)) {
    auto it = K.find(a);
    prefix.emplace_back(a, it == K.end() ? Kind::u() : it->second);
    rest.erase(a);
  }
  return {std::move(rest), PolyType{std::move(prefix), t}};
}

bool generic_instance(const KindingEnv& K, const PolyType& general, const PolyType& specific,
                      Subst* witness) {
  NameSupply names;
  avoid_all(names, K);
  avoid_all(names, general);
  avoid_all(names, specific);

  // Flexible copies of general's quantified variables.
  Subst fresh_map;
  std::vector<std::pair<std::string, std::string>> fresh_of;  // original -> fresh
  for (const auto& [a, k] : general.prefix) {
    std::string b = names.fresh();
    fresh_map[a] = tvar(b);
    fresh_of.emplace_back(a, b);
  }
  KindingEnv work = K;
  for (const auto& [a, k] : general.prefix) {
    const auto* v = as_var(fresh_map.at(a));
    work[v->name] = apply_subst(fresh_map, k);
  }

  // Skolem constants for specific's quantified variables.
  Subst skolem_map;
  for (const auto& [a, k] : specific.prefix) skolem_map[a] = tvar(names.skolem());
  for (const auto& [a, k] : specific.prefix) {
    const auto* v = as_var(skolem_map.at(a));
    work[v->name] = apply_subst(skolem_map, k);
  }

  Ty g_body = apply_subst(fresh_map, general.body);
  Ty s_body = apply_subst(skolem_map, specific.body);

  std::set<std::string> rigid;
  for (const auto& [v, k] : work) rigid.insert(v);
  for (const auto& v : ftv(g_body)) rigid.insert(v);
  for (const auto& v : ftv(s_body)) rigid.insert(v);
  for (const auto& [a, b] : fresh_of) rigid.erase(b);

  try {
    UnifyResult res = unify(work, {{g_body, s_body}}, rigid);
    if (witness) {
      Subst back;  // fresh names read back as the original prefix names
      for (const auto& [a, b] : fresh_of) back[b] = tvar(a);
      witness->clear();
      for (const auto& [a, b] : fresh_of) {
        auto it = res.subst.find(b);
        if (it != res.subst.end()) (*witness)[a] = apply_subst(back, it->second);
      }
    }
    return true;
  } catch (const UnifyError&) {
    return false;
  }
}

bool is_event_type(const Ty& t) {
  const auto* r = as_record(final_codomain(t));
  return r && record_of_field_types(r->fields);
}

bool is_event_type_kinded(const KindingEnv& K, const Ty& t) {
  Ty cod = final_codomain(t);
  if (const auto* r = as_record(cod)) return record_of_field_types(r->fields);
  if (const auto* v = as_var(cod)) {
    auto it = K.find(v->name);
    return it != K.end() && !it->second.universal() && record_of_field_types(*it->second.fields);
  }
  return false;
}

namespace {

struct Inferencer {
  NameSupply& names;

  std::string fresh() { return names.fresh(); }

  UnifyResult unify_ctx(const KindingEnv& K, std::vector<TyPair> eqs, const char* where) {
    try {
      return unify(K, eqs);
    } catch (const UnifyError& e) {
      throw TypeError(std::string(where) + ": " + e.what());
    }
  }

  InferResult wk(const KindingEnv& K, const TypingEnv& env, const Tm& t) {
    if (const auto* c = term_as<Term::Const>(t)) return {K, {}, tbase(c->base)};

    if (const auto* v = term_as<Term::Var>(t)) {
      auto it = env.find(v->name);
      if (it == env.end()) throw TypeError("unbound variable '" + v->name + "'");
      const PolyType& sigma = it->second;
      Subst inst;
      for (const auto& [a, k] : sigma.prefix) inst[a] = tvar(fresh());
      KindingEnv K1 = K;
      for (const auto& [a, k] : sigma.prefix)
        K1[as_var(inst.at(a))->name] = apply_subst(inst, k);
      return {std::move(K1), {}, apply_subst(inst, sigma.body)};
    }

    if (const auto* a = term_as<Term::App>(t)) {
      InferResult r1 = wk(K, env, a->fun);
      InferResult r2 = wk(r1.kinds, apply_subst(r1.subst, env), a->arg);
      std::string alpha = fresh();
      KindingEnv K2 = r2.kinds;
      K2[alpha] = Kind::u();
      UnifyResult u = unify_ctx(
          K2, {{apply_subst(r2.subst, r1.type), tarrow(r2.type, tvar(alpha))}}, "in application");
      return {u.kinds, compose(u.subst, compose(r2.subst, r1.subst)),
              apply_subst(u.subst, tvar(alpha))};
    }

    if (const auto* l = term_as<Term::Abs>(t)) {
      std::string alpha = fresh();
      KindingEnv K1 = K;
      K1[alpha] = Kind::u();
      TypingEnv env1 = env;
      env1.insert_or_assign(l->param, PolyType::mono(tvar(alpha)));
      InferResult r = wk(K1, env1, l->body);
      return {r.kinds, r.subst, tarrow(apply_subst(r.subst, tvar(alpha)), r.type)};
    }

    if (const auto* c = term_as<Term::Cond>(t)) {
      InferResult r1 = wk(K, env, c->guard);
      UnifyResult u1 = unify_ctx(r1.kinds, {{r1.type, ty_bool()}}, "in conditional guard");
      Subst s21 = compose(u1.subst, r1.subst);
      InferResult r2 = wk(u1.kinds, apply_subst(s21, env), c->thn);
      Subst s321 = compose(r2.subst, s21);
      InferResult r3 = wk(r2.kinds, apply_subst(s321, env), c->els);
      UnifyResult u2 = unify_ctx(r3.kinds, {{apply_subst(r3.subst, r2.type), r3.type}},
                                 "in conditional branches");
      return {u2.kinds, compose(u2.subst, compose(r3.subst, s321)),
              apply_subst(u2.subst, apply_subst(r3.subst, r2.type))};
    }

    if (const auto* l = term_as<Term::Let>(t)) return let_like(K, env, l->name, l->bound, l->body, false);
    if (const auto* l = term_as<Term::LetEv>(t)) return let_like(K, env, l->name, l->bound, l->body, true);

    if (const auto* l = term_as<Term::LetRec>(t)) {
      std::string alpha = fresh();
      KindingEnv K0 = K;
      K0[alpha] = Kind::u();
      TypingEnv envf = env;
      envf.insert_or_assign(l->name, PolyType::mono(tvar(alpha)));
      InferResult r1 = wk(K0, envf, l->bound);
      UnifyResult u = unify_ctx(r1.kinds, {{apply_subst(r1.subst, tvar(alpha)), r1.type}},
                                "in letrec binding");
      Subst s21 = compose(u.subst, r1.subst);
      TypingEnv env1 = apply_subst(s21, env);
      auto [K2, sigma] = closure(u.kinds, env1, apply_subst(u.subst, r1.type));
      TypingEnv env2 = env1;
      env2.insert_or_assign(l->name, sigma);
      InferResult r2 = wk(K2, env2, l->body);
      return {r2.kinds, compose(r2.subst, s21), r2.type};
    }

    if (const auto* r = term_as<Term::Record>(t)) {
      KindingEnv Kc = K;
      TypingEnv envc = env;
      Subst s;
      std::vector<std::pair<std::string, Ty>> field_tys;
      for (const auto& [label, value] : r->fields) {
        InferResult ri = wk(Kc, envc, value);
        Kc = ri.kinds;
        envc = apply_subst(ri.subst, envc);
        for (auto& [l2, t2] : field_tys) t2 = apply_subst(ri.subst, t2);
        field_tys.emplace_back(label, ri.type);
        s = compose(ri.subst, s);
      }
      return {std::move(Kc), std::move(s),
              trecord(std::map<std::string, Ty>(field_tys.begin(), field_tys.end()))};
    }

    if (const auto* sel = term_as<Term::Select>(t)) {
      InferResult r1 = wk(K, env, sel->subject);
      std::string a1 = fresh(), a2 = fresh();
      KindingEnv K1 = r1.kinds;
      K1[a1] = Kind::u();
      K1[a2] = Kind::rec({{sel->label, tvar(a1)}});
      UnifyResult u = unify_ctx(K1, {{tvar(a2), r1.type}}, "in selection");
      return {u.kinds, compose(u.subst, r1.subst), apply_subst(u.subst, tvar(a1))};
    }

    const auto* m = term_as<Term::Modify>(t);
    InferResult r1 = wk(K, env, m->subject);
    InferResult r2 = wk(r1.kinds, apply_subst(r1.subst, env), m->repl);
    std::string a1 = fresh(), a2 = fresh();
    KindingEnv K2 = r2.kinds;
    K2[a1] = Kind::u();
    K2[a2] = Kind::rec({{m->label, tvar(a1)}});
    UnifyResult u = unify_ctx(
        K2, {{tvar(a1), r2.type}, {tvar(a2), apply_subst(r2.subst, r1.type)}}, "in modify");
    return {u.kinds, compose(u.subst, compose(r2.subst, r1.subst)),
            apply_subst(u.subst, tvar(a2))};
  }

  InferResult let_like(const KindingEnv& K, const TypingEnv& env, const std::string& name,
                       const Tm& bound, const Tm& body, bool event) {
    InferResult r1 = wk(K, env, bound);
    if (event && !is_event_type_kinded(r1.kinds, r1.type))
      throw TypeError("letEv '" + name + "' binds a non-event type: " + show_type(r1.type));
    TypingEnv env1 = apply_subst(r1.subst, env);
    auto [K1, sigma] = closure(r1.kinds, env1, r1.type);
    TypingEnv env2 = env1;
    env2.insert_or_assign(name, sigma);
    InferResult r2 = wk(K1, env2, body);
    return {r2.kinds, compose(r2.subst, r1.subst), r2.type};
  }
};

}  // namespace

InferResult infer(const KindingEnv& K, const TypingEnv& env, const Tm& term, NameSupply& names) {
  Inferencer inf{names};
  return inf.wk(K, env, term);
}

NameSupply supply_avoiding(const KindingEnv& K, const TypingEnv& env) {
  NameSupply names;
  avoid_all(names, K);
  for (const auto& [x, s] : env) avoid_all(names, s);
  return names;
}

InferResult infer(const KindingEnv& K, const TypingEnv& env, const Tm& term) {
  NameSupply names = supply_avoiding(K, env);
  return infer(K, env, term, names);
}

std::pair<KindingEnv, PolyType> principal(const KindingEnv& K, const TypingEnv& env,
                                          const Tm& term, NameSupply& names) {
  InferResult r = infer(K, env, term, names);
  return closure(r.kinds, apply_subst(r.subst, env), r.type);
}

bool check(const KindingEnv& K, const TypingEnv& env, const Tm& term, const PolyType& scheme) {
  NameSupply names;
  avoid_all(names, K);
  for (const auto& [x, s] : env) avoid_all(names, s);
  avoid_all(names, scheme);
  auto [Kp, principal_scheme] = principal(K, env, term, names);
  return generic_instance(Kp, principal_scheme, scheme);
}

}  // namespace evl
