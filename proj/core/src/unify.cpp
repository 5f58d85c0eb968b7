#include "evl/unify.hpp"

#include <algorithm>

namespace evl {

std::map<std::string, Ty> field_merge(const std::map<std::string, Ty>& f1,
                                      const std::map<std::string, Ty>& f2) {
  std::map<std::string, Ty> out = f2;
  for (auto& [l, t] : f1) out[l] = t;
  return out;
}

namespace {

const std::map<std::string, Ty>* record_view(const Ty& t, std::map<std::string, Ty>& storage) {
  if (auto* r = as_record(t)) return &r->fields;
  if (auto* l = as_list(t)) {
    storage = {{"empty", ty_bool()}, {"head", l->elem}, {"tail", tlist(l->elem)}};
    return &storage;
  }
  return nullptr;
}

struct Uni {
  KindingEnv K;
  std::deque<TyPair> E;
  Subst S;
  const std::set<std::string>& rigid;
  std::vector<UnifyStep>* trace;

  bool is_rigid(const std::string& n) const { return rigid.count(n) > 0; }

  Kind kind_of(const std::string& n) const {
    auto it = K.find(n);
    return it == K.end() ? Kind::u() : it->second;
  }

  [[noreturn]] void fail(const Ty& a, const Ty& b, const char* why) {
    throw UnifyError("cannot unify " + show_type(a) + " with " + show_type(b) + " (" + why + ")");
  }

  void record(const char* rule) {
    if (trace) trace->push_back(UnifyStep{rule, E, K, S});
  }

  void apply(const Subst& sigma) {
    for (auto& [a, b] : E) {
      a = apply_subst(sigma, a);
      b = apply_subst(sigma, b);
    }
    KindingEnv next;
    for (auto& [v, k] : K)
      if (!sigma.count(v)) next.emplace(v, apply_subst(sigma, k));
    K = std::move(next);
    S = compose(sigma, S);
  }

  void prepend(std::vector<TyPair> ps) { E.insert(E.begin(), ps.begin(), ps.end()); }

  // Rules 5/6 plus the List view: flexible record-kinded variable against a
  // record (or list) whose fields must cover the kind.
  bool var_vs_fields(const MonoType::Var* v, const Kind& kv, const Ty& other) {
    if (!v || !kv.fields || is_rigid(v->name)) return false;
    std::map<std::string, Ty> storage;
    const auto* fields = record_view(other, storage);
    if (!fields) return false;
    Ty self = tvar(v->name);
    for (auto& [l, t] : *kv.fields)
      if (!fields->count(l)) fail(self, other, "missing field required by kind");
    if (ftv(other).count(v->name)) fail(self, other, "occurs check");
    std::vector<TyPair> ps;
    for (auto& [l, t] : *kv.fields) ps.emplace_back(t, fields->at(l));
    prepend(std::move(ps));
    apply(Subst{{v->name, other}});
    return true;
  }

  void step(Ty a, Ty b) {
    if (type_eq(a, b)) {
      record("delete");
      return;
    }
    const auto* va = as_var(a);
    const auto* vb = as_var(b);
    Kind ka = va ? kind_of(va->name) : Kind::u();
    Kind kb = vb ? kind_of(vb->name) : Kind::u();

    if (va && !ka.fields && !is_rigid(va->name)) {
      if (ftv(b).count(va->name)) fail(a, b, "occurs check");
      apply(Subst{{va->name, b}});
      record("var-left");
      return;
    }
    if (vb && !kb.fields && !is_rigid(vb->name)) {
      if (ftv(a).count(vb->name)) fail(a, b, "occurs check");
      apply(Subst{{vb->name, a}});
      record("var-right");
      return;
    }
    if (va && vb && ka.fields && kb.fields) {
      bool ra = is_rigid(va->name), rb = is_rigid(vb->name);
      if (ra && rb) fail(a, b, "distinct rigid variables");
      if (!ra && !rb) {
        std::vector<TyPair> ps;
        for (auto& [l, t1] : *ka.fields) {
          auto it = kb.fields->find(l);
          if (it != kb.fields->end()) ps.emplace_back(t1, it->second);
        }
        Kind merged = Kind::rec(field_merge(*ka.fields, *kb.fields));
        prepend(std::move(ps));
        Subst sigma{{va->name, b}};
        apply(sigma);
        K[vb->name] = apply_subst(sigma, merged);
        record("var-var");
        return;
      }
      // One side rigid: its declared kind must already cover the flexible one.
      const auto& flex = ra ? *vb : *va;
      const auto& fflex = ra ? *kb.fields : *ka.fields;
      const auto& frigid = ra ? *ka.fields : *kb.fields;
      std::vector<TyPair> ps;
      for (auto& [l, t] : fflex) {
        auto it = frigid.find(l);
        if (it == frigid.end()) fail(a, b, "rigid variable's kind lacks a required field");
        ps.emplace_back(t, it->second);
      }
      prepend(std::move(ps));
      apply(Subst{{flex.name, ra ? a : b}});
      record("var-var-rigid");
      return;
    }
    if (var_vs_fields(va, ka, b)) {
      record("var-record");
      return;
    }
    if (var_vs_fields(vb, kb, a)) {
      record("record-var");
      return;
    }
    if (as_record(a) && as_record(b)) {
      const auto& f1 = as_record(a)->fields;
      const auto& f2 = as_record(b)->fields;
      if (f1.size() != f2.size()) fail(a, b, "different fields");
      std::vector<TyPair> ps;
      for (auto& [l, t1] : f1) {
        auto it = f2.find(l);
        if (it == f2.end()) fail(a, b, "different fields");
        ps.emplace_back(t1, it->second);
      }
      prepend(std::move(ps));
      record("record-record");
      return;
    }
    if (as_arrow(a) && as_arrow(b)) {
      prepend({{as_arrow(a)->dom, as_arrow(b)->dom}, {as_arrow(a)->cod, as_arrow(b)->cod}});
      record("arrow");
      return;
    }
    if (as_list(a) && as_list(b)) {
      prepend({{as_list(a)->elem, as_list(b)->elem}});
      record("list");
      return;
    }
    fail(a, b, "incompatible shapes");
  }

  UnifyResult run() {
    record("init");
    while (!E.empty()) {
      auto [a, b] = E.front();
      E.pop_front();
      step(a, b);
    }
    return UnifyResult{K, S};
  }
};

}  // namespace

UnifyResult unify(const KindingEnv& kinds, const std::vector<TyPair>& eqs,
                  const std::set<std::string>& rigid) {
  Uni u{kinds, std::deque<TyPair>(eqs.begin(), eqs.end()), {}, rigid, nullptr};
  return u.run();
}

UnifyResult unify_trace(const KindingEnv& kinds, const std::vector<TyPair>& eqs,
                        const std::set<std::string>& rigid, std::vector<UnifyStep>& steps) {
  Uni u{kinds, std::deque<TyPair>(eqs.begin(), eqs.end()), {}, rigid, &steps};
  return u.run();
}

}  // namespace evl
