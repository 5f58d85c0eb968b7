#include "evl/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "evl/pretty.hpp"

namespace evl {

namespace {

const std::map<std::string, int> kPrimArity = {{"+", 2},  {"-", 2},   {"*", 2},  {"/", 2},
                                               {">", 2},  {"<", 2},   {"==", 2}, {"and", 2},
                                               {"or", 2}, {"nil", 0}, {"cons", 2}};

bool free_in(const Tm& t, const std::string& name) {
  if (term_as<Term::Const>(t)) return false;
  if (const auto* v = term_as<Term::Var>(t)) return v->name == name;
  if (const auto* a = term_as<Term::App>(t)) return free_in(a->fun, name) || free_in(a->arg, name);
  if (const auto* l = term_as<Term::Abs>(t)) return l->param != name && free_in(l->body, name);
  if (const auto* c = term_as<Term::Cond>(t))
    return free_in(c->guard, name) || free_in(c->thn, name) || free_in(c->els, name);
  if (const auto* l = term_as<Term::Let>(t))
    return free_in(l->bound, name) || (l->name != name && free_in(l->body, name));
  if (const auto* l = term_as<Term::LetEv>(t))
    return free_in(l->bound, name) || (l->name != name && free_in(l->body, name));
  if (const auto* l = term_as<Term::LetRec>(t))
    return l->name != name && (free_in(l->bound, name) || free_in(l->body, name));
  if (const auto* r = term_as<Term::Record>(t)) {
    for (const auto& [lab, val] : r->fields)
      if (free_in(val, name)) return true;
    return false;
  }
  if (const auto* s = term_as<Term::Select>(t)) return free_in(s->subject, name);
  const auto* m = term_as<Term::Modify>(t);
  return free_in(m->subject, name) || free_in(m->repl, name);
}

struct Spine {
  std::string op;
  std::vector<Tm> args;
};

std::optional<Spine> prim_spine(const Tm& t, const EvalOptions& opts) {
  std::vector<Tm> args;
  Tm cur = t;
  while (const auto* a = term_as<Term::App>(cur)) {
    args.push_back(a->arg);
    cur = a->fun;
  }
  const auto* v = term_as<Term::Var>(cur);
  if (!v || !is_primitive(v->name, opts)) return std::nullopt;
  if ((int)args.size() > primitive_arity(v->name)) return std::nullopt;
  std::reverse(args.begin(), args.end());
  return Spine{v->name, std::move(args)};
}

}  // namespace

bool is_primitive(const std::string& name, const EvalOptions& opts) {
  if (!opts.prelude) return false;
  if (!kPrimArity.count(name)) return false;
  if (opts.mode == Mode::Core && (name == "nil" || name == "cons")) return false;
  return true;
}

int primitive_arity(const std::string& name) {
  auto it = kPrimArity.find(name);
  return it == kPrimArity.end() ? -1 : it->second;
}

bool is_value(const Tm& t, const EvalOptions& opts) {
  if (term_as<Term::Const>(t) || term_as<Term::Abs>(t)) return true;
  if (const auto* r = term_as<Term::Record>(t))
    return std::all_of(r->fields.begin(), r->fields.end(),
                       [&](const auto& f) { return is_value(f.second, opts); });
  if (term_as<Term::Var>(t) || term_as<Term::App>(t)) {
    auto sp = prim_spine(t, opts);
    return sp && (int)sp->args.size() < primitive_arity(sp->op) &&
           std::all_of(sp->args.begin(), sp->args.end(),
                       [&](const Tm& a) { return is_value(a, opts); });
  }
  return false;
}

Tm subst_term(const std::string& name, const Tm& replacement, const Tm& body) {
  std::set<std::string> fvR;
  for (const auto& v : free_vars(replacement)) fvR.insert(v);

  struct Go {
    const std::string& name;
    const Tm& repl;
    const std::set<std::string>& fvR;

    // Picks a binder name clear of the replacement's free variables, the
    // substituted name, and anything free in the body.
    std::string rename(const std::string& p, const Tm& b) const {
      std::set<std::string> avoid = fvR;
      avoid.insert(name);
      for (const auto& v : free_vars(b)) avoid.insert(v);
      std::string q = p;
      do q += '\'';
      while (avoid.count(q));
      return q;
    }

    Tm go(const Tm& t) const {
      if (!free_in(t, name)) return t;
      if (const auto* v = term_as<Term::Var>(t)) return v->name == name ? repl : t;
      if (const auto* a = term_as<Term::App>(t)) return mk_app(go(a->fun), go(a->arg));
      if (const auto* l = term_as<Term::Abs>(t)) {
        std::string p = l->param;
        Tm b = l->body;
        if (fvR.count(p)) {
          std::string q = rename(p, b);
          b = subst_term(p, mk_var(q), b);
          p = q;
        }
        return mk_abs(p, go(b));
      }
      if (const auto* c = term_as<Term::Cond>(t))
        return mk_cond(go(c->guard), go(c->thn), go(c->els));
      if (const auto* l = term_as<Term::Let>(t))
        return let_like(l->name, l->bound, l->body, mk_let);
      if (const auto* l = term_as<Term::LetEv>(t))
        return let_like(l->name, l->bound, l->body, mk_letev);
      if (const auto* l = term_as<Term::LetRec>(t)) {
        // letrec binds its name in both subterms.
        std::string p = l->name;
        Tm bound = l->bound, b = l->body;
        if (fvR.count(p)) {
          std::string q = rename(p, mk_app(bound, b));
          bound = subst_term(p, mk_var(q), bound);
          b = subst_term(p, mk_var(q), b);
          p = q;
        }
        return mk_letrec(p, go(bound), go(b));
      }
      if (const auto* r = term_as<Term::Record>(t)) {
        auto fields = r->fields;
        for (auto& [lab, val] : fields) val = go(val);
        return mk_record(std::move(fields));
      }
      if (const auto* s = term_as<Term::Select>(t)) return mk_select(go(s->subject), s->label);
      const auto* m = term_as<Term::Modify>(t);
      return mk_modify(go(m->subject), m->label, go(m->repl));
    }

    Tm let_like(const std::string& lname, const Tm& lbound, const Tm& lbody,
                Tm (*mk)(std::string, Tm, Tm)) const {
      Tm bound = go(lbound);
      if (lname == name) return mk(lname, bound, lbody);
      std::string p = lname;
      Tm b = lbody;
      if (fvR.count(p)) {
        std::string q = rename(p, b);
        b = subst_term(p, mk_var(q), b);
        p = q;
      }
      return mk(p, bound, go(b));
    }
  };

  return Go{name, replacement, fvR}.go(body);
}

Decomposition decompose(const Tm& t, const EvalOptions& opts) {
  auto identity = [](const Tm& h) { return h; };
  if (is_value(t, opts)) return {Decomposition::Kind::Value, nullptr, identity};

  auto redex = [&](const Tm& focus) {
    return Decomposition{Decomposition::Kind::Redex, focus, identity};
  };
  auto stuck = [&](const Tm& focus) {
    return Decomposition{Decomposition::Kind::Stuck, focus, identity};
  };
  auto under = [&](const Tm& sub, std::function<Tm(const Tm&)> wrap) {
    Decomposition d = decompose(sub, opts);
    return Decomposition{d.kind, d.focus,
                         [inner = std::move(d.plug), wrap = std::move(wrap)](const Tm& h) {
                           return wrap(inner(h));
                         }};
  };

  if (const auto* v = term_as<Term::Var>(t)) {
    if (is_primitive(v->name, opts) && primitive_arity(v->name) == 0) return redex(t);
    return stuck(t);
  }
  if (const auto* a = term_as<Term::App>(t)) {
    if (!is_value(a->fun, opts))
      return under(a->fun, [arg = a->arg](const Tm& h) { return mk_app(h, arg); });
    if (!is_value(a->arg, opts))
      return under(a->arg, [fun = a->fun](const Tm& h) { return mk_app(fun, h); });
    if (term_as<Term::Abs>(a->fun)) return redex(t);
    if (auto sp = prim_spine(t, opts); sp && (int)sp->args.size() == primitive_arity(sp->op))
      return redex(t);
    return stuck(t);
  }
  if (const auto* c = term_as<Term::Cond>(t)) {
    if (!is_value(c->guard, opts))
      return under(c->guard, [thn = c->thn, els = c->els](const Tm& h) {
        return mk_cond(h, thn, els);
      });
    const auto* k = term_as<Term::Const>(c->guard);
    if (k && std::holds_alternative<bool>(k->lit)) return redex(t);
    return stuck(t);
  }
  if (const auto* l = term_as<Term::Let>(t)) {
    if (!is_value(l->bound, opts))
      return under(l->bound, [name = l->name, body = l->body](const Tm& h) {
        return mk_let(name, h, body);
      });
    return redex(t);
  }
  if (const auto* l = term_as<Term::LetEv>(t)) {
    if (!is_value(l->bound, opts))
      return under(l->bound, [name = l->name, body = l->body](const Tm& h) {
        return mk_letev(name, h, body);
      });
    return redex(t);
  }
  if (const auto* l = term_as<Term::LetRec>(t)) {
    if (!is_value(l->bound, opts))
      return under(l->bound, [name = l->name, body = l->body](const Tm& h) {
        return mk_letrec(name, h, body);
      });
    return redex(t);
  }
  if (const auto* r = term_as<Term::Record>(t)) {
    for (size_t i = 0; i < r->fields.size(); ++i) {
      if (is_value(r->fields[i].second, opts)) continue;
      return under(r->fields[i].second, [fields = r->fields, i](const Tm& h) {
        auto fs = fields;
        fs[i].second = h;
        return mk_record(std::move(fs));
      });
    }
    return stuck(t);  // unreachable: a record of values is a value
  }
  if (const auto* s = term_as<Term::Select>(t)) {
    if (!is_value(s->subject, opts))
      return under(s->subject, [lab = s->label](const Tm& h) { return mk_select(h, lab); });
    const auto* rec = term_as<Term::Record>(s->subject);
    if (rec && std::any_of(rec->fields.begin(), rec->fields.end(),
                           [&](const auto& f) { return f.first == s->label; }))
      return redex(t);
    return stuck(t);
  }
  const auto* m = term_as<Term::Modify>(t);
  if (!is_value(m->subject, opts))
    return under(m->subject, [lab = m->label, repl = m->repl](const Tm& h) {
      return mk_modify(h, lab, repl);
    });
  if (!is_value(m->repl, opts))
    return under(m->repl, [subject = m->subject, lab = m->label](const Tm& h) {
      return mk_modify(subject, lab, h);
    });
  const auto* rec = term_as<Term::Record>(m->subject);
  if (rec && std::any_of(rec->fields.begin(), rec->fields.end(),
                         [&](const auto& f) { return f.first == m->label; }))
    return redex(t);
  return stuck(t);
}

Tm contract(const Tm& t, const EvalOptions& opts) {
  if (const auto* a = term_as<Term::App>(t)) {
    if (const auto* l = term_as<Term::Abs>(a->fun)) return subst_term(l->param, a->arg, l->body);
    auto sp = prim_spine(t, opts);
    return apply_primitive(sp->op, sp->args);
  }
  if (const auto* v = term_as<Term::Var>(t)) return apply_primitive(v->name, {});
  if (const auto* c = term_as<Term::Cond>(t)) {
    const auto* k = term_as<Term::Const>(c->guard);
    return std::get<bool>(k->lit) ? c->thn : c->els;
  }
  if (const auto* l = term_as<Term::Let>(t)) return subst_term(l->name, l->bound, l->body);
  if (const auto* l = term_as<Term::LetEv>(t)) return subst_term(l->name, l->bound, l->body);
  if (const auto* l = term_as<Term::LetRec>(t)) {
    // One unfolding: recursive occurrences re-enter as letrec x = v in x.
    Tm unfolded = subst_term(l->name, mk_letrec(l->name, l->bound, mk_var(l->name)), l->bound);
    return subst_term(l->name, unfolded, l->body);
  }
  if (const auto* s = term_as<Term::Select>(t)) {
    const auto* rec = term_as<Term::Record>(s->subject);
    for (const auto& [lab, val] : rec->fields)
      if (lab == s->label) return val;
  }
  if (const auto* m = term_as<Term::Modify>(t)) {
    const auto* rec = term_as<Term::Record>(m->subject);
    auto fields = rec->fields;
    for (auto& [lab, val] : fields)
      if (lab == m->label) val = m->repl;
    return mk_record(std::move(fields));
  }
  throw StuckError("contract applied to a non-redex: " + pretty_term(t));
}

namespace {

// Reason names for the stuck classes, keyed off the focus shape.
std::string stuck_reason(const Tm& focus) {
  if (term_as<Term::Var>(focus)) return "free-variable";
  if (term_as<Term::App>(focus)) return "apply-non-function";
  if (term_as<Term::Cond>(focus)) return "cond-non-bool";
  if (term_as<Term::Select>(focus)) return "select-missing-label";
  if (term_as<Term::Modify>(focus)) return "modify-missing-label";
  return "stuck";
}

}  // namespace

std::optional<Tm> step(const Tm& t, const EvalOptions& opts) {
  Decomposition d = decompose(t, opts);
  if (d.kind == Decomposition::Kind::Value) return std::nullopt;
  if (d.kind == Decomposition::Kind::Stuck)
    throw StuckError(stuck_reason(d.focus) + ": stuck at " + pretty_term(d.focus));
  return d.plug(contract(d.focus, opts));
}

Tm eval(const Tm& t, const EvalOptions& opts) {
  Tm cur = t;
  for (std::uint64_t used = 0;; ++used) {
    std::optional<Tm> next = step(cur, opts);
    if (!next) return cur;
    if (used >= opts.fuel)
      throw FuelExhausted("no value after " + std::to_string(opts.fuel) +
                          " steps; last term: " + pretty_term(cur));
    cur = *next;
  }
}

std::vector<Tm> trace(const Tm& t, const EvalOptions& opts) {
  std::vector<Tm> out{t};
  Tm cur = t;
  for (std::uint64_t used = 0;; ++used) {
    std::optional<Tm> next = step(cur, opts);
    if (!next) return out;
    if (used >= opts.fuel)
      throw FuelExhausted("no value after " + std::to_string(opts.fuel) +
                          " steps; last term: " + pretty_term(cur));
    cur = *next;
    out.push_back(cur);
  }
}

namespace {

[[noreturn]] void prim_stuck(const std::string& op, const std::string& why) {
  std::string reason = why == "integer division by zero" ? "int-div-by-zero"
                                                         : "primitive-type-error";
  throw StuckError(reason + ": primitive '" + op + "': " + why);
}

std::optional<bool> term_values_equal(const Tm& a, const Tm& b) {
  const auto* ca = term_as<Term::Const>(a);
  const auto* cb = term_as<Term::Const>(b);
  if (ca && cb) {
    if (ca->base != cb->base) return std::nullopt;
    if (const auto* da = std::get_if<double>(&ca->lit))
      return *da == std::get<double>(cb->lit);  // IEEE: nan != nan
    return ca->lit == cb->lit;
  }
  const auto* ra = term_as<Term::Record>(a);
  const auto* rb = term_as<Term::Record>(b);
  if (ra && rb) {
    if (ra->fields.size() != rb->fields.size()) return std::nullopt;
    for (const auto& [lab, va] : ra->fields) {
      const Tm* vb = nullptr;
      for (const auto& [lab2, v2] : rb->fields)
        if (lab2 == lab) vb = &v2;
      if (!vb) return std::nullopt;
      auto sub = term_values_equal(va, *vb);
      if (!sub) return std::nullopt;
      if (!*sub) return false;
    }
    return true;
  }
  return std::nullopt;  // functions and partial applications don't compare
}

std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
  return std::int64_t(std::uint64_t(a) + std::uint64_t(b));
}
std::int64_t wrap_sub(std::int64_t a, std::int64_t b) {
  return std::int64_t(std::uint64_t(a) - std::uint64_t(b));
}
std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
  return std::int64_t(std::uint64_t(a) * std::uint64_t(b));
}

}  // namespace

Tm apply_primitive(const std::string& op, const std::vector<Tm>& args) {
  auto cst = [](const Tm& t) { return term_as<Term::Const>(t); };

  if (op == "nil") return mk_record({{"empty", mk_bool(true)}});
  if (op == "cons") return mk_record({{"empty", mk_bool(false)}, {"head", args[0]}, {"tail", args[1]}});

  if (op == "==") {
    auto r = term_values_equal(args[0], args[1]);
    if (!r) prim_stuck(op, "arguments do not compare");
    return mk_bool(*r);
  }

  const auto* a = cst(args[0]);
  const auto* b = cst(args[1]);
  if (op == "and" || op == "or") {
    if (!a || !b || a->base != "Bool" || b->base != "Bool") prim_stuck(op, "expects two Bool");
    bool x = std::get<bool>(a->lit), y = std::get<bool>(b->lit);
    return mk_bool(op == "and" ? x && y : x || y);
  }
  if (op == ">" || op == "<") {
    if (!a || !b || a->base != "Float" || b->base != "Float") prim_stuck(op, "expects two Float");
    double x = std::get<double>(a->lit), y = std::get<double>(b->lit);
    return mk_bool(op == ">" ? x > y : x < y);
  }
  if (op == "+" || op == "-" || op == "*" || op == "/") {
    if (a && b && a->base == "Int" && b->base == "Int") {
      std::int64_t x = std::get<std::int64_t>(a->lit), y = std::get<std::int64_t>(b->lit);
      if (op == "+") return mk_int(wrap_add(x, y));
      if (op == "-") return mk_int(wrap_sub(x, y));
      if (op == "*") return mk_int(wrap_mul(x, y));
      if (y == 0) prim_stuck(op, "integer division by zero");
      if (y == -1 && x == std::numeric_limits<std::int64_t>::min()) return mk_int(x);
      return mk_int(x / y);
    }
    if (a && b && a->base == "Float" && b->base == "Float") {
      double x = std::get<double>(a->lit), y = std::get<double>(b->lit);
      if (op == "+") return mk_float(x + y);
      if (op == "-") return mk_float(x - y);
      if (op == "*") return mk_float(x * y);
      return mk_float(x / y);  // IEEE division by zero
    }
    prim_stuck(op, "expects two Int or two Float");
  }
  prim_stuck(op, "unknown primitive");
}

// --- big-step evaluator ---

EnvPtr env_bind(EnvPtr env, std::string name, Val v) {
  return std::make_shared<const EnvNode>(EnvNode{std::move(name), std::move(v), std::move(env)});
}

const Val* env_lookup(const EnvPtr& env, const std::string& name) {
  for (const EnvNode* n = env.get(); n; n = n->next.get())
    if (n->name == name) return &n->val;
  return nullptr;
}

Val vconst(Lit lit, std::string base) {
  return std::make_shared<const Value>(Value{Value::ConstV{std::move(lit), std::move(base)}});
}
Val vrecord(std::vector<std::pair<std::string, Val>> fields) {
  return std::make_shared<const Value>(Value{Value::RecordV{std::move(fields)}});
}
const Value::ConstV* val_as_const(const Val& v) { return std::get_if<Value::ConstV>(&v->v); }
const Value::RecordV* val_as_record(const Val& v) { return std::get_if<Value::RecordV>(&v->v); }

namespace {

std::optional<bool> vals_equal(const Val& a, const Val& b) {
  const auto* ca = val_as_const(a);
  const auto* cb = val_as_const(b);
  if (ca && cb) {
    if (ca->base != cb->base) return std::nullopt;
    if (const auto* da = std::get_if<double>(&ca->lit)) return *da == std::get<double>(cb->lit);
    return ca->lit == cb->lit;
  }
  const auto* ra = val_as_record(a);
  const auto* rb = val_as_record(b);
  if (ra && rb) {
    if (ra->fields.size() != rb->fields.size()) return std::nullopt;
    for (const auto& [lab, va] : ra->fields) {
      const Val* vb = nullptr;
      for (const auto& [lab2, v2] : rb->fields)
        if (lab2 == lab) vb = &v2;
      if (!vb) return std::nullopt;
      auto sub = vals_equal(va, *vb);
      if (!sub) return std::nullopt;
      if (!*sub) return false;
    }
    return true;
  }
  return std::nullopt;
}

struct BigEval {
  const EvalOptions& opts;
  std::uint64_t fuel;

  void tick() {
    if (fuel == 0) throw FuelExhausted("evaluation budget exhausted");
    --fuel;
  }

  Val prim_delta(const std::string& op, const std::vector<Val>& args) {
    if (op == "nil") return vrecord({{"empty", vconst(true, "Bool")}});
    if (op == "cons")
      return vrecord({{"empty", vconst(false, "Bool")}, {"head", args[0]}, {"tail", args[1]}});
    if (op == "==") {
      auto r = vals_equal(args[0], args[1]);
      if (!r) prim_stuck(op, "arguments do not compare");
      return vconst(*r, "Bool");
    }
    const auto* a = val_as_const(args[0]);
    const auto* b = val_as_const(args[1]);
    if (op == "and" || op == "or") {
      if (!a || !b || a->base != "Bool" || b->base != "Bool") prim_stuck(op, "expects two Bool");
      bool x = std::get<bool>(a->lit), y = std::get<bool>(b->lit);
      return vconst(op == "and" ? x && y : x || y, "Bool");
    }
    if (op == ">" || op == "<") {
      if (!a || !b || a->base != "Float" || b->base != "Float") prim_stuck(op, "expects two Float");
      double x = std::get<double>(a->lit), y = std::get<double>(b->lit);
      return vconst(op == ">" ? x > y : x < y, "Bool");
    }
    if (a && b && a->base == "Int" && b->base == "Int") {
      std::int64_t x = std::get<std::int64_t>(a->lit), y = std::get<std::int64_t>(b->lit);
      if (op == "+") return vconst(wrap_add(x, y), "Int");
      if (op == "-") return vconst(wrap_sub(x, y), "Int");
      if (op == "*") return vconst(wrap_mul(x, y), "Int");
      if (y == 0) prim_stuck(op, "integer division by zero");
      if (y == -1 && x == std::numeric_limits<std::int64_t>::min()) return vconst(x, "Int");
      return vconst(x / y, "Int");
    }
    if (a && b && a->base == "Float" && b->base == "Float") {
      double x = std::get<double>(a->lit), y = std::get<double>(b->lit);
      if (op == "+") return vconst(x + y, "Float");
      if (op == "-") return vconst(x - y, "Float");
      if (op == "*") return vconst(x * y, "Float");
      return vconst(x / y, "Float");
    }
    prim_stuck(op, "expects two Int or two Float");
  }

  Val apply(const Val& f, const Val& a) {
    if (const auto* c = std::get_if<Value::ClosureV>(&f->v)) {
      EnvPtr env = c->env;
      if (c->self) env = env_bind(env, *c->self, f);
      env = env_bind(env, c->param, a);
      return go(c->body, env);
    }
    if (const auto* p = std::get_if<Value::PrimV>(&f->v)) {
      std::vector<Val> args = p->args;
      args.push_back(a);
      if ((int)args.size() == primitive_arity(p->op)) return prim_delta(p->op, args);
      return std::make_shared<const Value>(Value{Value::PrimV{p->op, std::move(args)}});
    }
    throw StuckError("apply-non-function: application of a non-function");
  }

  Val go(const Tm& t, const EnvPtr& env) {
    tick();
    if (const auto* c = term_as<Term::Const>(t)) return vconst(c->lit, c->base);
    if (const auto* v = term_as<Term::Var>(t)) {
      if (const Val* found = env_lookup(env, v->name)) return *found;
      if (is_primitive(v->name, opts)) {
        if (primitive_arity(v->name) == 0) return prim_delta(v->name, {});
        return std::make_shared<const Value>(Value{Value::PrimV{v->name, {}}});
      }
      throw StuckError("free-variable: unbound variable '" + v->name + "'");
    }
    if (const auto* l = term_as<Term::Abs>(t))
      return std::make_shared<const Value>(
          Value{Value::ClosureV{l->param, l->body, env, std::nullopt}});
    if (const auto* a = term_as<Term::App>(t)) {
      Val f = go(a->fun, env);
      Val x = go(a->arg, env);
      return apply(f, x);
    }
    if (const auto* c = term_as<Term::Cond>(t)) {
      Val g = go(c->guard, env);
      const auto* k = val_as_const(g);
      if (!k || k->base != "Bool") throw StuckError("cond-non-bool: conditional guard is not a Bool");
      return go(std::get<bool>(k->lit) ? c->thn : c->els, env);
    }
    if (const auto* l = term_as<Term::Let>(t))
      return go(l->body, env_bind(env, l->name, go(l->bound, env)));
    if (const auto* l = term_as<Term::LetEv>(t))
      return go(l->body, env_bind(env, l->name, go(l->bound, env)));
    if (const auto* l = term_as<Term::LetRec>(t)) {
      Val bound;
      if (const auto* lam = term_as<Term::Abs>(l->bound)) {
        bound = std::make_shared<const Value>(
            Value{Value::ClosureV{lam->param, lam->body, env, l->name}});
      } else {
        bound = go(l->bound, env);  // non-lambda bindings get no recursion
      }
      return go(l->body, env_bind(env, l->name, bound));
    }
    if (const auto* r = term_as<Term::Record>(t)) {
      std::vector<std::pair<std::string, Val>> fields;
      fields.reserve(r->fields.size());
      for (const auto& [lab, val] : r->fields) fields.emplace_back(lab, go(val, env));
      return vrecord(std::move(fields));
    }
    if (const auto* s = term_as<Term::Select>(t)) {
      Val subject = go(s->subject, env);
      const auto* rec = val_as_record(subject);
      if (rec)
        for (const auto& [lab, val] : rec->fields)
          if (lab == s->label) return val;
      throw StuckError("select-missing-label: selection of missing field '" + s->label + "'");
    }
    const auto* m = term_as<Term::Modify>(t);
    Val subject = go(m->subject, env);
    Val repl = go(m->repl, env);
    const auto* rec = val_as_record(subject);
    if (rec)
      for (size_t i = 0; i < rec->fields.size(); ++i)
        if (rec->fields[i].first == m->label) {
          auto fields = rec->fields;
          fields[i].second = repl;
          return vrecord(std::move(fields));
        }
    throw StuckError("modify-missing-label: modify of missing field '" + m->label + "'");
  }
};

}  // namespace

Val eval_big(const Tm& t, const EnvPtr& env, const EvalOptions& opts) {
  BigEval ev{opts, opts.fuel};
  return ev.go(t, env);
}

Val eval_big(const Tm& t, const EvalOptions& opts) { return eval_big(t, nullptr, opts); }

Tm value_to_term(const Val& v) {
  if (const auto* c = std::get_if<Value::ConstV>(&v->v)) return mk_const(c->lit, c->base);
  if (const auto* r = std::get_if<Value::RecordV>(&v->v)) {
    std::vector<std::pair<std::string, Tm>> fields;
    fields.reserve(r->fields.size());
    for (const auto& [lab, val] : r->fields) fields.emplace_back(lab, value_to_term(val));
    return mk_record(std::move(fields));
  }
  if (const auto* p = std::get_if<Value::PrimV>(&v->v)) {
    Tm t = mk_var(p->op);
    for (const auto& a : p->args) t = mk_app(t, value_to_term(a));
    return t;
  }
  const auto* c = std::get_if<Value::ClosureV>(&v->v);
  Tm body = c->body;
  std::set<std::string> shadowed{c->param};
  if (c->self) shadowed.insert(*c->self);
  for (const EnvNode* n = c->env.get(); n; n = n->next.get()) {
    if (shadowed.count(n->name)) continue;
    shadowed.insert(n->name);
    if (!free_in(body, n->name)) continue;
    body = subst_term(n->name, value_to_term(n->val), body);
  }
  Tm lam = mk_abs(c->param, body);
  if (c->self) return mk_letrec(*c->self, lam, mk_var(*c->self));
  return lam;
}

std::string show_value(const Val& v) { return pretty_term(value_to_term(v)); }

}  // namespace evl
