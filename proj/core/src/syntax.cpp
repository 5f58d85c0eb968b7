#include "evl/syntax.hpp"

#include <algorithm>
#include <set>

namespace evl {

namespace {
Tm mk(Term t) { return std::make_shared<Term>(std::move(t)); }
}  // namespace

Tm mk_const(Lit lit, std::string base) {
  return mk(Term{Term::Const{std::move(lit), std::move(base)}});
}
Tm mk_bool(bool b) { return mk_const(Lit{b}, "Bool"); }
Tm mk_int(std::int64_t n) { return mk_const(Lit{n}, "Int"); }
Tm mk_float(double d) { return mk_const(Lit{d}, "Float"); }
Tm mk_string(std::string s) { return mk_const(Lit{std::move(s)}, "String"); }
Tm mk_var(std::string name) { return mk(Term{Term::Var{std::move(name)}}); }
Tm mk_app(Tm fun, Tm arg) {
  return mk(Term{Term::App{std::move(fun), std::move(arg)}});
}
Tm mk_abs(std::string param, Tm body) {
  return mk(Term{Term::Abs{std::move(param), std::move(body)}});
}
Tm mk_cond(Tm guard, Tm thn, Tm els) {
  return mk(Term{Term::Cond{std::move(guard), std::move(thn), std::move(els)}});
}
Tm mk_let(std::string name, Tm bound, Tm body) {
  return mk(Term{Term::Let{std::move(name), std::move(bound), std::move(body)}});
}
Tm mk_letev(std::string name, Tm bound, Tm body) {
  return mk(Term{Term::LetEv{std::move(name), std::move(bound), std::move(body)}});
}
Tm mk_letrec(std::string name, Tm bound, Tm body) {
  return mk(Term{Term::LetRec{std::move(name), std::move(bound), std::move(body)}});
}
Tm mk_record(std::vector<std::pair<std::string, Tm>> fields) {
  return mk(Term{Term::Record{std::move(fields)}});
}
Tm mk_select(Tm subject, std::string label) {
  return mk(Term{Term::Select{std::move(subject), std::move(label)}});
}
Tm mk_modify(Tm subject, std::string label, Tm repl) {
  return mk(Term{Term::Modify{std::move(subject), std::move(label), std::move(repl)}});
}

bool term_eq(const Tm& a, const Tm& b) {
  if (a == b) return true;
  if (a->v.index() != b->v.index()) return false;
  if (auto* c = term_as<Term::Const>(a)) {
    auto* d = term_as<Term::Const>(b);
    return c->base == d->base && c->lit == d->lit;
  }
  if (auto* v = term_as<Term::Var>(a)) return v->name == term_as<Term::Var>(b)->name;
  if (auto* ap = term_as<Term::App>(a)) {
    auto* bp = term_as<Term::App>(b);
    return term_eq(ap->fun, bp->fun) && term_eq(ap->arg, bp->arg);
  }
  if (auto* ab = term_as<Term::Abs>(a)) {
    auto* bb = term_as<Term::Abs>(b);
    return ab->param == bb->param && term_eq(ab->body, bb->body);
  }
  if (auto* ac = term_as<Term::Cond>(a)) {
    auto* bc = term_as<Term::Cond>(b);
    return term_eq(ac->guard, bc->guard) && term_eq(ac->thn, bc->thn) &&
           term_eq(ac->els, bc->els);
  }
  if (auto* al = term_as<Term::Let>(a)) {
    auto* bl = term_as<Term::Let>(b);
    return al->name == bl->name && term_eq(al->bound, bl->bound) &&
           term_eq(al->body, bl->body);
  }
  if (auto* al = term_as<Term::LetEv>(a)) {
    auto* bl = term_as<Term::LetEv>(b);
    return al->name == bl->name && term_eq(al->bound, bl->bound) &&
           term_eq(al->body, bl->body);
  }
  if (auto* al = term_as<Term::LetRec>(a)) {
    auto* bl = term_as<Term::LetRec>(b);
    return al->name == bl->name && term_eq(al->bound, bl->bound) &&
           term_eq(al->body, bl->body);
  }
  if (auto* ar = term_as<Term::Record>(a)) {
    auto* br = term_as<Term::Record>(b);
    if (ar->fields.size() != br->fields.size()) return false;
    for (size_t i = 0; i < ar->fields.size(); ++i)
      if (ar->fields[i].first != br->fields[i].first ||
          !term_eq(ar->fields[i].second, br->fields[i].second))
        return false;
    return true;
  }
  if (auto* as_ = term_as<Term::Select>(a)) {
    auto* bs = term_as<Term::Select>(b);
    return as_->label == bs->label && term_eq(as_->subject, bs->subject);
  }
  auto* am = term_as<Term::Modify>(a);
  auto* bm = term_as<Term::Modify>(b);
  return am->label == bm->label && term_eq(am->subject, bm->subject) &&
         term_eq(am->repl, bm->repl);
}

std::size_t term_size(const Tm& t) {
  if (term_as<Term::Const>(t) || term_as<Term::Var>(t)) return 1;
  if (auto* a = term_as<Term::App>(t)) return 1 + term_size(a->fun) + term_size(a->arg);
  if (auto* a = term_as<Term::Abs>(t)) return 1 + term_size(a->body);
  if (auto* c = term_as<Term::Cond>(t))
    return 1 + term_size(c->guard) + term_size(c->thn) + term_size(c->els);
  if (auto* l = term_as<Term::Let>(t))
    return 1 + term_size(l->bound) + term_size(l->body);
  if (auto* l = term_as<Term::LetEv>(t))
    return 1 + term_size(l->bound) + term_size(l->body);
  if (auto* l = term_as<Term::LetRec>(t))
    return 1 + term_size(l->bound) + term_size(l->body);
  if (auto* r = term_as<Term::Record>(t)) {
    std::size_t n = 1;
    for (const auto& [lab, f] : r->fields) n += term_size(f);
    return n;
  }
  if (auto* s = term_as<Term::Select>(t)) return 1 + term_size(s->subject);
  auto* m = term_as<Term::Modify>(t);
  return 1 + term_size(m->subject) + term_size(m->repl);
}

namespace {
void free_vars_into(const Tm& t, std::set<std::string>& bound,
                    std::vector<std::string>& out, std::set<std::string>& seen) {
  if (auto* v = term_as<Term::Var>(t)) {
    if (!bound.count(v->name) && seen.insert(v->name).second)
      out.push_back(v->name);
  } else if (auto* a = term_as<Term::App>(t)) {
    free_vars_into(a->fun, bound, out, seen);
    free_vars_into(a->arg, bound, out, seen);
  } else if (auto* ab = term_as<Term::Abs>(t)) {
    bool fresh = bound.insert(ab->param).second;
    free_vars_into(ab->body, bound, out, seen);
    if (fresh) bound.erase(ab->param);
  } else if (auto* c = term_as<Term::Cond>(t)) {
    free_vars_into(c->guard, bound, out, seen);
    free_vars_into(c->thn, bound, out, seen);
    free_vars_into(c->els, bound, out, seen);
  } else if (auto* l = term_as<Term::Let>(t)) {
    free_vars_into(l->bound, bound, out, seen);
    bool fresh = bound.insert(l->name).second;
    free_vars_into(l->body, bound, out, seen);
    if (fresh) bound.erase(l->name);
  } else if (auto* l = term_as<Term::LetEv>(t)) {
    free_vars_into(l->bound, bound, out, seen);
    bool fresh = bound.insert(l->name).second;
    free_vars_into(l->body, bound, out, seen);
    if (fresh) bound.erase(l->name);
  } else if (auto* l = term_as<Term::LetRec>(t)) {
    bool fresh = bound.insert(l->name).second;
    free_vars_into(l->bound, bound, out, seen);
    free_vars_into(l->body, bound, out, seen);
    if (fresh) bound.erase(l->name);
  } else if (auto* r = term_as<Term::Record>(t)) {
    for (const auto& [lab, f] : r->fields) free_vars_into(f, bound, out, seen);
  } else if (auto* s = term_as<Term::Select>(t)) {
    free_vars_into(s->subject, bound, out, seen);
  } else if (auto* m = term_as<Term::Modify>(t)) {
    free_vars_into(m->subject, bound, out, seen);
    free_vars_into(m->repl, bound, out, seen);
  }
}
}  // namespace

std::vector<std::string> free_vars(const Tm& t) {
  std::set<std::string> bound, seen;
  std::vector<std::string> out;
  free_vars_into(t, bound, out, seen);
  return out;
}

}  // namespace evl
