#ifndef EVL_SYNTAX_HPP
#define EVL_SYNTAX_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace evl {

// Core is the plain calculus; Extended adds builtin lists and letrec.
enum class Mode { Core, Extended };

// Constant payloads. The base-type tag travels alongside (a constant
// carries exactly one tag).
using Lit = std::variant<bool, std::int64_t, double, std::string>;

struct Term;
using Tm = std::shared_ptr<const Term>;

struct Term {
  struct Const {
    Lit lit;
    std::string base;
  };
  struct Var {
    std::string name;
  };
  struct App {
    Tm fun, arg;
  };
  struct Abs {
    std::string param;
    Tm body;
  };
  struct Cond {
    Tm guard, thn, els;
  };
  struct Let {
    std::string name;
    Tm bound, body;
  };
  struct LetEv {
    std::string name;
    Tm bound, body;
  };
  // letrec is only legal in extended mode.
  struct LetRec {
    std::string name;
    Tm bound, body;
  };
  struct Record {
    // source order kept for evaluation; >= 1 field, labels distinct
    std::vector<std::pair<std::string, Tm>> fields;
  };
  struct Select {
    Tm subject;
    std::string label;
  };
  struct Modify {
    Tm subject;
    std::string label;
    Tm repl;
  };

  std::variant<Const, Var, App, Abs, Cond, Let, LetEv, LetRec, Record, Select,
               Modify>
      v;
};

Tm mk_const(Lit lit, std::string base);
Tm mk_bool(bool b);
Tm mk_int(std::int64_t n);
Tm mk_float(double d);
Tm mk_string(std::string s);
Tm mk_var(std::string name);
Tm mk_app(Tm fun, Tm arg);
Tm mk_abs(std::string param, Tm body);
Tm mk_cond(Tm guard, Tm thn, Tm els);
Tm mk_let(std::string name, Tm bound, Tm body);
Tm mk_letev(std::string name, Tm bound, Tm body);
Tm mk_letrec(std::string name, Tm bound, Tm body);
Tm mk_record(std::vector<std::pair<std::string, Tm>> fields);
Tm mk_select(Tm subject, std::string label);
Tm mk_modify(Tm subject, std::string label, Tm repl);

template <class T>
const T* term_as(const Tm& t) {
  return std::get_if<T>(&t->v);
}

bool term_eq(const Tm& a, const Tm& b);

// Number of constructors in the tree.
std::size_t term_size(const Tm& t);

// Free term variables.
std::vector<std::string> free_vars(const Tm& t);

}  // namespace evl

#endif
