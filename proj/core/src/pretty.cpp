#include "evl/pretty.hpp"

#include <charconv>
#include <cmath>
#include <set>

namespace evl {

namespace {

// Precedence: 0 open forms, 1 or, 2 and, 3 comparisons, 4 additive,
// 5 multiplicative, 6 application, 7 postfix selection, 8 atoms.
const std::set<std::string> kBinOps = {"or", "and", "==", ">", "<", "+", "-", "*", "/"};

int op_prec(const std::string& op) {
  if (op == "or") return 1;
  if (op == "and") return 2;
  if (op == "==" || op == ">" || op == "<") return 3;
  if (op == "+" || op == "-") return 4;
  return 5;
}

std::string escape_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

struct Printer {
  std::string out;

  void print(const Tm& t, int prec) {
    if (auto* c = term_as<Term::Const>(t)) {
      std::string lit = show_literal(c->lit);
      // A leading '-' stops the argument scan, so parenthesize there.
      bool wrap = lit[0] == '-' && prec >= 7;
      if (wrap) out += '(';
      out += lit;
      if (wrap) out += ')';
      return;
    }
    if (auto* v = term_as<Term::Var>(t)) {
      if (kBinOps.count(v->name)) {
        out += '(';
        out += v->name;
        out += ')';
      } else {
        out += v->name;
      }
      return;
    }
    if (auto* a = term_as<Term::App>(t)) {
      // Fully applied binary operator prints infix.
      if (auto* inner = term_as<Term::App>(a->fun)) {
        if (auto* v = term_as<Term::Var>(inner->fun); v && kBinOps.count(v->name)) {
          int p = op_prec(v->name);
          bool wrap = prec > p;
          if (wrap) out += '(';
          bool nonassoc = p == 3;
          print(inner->arg, nonassoc ? p + 1 : p);
          out += ' ';
          out += v->name;
          out += ' ';
          print(a->arg, p + 1);
          if (wrap) out += ')';
          return;
        }
      }
      bool wrap = prec > 6;
      if (wrap) out += '(';
      print(a->fun, 6);
      out += ' ';
      print(a->arg, 7);
      if (wrap) out += ')';
      return;
    }
    if (auto* l = term_as<Term::Abs>(t)) {
      bool wrap = prec > 0;
      if (wrap) out += '(';
      out += '\\';
      out += l->param;
      out += ". ";
      print(l->body, 0);
      if (wrap) out += ')';
      return;
    }
    if (auto* c = term_as<Term::Cond>(t)) {
      bool wrap = prec > 0;
      if (wrap) out += '(';
      out += "if ";
      print(c->guard, 0);
      out += " then ";
      print(c->thn, 0);
      out += " else ";
      print(c->els, 0);
      if (wrap) out += ')';
      return;
    }
    if (auto* l = term_as<Term::Let>(t)) return print_let("let", l->name, l->bound, l->body, prec);
    if (auto* l = term_as<Term::LetEv>(t))
      return print_let("letEv", l->name, l->bound, l->body, prec);
    if (auto* l = term_as<Term::LetRec>(t))
      return print_let("letrec", l->name, l->bound, l->body, prec);
    if (auto* r = term_as<Term::Record>(t)) {
      out += '{';
      bool first = true;
      for (auto& [label, value] : r->fields) {
        if (!first) out += ", ";
        first = false;
        out += label;
        out += " = ";
        print(value, 0);
      }
      out += '}';
      return;
    }
    if (auto* s = term_as<Term::Select>(t)) {
      bool wrap = prec > 7;
      if (wrap) out += '(';
      print(s->subject, 7);
      out += '.';
      out += s->label;
      if (wrap) out += ')';
      return;
    }
    auto* m = term_as<Term::Modify>(t);
    out += "modify(";
    print(m->subject, 0);
    out += ", ";
    out += m->label;
    out += ", ";
    print(m->repl, 0);
    out += ')';
  }

  void print_let(const char* kw, const std::string& name, const Tm& bound, const Tm& body,
                 int prec) {
    bool wrap = prec > 0;
    if (wrap) out += '(';
    out += kw;
    out += ' ';
    out += name;
    out += " = ";
    print(bound, 0);
    out += " in ";
    print(body, 0);
    if (wrap) out += ')';
  }
};

}  // namespace

std::string format_float(double d) {
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  if (std::isnan(d)) return "nan";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d);
  std::string s(buf, p);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string show_literal(const Lit& lit) {
  if (auto* b = std::get_if<bool>(&lit)) return *b ? "true" : "false";
  if (auto* i = std::get_if<std::int64_t>(&lit)) return std::to_string(*i);
  if (auto* d = std::get_if<double>(&lit)) return format_float(*d);
  return escape_string(std::get<std::string>(lit));
}

std::string pretty_term(const Tm& t) {
  Printer p;
  p.print(t, 0);
  return p.out;
}

}  // namespace evl
