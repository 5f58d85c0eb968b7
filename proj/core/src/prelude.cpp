#include "evl/prelude.hpp"

#include <stdexcept>

#include "evl/lexer.hpp"
#include "evl/parser.hpp"

namespace evl {

namespace {

PolyType mono(Ty t) { return PolyType::mono(std::move(t)); }

Ty binop(Ty a, Ty b, Ty r) {
  return tarrow(std::move(a), tarrow(std::move(b), std::move(r)));
}

}  // namespace

TypingEnv prelude_env(Mode mode) {
  TypingEnv env;
  const Ty f = ty_float();
  const Ty b = ty_bool();
  const Ty s = ty_string();
  for (const char* op : {"+", "-", "*", "/"}) env[op] = mono(binop(f, f, f));
  for (const char* op : {">", "<"}) env[op] = mono(binop(f, f, b));
  env["=="] = mono(binop(s, s, b));
  for (const char* op : {"and", "or"}) env[op] = mono(binop(b, b, b));
  if (mode == Mode::Extended) {
    const Ty a = tvar("a");
    PolyType nil_s;
    nil_s.prefix = {{"a", Kind::u()}};
    nil_s.body = tlist(a);
    env["nil"] = nil_s;
    PolyType cons_s;
    cons_s.prefix = {{"a", Kind::u()}};
    cons_s.body = tarrow(a, tarrow(tlist(a), tlist(a)));
    env["cons"] = cons_s;
  }
  return env;
}

KindingEnv prelude_kinds() { return {}; }

const char* const kLibraryNames[4] = {"filter", "transform", "aggregater",
                                      "aggregatel"};

const char* library_source(const std::string& name) {
  // Each definition is a closed term except for references to nil/cons
  // and to other combinators injected before it.
  if (name == "filter")
    return "letrec filter = \\p. \\l."
           " if l.empty then nil"
           " else if p l.head then cons l.head (filter p l.tail)"
           " else filter p l.tail"
           " in filter";
  if (name == "transform")
    return "letrec transform = \\f. \\l."
           " if l.empty then nil"
           " else cons (f l.head) (transform f l.tail)"
           " in transform";
  if (name == "aggregater")
    return "letrec aggregater = \\f. \\b. \\l."
           " if l.empty then b"
           " else f l.head (aggregater f b l.tail)"
           " in aggregater";
  if (name == "aggregatel")
    return "letrec aggregatel = \\f. \\b. \\l."
           " if l.empty then b"
           " else aggregatel f (f b l.head) l.tail"
           " in aggregatel";
  return nullptr;
}

Tm inject_library(const Tm& user, Mode mode) {
  if (mode != Mode::Extended) return user;
  auto fv = free_vars(user);
  Tm out = user;
  // Wrap in reverse declaration order so that, if ever a combinator
  // referenced another, the referenced one would scope over it.
  for (int i = 3; i >= 0; --i) {
    const std::string name = kLibraryNames[i];
    bool used = false;
    for (const auto& v : fv)
      if (v == name) used = true;
    if (!used) continue;
    SourceProgram src{library_source(name), "<library>"};
    Tm def = parse_term(src, Mode::Extended);
    // library_source yields `letrec name = B in name`; rebuild with the
    // user term as the body instead.
    const auto* lr = term_as<Term::LetRec>(def);
    if (lr == nullptr) throw std::logic_error("library combinator shape");
    out = mk_letrec(lr->name, lr->bound, out);
  }
  return out;
}

}  // namespace evl
