#include <doctest.h>

#include <string>

#include "evl/infer.hpp"
#include "evl/parser.hpp"
#include "evl/prelude.hpp"
#include "evl/syntax.hpp"
#include "evl/types.hpp"
#include "util.hpp"

using namespace evl;
using evt::sc;
using evt::tm;

TEST_SUITE("prelude") {
  TEST_CASE("operator instances") {
    TypingEnv env = prelude_env(Mode::Extended);
    for (const char* op : {"+", "-", "*", "/"})
      CHECK(alpha_equal(env.at(op), sc("Float -> Float -> Float")));
    for (const char* op : {">", "<"})
      CHECK(alpha_equal(env.at(op), sc("Float -> Float -> Bool")));
    CHECK(alpha_equal(env.at("=="), sc("String -> String -> Bool")));
    for (const char* op : {"and", "or"})
      CHECK(alpha_equal(env.at(op), sc("Bool -> Bool -> Bool")));
  }

  TEST_CASE("list constructors only in extended mode") {
    TypingEnv ext = prelude_env(Mode::Extended);
    CHECK(alpha_equal(ext.at("nil"), sc("forall a::U. List a")));
    CHECK(alpha_equal(ext.at("cons"), sc("forall a::U. a -> List a -> List a")));
    TypingEnv core = prelude_env(Mode::Core);
    CHECK(core.count("nil") == 0);
    CHECK(core.count("cons") == 0);
    CHECK(core.count("+") == 1);
  }

  TEST_CASE("prelude kinds are empty") { CHECK(prelude_kinds().empty()); }

  TEST_CASE("library sources parse to letrec definitions") {
    int n = 0;
    for (const char* const* p = kLibraryNames; n < 4; ++n, ++p) {
      const char* src = library_source(*p);
      REQUIRE(src != nullptr);
      Tm t = parse_term({src, *p});
      auto* lr = term_as<Term::LetRec>(t);
      REQUIRE(lr);
      CHECK(lr->name == *p);
    }
    CHECK(library_source("no_such") == nullptr);
  }

  TEST_CASE("injection wraps only combinators that occur free") {
    Tm plain = tm("\\x. x");
    CHECK(term_eq(inject_library(plain), plain));

    Tm uses = inject_library(tm("\\l. filter p l"));
    auto* lr = term_as<Term::LetRec>(uses);
    REQUIRE(lr);
    CHECK(lr->name == "filter");
    CHECK(term_as<Term::LetRec>(lr->body) == nullptr);  // only one injected

    // a let-bound name shadows the library and suppresses injection
    Tm shadowed = tm("let filter = 1 in filter");
    CHECK(term_eq(inject_library(shadowed), shadowed));

    // core mode has no list library
    Tm core_term = tm("\\l. filter p l", Mode::Core);
    CHECK(term_eq(inject_library(core_term, Mode::Core), core_term));
  }

  TEST_CASE("multiple combinators inject in a deterministic nest") {
    Tm t = inject_library(tm("\\l. aggregatel f 0.0 (filter p (transform g l))"));
    // outermost letrec first; all three present exactly once
    int count = 0;
    Tm cur = t;
    while (auto* lr = term_as<Term::LetRec>(cur)) {
      ++count;
      cur = lr->body;
    }
    CHECK(count == 3);
    // stable across calls
    CHECK(term_eq(t, inject_library(tm("\\l. aggregatel f 0.0 (filter p (transform g l))"))));
  }

  TEST_CASE("injected library terms still typecheck standalone") {
    TypingEnv env = prelude_env(Mode::Extended);
    for (const char* name : {"filter", "transform", "aggregater", "aggregatel"}) {
      Tm t = inject_library(tm(name));
      NameSupply names = supply_avoiding({}, env);
      CHECK_NOTHROW(principal({}, env, t, names));
    }
  }
}
