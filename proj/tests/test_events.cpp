#include <doctest.h>

#include <string>

#include "evl/events.hpp"
#include "evl/infer.hpp"
#include "evl/parser.hpp"
#include "evl/prelude.hpp"
#include "evl/types.hpp"
#include "gen.hpp"
#include "util.hpp"

using namespace evl;
using evt::sc;
using evt::tm;
using evt::ty;

TEST_SUITE("events") {
  TEST_CASE("event type shapes") {
    CHECK(is_event_type(ty("{a: Int}")));
    CHECK(is_event_type(ty("String -> {a: Int}")));
    CHECK(is_event_type(ty("Int -> Int -> {a: Int, b: Bool -> Bool}")));
    CHECK_FALSE(is_event_type(ty("Int")));
    CHECK_FALSE(is_event_type(ty("{a: {b: Int}}")));  // no nested events
    // a variable needs a record kind to stand for an event
    KindingEnv K{{"a", Kind::rec({{"l", ty_int()}})}, {"b", Kind::u()}};
    CHECK(is_event_type_kinded(K, tvar("a")));
    CHECK_FALSE(is_event_type_kinded(K, tvar("b")));
    CHECK(is_event_type_kinded(K, tarrow(ty_int(), tvar("a"))));
  }

  TEST_CASE("generic event validity") {
    GenericEvent good{"FireDanger",
                      sc("forall a::U. forall b::U. a -> b -> {fire_danger: b, location: a}"),
                      tm("\\l. \\d. {location = l, fire_danger = d}")};
    CHECK(valid_generic_event({}, good));
    GenericEvent lower = good;
    lower.name = "fireDanger";
    CHECK_FALSE(valid_generic_event({}, lower));
    GenericEvent nonevent{"E", sc("forall a::U. a -> a"), tm("\\x. x")};
    CHECK_FALSE(valid_generic_event({}, nonevent));
  }

  TEST_CASE("ground types of values") {
    REQUIRE(ground_type_of_value(tm("{a = 1, b = \"s\"}")).has_value());
    CHECK(type_eq(*ground_type_of_value(tm("{a = 1, b = \"s\"}")), ty("{a: Int, b: String}")));
    CHECK(type_eq(*ground_type_of_value(tm("2^Float")), ty("Float")));
    CHECK_FALSE(ground_type_of_value(tm("\\x. x")).has_value());
    CHECK_FALSE(ground_type_of_value(tm("x")).has_value());
    auto se = specific_event_of(tm("{a = true}"));
    REQUIRE(se.has_value());
    CHECK(type_eq(se->type, ty("{a: Bool}")));
    CHECK_FALSE(specific_event_of(tm("1")).has_value());  // events are records
  }

  TEST_CASE("part schemes restrict the prefix to reachable variables") {
    // forall a::U. forall r::{{l1: a}}. r -> {out: a}
    PolyType s = sc("forall a::U. forall r::{{l1: a}}. r -> {out: a}");
    PolyType dom = *domain_scheme({}, s, 0);
    CHECK(alpha_equal_any_order(dom, sc("forall a::U. forall r::{{l1: a}}. r")));
    PolyType cod = codomain_scheme({}, s);
    CHECK(alpha_equal(cod, sc("forall a::U. {out: a}")));
    // ground parts keep no prefix
    PolyType g = sc("String -> {a: String}");
    CHECK(alpha_equal(codomain_scheme({}, g), sc("{a: String}")));
    CHECK(alpha_equal(*domain_scheme({}, g, 0), sc("String")));
    CHECK_FALSE(domain_scheme({}, g, 1).has_value());
  }

  // [PAPER] the three relation examples over l1-records
  TEST_CASE("membership, generalization, specialization examples") {
    PolyType ge_poly = sc("forall a::U. forall r::{{l1: a}}. r");
    PolyType ge_int = sc("forall r::{{l1: Int}}. r");

    CHECK(membership({}, ge_int, ge_poly));
    Ty witness;
    CHECK_FALSE(membership({}, ge_poly, ge_int, &witness));
    REQUIRE(witness);
    CHECK(type_eq(witness, ty("{l1: Float}")));

    CHECK(generalization({}, ge_poly, ge_int));
    CHECK_FALSE(generalization({}, ge_int, ge_poly));
    CHECK(specialization({}, ge_int, ge_poly));
    CHECK_FALSE(specialization({}, ge_poly, ge_int));
  }

  TEST_CASE("relations are reflexive") {
    for (const char* s : {"forall a::U. forall r::{{l1: a}}. r", "forall r::{{l1: Int}}. r",
                          "{a: Int, b: Bool}"}) {
      PolyType p = sc(s);
      CHECK(membership({}, p, p));
      CHECK(generalization({}, p, p));
      CHECK(specialization({}, p, p));
    }
  }

  TEST_CASE("instantiation of a generic event") {
    GenericEvent fd{"FireDanger",
                    sc("String -> String -> {fire_danger: String, location: String}"),
                    tm("\\l. \\d. {location = l, fire_danger = d}")};
    auto ev = specific_event_of(tm("{location = \"Porto\", fire_danger = \"low\"}"));
    REQUIRE(ev.has_value());
    CHECK(instantiates({}, *ev, fd));
    auto other = specific_event_of(tm("{location = \"Porto\"}"));
    REQUIRE(other.has_value());
    CHECK_FALSE(instantiates({}, *other, fd));
    // a polymorphic event class admits any field type at its variables
    GenericEvent any{"Reading", sc("forall a::U. a -> {value: a}"), tm("\\v. {value = v}")};
    auto r1 = specific_event_of(tm("{value = 1}"));
    auto r2 = specific_event_of(tm("{value = \"s\"}"));
    CHECK(instantiates({}, *r1, any));
    CHECK(instantiates({}, *r2, any));
  }

  TEST_CASE("is_epa recognizes event processing agents") {
    TypingEnv env = prelude_env(Mode::Extended);
    EpaInfo info;
    CHECK(is_epa({}, env, inject_library(tm("\\x. modify(x, temperature, x.temperature * 2.0)")), &info));
    CHECK(info.diagnostic.empty());
    CHECK_FALSE(info.scheme.prefix.empty());
    // Float codomain: not an event type
    CHECK_FALSE(is_epa({}, env, tm("\\x. x.a + 1.0"), &info));
    // inference failure surfaces as a diagnostic, not a throw
    CHECK_FALSE(is_epa({}, env, tm("if 1 then {a = 1} else {a = 2}"), &info));
    CHECK_FALSE(info.diagnostic.empty());
  }

  // [DERIVED] duality and transitivity over generated scheme chains
  TEST_CASE("relation properties over generated schemes") {
    evt::Gen g(0xEE1);
    int memberships = 0;
    for (int i = 0; i < 400; ++i) {
      PolyType s0 = g.event_scheme(g.irange(1, 3));
      KindingEnv pk;
      for (auto& [n, k] : s0.prefix) pk[n] = k;
      if (!is_event_type_kinded(pk, s0.body)) continue;
      PolyType s1 = g.instance_of(s0, g.irange(0, int(s0.prefix.size())));
      PolyType s2 = g.instance_of(s1, int(s1.prefix.size()));  // ground

      CHECK(membership({}, s1, s0));
      CHECK(membership({}, s2, s1));
      CHECK(membership({}, s2, s0));  // transitivity along the chain
      ++memberships;

      // duality: membership(a, b) == generalization(b, a) == specialization-flipped
      CHECK(generalization({}, s0, s1));
      CHECK(specialization({}, s1, s0));
      CHECK(membership({}, s1, s0) == generalization({}, s0, s1));
    }
    CHECK(memberships > 200);
  }

  // [DERIVED] a claimed membership must cover sampled ground instances;
  // a refuted one must come with a counterexample the general side rejects
  TEST_CASE("membership agrees with sampled instances") {
    evt::Gen g(0xEE2);
    for (int i = 0; i < 300; ++i) {
      PolyType a = g.event_scheme(g.irange(0, 2));
      PolyType b = g.event_scheme(g.irange(0, 2));
      Ty witness;
      bool member = membership({}, a, b, &witness);
      if (member) {
        for (int k = 0; k < 5; ++k) {
          PolyType ground = g.instance_of(a, int(a.prefix.size()));
          CAPTURE(show_scheme(a));
          CAPTURE(show_scheme(b));
          CAPTURE(show_scheme(ground));
          CHECK(generic_instance({}, b, ground));
        }
      } else if (witness) {
        CHECK(generic_instance({}, a, PolyType::mono(witness)));
        CHECK_FALSE(generic_instance({}, b, PolyType::mono(witness)));
      }
    }
  }
}
