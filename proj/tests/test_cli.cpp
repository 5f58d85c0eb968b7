#include <doctest.h>

#include <string>

#include "util.hpp"

using evt::corpus;
using evt::run_evl;

TEST_SUITE("cli") {
  TEST_CASE("parse prints the canonical form") {
    auto r = run_evl("parse -", "\\x . x");
    CHECK(r.rc == 0);
    CHECK(r.out == "\\x. x\n");
    auto j = run_evl("parse --json -", "\\x. x");
    CHECK(j.out == "{\"term\":\"\\\\x. x\"}\n");
  }

  TEST_CASE("parse reports located errors on exit 1") {
    auto r = run_evl("parse -", "{a = }");
    CHECK(r.rc == 1);
    CHECK(r.err.find("<stdin>:1:6") != std::string::npos);
    auto m = run_evl("parse --mode core -", "letrec f = \\x. x in f");
    CHECK(m.rc == 1);
    CHECK(m.err.find("letrec requires extended mode") != std::string::npos);
  }

  TEST_CASE("infer prints principal schemes") {
    auto id = run_evl("infer -", "\\x. x");
    CHECK(id.rc == 0);
    CHECK(id.out == "forall t0::U. t0 -> t0\n");
    auto fire = run_evl("infer " + corpus("fire_danger.evl"));
    CHECK(fire.out == "{fire_danger: String, location: String}\n");
    auto far = run_evl("infer " + corpus("fartocel.evl"));
    CHECK(far.out == "forall t2::{{temperature: Float}}. t2 -> t2\n");
    auto json = run_evl("infer --json " + corpus("fire_danger.evl"));
    CHECK(json.out ==
          "{\"kinds\":{},\"subst\":{},\"type\":\"{fire_danger: String, location: String}\"}\n");
  }

  TEST_CASE("infer respects assumption files") {
    auto r = run_evl("infer --assume " + corpus("weather.assume") + " " + corpus("check_agent.evl"));
    CHECK(r.rc == 0);
    CHECK(r.out ==
          "forall t2::{{humidity: Float, location: String, precipitation: Float, "
          "temperature: Float, wind: Float}}. t2 -> {fire_danger: String, location: String}\n");
  }

  TEST_CASE("infer failures exit 1") {
    auto r = run_evl("infer -", "\\b. if b then 1 else true");
    CHECK(r.rc == 1);
    CHECK(r.err.find("type error") != std::string::npos);
    auto gate = run_evl("infer -", "letEv E = \\x. x in E");
    CHECK(gate.rc == 1);
    CHECK(gate.err.find("letEv 'E' binds a non-event type: t0 -> t0") != std::string::npos);
    auto verbatim = run_evl("infer " + corpus("fire_danger_pipeline_verbatim.evl"));
    CHECK(verbatim.rc == 1);
    auto noprel = run_evl("infer --no-prelude -", "1 + 2");
    CHECK(noprel.rc == 1);
    CHECK(noprel.err.find("unbound variable '+'") != std::string::npos);
  }

  TEST_CASE("check verdicts map to the exit code") {
    auto yes = run_evl("check " + corpus("fire_danger.evl") +
                       " '{fire_danger: String, location: String}'");
    CHECK(yes.rc == 0);
    CHECK(yes.out == "true\n");
    auto no = run_evl("check " + corpus("fire_danger.evl") + " '{a: Int}'");
    CHECK(no.rc == 1);
    CHECK(no.out == "false\n");
    auto inst = run_evl("check - 'Int -> Int'", "\\x. x");
    CHECK(inst.rc == 0);
  }

  TEST_CASE("eval prints values") {
    auto fire = run_evl("eval " + corpus("fire_danger.evl"));
    CHECK(fire.rc == 0);
    CHECK(fire.out == "{location = \"Porto\", fire_danger = \"low\"}\n");
    CHECK(run_evl("eval " + corpus("fire_check.evl")).out ==
          "{location = \"Porto\", fire_danger = \"low\"}\n");
    // the substitution stepper agrees
    CHECK(run_evl("eval --subst " + corpus("fire_danger.evl")).out ==
          "{location = \"Porto\", fire_danger = \"low\"}\n");
    CHECK(run_evl("eval --subst -", "(\\x. x + 0.5) 1.0").out == "1.5\n");
  }

  TEST_CASE("eval typechecks first unless --unsafe") {
    auto typed = run_evl("eval -", "1 + 2");
    CHECK(typed.rc == 1);  // Int arithmetic is not in the typing prelude
    auto unsafe = run_evl("eval --unsafe -", "1 + 2");
    CHECK(unsafe.rc == 0);
    CHECK(unsafe.out == "3\n");
  }

  TEST_CASE("stuck evaluation exits 2 with a classified reason") {
    auto r = run_evl("eval --assume " + corpus("weather.assume") + " -", "FireDanger");
    CHECK(r.rc == 2);
    CHECK(r.err == "stuck: free-variable: unbound variable 'FireDanger'\n");
    auto div = run_evl("eval --unsafe -", "1 / 0");
    CHECK(div.rc == 2);
    CHECK(div.err.find("int-div-by-zero") != std::string::npos);
  }

  TEST_CASE("fuel exhaustion exits 3") {
    auto r = run_evl("eval --unsafe --fuel 10 -", "(\\x. x x) (\\x. x x)");
    CHECK(r.rc == 3);
    CHECK(r.err.find("fuel exhausted") != std::string::npos);
    auto env = evt::run_cmd("echo '(\\x. x x) (\\x. x x)' | EVL_FUEL=10 " +
                            std::string(EVL_TOOL_PATH) + " eval --unsafe -");
    CHECK(env.rc == 3);
  }

  TEST_CASE("trace lists numbered states") {
    auto r = run_evl("trace " + corpus("fartocel_applied.evl"));
    CHECK(r.rc == 0);
    CHECK(r.out ==
          "0: let farToCel = \\x. modify(x, temperature, (x.temperature - 32.0) / 1.8) in "
          "farToCel {temperature = 50.0}\n"
          "1: (\\x. modify(x, temperature, (x.temperature - 32.0) / 1.8)) {temperature = 50.0}\n"
          "2: modify({temperature = 50.0}, temperature, ({temperature = 50.0}.temperature - 32.0)"
          " / 1.8)\n"
          "3: modify({temperature = 50.0}, temperature, (50.0 - 32.0) / 1.8)\n"
          "4: modify({temperature = 50.0}, temperature, 18.0 / 1.8)\n"
          "5: modify({temperature = 50.0}, temperature, 10.0)\n"
          "6: {temperature = 10.0}\n");
    auto j = run_evl("trace --json -", "1.0 + 2.0");
    CHECK(j.out == "{\"steps\":[\"1.0 + 2.0\",\"3.0\"]}\n");
  }

  TEST_CASE("relate compares event schemes from files") {
    std::string gi = corpus("ge_int.evl"), gp = corpus("ge_poly.evl");
    auto m1 = run_evl("relate member " + gi + " " + gp);
    CHECK(m1.rc == 0);
    CHECK(m1.out == "true\n");
    auto m2 = run_evl("relate member " + gp + " " + gi);
    CHECK(m2.rc == 0);
    CHECK(m2.out == "false\nwitness: {l1: Float}\n");
    CHECK(run_evl("relate generalization " + gp + " " + gi).out == "true\n");
    CHECK(run_evl("relate specialization " + gi + " " + gp).out == "true\n");
    CHECK(run_evl("relate generalization " + gi + " " + gp).out == "false\n");
    // a non-event operand is a type error
    auto bad = run_evl("relate member - " + gi, "\\x. x");
    CHECK(bad.rc == 1);
    CHECK(bad.err.find("not an event scheme") != std::string::npos);
  }

  TEST_CASE("run maps a stream through a translate agent") {
    auto r = run_evl("run " + corpus("fartocel.evl") + " < " + corpus("fartocel.ndjson"));
    CHECK(r.rc == 0);
    CHECK(r.out == "{\"temperature\":10.0}\n{\"temperature\":0.0}\n{\"temperature\":100.0}\n");
    CHECK(r.err == "{\"in\":3,\"out\":3,\"skipped\":0,\"stuck\":0}\n");
  }

  TEST_CASE("run folds with an initial accumulator") {
    auto r = run_evl("run --init '{n = 0.0}' " + corpus("sum_agent.evl") + " < " +
                     corpus("values.ndjson"));
    CHECK(r.rc == 0);
    CHECK(r.out == "{\"n\":10.0}\n");
    CHECK(r.err == "{\"in\":3,\"out\":1,\"skipped\":0,\"stuck\":0}\n");
  }

  TEST_CASE("run collects filtered events") {
    auto r = run_evl("run " + corpus("filter_agent.evl") + " < " + corpus("locations.ndjson"));
    CHECK(r.rc == 0);
    CHECK(r.out == "{\"location\":\"Porto\"}\n{\"location\":\"Porto\"}\n");
    CHECK(r.err == "{\"in\":3,\"out\":2,\"skipped\":0,\"stuck\":0}\n");
  }

  TEST_CASE("run executes the fire danger pipeline") {
    auto r = run_evl("run " + corpus("fire_danger_pipeline.evl") + " < " +
                     corpus("events_porto.ndjson"));
    CHECK(r.rc == 0);
    CHECK(r.out == "{\"fire_danger\":\"high\",\"location\":\"Porto\"}\n");
    CHECK(r.err == "{\"in\":5,\"out\":1,\"skipped\":0,\"stuck\":0}\n");
  }

  TEST_CASE("run rejects events missing required labels") {
    auto strict = run_evl("run " + corpus("fartocel.evl"), "{\"t\": 50.0}\n");
    CHECK(strict.rc == 1);
    CHECK(strict.err.find("missing {temperature}") != std::string::npos);
    auto lax = run_evl("run --skip-bad " + corpus("fartocel.evl"),
                       "{\"t\": 50.0}\n{\"temperature\": 50.0}\n");
    CHECK(lax.rc == 0);
    CHECK(lax.out == "{\"temperature\":10.0}\n");
    CHECK(lax.err == "{\"in\":2,\"out\":1,\"skipped\":1,\"stuck\":0}\n");
  }

  TEST_CASE("run coerces labels listed as float") {
    auto r = run_evl("run --float-labels temperature " + corpus("fartocel.evl"),
                     "{\"temperature\": 50}\n");
    CHECK(r.rc == 0);
    CHECK(r.out == "{\"temperature\":10.0}\n");
    // without the flag the integral number ingests as Int and is rejected
    auto no = run_evl("run " + corpus("fartocel.evl"), "{\"temperature\": 50}\n");
    CHECK(no.rc == 1);
  }

  TEST_CASE("usage errors are nonzero and do not crash") {
    auto r = run_evl("no-such-subcommand");
    CHECK(r.rc != 0);
    auto flag = run_evl("parse --no-such-flag -", "1");
    CHECK(flag.rc != 0);
  }
}
