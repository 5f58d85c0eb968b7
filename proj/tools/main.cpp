// evl — command-line front end: parse/infer/check/eval/trace/relate/run.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "evl/eval.hpp"
#include "evl/events.hpp"
#include "evl/harness.hpp"
#include "evl/infer.hpp"
#include "evl/lexer.hpp"
#include "evl/parser.hpp"
#include "evl/prelude.hpp"
#include "evl/pretty.hpp"

using namespace evl;
using nlohmann::json;

namespace {

std::uint64_t default_fuel() {
  if (const char* e = std::getenv("EVL_FUEL")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(e, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 100000;
}

struct Options {
  std::string mode_name = "extended";
  std::uint64_t fuel = default_fuel();
  bool json_out = false;
  bool no_prelude = false;
  bool unsafe = false;
  bool subst = false;
  bool skip_bad = false;
  std::vector<std::string> assume_files;
  std::vector<std::string> float_labels;
  std::string init_expr;

  Mode mode() const { return mode_name == "core" ? Mode::Core : Mode::Extended; }
};

SourceProgram read_source(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return {ss.str(), "<stdin>"};
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return {ss.str(), path};
}

// Re-throws with the origin folded into the message so the top-level
// handler can print a positioned diagnostic.
[[noreturn]] void rethrow_located(const SourceProgram& src, const ParseError& e) {
  ParseDiagnostic d = e.diag;
  d.message = src.origin + ":" + std::to_string(d.line) + ":" +
              std::to_string(d.column) + ": " + d.message;
  throw ParseError(std::move(d));
}

Tm parse_file(const std::string& path, Mode m) {
  SourceProgram src = read_source(path);
  try {
    return parse_term(src, m);
  } catch (const ParseError& e) {
    rethrow_located(src, e);
  }
}

struct Session {
  Mode mode = Mode::Extended;
  KindingEnv K;
  TypingEnv env;
  EvalOptions eopts;
};

Session make_session(const Options& o) {
  Session s;
  s.mode = o.mode();
  s.env = o.no_prelude ? TypingEnv{} : prelude_env(s.mode);
  s.eopts.mode = s.mode;
  s.eopts.prelude = !o.no_prelude;
  s.eopts.fuel = o.fuel;
  for (const auto& f : o.assume_files) {
    SourceProgram src = read_source(f);
    std::vector<Assumption> entries;
    try {
      entries = parse_assume_file(src, s.mode);
    } catch (const ParseError& e) {
      rethrow_located(src, e);
    }
    for (const auto& a : entries) {
      if (a.scheme) {
        s.env[a.name] = *a.scheme;
        continue;
      }
      Tm t = inject_library(a.term, s.mode);
      NameSupply ns = supply_avoiding(s.K, s.env);
      auto [k1, sch] = principal(s.K, s.env, t, ns);
      for (const auto& [n, k] : k1) s.K[n] = k;
      s.env[a.name] = sch;
    }
  }
  return s;
}

int cmd_parse(const Options& o, const std::string& file) {
  Tm t = parse_file(file, o.mode());
  if (o.json_out) {
    json j;
    j["term"] = pretty_term(t);
    std::cout << j.dump() << "\n";
  } else {
    std::cout << pretty_term(t) << "\n";
  }
  return 0;
}

int cmd_infer(const Options& o, const std::string& file) {
  Session s = make_session(o);
  Tm t = inject_library(parse_file(file, s.mode), s.mode);
  NameSupply ns = supply_avoiding(s.K, s.env);
  auto [k1, sch] = principal(s.K, s.env, t, ns);
  if (o.json_out) {
    json j;
    j["type"] = show_type(sch.body);
    json ks = json::object();
    for (const auto& [n, k] : sch.prefix) ks[n] = show_kind(k);
    for (const auto& [n, k] : k1) ks[n] = show_kind(k);
    j["kinds"] = ks;
    // the substitution on caller-supplied variables; empty for closed runs
    j["subst"] = json::object();
    std::cout << j.dump() << "\n";
  } else {
    if (!k1.empty()) std::cout << "kinds: " << show_kinding_env(k1) << "\n";
    std::cout << show_scheme(sch) << "\n";
  }
  return 0;
}

int cmd_check(const Options& o, const std::string& file, const std::string& type_text) {
  Session s = make_session(o);
  Tm t = inject_library(parse_file(file, s.mode), s.mode);
  SourceProgram tsrc{type_text, "<type>"};
  PolyType want;
  try {
    want = parse_scheme(tsrc, s.mode);
  } catch (const ParseError& e) {
    rethrow_located(tsrc, e);
  }
  bool ok = check(s.K, s.env, t, want);
  if (o.json_out) {
    json j;
    j["result"] = ok;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << (ok ? "true" : "false") << "\n";
  }
  return ok ? 0 : 1;
}

int cmd_eval(const Options& o, const std::string& file) {
  Session s = make_session(o);
  Tm t = inject_library(parse_file(file, s.mode), s.mode);
  if (!o.unsafe) {
    NameSupply ns = supply_avoiding(s.K, s.env);
    principal(s.K, s.env, t, ns);  // refuse ill-typed input
  }
  std::string shown;
  if (o.subst) {
    shown = pretty_term(eval(t, s.eopts));
  } else {
    shown = show_value(eval_big(t, s.eopts));
  }
  if (o.json_out) {
    json j;
    j["value"] = shown;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << shown << "\n";
  }
  return 0;
}

int cmd_trace(const Options& o, const std::string& file) {
  Session s = make_session(o);
  Tm t = inject_library(parse_file(file, s.mode), s.mode);
  if (!o.unsafe) {
    NameSupply ns = supply_avoiding(s.K, s.env);
    principal(s.K, s.env, t, ns);
  }
  std::vector<Tm> steps = trace(t, s.eopts);
  if (o.json_out) {
    json j;
    json arr = json::array();
    for (const auto& st : steps) arr.push_back(pretty_term(st));
    j["steps"] = arr;
    std::cout << j.dump() << "\n";
  } else {
    for (std::size_t i = 0; i < steps.size(); ++i)
      std::cout << i << ": " << pretty_term(steps[i]) << "\n";
  }
  return 0;
}

int cmd_relate(const Options& o, const std::string& relation, const std::string& fa,
               const std::string& fb) {
  Session s = make_session(o);

  auto load = [&](const std::string& f) -> PolyType {
    SourceProgram src = read_source(f);
    RelateInput ri;
    try {
      ri = parse_relate_input(src, s.mode);
    } catch (const ParseError& e) {
      rethrow_located(src, e);
    }
    PolyType sch;
    KindingEnv residual;
    if (ri.scheme) {
      sch = *ri.scheme;
    } else {
      Tm t = inject_library(ri.term, s.mode);
      NameSupply ns = supply_avoiding(s.K, s.env);
      std::tie(residual, sch) = principal(s.K, s.env, t, ns);
      for (const auto& [n, k] : residual) s.K[n] = k;
    }
    KindingEnv full = s.K;
    for (const auto& [n, k] : sch.prefix) full[n] = k;
    if (!is_event_type_kinded(full, sch.body))
      throw TypeError(src.origin + ": not an event scheme: " + show_scheme(sch));
    return sch;
  };

  PolyType s1 = load(fa);
  PolyType s2 = load(fb);
  bool result = false;
  Ty witness;
  if (relation == "member") {
    result = membership(s.K, s1, s2, &witness);
  } else if (relation == "generalization") {
    result = generalization(s.K, s1, s2);
  } else {
    result = specialization(s.K, s1, s2);
  }
  if (o.json_out) {
    json j;
    j["result"] = result;
    if (witness) j["witness"] = show_type(witness);
    std::cout << j.dump() << "\n";
  } else {
    std::cout << (result ? "true" : "false") << "\n";
    if (witness) std::cout << "witness: " << show_type(witness) << "\n";
  }
  return 0;
}

int cmd_run(const Options& o, const std::string& agent_file) {
  Session s = make_session(o);
  Tm agent = parse_file(agent_file, s.mode);
  HarnessConfig cfg;
  cfg.mode = s.mode;
  cfg.fuel = o.fuel;
  cfg.skip_bad = o.skip_bad;
  cfg.float_labels.insert(o.float_labels.begin(), o.float_labels.end());
  if (!o.init_expr.empty()) {
    SourceProgram isrc{o.init_expr, "<init>"};
    try {
      cfg.init = parse_term(isrc, s.mode);
    } catch (const ParseError& e) {
      rethrow_located(isrc, e);
    }
  }
  AgentHandle h = admit(s.K, s.env, agent, cfg);
  RunReport r = run_stream(s.K, h, std::cin, std::cout, cfg);
  std::cerr << report_json(r) << "\n";
  return 0;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.diag.message << "\n";
    return 1;
  } catch (const TypeError& e) {
    std::cerr << "type error: " << e.what() << "\n";
    return 1;
  } catch (const HarnessError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const StuckError& e) {
    std::cerr << "stuck: " << e.what() << "\n";
    return 2;
  } catch (const FuelExhausted& e) {
    std::cerr << "fuel exhausted: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EVL: a typed language for event processing"};
  app.require_subcommand(1);

  Options o;
  std::string file, type_text, relation, file_b;

  auto add_mode = [&](CLI::App* c) {
    c->add_option("--mode", o.mode_name, "core or extended")
        ->check(CLI::IsMember({"core", "extended"}))
        ->capture_default_str();
  };
  auto add_json = [&](CLI::App* c) { c->add_flag("--json", o.json_out, "machine-readable output"); };
  auto add_env = [&](CLI::App* c) {
    c->add_flag("--no-prelude", o.no_prelude, "treat operators as plain free variables");
    c->add_option("--assume", o.assume_files, "assumption file (name : scheme | name args = term)")
        ->type_size(1)
        ->allow_extra_args(false);
  };
  auto add_fuel = [&](CLI::App* c) {
    c->add_option("--fuel", o.fuel, "step budget (default $EVL_FUEL or 100000)");
  };

  CLI::App* cp = app.add_subcommand("parse", "parse a term and print it back");
  cp->add_option("file", file, ".evl file or -")->required();
  add_mode(cp);
  add_json(cp);

  CLI::App* ci = app.add_subcommand("infer", "print the principal typing");
  ci->add_option("file", file, ".evl file or -")->required();
  add_mode(ci);
  add_json(ci);
  add_env(ci);

  CLI::App* cc = app.add_subcommand("check", "check a term against a type scheme");
  cc->add_option("file", file, ".evl file or -")->required();
  cc->add_option("type", type_text, "expected type or scheme")->required();
  add_mode(cc);
  add_json(cc);
  add_env(cc);

  CLI::App* ce = app.add_subcommand("eval", "evaluate to a value");
  ce->add_option("file", file, ".evl file or -")->required();
  add_mode(ce);
  add_json(ce);
  add_env(ce);
  add_fuel(ce);
  ce->add_flag("--unsafe", o.unsafe, "skip the type check");
  ce->add_flag("--subst", o.subst, "use the substitution stepper instead of closures");

  CLI::App* ct = app.add_subcommand("trace", "print every reduction step");
  ct->add_option("file", file, ".evl file or -")->required();
  add_mode(ct);
  add_json(ct);
  add_env(ct);
  add_fuel(ct);
  ct->add_flag("--unsafe", o.unsafe, "skip the type check");

  CLI::App* cr = app.add_subcommand("relate", "decide an event-scheme relation");
  cr->add_option("relation", relation, "member | generalization | specialization")
      ->required()
      ->check(CLI::IsMember({"member", "generalization", "specialization"}));
  cr->add_option("a", file, "event scheme (term file, or `type ...`)")->required();
  cr->add_option("b", file_b, "event scheme (term file, or `type ...`)")->required();
  add_mode(cr);
  add_json(cr);
  add_env(cr);

  CLI::App* cx = app.add_subcommand("run", "stream NDJSON events through an agent");
  cx->add_option("agent-file", file, "agent .evl file");
  cx->add_option("--agent", file, "agent .evl file (flag spelling)");
  add_mode(cx);
  add_env(cx);
  add_fuel(cx);
  cx->add_option("--init", o.init_expr, "initial accumulator for fold agents");
  cx->add_flag("--skip-bad", o.skip_bad, "skip malformed or stuck events, keep counting");
  cx->add_option("--float-labels", o.float_labels, "label whose numbers ingest as Float (repeatable)")
      ->type_size(1)
      ->allow_extra_args(false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (cx->parsed() && file.empty()) {
    std::cerr << "error: run needs an agent file\n";
    return 1;
  }

  return guarded([&]() -> int {
    if (cp->parsed()) return cmd_parse(o, file);
    if (ci->parsed()) return cmd_infer(o, file);
    if (cc->parsed()) return cmd_check(o, file, type_text);
    if (ce->parsed()) return cmd_eval(o, file);
    if (ct->parsed()) return cmd_trace(o, file);
    if (cr->parsed()) return cmd_relate(o, relation, file, file_b);
    return cmd_run(o, file);
  });
}
