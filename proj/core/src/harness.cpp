#include "evl/harness.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "evl/infer.hpp"
#include "evl/prelude.hpp"
#include "evl/pretty.hpp"

namespace evl {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::pair<Tm, Ty> json_to_value(const std::string& line,
                                const std::set<std::string>& float_labels) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw HarnessError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw HarnessError("event is not a JSON object");
  if (j.empty()) throw HarnessError("empty event object");
  std::vector<std::pair<std::string, Tm>> fields;
  std::map<std::string, Ty> ftys;
  for (const auto& [label, v] : j.items()) {
    if (v.is_boolean()) {
      fields.emplace_back(label, mk_bool(v.get<bool>()));
      ftys[label] = ty_bool();
    } else if (v.is_string()) {
      fields.emplace_back(label, mk_string(v.get<std::string>()));
      ftys[label] = ty_string();
    } else if (v.is_number()) {
      bool integral = v.is_number_integer() || v.is_number_unsigned();
      if (integral && !float_labels.count(label)) {
        fields.emplace_back(label, mk_int(v.get<std::int64_t>()));
        ftys[label] = ty_int();
      } else {
        fields.emplace_back(label, mk_float(v.get<double>()));
        ftys[label] = ty_float();
      }
    } else {
      throw HarnessError("field `" + label + "` is not a scalar");
    }
  }
  return {mk_record(std::move(fields)), trecord(std::move(ftys))};
}

namespace {

json term_to_json(const Tm& t) {
  if (const auto* c = term_as<Term::Const>(t)) {
    if (c->base == "Bool") return std::get<bool>(c->lit);
    if (c->base == "Int") return std::get<std::int64_t>(c->lit);
    if (c->base == "Float") return std::get<double>(c->lit);
    return std::get<std::string>(c->lit);
  }
  if (const auto* r = term_as<Term::Record>(t)) {
    json o = json::object();
    for (const auto& [l, f] : r->fields) o[l] = term_to_json(f);
    return o;
  }
  throw HarnessError("cannot serialize a function value");
}

// The runtime encoding of builtin lists: {empty=true} or
// {empty=false, head=…, tail=<list>} all the way down.
bool list_shaped(const Tm& t) {
  const auto* r = term_as<Term::Record>(t);
  if (!r) return false;
  const Tm* empty = nullptr;
  const Tm* head = nullptr;
  const Tm* tail = nullptr;
  for (const auto& [l, f] : r->fields) {
    if (l == "empty") empty = &f;
    else if (l == "head") head = &f;
    else if (l == "tail") tail = &f;
  }
  if (!empty) return false;
  const auto* c = term_as<Term::Const>(*empty);
  if (!c || c->base != "Bool") return false;
  if (std::get<bool>(c->lit)) return r->fields.size() == 1;
  return r->fields.size() == 3 && head && tail && list_shaped(*tail);
}

}  // namespace

std::string value_to_json(const Tm& record_value) {
  if (!term_as<Term::Record>(record_value))
    throw HarnessError("result is not an event record: " + pretty_term(record_value));
  return term_to_json(record_value).dump();
}

AgentHandle admit(const KindingEnv& K, const TypingEnv& env, const Tm& agent,
                  const HarnessConfig& cfg, const Ty* sample) {
  TypingEnv g = prelude_env(cfg.mode);
  for (const auto& [n, s] : env) g[n] = s;
  AgentHandle h;
  h.term = inject_library(agent, cfg.mode);
  NameSupply ns = supply_avoiding(K, g);
  try {
    auto [k1, s] = principal(K, g, h.term, ns);
    h.kinds = k1;
    h.scheme = s;
  } catch (const TypeError& e) {
    throw HarnessError(std::string("agent does not type-check: ") + e.what());
  }
  KindingEnv full = K;
  for (const auto& [n, k] : h.kinds) full[n] = k;
  for (const auto& [n, k] : h.scheme.prefix) full[n] = k;

  std::vector<Ty> domains;
  Ty cod = h.scheme.body;
  while (const auto* a = as_arrow(cod)) {
    domains.push_back(a->dom);
    cod = a->cod;
  }
  if (domains.empty())
    throw HarnessError("agent takes no arguments: " + show_scheme(h.scheme));

  // A list-consuming domain is either List t or a variable whose kind
  // carries the full record view of lists ({empty, head, tail}); the
  // library combinators constrain their list argument that second way.
  // Returns the element type; null Ty = any event.
  auto list_elem_of = [&](const Ty& t) -> std::optional<Ty> {
    if (const auto* l = as_list(t)) return l->elem;
    const auto* v = as_var(t);
    if (!v) return std::nullopt;
    auto it = full.find(v->name);
    if (it == full.end() || it->second.universal()) return std::nullopt;
    const auto& fs = *it->second.fields;
    if (!fs.count("empty") || !fs.count("head") || !fs.count("tail"))
      return std::nullopt;
    return fs.at("head");
  };

  // agent shape
  Ty event_dom;
  if (cfg.init) {
    if (domains.size() < 2)
      throw HarnessError("--init given, but the agent is unary");
    if (domains.size() > 2)
      throw HarnessError("fold agents take exactly two arguments (accumulator, event)");
    h.shape = AgentHandle::Shape::Fold;
    event_dom = domains[1];
  } else if (auto elem = list_elem_of(domains[0]);
             elem && cfg.mode == Mode::Extended) {
    if (domains.size() > 1)
      throw HarnessError("agents with more than one argument require --init");
    h.shape = AgentHandle::Shape::Collect;
    event_dom = *elem;
  } else if (domains.size() == 1) {
    h.shape = AgentHandle::Shape::Map;
    event_dom = domains[0];
  } else {
    throw HarnessError("agent takes " + std::to_string(domains.size()) +
                       " arguments; aggregating agents require --init");
  }

  // the event parameter must be able to consume record events
  if (as_base(event_dom) || as_arrow(event_dom) || as_list(event_dom))
    throw HarnessError("event parameter has type " + show_type(event_dom) +
                       "; it cannot consume record events");

  // codomain: an event record, or (extended) a list of them
  Ty out_ty = cod;
  if (const auto* l = as_list(cod)) {
    if (cfg.mode != Mode::Extended)
      throw HarnessError("list-producing agent outside extended mode");
    out_ty = l->elem;
  }
  if (as_arrow(out_ty) || !is_event_type_kinded(full, out_ty))
    throw HarnessError("codomain " + show_type(out_ty) + " is not an event record");

  h.event_scheme = part_scheme(full, h.scheme, event_dom);

  if (cfg.init) {
    EvalOptions eo;
    eo.mode = cfg.mode;
    eo.fuel = cfg.fuel;
    Tm init_term = inject_library(*cfg.init, cfg.mode);
    try {
      h.init = value_to_term(eval_big(init_term, eo));
    } catch (const StuckError& e) {
      throw HarnessError(std::string("initial accumulator failed to evaluate: ") + e.what());
    }
    if (auto ity = ground_type_of_value(h.init)) {
      PolyType acc = part_scheme(full, h.scheme, domains[0]);
      if (!generic_instance(full, acc, PolyType::mono(*ity)))
        throw HarnessError("initial accumulator has type " + show_type(*ity) +
                           "; the agent expects " + show_scheme(acc));
    }
  }

  if (sample) {
    std::string rej = admit_event(K, h, *sample);
    if (!rej.empty()) throw HarnessError(rej);
  }
  return h;
}

std::string admit_event(const KindingEnv& K, const AgentHandle& h, const Ty& event_type) {
  KindingEnv kk = K;
  for (const auto& [n, k] : h.kinds) kk[n] = k;
  if (generic_instance(kk, h.event_scheme, PolyType::mono(event_type))) return "";

  // diagnosis: when the domain is a record-kinded variable, name the
  // missing labels explicitly
  const auto* v = as_var(h.event_scheme.body);
  const auto* er = as_record(event_type);
  if (v && er) {
    const Kind* k = nullptr;
    for (const auto& [n, pk] : h.event_scheme.prefix)
      if (n == v->name) k = &pk;
    if (k && !k->universal()) {
      std::vector<std::string> missing;
      for (const auto& [l, ft] : *k->fields) {
        (void)ft;
        if (!er->fields.count(l)) missing.push_back(l);
      }
      if (!missing.empty()) {
        std::string msg = "event does not satisfy the agent's kind constraint: missing {";
        for (size_t i = 0; i < missing.size(); ++i) {
          if (i) msg += ", ";
          msg += missing[i];
        }
        msg += "}";
        return msg;
      }
    }
  }
  return "event type " + show_type(event_type) + " does not match the agent domain " +
         show_scheme(h.event_scheme);
}

std::string report_json(const RunReport& r) {
  json o = json::object();
  o["in"] = r.in;
  o["out"] = r.out;
  o["skipped"] = r.skipped;
  o["stuck"] = r.stuck;
  return o.dump();
}

namespace {

struct Emitter {
  std::ostream& out;
  RunReport& report;

  void emit(const Tm& value) {
    if (list_shaped(value)) {
      Tm cur = value;
      while (true) {
        const auto* r = term_as<Term::Record>(cur);
        const Tm* empty = nullptr;
        const Tm* head = nullptr;
        const Tm* tail = nullptr;
        for (const auto& [l, f] : r->fields) {
          if (l == "empty") empty = &f;
          else if (l == "head") head = &f;
          else if (l == "tail") tail = &f;
        }
        if (std::get<bool>(term_as<Term::Const>(*empty)->lit)) break;
        out << value_to_json(*head) << '\n';
        ++report.out;
        cur = *tail;
      }
      return;
    }
    out << value_to_json(value) << '\n';
    ++report.out;
  }
};

}  // namespace

RunReport run_stream(const KindingEnv& K, const AgentHandle& h, std::istream& in,
                     std::ostream& out, const HarnessConfig& cfg) {
  RunReport report;
  Emitter emitter{out, report};
  EvalOptions eo;
  eo.mode = cfg.mode;
  eo.fuel = cfg.fuel;

  std::vector<Tm> collected;        // Collect
  Tm acc = h.init;                  // Fold
  std::uint64_t folded = 0;

  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = trim(line);
    if (body.empty()) continue;
    ++report.in;
    const std::string where = "line " + std::to_string(lineno) + ": ";

    Tm ev;
    Ty ety;
    try {
      std::tie(ev, ety) = json_to_value(body, cfg.float_labels);
    } catch (const HarnessError& e) {
      if (!cfg.skip_bad) throw HarnessError(where + e.what());
      ++report.skipped;
      continue;
    }
    if (std::string rej = admit_event(K, h, ety); !rej.empty()) {
      if (!cfg.skip_bad) throw HarnessError(where + rej);
      ++report.skipped;
      continue;
    }

    try {
      switch (h.shape) {
        case AgentHandle::Shape::Map:
          emitter.emit(value_to_term(eval_big(mk_app(h.term, ev), eo)));
          break;
        case AgentHandle::Shape::Collect:
          collected.push_back(ev);
          break;
        case AgentHandle::Shape::Fold:
          acc = value_to_term(eval_big(mk_app(mk_app(h.term, acc), ev), eo));
          ++folded;
          break;
      }
    } catch (const StuckError& e) {
      if (!cfg.skip_bad) throw StuckError(where + e.what());
      ++report.stuck;
    } catch (const HarnessError& e) {  // unserializable result
      if (!cfg.skip_bad) throw HarnessError(where + e.what());
      ++report.stuck;
    }
  }

  // end of stream
  try {
    if (h.shape == AgentHandle::Shape::Collect && !collected.empty()) {
      Tm list = mk_record({{"empty", mk_bool(true)}});
      for (auto it = collected.rbegin(); it != collected.rend(); ++it)
        list = mk_record({{"empty", mk_bool(false)}, {"head", *it}, {"tail", list}});
      emitter.emit(value_to_term(eval_big(mk_app(h.term, list), eo)));
    } else if (h.shape == AgentHandle::Shape::Fold && folded > 0) {
      emitter.emit(acc);
    }
  } catch (const StuckError&) {
    if (!cfg.skip_bad) throw;
    ++report.stuck;
  } catch (const HarnessError&) {
    if (!cfg.skip_bad) throw;
    ++report.stuck;
  }
  return report;
}

}  // namespace evl
