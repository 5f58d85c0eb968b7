#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "evl/syntax.hpp"

namespace evl {

struct StuckError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FuelExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EvalOptions {
  Mode mode = Mode::Extended;
  // With the prelude off, operator names are plain free variables and the
  // calculus is the pure one: no delta rules, no primitive spine values.
  bool prelude = true;
  std::uint64_t fuel = 100000;
};

// Operators interpreted by delta rules. nil/cons only exist in extended mode.
bool is_primitive(const std::string& name, const EvalOptions& opts);
int primitive_arity(const std::string& name);  // -1 when unknown

// Values: constants, lambdas, records of values, and partial primitive
// applications (a primitive head applied to fewer values than its arity).
bool is_value(const Tm& t, const EvalOptions& opts);

// Capture-avoiding [replacement/name]body.
Tm subst_term(const std::string& name, const Tm& replacement, const Tm& body);

// Unique decomposition t = E[focus]. Redex means the focus matches an axiom
// shape (select/modify on a missing label classify as Stuck); delta side
// conditions such as integer division by zero only surface at contract.
// plug rebuilds the whole term from a new focus.
struct Decomposition {
  enum class Kind { Value, Redex, Stuck } kind;
  Tm focus;                          // null for Value
  std::function<Tm(const Tm&)> plug;  // identity for Value/Stuck
};
Decomposition decompose(const Tm& t, const EvalOptions& opts);

// One axiom or delta step on a redex.
Tm contract(const Tm& redex, const EvalOptions& opts);

// One-step reduction; nullopt when t is a value. Throws StuckError.
std::optional<Tm> step(const Tm& t, const EvalOptions& opts);

// Iterated step, spending one fuel unit per step.
Tm eval(const Tm& t, const EvalOptions& opts);
// Every intermediate term, initial and final included.
std::vector<Tm> trace(const Tm& t, const EvalOptions& opts);

// Delta rules on value terms; args.size() must equal the operator's arity.
Tm apply_primitive(const std::string& op, const std::vector<Tm>& args);

// --- environment-based big-step evaluator (used by the stream harness and
// --- for differential testing against the stepper above) ---

struct Value;
using Val = std::shared_ptr<const Value>;

struct EnvNode;
using EnvPtr = std::shared_ptr<const EnvNode>;
struct EnvNode {
  std::string name;
  Val val;
  EnvPtr next;
};
EnvPtr env_bind(EnvPtr env, std::string name, Val v);
const Val* env_lookup(const EnvPtr& env, const std::string& name);

struct Value {
  struct ConstV {
    Lit lit;
    std::string base;
  };
  struct RecordV {
    std::vector<std::pair<std::string, Val>> fields;  // source order
  };
  struct ClosureV {
    std::string param;
    Tm body;
    EnvPtr env;
    std::optional<std::string> self;  // set for letrec-bound closures
  };
  struct PrimV {
    std::string op;
    std::vector<Val> args;
  };
  std::variant<ConstV, RecordV, ClosureV, PrimV> v;
};

Val vconst(Lit lit, std::string base);
Val vrecord(std::vector<std::pair<std::string, Val>> fields);
const Value::ConstV* val_as_const(const Val& v);
const Value::RecordV* val_as_record(const Val& v);

Val eval_big(const Tm& t, const EvalOptions& opts);
Val eval_big(const Tm& t, const EnvPtr& env, const EvalOptions& opts);

// Reads a value back as a term. Closures substitute their captured
// environment into the lambda body; a recursive closure comes back as
// letrec f = \x. ... in f.
Tm value_to_term(const Val& v);
std::string show_value(const Val& v);

}  // namespace evl
