#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "evl/eval.hpp"
#include "evl/events.hpp"
#include "evl/syntax.hpp"
#include "evl/types.hpp"

namespace evl {

// Bad wire input / failed admission. Evaluation failures keep their own
// exception types (StuckError, FuelExhausted).
struct HarnessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HarnessConfig {
  Mode mode = Mode::Extended;
  std::uint64_t fuel = 100000;
  // Labels whose JSON numbers always ingest as Float, even when written
  // without a fractional part.
  std::set<std::string> float_labels;
  // Continue past malformed/ill-kinded inputs (counted skipped) and
  // stuck evaluations (counted stuck) instead of failing the run.
  bool skip_bad = false;
  // Initial accumulator for fold agents (first parameter).
  std::optional<Tm> init;
};

// One JSON object line -> (record value, ground record type). Scalars
// only: nested objects, arrays, nulls and the empty object are errors.
// Numbers ingest as Int when written integrally, Float otherwise;
// float_labels forces Float per label.
std::pair<Tm, Ty> json_to_value(const std::string& line,
                                const std::set<std::string>& float_labels);

// Record value -> one JSON object line (keys serialized sorted).
// Throws HarnessError on non-record or function-valued fields.
std::string value_to_json(const Tm& record_value);

struct AgentHandle {
  // per-event application; collect the stream into one builtin list;
  // left fold with an initial accumulator
  enum class Shape { Map, Collect, Fold };
  Shape shape = Shape::Map;
  Tm term;               // library-injected agent
  PolyType scheme;       // principal scheme
  KindingEnv kinds;      // residual kinding context
  PolyType event_scheme; // domain part-closure events must instantiate
  Tm init;               // Fold only
};

// EPA admission: infers the agent under the prelude plus `env`, checks
// the event shape of domain and codomain, classifies the agent shape,
// and (when `sample` is given) pre-checks a sample event type. Throws
// HarnessError with an explanation (missing labels, non-record
// codomain, arity/--init mismatches) on rejection.
AgentHandle admit(const KindingEnv& K, const TypingEnv& env, const Tm& agent,
                  const HarnessConfig& cfg, const Ty* sample = nullptr);

// Empty string when the ground event type satisfies the handle's domain
// constraint; otherwise a rejection message.
std::string admit_event(const KindingEnv& K, const AgentHandle& h, const Ty& event_type);

struct RunReport {
  std::uint64_t in = 0, out = 0, skipped = 0, stuck = 0;
};

std::string report_json(const RunReport& r);

// NDJSON in, NDJSON out, order-preserving. Throws HarnessError /
// StuckError / FuelExhausted on the first failure unless cfg.skip_bad.
RunReport run_stream(const KindingEnv& K, const AgentHandle& h, std::istream& in,
                     std::ostream& out, const HarnessConfig& cfg);

}  // namespace evl
