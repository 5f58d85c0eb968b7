#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>
#include <string>

#include "evl/eval.hpp"
#include "evl/harness.hpp"
#include "evl/infer.hpp"
#include "evl/parser.hpp"
#include "evl/prelude.hpp"
#include "evl/pretty.hpp"
#include "evl/unify.hpp"

using namespace evl;

namespace {

std::string corpus(const std::string& name) {
  std::ifstream f(std::string(EVL_CORPUS_DIR) + "/" + name, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const std::string kPipelineSrc = corpus("fire_danger_pipeline.evl");
const std::string kFarToCelSrc = corpus("fartocel_applied.evl");

Tm pipeline_term() { return parse_term({kPipelineSrc, "bench"}, Mode::Extended); }

// a cons list of n float literals, against the injected library
Tm float_list(int n) {
  Tm t = mk_var("nil");
  for (int i = 0; i < n; ++i)
    t = mk_app(mk_app(mk_var("cons"), mk_float(double(i))), t);
  return t;
}

void BM_parse_pipeline(benchmark::State& state) {
  for (auto _ : state) {
    Tm t = parse_term({kPipelineSrc, "bench"}, Mode::Extended);
    benchmark::DoNotOptimize(t);
  }
}
BENCHMARK(BM_parse_pipeline);

void BM_pretty_pipeline(benchmark::State& state) {
  Tm t = pipeline_term();
  for (auto _ : state) {
    std::string s = pretty_term(t);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_pretty_pipeline);

void BM_unify_kinded_merge(benchmark::State& state) {
  KindingEnv K{{"a1", Kind::rec({{"location", tvar("a3")}})},
               {"a2", Kind::rec({{"fire_danger", ty_string()}, {"location", ty_string()}})},
               {"a3", Kind::u()}};
  for (auto _ : state) {
    UnifyResult r = unify(K, {{tvar("a1"), tvar("a2")}});
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_unify_kinded_merge);

void BM_infer_fartocel(benchmark::State& state) {
  TypingEnv env = prelude_env(Mode::Extended);
  Tm t = parse_term({kFarToCelSrc, "bench"}, Mode::Extended);
  for (auto _ : state) {
    NameSupply names = supply_avoiding({}, env);
    auto r = principal({}, env, t, names);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_infer_fartocel);

void BM_infer_pipeline(benchmark::State& state) {
  TypingEnv env = prelude_env(Mode::Extended);
  Tm t = inject_library(pipeline_term(), Mode::Extended);
  for (auto _ : state) {
    NameSupply names = supply_avoiding({}, env);
    auto r = principal({}, env, t, names);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_infer_pipeline);

void BM_eval_subst_fartocel(benchmark::State& state) {
  EvalOptions opts{Mode::Extended, true, 100000};
  Tm t = parse_term({kFarToCelSrc, "bench"}, Mode::Extended);
  for (auto _ : state) {
    Tm v = eval(t, opts);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_eval_subst_fartocel);

void BM_eval_closure_fartocel(benchmark::State& state) {
  EvalOptions opts{Mode::Extended, true, 100000};
  Tm t = parse_term({kFarToCelSrc, "bench"}, Mode::Extended);
  for (auto _ : state) {
    Val v = eval_big(t, opts);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_eval_closure_fartocel);

void BM_eval_fold(benchmark::State& state) {
  EvalOptions opts{Mode::Extended, true, 100000000};
  Tm sum = parse_term({"aggregatel (\\a. \\e. a + e) 0.0", "bench"}, Mode::Extended);
  Tm t = inject_library(mk_app(sum, float_list(int(state.range(0)))), Mode::Extended);
  for (auto _ : state) {
    Val v = eval_big(t, opts);
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_eval_fold)->Range(8, 512);

void BM_harness_event(benchmark::State& state) {
  KindingEnv K;
  TypingEnv env = prelude_env(Mode::Extended);
  HarnessConfig cfg;
  cfg.mode = Mode::Extended;
  AgentHandle h = admit(K, env, parse_term({corpus("fartocel.evl"), "bench"}, Mode::Extended), cfg);
  const std::string line = "{\"temperature\": 50.0}\n";
  for (auto _ : state) {
    std::istringstream in(line);
    std::ostringstream out;
    RunReport r = run_stream(K, h, in, out, cfg);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_harness_event);

}  // namespace

BENCHMARK_MAIN();
