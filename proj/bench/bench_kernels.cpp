#include <vector>

#include <benchmark/benchmark.h>

#include "geepower/correlation.hpp"
#include "geepower/kernels.hpp"
#include "geepower/power.hpp"
#include "geepower/scenario.hpp"

using namespace geepower;

namespace {

TrialSpec load(const char* name) {
  return load_scenario(std::string(GEEPOWER_SCENARIO_DIR) + "/" + name, ScenarioFormat::Text);
}

void fill(benchmark::State& state, const char* name, Execution exec) {
  const TrialSpec spec = load(name);
  const TrialDesign design = build_design(spec);
  const auto& seq = design.sequences.front();
  const auto layout = kernels::make_layout(seq.profile.observed_periods, seq.sizes);
  Eigen::MatrixXd out;
  for (auto _ : state) {
    kernels::fill_correlation(spec.correlation, layout, out, exec);
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["n"] = static_cast<double>(layout.size());
}

void accumulate(benchmark::State& state, const char* name, Execution exec) {
  const TrialSpec spec = load(name);
  const TrialDesign design = build_design(spec);
  std::vector<CorrelationMatrix> rs;
  rs.reserve(design.sequences.size());
  for (const auto& seq : design.sequences) rs.push_back(build_R(spec.correlation, seq.profile, seq.sizes));
  std::vector<kernels::InformationTerm> terms;
  for (std::size_t s = 0; s < rs.size(); ++s) terms.push_back({&design.sequences[s], &rs[s]});
  for (auto _ : state) {
    auto info = kernels::accumulate_information(terms, spec, exec);
    benchmark::DoNotOptimize(info.data());
  }
}

void end_to_end(benchmark::State& state, const char* name, Execution exec) {
  const TrialSpec spec = load(name);
  for (auto _ : state) {
    auto r = compute_power(spec, {exec, ExposureClock::SinceFirstIntervention});
    benchmark::DoNotOptimize(r.stddel);
  }
}

}  // namespace

BENCHMARK_CAPTURE(fill, ex4_serial, "example4_heart_health_now.txt", Execution::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(fill, ex4_parallel, "example4_heart_health_now.txt", Execution::Parallel)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(accumulate, ex1_serial, "example1_connect_home_normal.txt", Execution::Serial);
BENCHMARK_CAPTURE(accumulate, ex1_parallel, "example1_connect_home_normal.txt", Execution::Parallel);
BENCHMARK_CAPTURE(accumulate, ex4_serial, "example4_heart_health_now.txt", Execution::Serial)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(accumulate, ex4_parallel, "example4_heart_health_now.txt", Execution::Parallel)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(end_to_end, ex4_serial, "example4_heart_health_now.txt", Execution::Serial)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(end_to_end, ex4_parallel, "example4_heart_health_now.txt", Execution::Parallel)
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
