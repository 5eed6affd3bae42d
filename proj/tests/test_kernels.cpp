#include <vector>

#include <doctest.h>

#include "geepower/kernels.hpp"
#include "geepower/power.hpp"
#include "oracles.hpp"
#include "scenarios.hpp"

using namespace geepower;

TEST_CASE("layout is period-major") {
  const std::vector<int> periods{2, 5};
  const std::vector<int> sizes{2, 3};
  const auto layout = kernels::make_layout(periods, sizes);
  CHECK(layout.periods == std::vector<int>{2, 2, 5, 5, 5});
  CHECK(layout.subjects == std::vector<int>{0, 1, 0, 1, 2});
}

TEST_CASE("serial and parallel correlation fills are bit-identical") {
  const std::vector<int> periods{1, 2, 3, 4, 6, 7};
  const std::vector<int> sizes{9, 9, 9, 9, 9, 9};
  const auto layout = kernels::make_layout(periods, sizes);
  const CorrelationSpec specs[] = {
      {CorrelationKind::NestedExchangeable, {}, {}, 0.03, 0.015, {}},
      {CorrelationKind::ExponentialDecay, 0.03, 0.8, {}, {}, {}},
      {CorrelationKind::BlockExchangeable, {}, {}, 0.03, 0.015, 0.4},
      {CorrelationKind::ProportionalDecay, 0.03, 0.8, {}, {}, {}},
  };
  for (const auto& spec : specs) {
    Eigen::MatrixXd a, b;
    kernels::fill_correlation_serial(spec, layout, a);
    kernels::fill_correlation_parallel(spec, layout, b);
    CHECK(a.rows() == 54);
    CHECK(a == b);
  }
}

TEST_CASE("serial and parallel information sums are bit-identical") {
  for (const auto& spec : {testdata::example1(), testdata::example2(), testdata::example3(), testdata::eudl()}) {
    const auto design = build_design(spec);
    std::vector<CorrelationMatrix> rs;
    rs.reserve(design.sequences.size());
    for (const auto& seq : design.sequences) rs.push_back(build_R(spec.correlation, seq.profile, seq.sizes));
    std::vector<kernels::InformationTerm> terms;
    for (std::size_t s = 0; s < rs.size(); ++s) terms.push_back({&design.sequences[s], &rs[s]});
    CHECK(kernels::accumulate_information_serial(terms, spec) == kernels::accumulate_information_parallel(terms, spec));
  }
}

TEST_CASE("engine results do not depend on the execution mode") {
  oracle::SpecGenerator gen(2024);
  for (int i = 0; i < 10; ++i) {
    const auto spec = gen.next();
    const auto a = compute_power(spec, {Execution::Serial, ExposureClock::SinceFirstIntervention});
    const auto b = compute_power(spec, {Execution::Parallel, ExposureClock::SinceFirstIntervention});
    CHECK(a.covariance == b.covariance);
    CHECK(a.stddel == b.stddel);
  }
}

TEST_CASE("parallel accumulation reports a failing sequence") {
  auto spec = testdata::example3();
  const auto design = build_design(spec);
  std::vector<CorrelationMatrix> rs;
  for (const auto& seq : design.sequences) rs.push_back(build_R(spec.correlation, seq.profile, seq.sizes));
  std::vector<kernels::InformationTerm> terms;
  for (std::size_t s = 0; s < rs.size(); ++s) terms.push_back({&design.sequences[s], &rs[s]});
  spec.delta = 50.0;  // pushes the intervention-period means to 1 in floating point
  CHECK_THROWS_AS(kernels::accumulate_information_parallel(terms, spec), MeanRangeError);
  CHECK_THROWS_AS(kernels::accumulate_information_serial(terms, spec), MeanRangeError);
}
