#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "geepower/scenario.hpp"
#include "scenarios.hpp"

using namespace geepower;

namespace {

const char* kEudlText = R"(
# parallel arms
DesignPattern = {
  0 1 1
  0 0 0
}
cp_size_matrix = {30 30 30, 30 30 30}
m = 20 20
DIST = Binary       # case does not matter
phi = 1
intervention_effect_type = ave
period_effect_type = cat
beta_period_effects = 0.405 -0.01 -0.01
delta = -0.357
corr_type = ne
alpha1 = 0.02
alpha2 = 0.01
)";

const char* kEudlJson = R"({
  "designpattern": [[0, 1, 1], [0, 0, 0]],
  "cp_size_matrix": [[30, 30, 30], [30, 30, 30]],
  "m": [20, 20],
  "dist": "BINARY",
  "phi": 1,
  "intervention_effect_type": "AVE",
  "period_effect_type": "CAT",
  "beta_period_effects": [0.405, -0.01, -0.01],
  "delta": -0.357,
  "corr_type": "NE",
  "alpha1": 0.02,
  "alpha2": 0.01
})";

std::string without_line(std::string text, const std::string& prefix) {
  const auto pos = text.find("\n" + prefix);
  REQUIRE(pos != std::string::npos);
  const auto end = text.find('\n', pos + 1);
  text.erase(pos, end - pos);
  return text;
}

}  // namespace

TEST_CASE("text scenario parses with comments, commas and mixed case") {
  const auto spec = to_trial_spec(parse_scenario_text(kEudlText));
  CHECK(spec.design_pattern == IntMatrix::from_rows({{0, 1, 1}, {0, 0, 0}}));
  CHECK(spec.cp_sizes == IntMatrix::from_rows({{30, 30, 30}, {30, 30, 30}}));
  CHECK(spec.clusters_per_sequence == std::vector<int>{20, 20});
  CHECK(spec.outcome.dist == Distribution::Binary);
  CHECK(spec.outcome.link == Link::Logit);
  CHECK(spec.intervention_effect_type == EffectType::Average);
  CHECK(spec.period_effect_type == PeriodEffect::Categorical);
  CHECK(spec.beta_period_effects == std::vector<double>{0.405, -0.01, -0.01});
  CHECK(spec.delta == -0.357);
  CHECK(spec.correlation.kind == CorrelationKind::NestedExchangeable);
  CHECK(*spec.correlation.alpha1 == 0.02);
  CHECK(*spec.correlation.alpha2 == 0.01);
  CHECK(spec.sig_level == 0.05);
  CHECK(spec.df_choice == DfChoice::ClustersMinusParams);
}

TEST_CASE("json and text scenarios are equivalent") {
  const auto a = to_trial_spec(parse_scenario_text(kEudlText));
  const auto b = to_trial_spec(parse_scenario_json(kEudlJson));
  CHECK(a.design_pattern == b.design_pattern);
  CHECK(a.cp_sizes == b.cp_sizes);
  CHECK(a.clusters_per_sequence == b.clusters_per_sequence);
  CHECK(a.beta_period_effects == b.beta_period_effects);
  CHECK(a.delta == b.delta);
  CHECK(a.correlation.alpha1 == b.correlation.alpha1);
  CHECK(a.correlation.alpha2 == b.correlation.alpha2);
}

TEST_CASE("shipped scenario matches the inline one") {
  const auto a = to_trial_spec(parse_scenario_text(kEudlText));
  const auto b = testdata::eudl();
  CHECK(a.design_pattern == b.design_pattern);
  CHECK(a.beta_period_effects == b.beta_period_effects);
}

TEST_CASE("missing required keys name the key") {
  for (const std::string key : {"designpattern", "cp_size_matrix", "m", "dist", "phi", "delta", "alpha1"}) {
    CAPTURE(key);
    std::string text = kEudlText;
    if (key == "designpattern") {
      text = "cp_size_matrix = {30 30 30, 30 30 30}\nm = 20 20\nDIST = Binary\nphi = 1\n"
             "intervention_effect_type = ave\nperiod_effect_type = cat\nbeta_period_effects = 0.405 -0.01 -0.01\n"
             "delta = -0.357\ncorr_type = ne\nalpha1 = 0.02\nalpha2 = 0.01\n";
    } else if (key == "dist") {
      text = without_line(text, "DIST");
    } else {
      text = without_line(text, key + " ");
    }
    try {
      to_trial_spec(parse_scenario_text(text));
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("'" + key + "'") != std::string::npos);
    }
  }
}

TEST_CASE("correlation keys follow corr_type") {
  std::string text = kEudlText;
  const auto pos = text.find("corr_type = ne");
  text.replace(pos, 14, "corr_type = ed");
  CHECK_THROWS_AS(to_trial_spec(parse_scenario_text(text)), ConfigError);
  text += "alpha0 = 0.03\nr0 = 0.8\n";
  CHECK(to_trial_spec(parse_scenario_text(text)).correlation.kind == CorrelationKind::ExponentialDecay);
}

TEST_CASE("ragged matrix rows report the row index") {
  std::string text = kEudlText;
  const auto pos = text.find("0 0 0\n}");
  text.replace(pos, 5, "0 0");
  try {
    to_trial_spec(parse_scenario_text(text));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("designpattern") != std::string::npos);
    CHECK(msg.find("row 2") != std::string::npos);
  }
}

TEST_CASE("syntax errors") {
  CHECK_THROWS_AS(parse_scenario_text("delta -0.3\n"), ParseError);
  CHECK_THROWS_AS(parse_scenario_text("designpattern = {\n 0 1\n"), ParseError);
  CHECK_THROWS_AS(parse_scenario_text("designpattern = {0 1} trailing\n"), ParseError);
  CHECK_THROWS_AS(parse_scenario_text("colour = red\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_text("delta = 1\nDelta = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_json("[1, 2]"), ParseError);
  CHECK_THROWS_AS(parse_scenario_json("{\"delta\": "), ParseError);
}

TEST_CASE("optional keys") {
  std::string text = kEudlText;
  text += "alpha = 0.1\ndf_choice = 2\nlink = identity\n";
  const auto spec = to_trial_spec(parse_scenario_text(text));
  CHECK(spec.sig_level == 0.1);
  CHECK(spec.df_choice == DfChoice::ClustersMinusTwo);
  CHECK(spec.outcome.link == Link::Identity);

  std::string bad = kEudlText;
  bad += "df_choice = 3\n";
  CHECK_THROWS_AS(to_trial_spec(parse_scenario_text(bad)), ConfigError);
}

TEST_CASE("number parsing is strict") {
  CHECK(parse_double("-0.357", "delta") == -0.357);
  CHECK(parse_double("1e-3", "delta") == 0.001);
  CHECK_THROWS_AS(parse_double("0,5", "delta"), ParseError);
  CHECK_THROWS_AS(parse_double("abc", "delta"), ParseError);
  CHECK(parse_int("30", "m") == 30);
  CHECK_THROWS_AS(parse_int("3.5", "m"), ParseError);
}

TEST_CASE("missing files are reported") {
  CHECK_THROWS(load_scenario(testdata::data_path("does_not_exist.txt"), ScenarioFormat::Text));
}
