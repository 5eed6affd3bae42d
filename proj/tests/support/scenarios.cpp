#include "scenarios.hpp"

#include "geepower/scenario.hpp"

namespace testdata {

std::string scenario_path(const std::string& name) { return std::string(GEEPOWER_SCENARIO_DIR) + "/" + name; }
std::string data_path(const std::string& name) { return std::string(GEEPOWER_TEST_DATA_DIR) + "/" + name; }

namespace {
geepower::TrialSpec load(const std::string& name) {
  return geepower::load_scenario(scenario_path(name), geepower::ScenarioFormat::Text);
}
}  // namespace

geepower::TrialSpec example1() { return load("example1_connect_home_normal.txt"); }
geepower::TrialSpec example2() { return load("example2_connect_home_poisson.txt"); }
geepower::TrialSpec example3() { return load("example3_decision_making.txt"); }
geepower::TrialSpec example4() { return load("example4_heart_health_now.txt"); }
geepower::TrialSpec eudl() { return load("eudl_parallel.txt"); }

}  // namespace testdata
