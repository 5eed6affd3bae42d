#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "geepower/model.hpp"

namespace geepower {

/// Raw key/value content of a scenario, before interpretation. Every value
/// is kept as rows of tokens so scalars, vectors and matrices share one shape.
struct ScenarioFile {
  using Rows = std::vector<std::vector<std::string>>;
  std::map<std::string, Rows> entries;  // keys lower-cased

  bool contains(std::string_view key) const { return entries.count(std::string(key)) != 0; }
};

// Line-oriented "key = value" text. Matrices go in braces, one row per line
// (or rows separated by commas); '#' starts a comment.
ScenarioFile parse_scenario_text(std::string_view text);

// JSON object with the same keys; matrices as arrays of arrays.
ScenarioFile parse_scenario_json(std::string_view text);

// Interprets the raw entries, applying defaults (canonical link, alpha 0.05,
// df_choice 1). Throws ConfigError for missing or unusable keys.
TrialSpec to_trial_spec(const ScenarioFile& file);

enum class ScenarioFormat { Text, Json };

TrialSpec load_scenario(const std::filesystem::path& path, ScenarioFormat format);

// Locale-independent number parsing; throws ParseError naming `what`.
double parse_double(std::string_view token, std::string_view what);
int parse_int(std::string_view token, std::string_view what);

}  // namespace geepower
