#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "geepower/model.hpp"

namespace geepower {

enum class ViolationCode {
  Structure,               // S0: dimensions, cell values, cluster counts, phi, alpha
  SizeAlignment,           // V1
  BetaLength,              // V2
  MeanRange,               // V3
  FrechetBounds,           // V4
  CorrelationParameters,   // V5
  PeriodCoverage,          // V6
  IncrementalPattern,      // V7
  MaintenancePeriod,       // V8
  CohortSizes,             // V9
  BinaryDispersion,        // V10
};

std::string_view code_name(ViolationCode code);

struct Violation {
  ViolationCode code;
  std::string message;
  std::vector<int> indices;  // 1-based (sequence, period) or similar, per code
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationCode code) const;
  std::string to_string() const;
};

/// Runs every consistency rule and collects all failures; never throws for
/// a bad spec.
ValidationReport validate(const TrialSpec& spec);

}  // namespace geepower
