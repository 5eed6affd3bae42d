#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "geepower/model.hpp"
#include "geepower/power.hpp"

namespace geepower {

// Half-away-from-zero rounding to a fixed number of decimals.
double round_half_away(double value, int decimals);
std::string format_fixed4(double value);

// Narrative line naming outcome, correlation structure, effect model and delta.
std::string header_line(const TrialSpec& spec);

/// Header plus the eleven-column table; theta listed vertically.
std::string render_report(const TrialSpec& spec, const PowerResult& result);

// Sequence profiles, exposures, matrix sizes and the full covariance.
std::string render_explain(const TrialSpec& spec, const CovarianceResult& cov);

enum class SweepParam { Delta, Alpha0, R0, Alpha1, Alpha2, Alpha3, ClusterMultiplier, CpSizeMultiplier };

SweepParam parse_sweep_param(std::string_view name);
std::string_view sweep_param_name(SweepParam param);

// Copy of `spec` with the swept parameter set to `value`. Multipliers must
// be positive integers; throws ConfigError otherwise.
TrialSpec apply_sweep_value(const TrialSpec& spec, SweepParam param, double value);

struct SweepRow {
  double value = 0.0;
  std::optional<PowerResult> result;
  std::string error;  // validation codes or runtime failure; empty on success
};

/// Evaluates every value, re-validating each point. Rows come back in input
/// order. threads <= 0 means the OpenMP default.
std::vector<SweepRow> run_sweep(const TrialSpec& spec, SweepParam param, const std::vector<double>& values,
                                int threads = 0, const EngineOptions& options = {});

void write_sweep_csv(std::ostream& os, SweepParam param, const std::vector<SweepRow>& rows);

// Plain-text power curve, one bar per sweep value.
std::string render_power_curve(SweepParam param, const std::vector<SweepRow>& rows);

}  // namespace geepower
