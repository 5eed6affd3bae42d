#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "geepower/model.hpp"

namespace geepower {

// How elapsed exposure is counted when implementation periods separate the
// control and intervention spans.
enum class ExposureClock {
  SinceFirstIntervention,  // e = t - q0 + 1; implementation periods do not accrue
  SinceLastControl,        // e = t - b1; implementation periods accrue
};

/// Parsed structure of one design-pattern row. Calendar periods are 1-based.
struct SequenceProfile {
  int seq_index = 0;
  std::vector<int> observed_periods;  // cell != 2 and size > 0, ascending
  std::vector<int> observed_states;   // cell state for each observed period
  std::optional<int> b0, b1;          // control span
  std::optional<int> q0, q1;          // intervention span (unset for non-monotone rows)
  int c = 0;                          // implementation periods between the spans
  bool monotone = true;

  int observed_count() const { return static_cast<int>(observed_periods.size()); }
  int control_count() const { return b0 ? *b1 - *b0 + 1 : 0; }
  int intervention_count() const { return q0 ? *q1 - *q0 + 1 : 0; }
};

SequenceProfile parse_sequence(std::span<const int> dp_row, std::span<const int> sizes_row, int seq_index = 1,
                               EffectType effect_type = EffectType::Average);

// Treatment covariate u for calendar period t of the profile.
double exposure(const SequenceProfile& profile, int t, EffectType effect_type, int q,
                ExposureClock clock = ExposureClock::SinceFirstIntervention);

/// Cluster-period level design for one sequence.
struct SequenceDesign {
  SequenceProfile profile;
  Eigen::MatrixXd x_rows;        // J_i x p, last column is the exposure
  std::vector<int> sizes;        // N per observed period
  std::vector<double> exposures;
  int clusters = 0;              // I_s
  int p = 0;

  int observations() const;      // sum of sizes, the per-cluster n
};

struct TrialDesign {
  std::vector<SequenceDesign> sequences;
  int p = 0;
  long total_clusters = 0;
  long totaln = 0;
};

// Expands a validated spec into per-sequence design matrices.
TrialDesign build_design(const TrialSpec& spec, ExposureClock clock = ExposureClock::SinceFirstIntervention);

// Linear predictor for each observed cluster-period of a sequence design.
Eigen::VectorXd linear_predictor(const SequenceDesign& design, const TrialSpec& spec);

}  // namespace geepower
