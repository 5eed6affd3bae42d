#include "geepower/design.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace geepower {

namespace {

bool is_incremental(EffectType e) { return e != EffectType::Average; }

Eigen::VectorXd parameter_vector(const TrialSpec& spec) {
  Eigen::VectorXd theta(static_cast<Eigen::Index>(spec.beta_period_effects.size() + 1));
  for (std::size_t i = 0; i < spec.beta_period_effects.size(); ++i) {
    theta(static_cast<Eigen::Index>(i)) = spec.beta_period_effects[i];
  }
  theta(theta.size() - 1) = spec.delta;
  return theta;
}

}  // namespace

SequenceProfile parse_sequence(std::span<const int> dp_row, std::span<const int> sizes_row, int seq_index,
                               EffectType effect_type) {
  if (dp_row.size() != sizes_row.size()) {
    throw IndexError("sequence " + std::to_string(seq_index) + ": design row and size row differ in length");
  }
  SequenceProfile prof;
  prof.seq_index = seq_index;

  // Monotone: no control cell after the first intervention cell.
  bool seen_intervention = false;
  for (int cell : dp_row) {
    if (cell == kIntervention) seen_intervention = true;
    if (cell == kControl && seen_intervention) prof.monotone = false;
  }
  if (!prof.monotone && is_incremental(effect_type)) {
    throw NonMonotoneSequenceError("sequence " + std::to_string(seq_index) +
                                   " has control cells after intervention cells");
  }

  for (std::size_t j = 0; j < dp_row.size(); ++j) {
    const int t = static_cast<int>(j) + 1;
    const int cell = dp_row[j];
    if (cell == kNoData || sizes_row[j] <= 0) continue;
    prof.observed_periods.push_back(t);
    prof.observed_states.push_back(cell);
    if (cell == kControl) {
      if (!prof.b0) prof.b0 = t;
      prof.b1 = t;
    } else if (cell == kIntervention && prof.monotone) {
      if (!prof.q0) prof.q0 = t;
      prof.q1 = t;
    }
  }
  if (prof.b1 && prof.q0) prof.c = *prof.q0 - *prof.b1 - 1;
  return prof;
}

double exposure(const SequenceProfile& profile, int t, EffectType effect_type, int q, ExposureClock clock) {
  const auto it = std::find(profile.observed_periods.begin(), profile.observed_periods.end(), t);
  if (it == profile.observed_periods.end()) {
    throw IndexError("period " + std::to_string(t) + " is not observed in sequence " +
                     std::to_string(profile.seq_index));
  }
  const int state = profile.observed_states[static_cast<std::size_t>(it - profile.observed_periods.begin())];
  if (effect_type == EffectType::Average) return state == kIntervention ? 1.0 : 0.0;
  if (state != kIntervention) return 0.0;
  if (q < 1) throw DomainError("max_intervention_period must be at least 1");
  if (!profile.q0) {
    throw NonMonotoneSequenceError("sequence " + std::to_string(profile.seq_index) + " has no intervention span");
  }

  int elapsed = t - *profile.q0 + 1;
  if (clock == ExposureClock::SinceLastControl && profile.b1) elapsed = t - *profile.b1;

  const double u = static_cast<double>(elapsed) / q;
  if (effect_type == EffectType::ExtendedIncremental && elapsed > q) return 1.0;
  return u;
}

int SequenceDesign::observations() const { return std::accumulate(sizes.begin(), sizes.end(), 0); }

TrialDesign build_design(const TrialSpec& spec, ExposureClock clock) {
  TrialDesign out;
  out.p = spec.parameter_count();
  const int q = spec.max_intervention_period.value_or(0);

  for (std::size_t s = 0; s < spec.sequences(); ++s) {
    SequenceDesign d;
    d.profile = parse_sequence(spec.design_pattern.row(s), spec.cp_sizes.row(s), static_cast<int>(s) + 1,
                               spec.intervention_effect_type);
    d.p = out.p;
    d.clusters = spec.clusters_per_sequence[s];

    const auto rows = static_cast<Eigen::Index>(d.profile.observed_periods.size());
    d.x_rows = Eigen::MatrixXd::Zero(rows, out.p);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const int t = d.profile.observed_periods[static_cast<std::size_t>(r)];
      const double u = exposure(d.profile, t, spec.intervention_effect_type, q, clock);
      if (spec.period_effect_type == PeriodEffect::Categorical) {
        d.x_rows(r, t - 1) = 1.0;
      } else {
        d.x_rows(r, 0) = 1.0;
        d.x_rows(r, 1) = t - 1;
      }
      d.x_rows(r, out.p - 1) = u;
      d.exposures.push_back(u);
      d.sizes.push_back(spec.cp_sizes(s, static_cast<std::size_t>(t - 1)));
    }

    out.total_clusters += d.clusters;
    out.totaln += static_cast<long>(d.clusters) * d.observations();
    out.sequences.push_back(std::move(d));
  }
  return out;
}

Eigen::VectorXd linear_predictor(const SequenceDesign& design, const TrialSpec& spec) {
  const Eigen::VectorXd theta = parameter_vector(spec);
  if (theta.size() != design.x_rows.cols()) {
    throw DomainError("beta_period_effects length does not match the period effect model");
  }
  return design.x_rows * theta;
}

}  // namespace geepower
