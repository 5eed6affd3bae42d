#include "geepower/validation.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "geepower/correlation.hpp"
#include "geepower/design.hpp"

namespace geepower {

namespace {

bool is_probability(double v) { return std::isfinite(v) && v >= 0.0 && v < 1.0; }

class Collector {
 public:
  void add(ViolationCode code, std::string message, std::vector<int> indices = {}) {
    report_.violations.push_back({code, std::move(message), std::move(indices)});
  }
  ValidationReport take() { return std::move(report_); }
  bool has(ViolationCode code) const { return report_.has(code); }

 private:
  ValidationReport report_;
};

std::string cell_name(std::size_t s, std::size_t j) {
  return "(" + std::to_string(s + 1) + "," + std::to_string(j + 1) + ")";
}

bool check_structure(const TrialSpec& spec, Collector& out) {
  bool ok = true;
  const auto S = spec.sequences();
  const auto J = spec.periods();
  if (S == 0 || J == 0) {
    out.add(ViolationCode::Structure, "design pattern is empty");
    return false;
  }
  if (spec.cp_sizes.rows() != S || spec.cp_sizes.cols() != J) {
    out.add(ViolationCode::SizeAlignment,
            "cp_size_matrix is " + std::to_string(spec.cp_sizes.rows()) + "x" + std::to_string(spec.cp_sizes.cols()) +
                " but the design pattern is " + std::to_string(S) + "x" + std::to_string(J));
    ok = false;
  }
  if (spec.clusters_per_sequence.size() != S) {
    out.add(ViolationCode::Structure, "m has " + std::to_string(spec.clusters_per_sequence.size()) +
                                          " entries, expected one per sequence (" + std::to_string(S) + ")");
    ok = false;
  } else {
    for (std::size_t s = 0; s < S; ++s) {
      if (spec.clusters_per_sequence[s] < 1) {
        out.add(ViolationCode::Structure, "sequence " + std::to_string(s + 1) + " has no clusters",
                {static_cast<int>(s) + 1});
        ok = false;
      }
    }
  }
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t j = 0; j < J; ++j) {
      const int cell = spec.design_pattern(s, j);
      if (cell != kControl && cell != kIntervention && cell != kNoData) {
        out.add(ViolationCode::Structure, "design pattern cell " + cell_name(s, j) + " is " + std::to_string(cell) +
                                              ", expected 0, 1 or 2",
                {static_cast<int>(s) + 1, static_cast<int>(j) + 1});
        ok = false;
      }
      if (ok && spec.cp_sizes(s, j) < 0) {
        out.add(ViolationCode::Structure, "cluster-period size " + cell_name(s, j) + " is negative",
                {static_cast<int>(s) + 1, static_cast<int>(j) + 1});
        ok = false;
      }
    }
  }
  if (!(std::isfinite(spec.outcome.phi) && spec.outcome.phi > 0.0)) {
    out.add(ViolationCode::Structure, "phi must be positive");
  }
  if (!(spec.sig_level > 0.0 && spec.sig_level < 1.0)) {
    out.add(ViolationCode::Structure, "alpha (significance level) must lie in (0, 1)");
  }
  if (!std::isfinite(spec.delta)) out.add(ViolationCode::Structure, "delta is not finite");
  return ok;
}

void check_alignment(const TrialSpec& spec, Collector& out) {
  for (std::size_t s = 0; s < spec.sequences(); ++s) {
    for (std::size_t j = 0; j < spec.periods(); ++j) {
      const bool no_data = spec.design_pattern(s, j) == kNoData;
      const int size = spec.cp_sizes(s, j);
      if (no_data && size != 0) {
        out.add(ViolationCode::SizeAlignment,
                "cell " + cell_name(s, j) + " collects no data but cp_size is " + std::to_string(size),
                {static_cast<int>(s) + 1, static_cast<int>(j) + 1});
      } else if (!no_data && size == 0) {
        out.add(ViolationCode::SizeAlignment, "cell " + cell_name(s, j) + " collects data but cp_size is 0",
                {static_cast<int>(s) + 1, static_cast<int>(j) + 1});
      }
    }
  }
}

void check_beta_length(const TrialSpec& spec, Collector& out) {
  const std::size_t expected = spec.period_effect_type == PeriodEffect::Categorical ? spec.periods() : 2;
  if (spec.beta_period_effects.size() != expected) {
    out.add(ViolationCode::BetaLength, "beta_period_effects has " + std::to_string(spec.beta_period_effects.size()) +
                                           " values; the " + std::string(to_string(spec.period_effect_type)) +
                                           " period model needs " + std::to_string(expected));
  }
  for (double b : spec.beta_period_effects) {
    if (!std::isfinite(b)) {
      out.add(ViolationCode::BetaLength, "beta_period_effects contains a non-finite value");
      break;
    }
  }
}

void check_correlation(const CorrelationSpec& c, Collector& out) {
  auto need = [&](const std::optional<double>& v, const char* name, bool decay_rate) {
    if (!v) {
      out.add(ViolationCode::CorrelationParameters,
              std::string(name) + " is required for " + std::string(to_string(c.kind)) + " correlation");
      return;
    }
    bool in_range;
    if (!decay_rate) {
      in_range = is_probability(*v);
    } else if (c.kind == CorrelationKind::ProportionalDecay) {
      in_range = std::isfinite(*v) && *v > 0.0 && *v < 1.0;
    } else {
      in_range = std::isfinite(*v) && *v >= 0.0 && *v <= 1.0;
    }
    if (!in_range) {
      const char* range = !decay_rate ? "[0, 1)" : (c.kind == CorrelationKind::ProportionalDecay ? "(0, 1)" : "[0, 1]");
      out.add(ViolationCode::CorrelationParameters,
              std::string(name) + " = " + std::to_string(*v) + " is outside " + range);
    }
  };
  switch (c.kind) {
    case CorrelationKind::NestedExchangeable:
      need(c.alpha1, "alpha1", false);
      need(c.alpha2, "alpha2", false);
      break;
    case CorrelationKind::ExponentialDecay:
    case CorrelationKind::ProportionalDecay:
      need(c.alpha0, "alpha0", false);
      need(c.r0, "r0", true);
      break;
    case CorrelationKind::BlockExchangeable:
      need(c.alpha1, "alpha1", false);
      need(c.alpha2, "alpha2", false);
      need(c.alpha3, "alpha3", false);
      break;
  }
}

void check_coverage(const TrialSpec& spec, Collector& out) {
  bool any_control = false;
  bool any_intervention = false;
  for (std::size_t j = 0; j < spec.periods(); ++j) {
    bool observed = false;
    for (std::size_t s = 0; s < spec.sequences(); ++s) {
      const int cell = spec.design_pattern(s, j);
      if (cell == kNoData || spec.cp_sizes(s, j) <= 0) continue;
      observed = true;
      any_control |= cell == kControl;
      any_intervention |= cell == kIntervention;
    }
    if (!observed && spec.period_effect_type == PeriodEffect::Categorical) {
      out.add(ViolationCode::PeriodCoverage,
              "period " + std::to_string(j + 1) + " is not observed in any sequence; its categorical effect is not "
                                                  "estimable",
              {static_cast<int>(j) + 1});
    }
  }
  if (!any_control || !any_intervention) {
    out.add(ViolationCode::PeriodCoverage,
            "design needs at least one observed control and one observed intervention cluster-period");
  }
}

bool check_incremental(const TrialSpec& spec, Collector& out) {
  if (spec.intervention_effect_type == EffectType::Average) return true;
  bool ok = true;
  if (!spec.max_intervention_period || *spec.max_intervention_period < 1) {
    out.add(ViolationCode::IncrementalPattern,
            "max_intervention_period must be a positive integer for " +
                std::string(to_string(spec.intervention_effect_type)));
    ok = false;
  }
  for (std::size_t s = 0; s < spec.sequences(); ++s) {
    bool seen_intervention = false;
    for (std::size_t j = 0; j < spec.periods(); ++j) {
      const int cell = spec.design_pattern(s, j);
      if (cell == kIntervention) seen_intervention = true;
      if (cell == kControl && seen_intervention) {
        out.add(ViolationCode::IncrementalPattern,
                "sequence " + std::to_string(s + 1) + " returns to control at period " + std::to_string(j + 1) +
                    "; incremental effect models need all control cells before intervention cells",
                {static_cast<int>(s) + 1, static_cast<int>(j) + 1});
        ok = false;
        break;
      }
    }
  }
  return ok;
}

void check_maintenance(const TrialSpec& spec, Collector& out) {
  const int q = *spec.max_intervention_period;
  for (std::size_t s = 0; s < spec.sequences(); ++s) {
    const auto prof = parse_sequence(spec.design_pattern.row(s), spec.cp_sizes.row(s), static_cast<int>(s) + 1,
                                     spec.intervention_effect_type);
    if (!prof.q0) continue;
    bool has_maintenance = false;
    for (int t : prof.observed_periods) {
      if (t >= *prof.q0 && t - *prof.q0 + 1 > q) has_maintenance = true;
    }
    if (!has_maintenance) {
      out.add(ViolationCode::MaintenancePeriod,
              "sequence " + std::to_string(s + 1) + " has no maintenance period after " + std::to_string(q) +
                  " active intervention periods",
              {static_cast<int>(s) + 1});
    }
  }
}

void check_cohort_sizes(const TrialSpec& spec, Collector& out) {
  if (spec.correlation.kind != CorrelationKind::BlockExchangeable &&
      spec.correlation.kind != CorrelationKind::ProportionalDecay) {
    return;
  }
  for (std::size_t s = 0; s < spec.sequences(); ++s) {
    std::optional<int> first;
    for (std::size_t j = 0; j < spec.periods(); ++j) {
      if (spec.design_pattern(s, j) == kNoData) continue;
      const int size = spec.cp_sizes(s, j);
      if (!first) first = size;
      if (size == 0 || size != *first) {
        out.add(ViolationCode::CohortSizes,
                "cohort correlation needs one constant nonzero cluster-period size per sequence; sequence " +
                    std::to_string(s + 1) + " varies at period " + std::to_string(j + 1),
                {static_cast<int>(s) + 1, static_cast<int>(j) + 1});
        break;
      }
    }
  }
}

// Marginal mean of every observed cell at u = 0 and at the realized u.
struct CellMeans {
  std::vector<std::vector<double>> baseline;  // [s][j], NaN where unobserved
  std::vector<std::vector<double>> realized;
  bool realized_known = false;
};

CellMeans cell_means(const TrialSpec& spec, bool exposures_computable) {
  const auto S = spec.sequences();
  const auto J = spec.periods();
  const double nan = std::nan("");
  CellMeans m{std::vector(S, std::vector(J, nan)), std::vector(S, std::vector(J, nan)), exposures_computable};
  const int q = spec.max_intervention_period.value_or(1);
  for (std::size_t s = 0; s < S; ++s) {
    std::optional<SequenceProfile> prof;
    if (exposures_computable) {
      prof = parse_sequence(spec.design_pattern.row(s), spec.cp_sizes.row(s), static_cast<int>(s) + 1,
                            spec.intervention_effect_type);
    }
    for (std::size_t j = 0; j < J; ++j) {
      if (spec.design_pattern(s, j) == kNoData || spec.cp_sizes(s, j) <= 0) continue;
      const int t = static_cast<int>(j) + 1;
      const double period_part = spec.period_effect_type == PeriodEffect::Categorical
                                     ? spec.beta_period_effects[j]
                                     : spec.beta_period_effects[0] + spec.beta_period_effects[1] * (t - 1);
      m.baseline[s][j] = mean_and_derivative(period_part, spec.outcome.link).mu;
      if (prof) {
        const double u = exposure(*prof, t, spec.intervention_effect_type, q);
        m.realized[s][j] = mean_and_derivative(period_part + u * spec.delta, spec.outcome.link).mu;
      }
    }
  }
  return m;
}

bool mean_in_support(double mu, Distribution dist) {
  switch (dist) {
    case Distribution::Binary: return mu > 0.0 && mu < 1.0;
    case Distribution::Poisson: return std::isfinite(mu) && mu > 0.0;
    case Distribution::Normal: return std::isfinite(mu);
  }
  return false;
}

void check_means(const TrialSpec& spec, const CellMeans& m, Collector& out) {
  for (std::size_t s = 0; s < spec.sequences(); ++s) {
    for (std::size_t j = 0; j < spec.periods(); ++j) {
      const double base = m.baseline[s][j];
      if (std::isnan(base)) continue;
      const double realized = m.realized_known ? m.realized[s][j] : base;
      for (const double mu : {base, realized}) {
        if (!mean_in_support(mu, spec.outcome.dist)) {
          out.add(ViolationCode::MeanRange,
                  "marginal mean " + std::to_string(mu) + " at cell " + cell_name(s, j) + " is outside the " +
                      std::string(to_string(spec.outcome.dist)) + " support",
                  {static_cast<int>(s) + 1, static_cast<int>(j) + 1});
          break;
        }
      }
    }
  }
}

void check_frechet(const TrialSpec& spec, const CellMeans& m, Collector& out) {
  const bool cohort = spec.correlation.kind == CorrelationKind::BlockExchangeable ||
                      spec.correlation.kind == CorrelationKind::ProportionalDecay;
  for (std::size_t s = 0; s < spec.sequences(); ++s) {
    int offending = 0;
    std::vector<int> first;
    std::string detail;
    for (std::size_t j = 0; j < spec.periods(); ++j) {
      const double mu1 = m.realized[s][j];
      if (std::isnan(mu1)) continue;
      const int t = static_cast<int>(j) + 1;
      for (std::size_t j2 = j; j2 < spec.periods(); ++j2) {
        const double mu2 = m.realized[s][j2];
        if (std::isnan(mu2)) continue;
        const int t2 = static_cast<int>(j2) + 1;
        std::vector<double> rhos;
        if (j2 == j) {
          if (spec.cp_sizes(s, j) >= 2) rhos.push_back(correlation_entry(spec.correlation, t, 0, t, 1));
        } else {
          if (!cohort || spec.cp_sizes(s, j) >= 2) rhos.push_back(correlation_entry(spec.correlation, t, 0, t2, 1));
          if (cohort) rhos.push_back(correlation_entry(spec.correlation, t, 0, t2, 0));
        }
        const FrechetBounds b = frechet_bounds(mu1, mu2);
        for (double rho : rhos) {
          if (rho < b.lower || rho > b.upper) {
            if (offending++ == 0) {
              first = {static_cast<int>(s) + 1, t, t2};
              detail = "correlation " + std::to_string(rho) + " between periods " + std::to_string(t) + " and " +
                       std::to_string(t2) + " exceeds Frechet bounds [" + std::to_string(b.lower) + ", " +
                       std::to_string(b.upper) + "]";
            }
          }
        }
      }
    }
    if (offending > 0) {
      out.add(ViolationCode::FrechetBounds,
              "sequence " + std::to_string(s + 1) + ": " + detail + " (" + std::to_string(offending) +
                  " infeasible pair type(s))",
              first);
    }
  }
}

}  // namespace

std::string_view code_name(ViolationCode code) {
  switch (code) {
    case ViolationCode::Structure: return "S0";
    case ViolationCode::SizeAlignment: return "V1";
    case ViolationCode::BetaLength: return "V2";
    case ViolationCode::MeanRange: return "V3";
    case ViolationCode::FrechetBounds: return "V4";
    case ViolationCode::CorrelationParameters: return "V5";
    case ViolationCode::PeriodCoverage: return "V6";
    case ViolationCode::IncrementalPattern: return "V7";
    case ViolationCode::MaintenancePeriod: return "V8";
    case ViolationCode::CohortSizes: return "V9";
    case ViolationCode::BinaryDispersion: return "V10";
  }
  return "?";
}

bool ValidationReport::has(ViolationCode code) const {
  for (const auto& v : violations) {
    if (v.code == code) return true;
  }
  return false;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : violations) os << code_name(v.code) << ": " << v.message << '\n';
  return os.str();
}

ValidationReport validate(const TrialSpec& spec) {
  Collector out;
  if (!check_structure(spec, out)) return out.take();

  check_alignment(spec, out);
  check_beta_length(spec, out);
  check_correlation(spec.correlation, out);
  check_coverage(spec, out);
  const bool incremental_ok = check_incremental(spec, out);
  if (spec.intervention_effect_type == EffectType::ExtendedIncremental && incremental_ok) {
    check_maintenance(spec, out);
  }
  check_cohort_sizes(spec, out);
  if (spec.outcome.dist == Distribution::Binary && spec.outcome.phi != 1.0) {
    out.add(ViolationCode::BinaryDispersion, "binary outcomes require phi = 1, got " + std::to_string(spec.outcome.phi));
  }

  if (!out.has(ViolationCode::BetaLength)) {
    const CellMeans means = cell_means(spec, incremental_ok);
    check_means(spec, means, out);
    if (spec.outcome.dist == Distribution::Binary && means.realized_known && !out.has(ViolationCode::MeanRange) &&
        !out.has(ViolationCode::CorrelationParameters)) {
      check_frechet(spec, means, out);
    }
  }
  return out.take();
}

}  // namespace geepower
