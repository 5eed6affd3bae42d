#include "geepower/report.hpp"

#include <cmath>
#include <omp.h>

#include <fmt/format.h>

#include "geepower/validation.hpp"

namespace geepower {

namespace {

std::string_view outcome_word(Distribution d) {
  switch (d) {
    case Distribution::Binary: return "binary";
    case Distribution::Poisson: return "poisson";
    case Distribution::Normal: return "normal";
  }
  return "?";
}

std::string_view structure_words(CorrelationKind k) {
  switch (k) {
    case CorrelationKind::NestedExchangeable: return "nested exchangeable";
    case CorrelationKind::ExponentialDecay: return "exponential decay";
    case CorrelationKind::BlockExchangeable: return "block exchangeable";
    case CorrelationKind::ProportionalDecay: return "proportional decay";
  }
  return "?";
}

std::string_view effect_words(EffectType e) {
  switch (e) {
    case EffectType::Average: return "average";
    case EffectType::Incremental: return "incremental";
    case EffectType::ExtendedIncremental: return "extended incremental";
  }
  return "?";
}

std::string opt(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : "NA"; }

std::string parameter_list(const CorrelationSpec& c) {
  switch (c.kind) {
    case CorrelationKind::NestedExchangeable:
      return fmt::format("(alpha1,alpha2):({}, {})", opt(c.alpha1), opt(c.alpha2));
    case CorrelationKind::ExponentialDecay:
    case CorrelationKind::ProportionalDecay:
      return fmt::format("(alpha0,r0):({}, {})", opt(c.alpha0), opt(c.r0));
    case CorrelationKind::BlockExchangeable:
      return fmt::format("(alpha1,alpha2,alpha3):({}, {}, {})", opt(c.alpha1), opt(c.alpha2), opt(c.alpha3));
  }
  return {};
}

std::string span_text(const std::optional<int>& v) { return v ? std::to_string(*v) : "-"; }

constexpr std::string_view kRowFormat = "{:<5}{:<5}{:<10}{:<6}{:<10}{:<10}{:<9}{:<10}{:<9}{:<9}{}\n";

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

double round_half_away(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

std::string format_fixed4(double value) {
  const double r = round_half_away(value, 4);
  return fmt::format("{:.4f}", r == 0.0 ? 0.0 : r);
}

std::string header_line(const TrialSpec& spec) {
  return fmt::format(
      "The fast GEE power of {} outcomes with {} correlation structure and {} under {} intervention effects model "
      "and delta = {}",
      outcome_word(spec.outcome.dist), structure_words(spec.correlation.kind), parameter_list(spec.correlation),
      effect_words(spec.intervention_effect_type), spec.delta);
}

std::string render_report(const TrialSpec& spec, const PowerResult& r) {
  std::string out = header_line(spec) + "\n\n";
  out += fmt::format(kRowFormat, "T", "S", "clusters", "df", "theta", "totaln", "Dist", "Link", "stddel", "zpower",
                     "tpower");
  for (std::size_t i = 0; i < r.theta.size(); ++i) {
    const std::string theta = fmt::format("{}", r.theta[i]);
    if (i == 0) {
      out += fmt::format(kRowFormat, spec.periods(), spec.sequences(), r.clusters, r.df, theta, r.totaln,
                         to_string(spec.outcome.dist), to_string(spec.outcome.link), format_fixed4(r.stddel),
                         format_fixed4(r.zpower), format_fixed4(r.tpower));
    } else {
      out += fmt::format("{:<26}{}\n", "", theta);
    }
  }
  return out;
}

std::string render_explain(const TrialSpec& spec, const CovarianceResult& cov) {
  std::string out = header_line(spec) + "\n\n";
  const auto& design = cov.design;
  out += fmt::format("sequences S = {}, periods J = {}, clusters I = {}, p = {}, totaln = {}\n", spec.sequences(),
                     spec.periods(), design.total_clusters, design.p, design.totaln);
  out += fmt::format("distinct correlation matrices factorized: {}\n\n", cov.correlation_builds);
  for (const auto& seq : design.sequences) {
    const auto& prof = seq.profile;
    out += fmt::format("sequence {}: (b0,b1,q0,q1) = ({},{},{},{}), c = {}, clusters = {}\n", prof.seq_index,
                       span_text(prof.b0), span_text(prof.b1), span_text(prof.q0), span_text(prof.q1), prof.c,
                       seq.clusters);
    out += fmt::format("  observed periods: {}\n", fmt::join(prof.observed_periods, " "));
    out += fmt::format("  exposures:        {}\n", fmt::join(seq.exposures, " "));
    out += fmt::format("  sizes:            {}\n", fmt::join(seq.sizes, " "));
    out += fmt::format("  design rows {} x {}, per-cluster n = {}, R is {} x {}\n", seq.x_rows.rows(),
                       seq.x_rows.cols(), seq.observations(), seq.observations(), seq.observations());
  }
  out += "\nmodel-based covariance of theta-hat:\n";
  for (Eigen::Index i = 0; i < cov.covariance.rows(); ++i) {
    for (Eigen::Index j = 0; j < cov.covariance.cols(); ++j) {
      out += fmt::format("{}{:>24.16e}", j == 0 ? "" : " ", cov.covariance(i, j));
    }
    out += '\n';
  }
  out += fmt::format("var(delta-hat) = {:.17g}\n", cov.var_delta());
  return out;
}

SweepParam parse_sweep_param(std::string_view name) {
  if (name == "delta") return SweepParam::Delta;
  if (name == "alpha0") return SweepParam::Alpha0;
  if (name == "r0") return SweepParam::R0;
  if (name == "alpha1") return SweepParam::Alpha1;
  if (name == "alpha2") return SweepParam::Alpha2;
  if (name == "alpha3") return SweepParam::Alpha3;
  if (name == "cluster_multiplier") return SweepParam::ClusterMultiplier;
  if (name == "cp_size_multiplier") return SweepParam::CpSizeMultiplier;
  throw ConfigError("unknown sweep parameter '" + std::string(name) +
                    "' (delta, alpha0, r0, alpha1, alpha2, alpha3, cluster_multiplier, cp_size_multiplier)");
}

std::string_view sweep_param_name(SweepParam param) {
  switch (param) {
    case SweepParam::Delta: return "delta";
    case SweepParam::Alpha0: return "alpha0";
    case SweepParam::R0: return "r0";
    case SweepParam::Alpha1: return "alpha1";
    case SweepParam::Alpha2: return "alpha2";
    case SweepParam::Alpha3: return "alpha3";
    case SweepParam::ClusterMultiplier: return "cluster_multiplier";
    case SweepParam::CpSizeMultiplier: return "cp_size_multiplier";
  }
  return "?";
}

TrialSpec apply_sweep_value(const TrialSpec& spec, SweepParam param, double value) {
  TrialSpec out = spec;
  auto multiplier = [&]() {
    if (!(value >= 1.0) || value != std::floor(value) || value > 1e6) {
      throw ConfigError(fmt::format("{} must be a positive integer, got {}", sweep_param_name(param), value));
    }
    return static_cast<int>(value);
  };
  switch (param) {
    case SweepParam::Delta: out.delta = value; break;
    case SweepParam::Alpha0: out.correlation.alpha0 = value; break;
    case SweepParam::R0: out.correlation.r0 = value; break;
    case SweepParam::Alpha1: out.correlation.alpha1 = value; break;
    case SweepParam::Alpha2: out.correlation.alpha2 = value; break;
    case SweepParam::Alpha3: out.correlation.alpha3 = value; break;
    case SweepParam::ClusterMultiplier: {
      const int c = multiplier();
      for (int& m : out.clusters_per_sequence) m *= c;
      break;
    }
    case SweepParam::CpSizeMultiplier: {
      const int c = multiplier();
      for (std::size_t s = 0; s < out.cp_sizes.rows(); ++s) {
        for (std::size_t j = 0; j < out.cp_sizes.cols(); ++j) out.cp_sizes(s, j) *= c;
      }
      break;
    }
  }
  return out;
}

std::vector<SweepRow> run_sweep(const TrialSpec& spec, SweepParam param, const std::vector<double>& values,
                                int threads, const EngineOptions& options) {
  std::vector<SweepRow> rows(values.size());
  const auto count = static_cast<std::ptrdiff_t>(values.size());
  const int team = threads > 0 ? threads : omp_get_max_threads();

  // Each point is independent; rows are written by index so output order
  // never depends on completion order.
#pragma omp parallel for schedule(dynamic, 1) num_threads(team)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    SweepRow& row = rows[static_cast<std::size_t>(i)];
    row.value = values[static_cast<std::size_t>(i)];
    try {
      const TrialSpec point = apply_sweep_value(spec, param, row.value);
      const ValidationReport report = validate(point);
      if (!report.ok()) {
        std::string codes;
        for (const auto& v : report.violations) {
          if (!codes.empty()) codes += "; ";
          codes += fmt::format("{}: {}", code_name(v.code), v.message);
        }
        row.error = "invalid: " + codes;
        continue;
      }
      row.result = compute_power(point, options);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, SweepParam param, const std::vector<SweepRow>& rows) {
  os << "param,value,stddel,zpower,tpower,df,totaln,stddel_4dp,zpower_4dp,tpower_4dp,error\n";
  for (const auto& row : rows) {
    if (row.result) {
      const auto& r = *row.result;
      os << fmt::format("{},{},{:.17g},{:.17g},{:.17g},{},{},{},{},{},\n", sweep_param_name(param), row.value,
                        r.stddel, r.zpower, r.tpower, r.df, r.totaln, format_fixed4(r.stddel), format_fixed4(r.zpower),
                        format_fixed4(r.tpower));
    } else {
      os << fmt::format("{},{},,,,,,,,,{}\n", sweep_param_name(param), row.value, csv_escape(row.error));
    }
  }
}

std::string render_power_curve(SweepParam param, const std::vector<SweepRow>& rows) {
  constexpr int width = 40;
  std::string out = fmt::format("{:>14}  {:>8}  {:>8}  t-test power\n", sweep_param_name(param), "zpower", "tpower");
  for (const auto& row : rows) {
    if (!row.result) {
      out += fmt::format("{:>14}  {}\n", row.value, row.error);
      continue;
    }
    const double tp = row.result->tpower;
    const int filled = static_cast<int>(std::lround(tp * width));
    out += fmt::format("{:>14}  {:>8}  {:>8}  |{}{}|\n", row.value, format_fixed4(row.result->zpower),
                       format_fixed4(tp), std::string(static_cast<std::size_t>(filled), '#'),
                       std::string(static_cast<std::size_t>(width - filled), '.'));
  }
  return out;
}

}  // namespace geepower
