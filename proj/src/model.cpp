#include "geepower/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace geepower {

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
  if (rows.empty()) return {};
  IntMatrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) {
      throw ParseError("matrix row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                       " entries, expected " + std::to_string(m.cols()));
    }
    std::copy(rows[r].begin(), rows[r].end(), m.data_.begin() + static_cast<std::ptrdiff_t>(r * m.cols()));
  }
  return m;
}

Link canonical_link(Distribution dist) {
  switch (dist) {
    case Distribution::Binary: return Link::Logit;
    case Distribution::Poisson: return Link::Log;
    case Distribution::Normal: return Link::Identity;
  }
  return Link::Identity;
}

long TrialSpec::total_clusters() const {
  return std::accumulate(clusters_per_sequence.begin(), clusters_per_sequence.end(), 0L);
}

int TrialSpec::parameter_count() const {
  return period_effect_type == PeriodEffect::Categorical ? static_cast<int>(periods()) + 1 : 3;
}

LinkValue mean_and_derivative(double eta, Link link) {
  switch (link) {
    case Link::Logit: {
      // Evaluate on the side that keeps exp() bounded so mu(-eta) = 1 - mu(eta).
      double mu;
      if (eta >= 0.0) {
        mu = 1.0 / (1.0 + std::exp(-eta));
      } else {
        const double e = std::exp(eta);
        mu = e / (1.0 + e);
      }
      return {mu, mu * (1.0 - mu)};
    }
    case Link::Log: {
      const double mu = std::exp(eta);
      return {mu, mu};
    }
    case Link::Identity:
      return {eta, 1.0};
  }
  return {eta, 1.0};
}

double variance_function(double mu, const OutcomeModel& outcome) {
  switch (outcome.dist) {
    case Distribution::Binary:
      if (!(mu > 0.0 && mu < 1.0)) {
        throw MeanRangeError("binary mean " + std::to_string(mu) + " outside (0, 1)");
      }
      return mu * (1.0 - mu);
    case Distribution::Poisson:
      if (!(mu > 0.0)) throw MeanRangeError("count mean " + std::to_string(mu) + " is not positive");
      return outcome.phi * mu;
    case Distribution::Normal:
      return outcome.phi;
  }
  return outcome.phi;
}

FrechetBounds frechet_bounds(double mu1, double mu2) {
  if (!(mu1 > 0.0 && mu1 < 1.0) || !(mu2 > 0.0 && mu2 < 1.0)) {
    throw MeanRangeError("Frechet bounds need means strictly inside (0, 1)");
  }
  const double psi1 = mu1 / (1.0 - mu1);
  const double psi2 = mu2 / (1.0 - mu2);
  const double prod = std::sqrt(psi1 * psi2);
  const double lower = std::max(-prod, -1.0 / prod);
  const double upper = psi1 == psi2 ? 1.0 : std::min(std::sqrt(psi1 / psi2), std::sqrt(psi2 / psi1));
  return {lower, upper};
}

std::string_view to_string(Distribution d) {
  switch (d) {
    case Distribution::Binary: return "BINARY";
    case Distribution::Poisson: return "POISSON";
    case Distribution::Normal: return "NORMAL";
  }
  return "?";
}

std::string_view to_string(Link l) {
  switch (l) {
    case Link::Logit: return "LOGIT";
    case Link::Log: return "LOG";
    case Link::Identity: return "IDENTITY";
  }
  return "?";
}

std::string_view to_string(EffectType e) {
  switch (e) {
    case EffectType::Average: return "AVE";
    case EffectType::Incremental: return "INC";
    case EffectType::ExtendedIncremental: return "INC_EX";
  }
  return "?";
}

std::string_view to_string(PeriodEffect p) {
  return p == PeriodEffect::Categorical ? "CAT" : "LIN";
}

std::string_view to_string(CorrelationKind k) {
  switch (k) {
    case CorrelationKind::NestedExchangeable: return "NE";
    case CorrelationKind::ExponentialDecay: return "ED";
    case CorrelationKind::BlockExchangeable: return "BE";
    case CorrelationKind::ProportionalDecay: return "PD";
  }
  return "?";
}

}  // namespace geepower
