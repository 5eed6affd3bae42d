#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "geepower/validation.hpp"

namespace oracle {

using geepower::TrialSpec;

Eigen::MatrixXd dense_sequence_information(const geepower::SequenceDesign& design, const TrialSpec& spec,
                                           const geepower::CorrelationMatrix& R) {
  const auto p = design.x_rows.cols();
  const Eigen::Index n = R.n();
  Eigen::VectorXd theta(p);
  for (Eigen::Index i = 0; i + 1 < p; ++i) theta(i) = spec.beta_period_effects[static_cast<std::size_t>(i)];
  theta(p - 1) = spec.delta;

  Eigen::MatrixXd D(n, p);
  Eigen::VectorXd a(n);
  Eigen::Index i = 0;
  for (Eigen::Index r = 0; r < design.x_rows.rows(); ++r) {
    const double eta = design.x_rows.row(r).dot(theta);
    double mu, dmu, var;
    switch (spec.outcome.link) {
      case geepower::Link::Logit: mu = 1.0 / (1.0 + std::exp(-eta)); dmu = mu * (1.0 - mu); break;
      case geepower::Link::Log: mu = std::exp(eta); dmu = mu; break;
      default: mu = eta; dmu = 1.0; break;
    }
    switch (spec.outcome.dist) {
      case geepower::Distribution::Binary: var = mu * (1.0 - mu); break;
      case geepower::Distribution::Poisson: var = spec.outcome.phi * mu; break;
      default: var = spec.outcome.phi; break;
    }
    for (int k = 0; k < design.sizes[static_cast<std::size_t>(r)]; ++k, ++i) {
      D.row(i) = dmu * design.x_rows.row(r);
      a(i) = var;
    }
  }
  const Eigen::VectorXd root = a.cwiseSqrt();
  const Eigen::MatrixXd V = root.asDiagonal() * R.entries() * root.asDiagonal();
  return D.transpose() * V.partialPivLu().solve(D);
}

namespace {

// Exposure re-derived from the raw row, counting from the first observed
// intervention period.
double raw_exposure(const TrialSpec& spec, std::size_t s, std::size_t j) {
  const int cell = spec.design_pattern(s, j);
  if (cell != geepower::kIntervention) return 0.0;
  if (spec.intervention_effect_type == geepower::EffectType::Average) return 1.0;
  std::size_t first = j;
  for (std::size_t k = 0; k < spec.periods(); ++k) {
    if (spec.design_pattern(s, k) == geepower::kIntervention && spec.cp_sizes(s, k) > 0) {
      first = k;
      break;
    }
  }
  const double q = *spec.max_intervention_period;
  const double e = static_cast<double>(j - first + 1);
  if (spec.intervention_effect_type == geepower::EffectType::ExtendedIncremental && e > q) return 1.0;
  return e / q;
}

std::vector<std::vector<double>> gauss_jordan_inverse(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    if (a[pivot][col] == 0.0) throw std::runtime_error("singular matrix in WLS oracle");
    std::swap(a[col], a[pivot]);
    std::swap(inv[col], inv[pivot]);
    const double d = a[col][col];
    for (std::size_t k = 0; k < n; ++k) {
      a[col][k] /= d;
      inv[col][k] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] -= f * a[col][k];
        inv[r][k] -= f * inv[col][k];
      }
    }
  }
  return inv;
}

}  // namespace

namespace {

std::vector<std::vector<double>> weighted_cross_product(const TrialSpec& spec) {
  const bool categorical = spec.period_effect_type == geepower::PeriodEffect::Categorical;
  const std::size_t J = spec.periods();
  const std::size_t p = categorical ? J + 1 : 3;
  std::vector<std::vector<double>> xtwx(p, std::vector<double>(p, 0.0));
  for (std::size_t s = 0; s < spec.sequences(); ++s) {
    for (std::size_t j = 0; j < J; ++j) {
      if (spec.design_pattern(s, j) == geepower::kNoData || spec.cp_sizes(s, j) == 0) continue;
      std::vector<double> x(p, 0.0);
      if (categorical) {
        x[j] = 1.0;
      } else {
        x[0] = 1.0;
        x[1] = static_cast<double>(j);
      }
      x[p - 1] = raw_exposure(spec, s, j);
      const double w = static_cast<double>(spec.clusters_per_sequence[s]) * spec.cp_sizes(s, j);
      for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = 0; b < p; ++b) xtwx[a][b] += w * x[a] * x[b];
      }
    }
  }
  return xtwx;
}

bool identifiable(const TrialSpec& spec) {
  const auto xtwx = weighted_cross_product(spec);
  const auto p = static_cast<Eigen::Index>(xtwx.size());
  Eigen::MatrixXd m(p, p);
  for (Eigen::Index a = 0; a < p; ++a) {
    for (Eigen::Index b = 0; b < p; ++b) m(a, b) = xtwx[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(1e-10);
  return lu.rank() == p && spec.total_clusters() > static_cast<long>(p) + 1;
}

}  // namespace

std::vector<std::vector<double>> wls_covariance(const TrialSpec& spec) {
  auto cov = gauss_jordan_inverse(weighted_cross_product(spec));
  for (auto& row : cov) {
    for (double& v : row) v *= spec.outcome.phi;
  }
  return cov;
}

int SpecGenerator::uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

double SpecGenerator::uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

TrialSpec SpecGenerator::next() {
  using namespace geepower;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    TrialSpec spec;
    const int S = uniform_int(2, 5);
    const int J = S + uniform_int(1, 3);
    spec.design_pattern = IntMatrix(static_cast<std::size_t>(S), static_cast<std::size_t>(J));
    spec.cp_sizes = IntMatrix(static_cast<std::size_t>(S), static_cast<std::size_t>(J));
    std::vector<int> steps(static_cast<std::size_t>(J - 1));
    std::iota(steps.begin(), steps.end(), 1);
    std::shuffle(steps.begin(), steps.end(), rng_);
    steps.resize(static_cast<std::size_t>(S));
    std::sort(steps.begin(), steps.end());
    for (int s = 0; s < S; ++s) {
      const int controls = steps[static_cast<std::size_t>(s)];
      const int size = uniform_int(1, 4);
      for (int j = 0; j < J; ++j) {
        int cell = j < controls ? kControl : kIntervention;
        if (j == controls && j + 1 < J && uniform(0, 1) < 0.3) cell = kNoData;  // implementation period
        if (j == 0 && controls >= 2 && uniform(0, 1) < 0.2) cell = kNoData;     // staggered entry
        spec.design_pattern(static_cast<std::size_t>(s), static_cast<std::size_t>(j)) = cell;
        spec.cp_sizes(static_cast<std::size_t>(s), static_cast<std::size_t>(j)) = cell == kNoData ? 0 : size;
      }
      spec.clusters_per_sequence.push_back(2 * uniform_int(1, 3));
    }

    switch (uniform_int(0, 2)) {
      case 0: spec.outcome = {Distribution::Binary, Link::Logit, 1.0}; break;
      case 1: spec.outcome = {Distribution::Poisson, Link::Log, uniform(1.0, 2.0)}; break;
      default: spec.outcome = {Distribution::Normal, Link::Identity, uniform(1.0, 10.0)}; break;
    }
    const double base = spec.outcome.dist == Distribution::Binary    ? uniform(-1.5, 0.5)
                        : spec.outcome.dist == Distribution::Poisson ? uniform(0.0, 1.0)
                                                                     : uniform(5.0, 15.0);
    spec.period_effect_type = uniform_int(0, 1) == 0 ? PeriodEffect::Categorical : PeriodEffect::Linear;
    if (spec.period_effect_type == PeriodEffect::Categorical) {
      for (int j = 0; j < J; ++j) spec.beta_period_effects.push_back(base + uniform(-0.1, 0.1));
    } else {
      spec.beta_period_effects = {base, uniform(-0.05, 0.05)};
    }
    spec.delta = uniform(0.1, 0.5) * (uniform_int(0, 1) ? 1.0 : -1.0);

    switch (uniform_int(0, 3)) {
      case 0: spec.intervention_effect_type = EffectType::Average; break;
      case 1: spec.intervention_effect_type = EffectType::Average; break;
      case 2:
        spec.intervention_effect_type = EffectType::Incremental;
        spec.max_intervention_period = uniform_int(1, 3);
        break;
      default:
        spec.intervention_effect_type = EffectType::ExtendedIncremental;
        spec.max_intervention_period = 1;
        break;
    }

    const double a1 = uniform(0.01, 0.2);
    const double a2 = a1 * uniform(0.2, 1.0);
    switch (uniform_int(0, 3)) {
      case 0: spec.correlation = {CorrelationKind::NestedExchangeable, {}, {}, a1, a2, {}}; break;
      case 1: spec.correlation = {CorrelationKind::ExponentialDecay, a1, uniform(0.3, 0.95), {}, {}, {}}; break;
      case 2: spec.correlation = {CorrelationKind::BlockExchangeable, {}, {}, a1, a2, uniform(0.2, 0.6)}; break;
      default: spec.correlation = {CorrelationKind::ProportionalDecay, a1, uniform(0.3, 0.95), {}, {}, {}}; break;
    }
    if (validate(spec).ok() && identifiable(spec)) return spec;
  }
  throw std::runtime_error("spec generator failed to produce a valid spec");
}

}  // namespace oracle
