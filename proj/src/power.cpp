#include "geepower/power.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include "geepower/distributions.hpp"

namespace geepower {

Eigen::MatrixXd sequence_information(const SequenceDesign& design, const TrialSpec& spec,
                                     const CorrelationMatrix& R) {
  const Eigen::VectorXd eta = linear_predictor(design, spec);
  const auto rows = design.x_rows.rows();
  const auto p = design.x_rows.cols();

  // Whitened derivative rows A^{-1/2} D at cluster-period granularity.
  Eigen::MatrixXd scaled(rows, p);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto [mu, dmu] = mean_and_derivative(eta(r), spec.outcome.link);
    const double var = variance_function(mu, spec.outcome);
    scaled.row(r) = (dmu / std::sqrt(var)) * design.x_rows.row(r);
  }

  // Expand to individuals in the same period-major order as R.
  const Eigen::Index n = R.n();
  if (n != design.observations()) {
    throw DomainError("correlation matrix size does not match sequence " +
                      std::to_string(design.profile.seq_index));
  }
  Eigen::MatrixXd G(n, p);
  Eigen::Index i = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (int k = 0; k < design.sizes[static_cast<std::size_t>(r)]; ++k) G.row(i++) = scaled.row(r);
  }

  // D'V^{-1}D = G'R^{-1}G = (L^{-1}G)'(L^{-1}G)
  R.lower().triangularView<Eigen::Lower>().solveInPlace(G);
  Eigen::MatrixXd info = Eigen::MatrixXd::Zero(p, p);
  info.selfadjointView<Eigen::Lower>().rankUpdate(G.transpose());
  return info.selfadjointView<Eigen::Lower>();
}

Eigen::MatrixXd invert_information(const Eigen::MatrixXd& information) {
  Eigen::LLT<Eigen::MatrixXd> llt(information);
  if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-13)) {
    throw SingularInformationError("information matrix is singular; the mean parameters are not identifiable");
  }
  const auto p = information.rows();
  Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(p, p));
  // Symmetrize so downstream comparisons see an exactly symmetric matrix.
  return 0.5 * (cov + cov.transpose());
}

CovarianceResult model_covariance(const TrialSpec& spec, const EngineOptions& options) {
  CovarianceResult out;
  out.design = build_design(spec, options.clock);

  // All clusters of a sequence share R, and R depends only on which periods
  // are observed and how many individuals each has.
  using Key = std::pair<std::vector<int>, std::vector<int>>;
  std::map<Key, std::shared_ptr<const CorrelationMatrix>> cache;
  std::vector<kernels::InformationTerm> terms;
  terms.reserve(out.design.sequences.size());
  for (const auto& seq : out.design.sequences) {
    Key key{seq.profile.observed_periods, seq.sizes};
    auto it = cache.find(key);
    if (it == cache.end()) {
      auto R = std::make_shared<const CorrelationMatrix>(
          build_R(spec.correlation, seq.profile.observed_periods, seq.sizes, options.execution));
      it = cache.emplace(std::move(key), std::move(R)).first;
      ++out.correlation_builds;
    }
    terms.push_back({&seq, it->second.get()});
  }

  out.information = kernels::accumulate_information(terms, spec, options.execution);
  out.covariance = invert_information(out.information);
  return out;
}

PowerStats power(double delta, double var_delta, double alpha, int df) {
  if (!(var_delta > 0.0) || !std::isfinite(var_delta)) throw DomainError("var(delta) must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("significance level must lie in (0, 1)");
  if (df < 1) throw DomainError("degrees of freedom must be at least 1, got " + std::to_string(df));

  PowerStats s{};
  s.stddel = std::fabs(delta) / std::sqrt(var_delta);
  s.zpower = dist::normal_cdf(dist::normal_quantile(alpha / 2.0) + s.stddel);
  s.tpower = dist::t_cdf(dist::t_quantile(alpha / 2.0, df) + s.stddel, df);
  return s;
}

int degrees_of_freedom(const TrialSpec& spec) {
  const auto clusters = static_cast<int>(spec.total_clusters());
  return spec.df_choice == DfChoice::ClustersMinusTwo ? clusters - 2 : clusters - spec.parameter_count();
}

PowerResult compute_power(const TrialSpec& spec, const EngineOptions& options) {
  const CovarianceResult cov = model_covariance(spec, options);
  PowerResult res;
  res.var_delta = cov.var_delta();
  res.df = degrees_of_freedom(spec);
  const PowerStats s = power(spec.delta, res.var_delta, spec.sig_level, res.df);
  res.stddel = s.stddel;
  res.zpower = s.zpower;
  res.tpower = s.tpower;
  res.totaln = cov.design.totaln;
  res.clusters = cov.design.total_clusters;
  res.theta = spec.beta_period_effects;
  res.theta.push_back(spec.delta);
  res.covariance = cov.covariance;
  return res;
}

}  // namespace geepower
