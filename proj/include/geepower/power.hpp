#pragma once

#include <vector>

#include <Eigen/Dense>

#include "geepower/correlation.hpp"
#include "geepower/design.hpp"
#include "geepower/kernels.hpp"
#include "geepower/model.hpp"

namespace geepower {

struct EngineOptions {
  Execution execution = Execution::Parallel;
  ExposureClock clock = ExposureClock::SinceFirstIntervention;
};

/// Per-cluster GEE information D'V^{-1}D for one sequence, with
/// V = A^{1/2} R A^{1/2}. Uses R's Cholesky factor; never forms V^{-1}.
/// Throws MeanRangeError when a mean leaves the family's support.
Eigen::MatrixXd sequence_information(const SequenceDesign& design, const TrialSpec& spec,
                                     const CorrelationMatrix& R);

struct CovarianceResult {
  TrialDesign design;
  Eigen::MatrixXd information;  // sum_s I_s * D_s'V_s^{-1}D_s
  Eigen::MatrixXd covariance;   // model-based cov(theta-hat)
  int correlation_builds = 0;   // distinct R matrices factorized

  double var_delta() const { return covariance(covariance.rows() - 1, covariance.cols() - 1); }
};

// Model-based covariance of theta-hat. Sequences with the same observed
// periods and sizes share one correlation factorization.
CovarianceResult model_covariance(const TrialSpec& spec, const EngineOptions& options = {});

// Inverse of a symmetric positive definite information matrix.
Eigen::MatrixXd invert_information(const Eigen::MatrixXd& information);

struct PowerStats {
  double stddel;
  double zpower;
  double tpower;
};

// z- and t-test power for a two-sided level-alpha Wald test of delta = 0.
PowerStats power(double delta, double var_delta, double alpha, int df);

int degrees_of_freedom(const TrialSpec& spec);

struct PowerResult {
  double var_delta = 0.0;
  double stddel = 0.0;
  double zpower = 0.0;
  double tpower = 0.0;
  int df = 0;
  long totaln = 0;
  long clusters = 0;
  std::vector<double> theta;  // betas then delta
  Eigen::MatrixXd covariance;
};

PowerResult compute_power(const TrialSpec& spec, const EngineOptions& options = {});

}  // namespace geepower
