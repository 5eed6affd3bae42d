#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "geepower/design.hpp"
#include "geepower/kernels.hpp"
#include "geepower/model.hpp"

namespace geepower {

/// corr(y_tk, y_t'k') for one cluster. t is a calendar period, k the index
/// of the individual within the cluster-period. For cohort structures (BE,
/// PD) the same k in two periods is the same person.
double correlation_entry(const CorrelationSpec& spec, int t, int k, int t2, int k2);

/// Within-cluster working correlation for one sequence, in period-major
/// observation order, together with its lower Cholesky factor.
class CorrelationMatrix {
 public:
  CorrelationMatrix(kernels::ObservationLayout layout, Eigen::MatrixXd entries, Eigen::MatrixXd lower)
      : layout_(std::move(layout)), entries_(std::move(entries)), lower_(std::move(lower)) {}

  Eigen::Index n() const { return entries_.rows(); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  const Eigen::MatrixXd& lower() const { return lower_; }
  const kernels::ObservationLayout& layout() const { return layout_; }

 private:
  kernels::ObservationLayout layout_;
  Eigen::MatrixXd entries_;
  Eigen::MatrixXd lower_;
};

// Throws NotPositiveDefiniteError when the factorization fails.
CorrelationMatrix build_R(const CorrelationSpec& spec, std::span<const int> observed_periods,
                          std::span<const int> sizes, Execution exec = Execution::Parallel);

inline CorrelationMatrix build_R(const CorrelationSpec& spec, const SequenceProfile& profile,
                                 std::span<const int> sizes, Execution exec = Execution::Parallel) {
  return build_R(spec, profile.observed_periods, sizes, exec);
}

}  // namespace geepower
