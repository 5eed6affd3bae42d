#pragma once

// Data-parallel kernels. Each has a plain serial reference and an OpenMP
// version; the two must agree bit for bit, which the test suite checks.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "geepower/model.hpp"

namespace geepower {

enum class Execution { Serial, Parallel };

class CorrelationMatrix;
struct SequenceDesign;

namespace kernels {

/// Calendar period and within-period individual index for each observation
/// of one cluster, period-major.
struct ObservationLayout {
  std::vector<int> periods;
  std::vector<int> subjects;

  std::size_t size() const { return periods.size(); }
};

ObservationLayout make_layout(std::span<const int> observed_periods, std::span<const int> sizes);

void fill_correlation_serial(const CorrelationSpec& spec, const ObservationLayout& layout, Eigen::MatrixXd& out);
void fill_correlation_parallel(const CorrelationSpec& spec, const ObservationLayout& layout, Eigen::MatrixXd& out);

struct InformationTerm {
  const SequenceDesign* design;
  const CorrelationMatrix* correlation;
};

// Sum over sequences of I_s * D'V^{-1}D, added in sequence order.
Eigen::MatrixXd accumulate_information_serial(std::span<const InformationTerm> terms, const TrialSpec& spec);
Eigen::MatrixXd accumulate_information_parallel(std::span<const InformationTerm> terms, const TrialSpec& spec);

inline void fill_correlation(const CorrelationSpec& spec, const ObservationLayout& layout, Eigen::MatrixXd& out,
                             Execution exec) {
  exec == Execution::Serial ? fill_correlation_serial(spec, layout, out) : fill_correlation_parallel(spec, layout, out);
}

inline Eigen::MatrixXd accumulate_information(std::span<const InformationTerm> terms, const TrialSpec& spec,
                                              Execution exec) {
  return exec == Execution::Serial ? accumulate_information_serial(terms, spec)
                                   : accumulate_information_parallel(terms, spec);
}

}  // namespace kernels
}  // namespace geepower
