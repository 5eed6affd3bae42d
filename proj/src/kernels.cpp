#include "geepower/kernels.hpp"

#include <omp.h>

#include "geepower/correlation.hpp"
#include "geepower/design.hpp"
#include "geepower/power.hpp"

namespace geepower::kernels {

ObservationLayout make_layout(std::span<const int> observed_periods, std::span<const int> sizes) {
  ObservationLayout layout;
  for (std::size_t r = 0; r < observed_periods.size(); ++r) {
    for (int k = 0; k < sizes[r]; ++k) {
      layout.periods.push_back(observed_periods[r]);
      layout.subjects.push_back(k);
    }
  }
  return layout;
}

void fill_correlation_serial(const CorrelationSpec& spec, const ObservationLayout& layout, Eigen::MatrixXd& out) {
  const auto n = static_cast<Eigen::Index>(layout.size());
  out.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      const auto a = static_cast<std::size_t>(i);
      const auto b = static_cast<std::size_t>(j);
      const double v = correlation_entry(spec, layout.periods[a], layout.subjects[a], layout.periods[b],
                                         layout.subjects[b]);
      out(i, j) = v;
      out(j, i) = v;
    }
  }
}

void fill_correlation_parallel(const CorrelationSpec& spec, const ObservationLayout& layout, Eigen::MatrixXd& out) {
  const auto n = static_cast<Eigen::Index>(layout.size());
  out.resize(n, n);
  // Each (i, j) is written by exactly one iteration of the outer loop.
#pragma omp parallel for schedule(dynamic, 16)
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      const auto a = static_cast<std::size_t>(i);
      const auto b = static_cast<std::size_t>(j);
      const double v = correlation_entry(spec, layout.periods[a], layout.subjects[a], layout.periods[b],
                                         layout.subjects[b]);
      out(i, j) = v;
      out(j, i) = v;
    }
  }
}

Eigen::MatrixXd accumulate_information_serial(std::span<const InformationTerm> terms, const TrialSpec& spec) {
  const int p = spec.parameter_count();
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(p, p);
  for (const auto& term : terms) {
    total += static_cast<double>(term.design->clusters) * sequence_information(*term.design, spec, *term.correlation);
  }
  return total;
}

Eigen::MatrixXd accumulate_information_parallel(std::span<const InformationTerm> terms, const TrialSpec& spec) {
  const int p = spec.parameter_count();
  const auto count = static_cast<std::ptrdiff_t>(terms.size());
  std::vector<Eigen::MatrixXd> parts(terms.size());

  // Exceptions may not cross the parallel region; carry the first one out.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t s = 0; s < count; ++s) {
    try {
      const auto& term = terms[static_cast<std::size_t>(s)];
      parts[static_cast<std::size_t>(s)] = sequence_information(*term.design, spec, *term.correlation);
    } catch (...) {
#pragma omp critical(geepower_information_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  // Fixed-order reduction keeps the result identical to the serial kernel.
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t s = 0; s < terms.size(); ++s) total += static_cast<double>(terms[s].design->clusters) * parts[s];
  return total;
}

}  // namespace geepower::kernels
