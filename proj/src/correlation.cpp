#include "geepower/correlation.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace geepower {

namespace {

double need(const std::optional<double>& v, const char* name) {
  if (!v) throw DomainError(std::string("correlation parameter ") + name + " is not set");
  return *v;
}

}  // namespace

double correlation_entry(const CorrelationSpec& spec, int t, int k, int t2, int k2) {
  if (t == t2 && k == k2) return 1.0;
  const int d = std::abs(t - t2);
  switch (spec.kind) {
    case CorrelationKind::NestedExchangeable:
      return d == 0 ? need(spec.alpha1, "alpha1") : need(spec.alpha2, "alpha2");
    case CorrelationKind::ExponentialDecay: {
      const double a0 = need(spec.alpha0, "alpha0");
      return d == 0 ? a0 : a0 * std::pow(need(spec.r0, "r0"), d);
    }
    case CorrelationKind::BlockExchangeable:
      if (d == 0) return need(spec.alpha1, "alpha1");
      return k == k2 ? need(spec.alpha3, "alpha3") : need(spec.alpha2, "alpha2");
    case CorrelationKind::ProportionalDecay: {
      const double a0 = need(spec.alpha0, "alpha0");
      if (d == 0) return a0;
      const double decay = std::pow(need(spec.r0, "r0"), d);
      return k == k2 ? decay : a0 * decay;
    }
  }
  return 0.0;
}

CorrelationMatrix build_R(const CorrelationSpec& spec, std::span<const int> observed_periods,
                          std::span<const int> sizes, Execution exec) {
  auto layout = kernels::make_layout(observed_periods, sizes);
  const auto n = static_cast<Eigen::Index>(layout.size());
  Eigen::MatrixXd entries(n, n);
  kernels::fill_correlation(spec, layout, entries, exec);

  Eigen::LLT<Eigen::MatrixXd> llt(entries);
  Eigen::MatrixXd lower = llt.matrixL();
  bool ok = llt.info() == Eigen::Success;
  for (Eigen::Index i = 0; ok && i < n; ++i) ok = std::isfinite(lower(i, i)) && lower(i, i) > 0.0;
  if (!ok) {
    throw NotPositiveDefiniteError("working correlation (" + std::string(to_string(spec.kind)) + ", n = " +
                                   std::to_string(n) + ") is not positive definite");
  }
  return {std::move(layout), std::move(entries), std::move(lower)};
}

}  // namespace geepower
