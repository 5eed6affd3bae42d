#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "geepower/errors.hpp"

namespace geepower {

enum class Distribution { Binary, Poisson, Normal };
enum class Link { Logit, Log, Identity };
enum class EffectType { Average, Incremental, ExtendedIncremental };
enum class PeriodEffect { Categorical, Linear };
enum class CorrelationKind { NestedExchangeable, ExponentialDecay, BlockExchangeable, ProportionalDecay };
enum class DfChoice { ClustersMinusParams, ClustersMinusTwo };

// Design-pattern cell states.
inline constexpr int kControl = 0;
inline constexpr int kIntervention = 1;
inline constexpr int kNoData = 2;

/// Dense row-major integer matrix used for the design pattern and the
/// cluster-period size grid.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols, int fill = 0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  /// Builds from nested rows; throws ParseError on ragged input.
  static IntMatrix from_rows(const std::vector<std::vector<int>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  int operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  int& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::span<const int> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  bool operator==(const IntMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<int> data_;
};

struct OutcomeModel {
  Distribution dist = Distribution::Normal;
  Link link = Link::Identity;
  double phi = 1.0;
};

Link canonical_link(Distribution dist);

struct CorrelationSpec {
  CorrelationKind kind = CorrelationKind::NestedExchangeable;
  std::optional<double> alpha0;
  std::optional<double> r0;
  std::optional<double> alpha1;
  std::optional<double> alpha2;
  std::optional<double> alpha3;
};

/// Everything needed to describe one power scenario: design, mean model,
/// outcome family and working correlation.
struct TrialSpec {
  IntMatrix design_pattern;   // S x J, cells in {0, 1, 2}
  IntMatrix cp_sizes;         // S x J, participants per cluster-period
  std::vector<int> clusters_per_sequence;
  OutcomeModel outcome;
  EffectType intervention_effect_type = EffectType::Average;
  PeriodEffect period_effect_type = PeriodEffect::Categorical;
  double delta = 0.0;
  std::vector<double> beta_period_effects;
  CorrelationSpec correlation;
  std::optional<int> max_intervention_period;
  double sig_level = 0.05;
  DfChoice df_choice = DfChoice::ClustersMinusParams;

  std::size_t sequences() const { return design_pattern.rows(); }
  std::size_t periods() const { return design_pattern.cols(); }
  long total_clusters() const;
  // Number of mean parameters: J + 1 under categorical period effects, 3 under linear.
  int parameter_count() const;
};

struct LinkValue {
  double mu;
  double dmu_deta;
};

// Inverse link and its derivative at the linear predictor.
LinkValue mean_and_derivative(double eta, Link link);

// var(y) for the family: mu(1-mu) for binary, phi*mu for counts, phi for normal.
double variance_function(double mu, const OutcomeModel& outcome);

struct FrechetBounds {
  double lower;
  double upper;
};

/// Feasible range for the correlation of two binary variables with means
/// mu1 and mu2. Both means must lie strictly inside (0, 1).
FrechetBounds frechet_bounds(double mu1, double mu2);

std::string_view to_string(Distribution d);
std::string_view to_string(Link l);
std::string_view to_string(EffectType e);
std::string_view to_string(PeriodEffect p);
std::string_view to_string(CorrelationKind k);

}  // namespace geepower
