#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mprisk/distribution.hpp"

namespace mprisk {

/// Discrete law on a finite sorted sample with positive weights.
///
/// Tail sums are accumulated from the top at construction so that S, τ and
/// K are O(log n) lookups. Threshold events use the strict convention
/// X > a throughout.
class EmpiricalDist final : public Distribution {
public:
  std::string name() const override;
  double cdf(double x) const override;
  double survival(double x) const override;
  double quantile(double t) const override;
  double quantile_upper(double u) const override;
  double mean() const override { return mean_; }
  double second_moment() const override { return second_moment_; }
  double support_upper() const override { return values_.back(); }
  double point_mass(double x) const override;
  double tail_expectation(double a) const override;
  double partial_moment(double x) const override;
  double upper_tail_integral(double u) const override;

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> weights() const noexcept { return weights_; }

  /// Index of the first sample value strictly above a; the active set of
  /// threshold a is [active_start(a), size()).
  std::size_t active_start(double a) const;
  /// Σ_{i >= k} w_i.
  double tail_weight(std::size_t k) const { return tail_w_[k]; }
  /// Σ_{i >= k} w_i x_i / Σ_{i >= k} w_i; requires k < size().
  double tail_mean(std::size_t k) const { return tail_wx_[k] / tail_w_[k]; }
  /// Σ_{i < k} w_i x_i^2.
  double head_second_moment(std::size_t k) const { return head_wxx_[k]; }

private:
  friend EmpiricalDist make_empirical(std::vector<double> values,
                                      std::optional<std::vector<double>> weights);
  EmpiricalDist() = default;

  std::vector<double> values_;
  std::vector<double> weights_;
  std::vector<double> cum_w_;    // cum_w_[i] = Σ_{j <= i} w_j
  std::vector<double> tail_w_;   // size n + 1
  std::vector<double> tail_wx_;  // size n + 1
  std::vector<double> head_wx_;  // size n + 1, head_wx_[k] = Σ_{j < k} w_j x_j
  std::vector<double> head_wxx_; // size n + 1
  double mean_ = 0.0;
  double second_moment_ = 0.0;
};

/// Sorts and validates a sample. Requires n >= 2, every value finite and
/// nonnegative, and (if given) one positive weight per value with the
/// weights summing to 1 within 1e-12. Throws InvalidArgument otherwise.
EmpiricalDist make_empirical(std::vector<double> values,
                             std::optional<std::vector<double>> weights = std::nullopt);

}  // namespace mprisk
