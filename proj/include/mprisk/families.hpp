#pragma once

#include <memory>
#include <string>
#include <variant>

#include "mprisk/distribution.hpp"

namespace mprisk {

struct UniformParams {
  double a;  ///< upper end of the support [0, a]
};
struct ExponentialParams {
  double rate;
};
/// One-parameter Pareto with survival (1 + x)^{-theta}; theta > 2.
struct ParetoParams {
  double theta;
};
/// Gamma with shape alpha and scale beta.
struct GammaParams {
  double alpha;
  double beta;
};
/// Weibull with shape alpha and scale beta, S(x) = exp(-(x/beta)^alpha).
struct WeibullParams {
  double alpha;
  double beta;
};

using ParametricFamily =
    std::variant<UniformParams, ExponentialParams, ParetoParams, GammaParams, WeibullParams>;

std::string family_name(const ParametricFamily& family);

/// Throws InvalidArgument when a parameter is out of range.
void validate(const ParametricFamily& family);

std::unique_ptr<Distribution> make_distribution(const ParametricFamily& family);

class Uniform final : public Distribution {
public:
  explicit Uniform(double a);

  std::string name() const override;
  double cdf(double x) const override;
  double survival(double x) const override;
  double quantile(double t) const override;
  double quantile_upper(double u) const override;
  bool has_density() const override { return true; }
  double density(double x) const override;
  double mean() const override { return 0.5 * a_; }
  double second_moment() const override { return a_ * a_ / 3.0; }
  double support_upper() const override { return a_; }
  double tail_expectation(double a) const override;
  double partial_moment(double x) const override;
  double upper_tail_integral(double u) const override;

  double a() const noexcept { return a_; }

private:
  double a_;
};

class Exponential final : public Distribution {
public:
  explicit Exponential(double rate);

  std::string name() const override;
  double cdf(double x) const override;
  double survival(double x) const override;
  double quantile(double t) const override;
  double quantile_upper(double u) const override;
  bool has_density() const override { return true; }
  double density(double x) const override;
  double mean() const override { return 1.0 / rate_; }
  double second_moment() const override { return 2.0 / (rate_ * rate_); }
  double support_upper() const override;
  double tail_expectation(double a) const override;
  double partial_moment(double x) const override;
  double upper_tail_integral(double u) const override;

  double rate() const noexcept { return rate_; }

private:
  double rate_;
};

class Pareto final : public Distribution {
public:
  explicit Pareto(double theta);

  std::string name() const override;
  double cdf(double x) const override;
  double survival(double x) const override;
  double quantile(double t) const override;
  double quantile_upper(double u) const override;
  bool has_density() const override { return true; }
  double density(double x) const override;
  double mean() const override { return 1.0 / (theta_ - 1.0); }
  double second_moment() const override { return 2.0 / ((theta_ - 1.0) * (theta_ - 2.0)); }
  double support_upper() const override;
  double tail_expectation(double a) const override;
  double partial_moment(double x) const override;
  double upper_tail_integral(double u) const override;

  double theta() const noexcept { return theta_; }

private:
  double theta_;
};

class Gamma final : public Distribution {
public:
  Gamma(double alpha, double beta);

  std::string name() const override;
  double cdf(double x) const override;
  double survival(double x) const override;
  double quantile(double t) const override;
  double quantile_upper(double u) const override;
  bool has_density() const override { return true; }
  double density(double x) const override;
  double mean() const override { return alpha_ * beta_; }
  double second_moment() const override { return alpha_ * (alpha_ + 1.0) * beta_ * beta_; }
  double support_upper() const override;
  double tail_expectation(double a) const override;
  double partial_moment(double x) const override;
  double upper_tail_integral(double u) const override;

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

private:
  double alpha_;
  double beta_;
  double log_norm_;  // lgamma(alpha) + alpha * log(beta)
};

class Weibull final : public Distribution {
public:
  Weibull(double alpha, double beta);

  std::string name() const override;
  double cdf(double x) const override;
  double survival(double x) const override;
  double quantile(double t) const override;
  double quantile_upper(double u) const override;
  bool has_density() const override { return true; }
  double density(double x) const override;
  double mean() const override;
  double second_moment() const override;
  double support_upper() const override;
  double tail_expectation(double a) const override;
  double partial_moment(double x) const override;
  double upper_tail_integral(double u) const override;

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

private:
  double alpha_;
  double beta_;
};

}  // namespace mprisk
