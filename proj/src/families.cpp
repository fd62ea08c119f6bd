#include "mprisk/families.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "mprisk/errors.hpp"
#include "mprisk/special.hpp"

namespace mprisk {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_num(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidArgument(std::string(what) + " must be positive and finite");
  }
}

void check_level(double t) {
  if (!(t >= 0.0 && t < 1.0)) throw DomainError("quantile: level must lie in [0, 1)");
}

void check_tail(double u) {
  if (!(u > 0.0 && u <= 1.0)) throw DomainError("quantile_upper: u must lie in (0, 1]");
}

void require_tail(double s) {
  if (!(s > 0.0)) {
    throw DomainError("tail_expectation: threshold at or beyond the essential supremum");
  }
}

// Standard Gamma(alpha, 1) quantile. With `upper` false solves P(alpha, z) = prob,
// otherwise Q(alpha, z) = prob. Safeguarded Newton in w = log z, where both
// targets are monotone; the lower/upper choice keeps the target away from 1.
double standard_gamma_inverse(double alpha, double prob, bool upper) {
  if (!upper && prob <= 0.0) return 0.0;
  if (upper && prob >= 1.0) return 0.0;
  const double log_prob = std::log(prob);
  const double lg = std::lgamma(alpha);
  // excess(w) increases in w; derivative returned alongside.
  auto excess = [&](double w, double& slope) {
    const double z = std::exp(w);
    const double log_dens_z = alpha * w - z - lg;  // log(z * density(z))
    if (upper) {
      const double lq = log_incomplete_gamma_upper_regularized(alpha, z);
      slope = std::exp(log_dens_z - lq);
      return log_prob - lq;
    }
    slope = std::exp(log_dens_z);
    return incomplete_gamma_lower_regularized(alpha, z) - prob;
  };

  double slope = 0.0;
  double w = std::log(alpha);
  double e = excess(w, slope);
  double lo = w;
  double hi = w;
  double step = 1.0;
  if (e < 0.0) {
    while (e < 0.0) {
      lo = hi;
      hi += step;
      step *= 2.0;
      e = excess(hi, slope);
    }
  } else {
    while (e > 0.0) {
      hi = lo;
      lo -= step;
      step *= 2.0;
      if (lo < -745.0) return 0.0;
      e = excess(lo, slope);
    }
  }
  w = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    e = excess(w, slope);
    if (e == 0.0) break;
    if (e < 0.0) lo = w; else hi = w;
    double next = (slope > 0.0 && std::isfinite(slope)) ? w - e / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double delta = std::abs(next - w);
    w = next;
    if (delta <= 1e-15 * std::max(1.0, std::abs(w)) || hi - lo <= 1e-15) break;
  }
  return std::exp(w);
}

}  // namespace

// ---------------------------------------------------------------------------
// Family dispatch

std::string family_name(const ParametricFamily& family) {
  struct Visitor {
    std::string operator()(const UniformParams&) const { return "uniform"; }
    std::string operator()(const ExponentialParams&) const { return "exponential"; }
    std::string operator()(const ParetoParams&) const { return "pareto"; }
    std::string operator()(const GammaParams&) const { return "gamma"; }
    std::string operator()(const WeibullParams&) const { return "weibull"; }
  };
  return std::visit(Visitor{}, family);
}

void validate(const ParametricFamily& family) {
  struct Visitor {
    void operator()(const UniformParams& p) const { require_positive(p.a, "a"); }
    void operator()(const ExponentialParams& p) const { require_positive(p.rate, "rate"); }
    void operator()(const ParetoParams& p) const {
      if (!(p.theta > 2.0) || !std::isfinite(p.theta)) {
        throw InvalidArgument("theta must exceed 2");
      }
    }
    void operator()(const GammaParams& p) const {
      require_positive(p.alpha, "alpha");
      require_positive(p.beta, "beta");
    }
    void operator()(const WeibullParams& p) const {
      require_positive(p.alpha, "alpha");
      require_positive(p.beta, "beta");
    }
  };
  std::visit(Visitor{}, family);
}

std::unique_ptr<Distribution> make_distribution(const ParametricFamily& family) {
  struct Visitor {
    std::unique_ptr<Distribution> operator()(const UniformParams& p) const {
      return std::make_unique<Uniform>(p.a);
    }
    std::unique_ptr<Distribution> operator()(const ExponentialParams& p) const {
      return std::make_unique<Exponential>(p.rate);
    }
    std::unique_ptr<Distribution> operator()(const ParetoParams& p) const {
      return std::make_unique<Pareto>(p.theta);
    }
    std::unique_ptr<Distribution> operator()(const GammaParams& p) const {
      return std::make_unique<Gamma>(p.alpha, p.beta);
    }
    std::unique_ptr<Distribution> operator()(const WeibullParams& p) const {
      return std::make_unique<Weibull>(p.alpha, p.beta);
    }
  };
  return std::visit(Visitor{}, family);
}

// ---------------------------------------------------------------------------
// Uniform on [0, a]

Uniform::Uniform(double a) : a_(a) { validate(UniformParams{a}); }

std::string Uniform::name() const { return "uniform(a=" + fmt_num(a_) + ")"; }

double Uniform::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= a_) return 1.0;
  return x / a_;
}

double Uniform::survival(double x) const {
  if (x <= 0.0) return 1.0;
  if (x >= a_) return 0.0;
  return (a_ - x) / a_;
}

double Uniform::quantile(double t) const {
  check_level(t);
  return a_ * t;
}

double Uniform::quantile_upper(double u) const {
  check_tail(u);
  return a_ * (1.0 - u);
}

double Uniform::density(double x) const { return (x >= 0.0 && x <= a_) ? 1.0 / a_ : 0.0; }

double Uniform::tail_expectation(double a) const {
  require_tail(survival(a));
  return 0.5 * (std::max(a, 0.0) + a_);
}

double Uniform::partial_moment(double x) const {
  const double c = std::clamp(x, 0.0, a_);
  return 0.5 * c * c / a_;
}

double Uniform::upper_tail_integral(double u) const {
  check_tail(u);
  return 0.5 * a_ * u * (2.0 - u);
}

// ---------------------------------------------------------------------------
// Exponential

Exponential::Exponential(double rate) : rate_(rate) { validate(ExponentialParams{rate}); }

std::string Exponential::name() const { return "exponential(rate=" + fmt_num(rate_) + ")"; }

double Exponential::cdf(double x) const { return x <= 0.0 ? 0.0 : -std::expm1(-rate_ * x); }

double Exponential::survival(double x) const { return x <= 0.0 ? 1.0 : std::exp(-rate_ * x); }

double Exponential::quantile(double t) const {
  check_level(t);
  return -std::log1p(-t) / rate_;
}

double Exponential::quantile_upper(double u) const {
  check_tail(u);
  return -std::log(u) / rate_;
}

double Exponential::density(double x) const {
  return x < 0.0 ? 0.0 : rate_ * std::exp(-rate_ * x);
}

double Exponential::support_upper() const { return kInf; }

double Exponential::tail_expectation(double a) const {
  require_tail(survival(a));
  return std::max(a, 0.0) + 1.0 / rate_;
}

double Exponential::partial_moment(double x) const {
  if (x <= 0.0) return 0.0;
  // 1/λ - (x + 1/λ) e^{-λx}
  return (-std::expm1(-rate_ * x) - rate_ * x * std::exp(-rate_ * x)) / rate_;
}

double Exponential::upper_tail_integral(double u) const {
  check_tail(u);
  return u * (quantile_upper(u) + 1.0 / rate_);
}

// ---------------------------------------------------------------------------
// Pareto, S(x) = (1 + x)^{-theta}

Pareto::Pareto(double theta) : theta_(theta) { validate(ParetoParams{theta}); }

std::string Pareto::name() const { return "pareto(theta=" + fmt_num(theta_) + ")"; }

double Pareto::cdf(double x) const {
  return x <= 0.0 ? 0.0 : -std::expm1(-theta_ * std::log1p(x));
}

double Pareto::survival(double x) const {
  return x <= 0.0 ? 1.0 : std::exp(-theta_ * std::log1p(x));
}

double Pareto::quantile(double t) const {
  check_level(t);
  return std::expm1(-std::log1p(-t) / theta_);
}

double Pareto::quantile_upper(double u) const {
  check_tail(u);
  return std::expm1(-std::log(u) / theta_);
}

double Pareto::density(double x) const {
  return x < 0.0 ? 0.0 : theta_ * std::exp(-(theta_ + 1.0) * std::log1p(x));
}

double Pareto::support_upper() const { return kInf; }

double Pareto::tail_expectation(double a) const {
  require_tail(survival(a));
  return theta_ / (theta_ - 1.0) * (1.0 + std::max(a, 0.0)) - 1.0;
}

double Pareto::partial_moment(double x) const {
  if (x <= 0.0) return 0.0;
  return mean() - survival(x) * tail_expectation(x);
}

double Pareto::upper_tail_integral(double u) const {
  check_tail(u);
  return u * tail_expectation(quantile_upper(u));
}

// ---------------------------------------------------------------------------
// Gamma(shape alpha, scale beta)

Gamma::Gamma(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  validate(GammaParams{alpha, beta});
  log_norm_ = std::lgamma(alpha_) + alpha_ * std::log(beta_);
}

std::string Gamma::name() const {
  return "gamma(alpha=" + fmt_num(alpha_) + ",beta=" + fmt_num(beta_) + ")";
}

double Gamma::cdf(double x) const {
  return x <= 0.0 ? 0.0 : incomplete_gamma_lower_regularized(alpha_, x / beta_);
}

double Gamma::survival(double x) const {
  return x <= 0.0 ? 1.0 : incomplete_gamma_upper_regularized(alpha_, x / beta_);
}

double Gamma::quantile(double t) const {
  check_level(t);
  if (t <= 0.5) return beta_ * standard_gamma_inverse(alpha_, t, false);
  return beta_ * standard_gamma_inverse(alpha_, 1.0 - t, true);
}

double Gamma::quantile_upper(double u) const {
  check_tail(u);
  if (u >= 0.5) return beta_ * standard_gamma_inverse(alpha_, 1.0 - u, false);
  return beta_ * standard_gamma_inverse(alpha_, u, true);
}

double Gamma::density(double x) const {
  if (x < 0.0) return 0.0;
  if (x == 0.0) {
    if (alpha_ < 1.0) return kInf;
    return alpha_ == 1.0 ? 1.0 / beta_ : 0.0;
  }
  return std::exp((alpha_ - 1.0) * std::log(x) - x / beta_ - log_norm_);
}

double Gamma::support_upper() const { return kInf; }

double Gamma::tail_expectation(double a) const {
  if (a <= 0.0) return mean();
  // β Γ(1+α, z) / Γ(α, z) = αβ + β z^α e^{-z} / (Γ(α) Q(α, z)), z = a/β.
  const double z = a / beta_;
  const double log_q = log_incomplete_gamma_upper_regularized(alpha_, z);
  if (!std::isfinite(log_q)) require_tail(0.0);
  return alpha_ * beta_ +
         beta_ * std::exp(alpha_ * std::log(z) - z - std::lgamma(alpha_) - log_q);
}

double Gamma::partial_moment(double x) const {
  if (x <= 0.0) return 0.0;
  return mean() * incomplete_gamma_lower_regularized(alpha_ + 1.0, x / beta_);
}

double Gamma::upper_tail_integral(double u) const {
  check_tail(u);
  return u * tail_expectation(quantile_upper(u));
}

// ---------------------------------------------------------------------------
// Weibull(shape alpha, scale beta)

Weibull::Weibull(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  validate(WeibullParams{alpha, beta});
}

std::string Weibull::name() const {
  return "weibull(alpha=" + fmt_num(alpha_) + ",beta=" + fmt_num(beta_) + ")";
}

double Weibull::cdf(double x) const {
  return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x / beta_, alpha_));
}

double Weibull::survival(double x) const {
  return x <= 0.0 ? 1.0 : std::exp(-std::pow(x / beta_, alpha_));
}

double Weibull::quantile(double t) const {
  check_level(t);
  return beta_ * std::pow(-std::log1p(-t), 1.0 / alpha_);
}

double Weibull::quantile_upper(double u) const {
  check_tail(u);
  return beta_ * std::pow(-std::log(u), 1.0 / alpha_);
}

double Weibull::density(double x) const {
  if (x < 0.0) return 0.0;
  if (x == 0.0) {
    if (alpha_ < 1.0) return kInf;
    return alpha_ == 1.0 ? 1.0 / beta_ : 0.0;
  }
  const double z = std::pow(x / beta_, alpha_);
  return alpha_ / x * z * std::exp(-z);
}

double Weibull::mean() const { return beta_ * std::tgamma(1.0 + 1.0 / alpha_); }

double Weibull::second_moment() const {
  return beta_ * beta_ * std::tgamma(1.0 + 2.0 / alpha_);
}

double Weibull::support_upper() const { return kInf; }

double Weibull::tail_expectation(double a) const {
  if (a <= 0.0) return mean();
  // β e^{z} Γ(1 + 1/α, z), z = (a/β)^α, with the unregularized Γ written as
  // Γ(1 + 1/α) Q(1 + 1/α, z).
  const double s = 1.0 + 1.0 / alpha_;
  const double z = std::pow(a / beta_, alpha_);
  const double log_q = log_incomplete_gamma_upper_regularized(s, z);
  if (!std::isfinite(log_q) || std::isinf(z)) require_tail(0.0);
  return beta_ * std::exp(z + std::lgamma(s) + log_q);
}

double Weibull::partial_moment(double x) const {
  if (x <= 0.0) return 0.0;
  return mean() * incomplete_gamma_lower_regularized(1.0 + 1.0 / alpha_,
                                                      std::pow(x / beta_, alpha_));
}

double Weibull::upper_tail_integral(double u) const {
  check_tail(u);
  return u * tail_expectation(quantile_upper(u));
}

}  // namespace mprisk
