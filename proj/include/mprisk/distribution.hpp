#pragma once

#include <string>

namespace mprisk {

/// A nonnegative loss law.
///
/// Implementations are immutable after construction and every member is a
/// pure function of its arguments, so a single instance may be evaluated
/// from any number of threads.
///
/// The only required members are the cdf, the left quantile and the first
/// two moments. Everything else has a generic fallback that integrates the
/// quantile function; the parametric families override those fallbacks with
/// closed forms.
class Distribution {
public:
  virtual ~Distribution() = default;

  virtual std::string name() const = 0;

  /// F(x) = P(X <= x). Right-continuous, zero for x < 0.
  virtual double cdf(double x) const = 0;
  /// S(x) = P(X > x).
  virtual double survival(double x) const { return 1.0 - cdf(x); }

  /// Left quantile Q(t) = inf{x : F(x) >= t} for t in [0, 1). Q(0) is the
  /// lower end of the support.
  virtual double quantile(double t) const = 0;
  /// Q(1 - u) for u in (0, 1]. Families override this to keep precision deep
  /// in the upper tail.
  virtual double quantile_upper(double u) const;

  virtual bool has_density() const { return false; }
  /// Lebesgue density. Throws DomainError when has_density() is false.
  virtual double density(double x) const;

  virtual double mean() const = 0;
  virtual double second_moment() const = 0;
  /// Essential supremum; +infinity for unbounded support.
  virtual double support_upper() const = 0;
  /// P(X = x). Zero for absolutely continuous laws.
  virtual double point_mass(double /*x*/) const { return 0.0; }

  /// τ(a) = E[X | X > a]. Throws DomainError when S(a) = 0.
  virtual double tail_expectation(double a) const;
  /// K(x) = E[X 1{X <= x}].
  virtual double partial_moment(double x) const;
  /// ∫_{1-u}^{1} Q(t) dt for u in (0, 1].
  virtual double upper_tail_integral(double u) const;

  /// Failure rate f(x) / S(x).
  double hazard(double x) const;
};

/// Generic τ(a): integrates Q over (F(a), 1) by adaptive Simpson (absolute
/// tolerance 1e-11) after the substitution t = 1 - S(a) v^4, which keeps the
/// integrand bounded whenever E[X^2] is finite.
double numeric_tail_expectation(const Distribution& dist, double a);

/// Generic ∫_{1-u}^{1} Q(t) dt with the same substitution as above.
double numeric_upper_tail_integral(const Distribution& dist, double u);

}  // namespace mprisk
