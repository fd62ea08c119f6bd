#include "mprisk/distribution.hpp"

#include <cmath>

#include "mprisk/errors.hpp"
#include "mprisk/numerics.hpp"

namespace mprisk {
namespace {

constexpr double kTailAbsTol = 1e-11;

// ∫_0^1 4 u v^3 Q(1 - u v^4) dv, i.e. ∫_{1-u}^1 Q(t) dt. The integrand
// vanishes at v = 0 when E[X^2] < ∞ because Q(1 - w) = o(w^{-1/2}).
double quantile_tail_integral(const Distribution& dist, double u, double abs_tol) {
  auto integrand = [&](double v) {
    if (v <= 0.0) return 0.0;
    const double w = u * v * v * v * v;
    if (w <= 0.0) return 0.0;
    return 4.0 * u * v * v * v * dist.quantile_upper(w);
  };
  return numerics::adaptive_simpson(integrand, 0.0, 1.0, abs_tol);
}

}  // namespace

double Distribution::quantile_upper(double u) const {
  if (!(u > 0.0 && u <= 1.0)) throw DomainError("quantile_upper: u must lie in (0, 1]");
  return quantile(1.0 - u);
}

double Distribution::density(double /*x*/) const {
  throw DomainError(name() + " has no density");
}

double Distribution::tail_expectation(double a) const {
  return numeric_tail_expectation(*this, a);
}

double Distribution::partial_moment(double x) const {
  if (x < 0.0) return 0.0;
  const double s = survival(x);
  if (s <= 0.0) return mean();
  return mean() - s * tail_expectation(x);
}

double Distribution::upper_tail_integral(double u) const {
  return numeric_upper_tail_integral(*this, u);
}

double Distribution::hazard(double x) const {
  const double s = survival(x);
  if (s <= 0.0) throw DomainError("hazard: survival vanishes at x");
  return density(x) / s;
}

double numeric_tail_expectation(const Distribution& dist, double a) {
  const double s = dist.survival(a);
  if (!(s > 0.0)) {
    throw DomainError("tail_expectation: threshold at or beyond the essential supremum");
  }
  // The factor S(a) cancels: ∫_{F(a)}^1 Q dt / S(a) = ∫_0^1 4 v^3 Q(1 - S v^4) dv.
  return quantile_tail_integral(dist, s, kTailAbsTol * s) / s;
}

double numeric_upper_tail_integral(const Distribution& dist, double u) {
  if (!(u > 0.0 && u <= 1.0)) throw DomainError("upper_tail_integral: u must lie in (0, 1]");
  return quantile_tail_integral(dist, u, kTailAbsTol * u);
}

}  // namespace mprisk
