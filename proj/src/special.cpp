#include "mprisk/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mprisk/errors.hpp"

namespace mprisk {
namespace {

constexpr int kMaxTerms = 300;
constexpr double kRelEps = 1e-15;
constexpr double kTiny = 1e-300;

void check_domain(double s, double x) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw DomainError("incomplete gamma: shape must be positive and finite");
  }
  if (!(x >= 0.0)) {
    throw DomainError("incomplete gamma: argument must be nonnegative");
  }
}

// log of x^s e^{-x} / Γ(s), the common prefactor of both expansions.
double log_prefactor(double s, double x) { return s * std::log(x) - x - std::lgamma(s); }

// Σ_{n≥0} x^n / (s (s+1) ... (s+n)); P(s, x) = prefactor * sum.
double lower_series(double s, double x) {
  double term = 1.0 / s;
  double sum = term;
  for (int n = 1; n <= kMaxTerms; ++n) {
    term *= x / (s + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kRelEps) return sum;
  }
  throw std::runtime_error("incomplete gamma: series did not converge");
}

// Modified Lentz evaluation of the continued fraction for Γ(s, x) e^x x^{-s}.
double upper_continued_fraction(double s, double x) {
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxTerms; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kRelEps) return h;
  }
  throw std::runtime_error("incomplete gamma: continued fraction did not converge");
}

}  // namespace

double incomplete_gamma_upper_regularized(double s, double x) {
  check_domain(s, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < s + 1.0) {
    return 1.0 - std::exp(log_prefactor(s, x)) * lower_series(s, x);
  }
  return std::exp(log_prefactor(s, x)) * upper_continued_fraction(s, x);
}

double incomplete_gamma_lower_regularized(double s, double x) {
  check_domain(s, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < s + 1.0) {
    return std::exp(log_prefactor(s, x)) * lower_series(s, x);
  }
  return 1.0 - std::exp(log_prefactor(s, x)) * upper_continued_fraction(s, x);
}

double log_incomplete_gamma_upper_regularized(double s, double x) {
  check_domain(s, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
  if (x < s + 1.0) {
    return std::log1p(-std::exp(log_prefactor(s, x)) * lower_series(s, x));
  }
  return log_prefactor(s, x) + std::log(upper_continued_fraction(s, x));
}

}  // namespace mprisk
