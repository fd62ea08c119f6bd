#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>

namespace mprisk::test {

// Fixed seeds everywhere so a failure reproduces.
inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform_in(std::mt19937_64& gen, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(gen);
}

// Composite Gauss-Legendre (5 nodes) on [a, b], n panels. Kept here so the
// tests never borrow the library's own quadrature.
inline double gauss_legendre(const std::function<double(double)>& f, double a, double b, int n) {
  static const double x[] = {0.0, 0.5384693101056831, 0.9061798459386640};
  static const double w[] = {0.5688888888888889, 0.4786286704993665, 0.2369268850561891};
  const double h = (b - a) / n;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double c = a + (i + 0.5) * h;
    const double r = 0.5 * h;
    double s = w[0] * f(c);
    for (int k = 1; k < 3; ++k) s += w[k] * (f(c - r * x[k]) + f(c + r * x[k]));
    total += r * s;
  }
  return total;
}

}  // namespace mprisk::test
