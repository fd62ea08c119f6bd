#include "mprisk/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mprisk/errors.hpp"

namespace mprisk {

EmpiricalDist make_empirical(std::vector<double> values,
                             std::optional<std::vector<double>> weights) {
  const std::size_t n = values.size();
  if (n < 2) throw InvalidArgument("empirical sample needs at least two values");
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("empirical sample contains a non-finite value");
    if (v < 0.0) throw InvalidArgument("empirical sample contains a negative value");
  }
  std::vector<double> w;
  if (weights) {
    w = std::move(*weights);
    if (w.size() != n) throw InvalidArgument("weights must match values in length");
    double total = 0.0;
    for (double x : w) {
      if (!(x > 0.0) || !std::isfinite(x)) throw InvalidArgument("weights must be positive");
      total += x;
    }
    if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("weights must sum to 1");
  } else {
    w.assign(n, 1.0 / static_cast<double>(n));
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });

  EmpiricalDist d;
  d.values_.resize(n);
  d.weights_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.values_[i] = values[order[i]];
    d.weights_[i] = w[order[i]];
  }

  d.cum_w_.resize(n);
  d.head_wx_.assign(n + 1, 0.0);
  d.head_wxx_.assign(n + 1, 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += d.weights_[i];
    d.cum_w_[i] = acc;
    d.head_wx_[i + 1] = d.head_wx_[i] + d.weights_[i] * d.values_[i];
    d.head_wxx_[i + 1] = d.head_wxx_[i] + d.weights_[i] * d.values_[i] * d.values_[i];
  }
  d.tail_w_.assign(n + 1, 0.0);
  d.tail_wx_.assign(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    d.tail_w_[i] = d.tail_w_[i + 1] + d.weights_[i];
    d.tail_wx_[i] = d.tail_wx_[i + 1] + d.weights_[i] * d.values_[i];
  }
  d.mean_ = d.head_wx_[n];
  d.second_moment_ = d.head_wxx_[n];
  return d;
}

std::string EmpiricalDist::name() const {
  return "empirical(n=" + std::to_string(values_.size()) + ")";
}

std::size_t EmpiricalDist::active_start(double a) const {
  return static_cast<std::size_t>(std::upper_bound(values_.begin(), values_.end(), a) -
                                  values_.begin());
}

double EmpiricalDist::cdf(double x) const {
  const std::size_t k = active_start(x);
  return k == 0 ? 0.0 : cum_w_[k - 1];
}

double EmpiricalDist::survival(double x) const { return tail_w_[active_start(x)]; }

double EmpiricalDist::quantile(double t) const {
  if (!(t >= 0.0 && t < 1.0)) throw DomainError("quantile: level must lie in [0, 1)");
  if (t == 0.0) return values_.front();
  const auto it = std::lower_bound(cum_w_.begin(), cum_w_.end(), t);
  if (it == cum_w_.end()) return values_.back();
  return values_[static_cast<std::size_t>(it - cum_w_.begin())];
}

double EmpiricalDist::quantile_upper(double u) const {
  if (!(u > 0.0 && u <= 1.0)) throw DomainError("quantile_upper: u must lie in (0, 1]");
  // Q(1 - u) = smallest x_i with S(x_i) <= u.
  for (std::size_t lo = 0, hi = values_.size() - 1;;) {
    if (lo == hi) return values_[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    if (tail_w_[mid + 1] <= u) hi = mid; else lo = mid + 1;
  }
}

double EmpiricalDist::point_mass(double x) const {
  const auto [lo, hi] = std::equal_range(values_.begin(), values_.end(), x);
  double mass = 0.0;
  for (auto it = lo; it != hi; ++it) mass += weights_[static_cast<std::size_t>(it - values_.begin())];
  return mass;
}

double EmpiricalDist::tail_expectation(double a) const {
  const std::size_t k = active_start(a);
  if (k >= values_.size()) {
    throw DomainError("tail_expectation: threshold at or beyond the sample maximum");
  }
  return tail_mean(k);
}

double EmpiricalDist::partial_moment(double x) const { return head_wx_[active_start(x)]; }

double EmpiricalDist::upper_tail_integral(double u) const {
  if (!(u > 0.0 && u <= 1.0)) throw DomainError("upper_tail_integral: u must lie in (0, 1]");
  const double q = quantile_upper(u);
  const std::size_t k = active_start(q);
  // Everything above q, plus the part of the atom at q that falls in (1-u, 1].
  return tail_wx_[k] + (u - tail_w_[k]) * q;
}

}  // namespace mprisk
