#include "mprisk/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "mprisk/empirical.hpp"
#include "mprisk/errors.hpp"
#include "mprisk/numerics.hpp"

namespace mprisk {
namespace {

constexpr double kAbsTol = 1e-10;
constexpr double kTruncationTail = 1e-9;

// x-space integration of L against the density. Unbounded laws are
// truncated at Q(1 - 1e-9); the remainder beyond the cut is carried by the
// two truncated moments, which are integrated here once per objective.
class DensityObjective {
public:
  explicit DensityObjective(const Distribution& dist) : dist_(dist) {
    const double upper = dist.support_upper();
    bounded_ = std::isfinite(upper);
    cut_ = bounded_ ? upper : dist.quantile_upper(kTruncationTail);
    scale_ = std::max(dist.mean(), 1e-300);
    tail_mass_ = bounded_ ? 0.0 : dist.survival(cut_);
    if (tail_mass_ > 0.0) {
      const double head1 = integrate([](double x) { return x; }, 0.0, cut_);
      const double head2 = integrate([](double x) { return x * x; }, 0.0, cut_);
      tail1_ = dist.mean() - head1;
      tail2_ = dist.second_moment() - head2;
    }
  }

  double operator()(double m) const {
    const double split = std::min(0.5 * m, cut_);
    const double lower = integrate([](double x) { return x * x; }, 0.0, split);
    const double upper =
        integrate([m](double x) { return (x - m) * (x - m); }, split, cut_);
    double remainder = 0.0;
    if (tail_mass_ > 0.0) remainder = tail2_ - 2.0 * m * tail1_ + m * m * tail_mass_;
    return lower + upper + remainder;
  }

private:
  template <class G>
  double integrate(G g, double x0, double x1) const {
    if (!(x1 > x0)) return 0.0;
    auto weighted = [&](double x) {
      const double w = g(x);
      if (w == 0.0) return 0.0;
      const double f = dist_.density(x);
      return std::isfinite(f) ? w * f : 0.0;
    };
    if (bounded_) return numerics::adaptive_simpson(weighted, x0, x1, kAbsTol);
    // x = σ (e^u - 1) spreads power and exponential tails evenly in u.
    auto in_u = [&](double u) {
      const double x = scale_ * std::expm1(u);
      return weighted(x) * (scale_ + x);
    };
    return numerics::adaptive_simpson(in_u, std::log1p(x0 / scale_), std::log1p(x1 / scale_),
                                      kAbsTol);
  }

  const Distribution& dist_;
  bool bounded_ = false;
  double cut_ = 0.0;
  double scale_ = 1.0;
  double tail_mass_ = 0.0;
  double tail1_ = 0.0;
  double tail2_ = 0.0;
};

double sample_objective(const EmpiricalDist& sample, double m) {
  const auto xs = sample.values();
  const auto ws = sample.weights();
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double near = xs[i] * xs[i];
    const double far = (xs[i] - m) * (xs[i] - m);
    total += ws[i] * std::min(near, far);
  }
  return total;
}

}  // namespace

double oracle_distortion(const Distribution& dist, double m) {
  if (const auto* sample = dynamic_cast<const EmpiricalDist*>(&dist)) {
    return sample_objective(*sample, m);
  }
  if (!dist.has_density()) throw InvalidArgument("oracle needs a density or an empirical law");
  return DensityObjective(dist)(m);
}

OracleResult oracle_minimize(const Distribution& dist, double grid_lo, double grid_hi,
                             int grid_n, int rounds) {
  if (!(grid_lo >= 0.0) || !(grid_hi > grid_lo) || !std::isfinite(grid_hi)) {
    throw InvalidArgument("oracle: need 0 <= grid_lo < grid_hi");
  }
  if (grid_n < 100) throw InvalidArgument("oracle: grid_n must be at least 100");
  if (rounds < 0) throw InvalidArgument("oracle: rounds must be nonnegative");

  const auto* sample = dynamic_cast<const EmpiricalDist*>(&dist);
  if (!sample && !dist.has_density()) {
    throw InvalidArgument("oracle needs a density or an empirical law");
  }
  std::optional<DensityObjective> density_objective;
  if (!sample) density_objective.emplace(dist);
  auto objective = [&](double m) {
    return sample ? sample_objective(*sample, m) : (*density_objective)(m);
  };

  OracleResult result;
  result.grid_lo = grid_lo;
  result.grid_hi = grid_hi;
  result.grid_n = grid_n;
  result.refinement_rounds = rounds;
  result.resolution = (grid_hi - grid_lo) / grid_n / std::pow(10.0, rounds);

  std::vector<double> values(static_cast<std::size_t>(grid_n) + 1);
  double lo = grid_lo;
  double width = grid_hi - grid_lo;
  double best_m = grid_lo;
  double best_value = std::numeric_limits<double>::infinity();
  for (int round = 0; round <= rounds; ++round) {
    const double step = width / grid_n;
    for (int i = 0; i <= grid_n; ++i) values[static_cast<std::size_t>(i)] = objective(lo + i * step);
    // Index-order reduction: first minimum wins.
    const auto best = std::min_element(values.begin(), values.end());
    const auto index = static_cast<int>(best - values.begin());
    if (*best <= best_value) {
      best_value = *best;
      best_m = lo + index * step;
    }
    if (round == 0) result.on_boundary = index == 0 || index == grid_n;
    width /= 10.0;
    lo = std::max(0.0, best_m - 0.5 * width);
  }
  result.m_star = best_m;
  result.L_star = best_value;
  return result;
}

}  // namespace mprisk
