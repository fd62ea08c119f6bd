#include "mprisk/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "mprisk/diagnostics.hpp"
#include "mprisk/errors.hpp"
#include "mprisk/numerics.hpp"

namespace mprisk {
namespace {

constexpr int kStallLimit = 10;
constexpr double kDamping = 0.5;

// fp_tol is absolute; it only widens where τ(a) itself cannot be resolved
// that finely in double precision.
double scaled_tol(const SolverConfig& config, double a) {
  return std::max(config.fp_tol, 64.0 * std::numeric_limits<double>::epsilon() * std::abs(a));
}

// m - τ(m/2), the sign of L'(m) wherever S(m/2) > 0.
double stationarity_gap(const Distribution& dist, double m) {
  return m - dist.tail_expectation(0.5 * m);
}

MpPair make_pair(const Distribution& dist, double a, Method method, int iterations) {
  MpPair mp;
  mp.a = a;
  mp.m = 2.0 * a;
  mp.p = dist.survival(a);
  mp.distortion = distortion(dist, mp.m);
  mp.w2 = std::sqrt(mp.distortion);
  mp.residual = mp.p > 0.0 ? std::abs(2.0 * a - dist.tail_expectation(a))
                           : std::numeric_limits<double>::infinity();
  mp.method = method;
  mp.atom_at_threshold = dist.point_mass(a) > 0.0;
  mp.iterations = iterations;
  return mp;
}

// Secant steps on r(a) = 2a - τ(a) from a converged iterate. The plain map
// can contract slowly (ratio near 1 for heavy tails), leaving a residual
// just under tolerance but m visibly off; this tightens it to rounding level.
double polish_threshold(const Distribution& dist, double a) {
  auto r = [&](double x) { return 2.0 * x - dist.tail_expectation(x); };
  double r_a = r(a);
  double prev = 0.5 * dist.tail_expectation(a);
  if (prev == a || !(dist.survival(prev) > 0.0)) return a;
  double r_prev = r(prev);
  for (int k = 0; k < 8 && r_a != 0.0 && r_a != r_prev; ++k) {
    const double next = a - r_a * (a - prev) / (r_a - r_prev);
    if (!(next > 0.0) || !(dist.survival(next) > 0.0)) break;
    const double r_next = r(next);
    if (!(std::abs(r_next) < std::abs(r_a))) break;
    prev = a;
    r_prev = r_a;
    a = next;
    r_a = r_next;
  }
  return a;
}

void require_nondegenerate(const Distribution& dist) {
  if (!(dist.mean() > 0.0) || !(dist.second_moment() > 0.0)) {
    throw SolverFailure("degenerate support: all mass at zero", 0.0,
                        std::numeric_limits<double>::infinity());
  }
  if (const auto* sample = dynamic_cast<const EmpiricalDist*>(&dist)) {
    if (sample->values().front() == sample->values().back()) {
      throw SolverFailure("degenerate support: all mass at a single point", 0.0,
                          std::numeric_limits<double>::infinity());
    }
  }
}

// Prefer the candidate with lower distortion; ties keep the first.
const MpPair& better_of(const MpPair& first, const MpPair& second) {
  const double slack = 1e-12 * std::max(1.0, first.distortion);
  return second.distortion < first.distortion - slack ? second : first;
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::fixed_point: return "fixed_point";
    case Method::minimize: return "minimize";
    case Method::lloyd: return "lloyd";
    case Method::closed_form: return "closed_form";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (!(fp_tol > 0.0)) throw InvalidArgument("fp_tol must be positive");
  if (max_iter <= 0) throw InvalidArgument("max_iter must be positive");
  if (init && !(*init > 0.0)) throw InvalidArgument("init must be positive");
  if (grid_points < 3) throw InvalidArgument("grid_points must be at least 3");
  if (!(bracket_quantile > 0.0 && bracket_quantile < 1.0)) {
    throw InvalidArgument("bracket_quantile must lie in (0, 1)");
  }
}

// ---------------------------------------------------------------------------
// Objective

double distortion(const Distribution& dist, double m) {
  if (!(m >= 0.0)) throw InvalidArgument("distortion: m must be nonnegative");
  if (const auto* sample = dynamic_cast<const EmpiricalDist*>(&dist)) {
    const auto xs = sample->values();
    const auto ws = sample->weights();
    const double a = 0.5 * m;
    double total = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double d = xs[i] > a ? xs[i] - m : xs[i];
      total += ws[i] * d * d;
    }
    return total;
  }
  const double a = 0.5 * m;
  const double p = dist.survival(a);
  if (!(p > 0.0)) return dist.second_moment();
  const double value = dist.second_moment() - p * m * (2.0 * dist.tail_expectation(a) - m);
  return std::max(0.0, value);
}

Slope distortion_derivative(const Distribution& dist, double m) {
  if (!(m > 0.0)) throw InvalidArgument("distortion_derivative: m must be positive");
  const double a = 0.5 * m;
  Slope slope;
  slope.atom_at_threshold = dist.point_mass(a) > 0.0;
  const double s = dist.survival(a);
  if (!(s > 0.0)) return slope;
  slope.value = 2.0 * s * (m - dist.tail_expectation(a));
  return slope;
}

double psi(const Distribution& dist, double m, double p) {
  if (!(m > 0.0)) throw InvalidArgument("psi: m must be positive");
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("psi: p must lie strictly inside (0, 1)");
  return dist.second_moment() + m * m * p - 2.0 * m * dist.upper_tail_integral(p);
}

// ---------------------------------------------------------------------------
// Closed forms

std::optional<MpPair> closed_form_mp(const ParametricFamily& family) {
  validate(family);
  double m = 0.0;
  double p = 0.0;
  if (const auto* u = std::get_if<UniformParams>(&family)) {
    m = 2.0 * u->a / 3.0;
    p = 2.0 / 3.0;
  } else if (const auto* e = std::get_if<ExponentialParams>(&family)) {
    m = 2.0 / e->rate;
    p = std::exp(-1.0);
  } else if (const auto* pa = std::get_if<ParetoParams>(&family)) {
    m = 2.0 / (pa->theta - 2.0);
    p = std::pow((pa->theta - 2.0) / (pa->theta - 1.0), pa->theta);
  } else {
    return std::nullopt;
  }
  const auto dist = make_distribution(family);
  MpPair mp;
  mp.m = m;
  mp.a = 0.5 * m;
  mp.p = p;
  mp.distortion = distortion(*dist, m);
  mp.w2 = std::sqrt(mp.distortion);
  mp.residual = std::abs(m - dist->tail_expectation(mp.a));
  mp.method = Method::closed_form;
  return mp;
}

// ---------------------------------------------------------------------------
// Fixed point

MpPair solve_fixed_point(const Distribution& dist, const SolverConfig& config) {
  config.validate();
  require_nondegenerate(dist);

  const auto* sample = dynamic_cast<const EmpiricalDist*>(&dist);
  double a = config.init.value_or(dist.mean());
  double best_a = a;
  double best_residual = std::numeric_limits<double>::infinity();
  double gamma = 1.0;
  int stall = 0;
  bool converged = false;
  int it = 0;
  for (; it < config.max_iter; ++it) {
    if (!(dist.survival(a) > 0.0)) break;
    const double tau = dist.tail_expectation(a);
    const double residual = std::abs(2.0 * a - tau);
    if (residual < best_residual) {
      best_residual = residual;
      best_a = a;
      stall = 0;
    } else if (++stall >= kStallLimit) {
      if (gamma < 1.0) break;
      gamma = kDamping;
      stall = 0;
    }
    if (residual <= scaled_tol(config, a)) {
      converged = true;
      break;
    }
    a = (1.0 - gamma) * a + gamma * 0.5 * tau;
  }

  if (!converged) {
    try {
      MpPair fallback = sample ? exact_scan_empirical(*sample) : solve_minimize(dist, config);
      if (fallback.residual <= scaled_tol(config, fallback.a)) return fallback;
      best_residual = std::min(best_residual, fallback.residual);
      if (fallback.residual <= best_residual) best_a = fallback.a;
    } catch (const SolverFailure&) {
    }
    throw SolverFailure("fixed-point iteration and minimization fallback both failed",
                        2.0 * best_a, best_residual);
  }

  if (!sample) a = polish_threshold(dist, a);
  MpPair result = make_pair(dist, a, Method::fixed_point, it + 1);
  if (sample) return better_of(result, exact_scan_empirical(*sample));
  if (uniqueness_certified(dist)) return result;
  try {
    return better_of(result, solve_minimize(dist, config));
  } catch (const SolverFailure&) {
    return result;
  }
}

// ---------------------------------------------------------------------------
// Direct minimization

MpPair solve_minimize(const Distribution& dist, const SolverConfig& config) {
  config.validate();
  require_nondegenerate(dist);

  const double lo = dist.mean() * (1.0 - 1e-6);
  const double hi = 2.0 * dist.quantile(config.bracket_quantile);
  if (!(hi > lo) || !std::isfinite(hi)) {
    throw SolverFailure("degenerate minimization bracket [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]",
                        lo, std::numeric_limits<double>::infinity());
  }

  const int n = config.grid_points;
  const double step = (hi - lo) / (n - 1);
  auto grid = [&](int i) { return i == n - 1 ? hi : lo + i * step; };
  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double v = distortion(dist, grid(i));
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  double left = grid(std::max(0, best - 1));
  double right = grid(std::min(n - 1, best + 1));

  // Golden section resolves L only down to ~sqrt(machine eps) in m; below that
  // the sign of L' takes over.
  const double golden_width = std::max(config.fp_tol, 1e-7 * std::max(1.0, right));
  auto objective = [&](double m) { return distortion(dist, m); };
  auto [g_lo, g_hi] = numerics::golden_section(objective, left, right, golden_width);

  auto gap = [&](double m) {
    return dist.survival(0.5 * m) > 0.0 ? stationarity_gap(dist, m)
                                        : std::numeric_limits<double>::infinity();
  };
  double b_lo = g_lo;
  double b_hi = g_hi;
  double gap_lo = gap(b_lo);
  double gap_hi = gap(b_hi);
  // Widen toward the grid cell if golden section drifted off the root.
  for (double w = g_hi - g_lo; gap_lo > 0.0 && b_lo > left; w *= 2.0) {
    b_lo = std::max(left, b_lo - w);
    gap_lo = gap(b_lo);
  }
  for (double w = g_hi - g_lo; gap_hi < 0.0 && b_hi < right; w *= 2.0) {
    b_hi = std::min(right, b_hi + w);
    gap_hi = gap(b_hi);
  }

  double m = 0.5 * (g_lo + g_hi);
  int iterations = 0;
  if (gap_lo <= 0.0 && gap_hi >= 0.0) {
    const double floor_width = 4.0 * std::numeric_limits<double>::epsilon() * b_hi;
    for (; iterations < 200 && (b_hi - b_lo) > floor_width; ++iterations) {
      const double mid = 0.5 * (b_lo + b_hi);
      const double g = gap(mid);
      if (g == 0.0) {
        b_lo = b_hi = mid;
        break;
      }
      if (g < 0.0) b_lo = mid; else b_hi = mid;
    }
    m = std::abs(gap(b_lo)) <= std::abs(gap(b_hi)) ? b_lo : b_hi;
  }

  MpPair mp = make_pair(dist, 0.5 * m, Method::minimize, iterations);
  if (!(mp.residual <= scaled_tol(config, mp.a))) {
    throw SolverFailure("minimization did not reach a stationary point", mp.m, mp.residual);
  }
  return mp;
}

// ---------------------------------------------------------------------------
// Empirical laws

MpPair exact_scan_empirical(const EmpiricalDist& sample) {
  require_nondegenerate(sample);
  const auto xs = sample.values();
  const std::size_t n = xs.size();
  std::size_t best_k = n;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0 && xs[k - 1] == xs[k]) continue;
    const double tau = sample.tail_mean(k);
    const double a = 0.5 * tau;
    const bool feasible = a < xs[k] && (k == 0 || xs[k - 1] <= a);
    if (!feasible) continue;
    // L = E[X^2] - p τ^2 on this piece.
    const double score = sample.tail_weight(k) * tau * tau;
    if (score > best_score) {
      best_score = score;
      best_k = k;
    }
  }
  if (best_k == n) {
    throw SolverFailure("exact scan found no feasible stationary point", 0.0,
                        std::numeric_limits<double>::infinity());
  }
  return make_pair(sample, 0.5 * sample.tail_mean(best_k), Method::minimize, 0);
}

MpPair lloyd_empirical(const EmpiricalDist& sample, const SolverConfig& config) {
  config.validate();
  require_nondegenerate(sample);
  const std::size_t n = sample.size();
  double a = config.init.value_or(sample.mean());
  std::size_t k = sample.active_start(a);
  if (k >= n) throw InvalidArgument("lloyd: no sample value exceeds the initial threshold");

  std::set<std::size_t> visited{k};
  for (int it = 0; it < config.max_iter; ++it) {
    a = 0.5 * sample.tail_mean(k);
    const std::size_t next = sample.active_start(a);
    if (next == k) return make_pair(sample, a, Method::lloyd, it + 1);
    if (!visited.insert(next).second) break;
    k = next;
  }
  return exact_scan_empirical(sample);
}

}  // namespace mprisk
