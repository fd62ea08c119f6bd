#include "mprisk/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mprisk/errors.hpp"

namespace mprisk {

DiagnosticsReport sufficiency_check(const Distribution& dist, const MpPair& mp) {
  DiagnosticsReport report;
  if (!dist.has_density()) {
    report.notes.emplace_back("sufficiency: not applicable (no density)");
    return report;
  }
  const double q = dist.quantile_upper(mp.p);
  const double f = dist.density(q);
  if (!(f > 0.0)) {
    report.sufficiency_holds = false;
    report.sufficiency_value = std::numeric_limits<double>::infinity();
    report.notes.emplace_back("sufficiency: density vanishes at Q(1-p)");
  } else {
    report.sufficiency_value = 2.0 * mp.p / f - q;
    report.sufficiency_holds = report.sufficiency_value > 0.0;
  }
  report.hazard = dist.hazard(mp.a);
  report.hazard_bound = 2.0 / mp.a;
  return report;
}

DiagnosticsReport uniqueness_diagnostic(const Distribution& dist, std::span<const double> grid) {
  DiagnosticsReport report;
  if (!dist.has_density()) {
    report.notes.emplace_back("uniqueness: not applicable (no density)");
    return report;
  }
  if (grid.size() < 3) throw InvalidArgument("uniqueness grid needs at least three points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !(grid[i] < dist.support_upper())) {
      throw InvalidArgument("uniqueness grid must lie inside the support");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw InvalidArgument("uniqueness grid must be strictly increasing");
    }
  }

  bool decreasing = true;
  double previous = std::numeric_limits<double>::infinity();
  for (double y : grid) {
    double h = std::max(1e-6, 1e-6 * y);
    if (h >= y) {
      h = 0.5 * y;
      report.notes.push_back("uniqueness: shortened difference step near zero at y=" +
                             std::to_string(y));
    }
    const double f = dist.density(y);
    if (!(f > 0.0)) {
      report.notes.push_back("uniqueness: density vanishes at y=" + std::to_string(y));
      decreasing = false;
      continue;
    }
    const double slope = (dist.density(y + h) - dist.density(y - h)) / (2.0 * h);
    const double zeta = 3.0 / y + slope / f;
    report.zeta_grid.push_back({y, zeta});
    if (!(zeta < previous)) decreasing = false;
    previous = zeta;
  }
  report.zeta_decreasing = decreasing;

  const double y0f0 = grid[0] * dist.density(grid[0]);
  const double y1f1 = grid[1] * dist.density(grid[1]);
  const double y2f2 = grid[2] * dist.density(grid[2]);
  report.vanishes_at_zero = y0f0 < y1f1 && y1f1 < y2f2;
  return report;
}

std::vector<double> default_diagnostic_grid(const Distribution& dist, int points) {
  if (points < 3) throw InvalidArgument("diagnostic grid needs at least three points");
  const double log_hi = std::log(0.999);
  const double log_lo = std::log(1e-6);
  const double upper = dist.support_upper();
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double u = std::exp(log_hi + (log_lo - log_hi) * i / (points - 1));
    const double y = dist.quantile_upper(u);
    const double h = std::max(1e-6, 1e-6 * y);
    if (!(y > h) || !(y + h < upper)) continue;
    if (!grid.empty() && !(y > grid.back())) continue;
    grid.push_back(y);
  }
  return grid;
}

DiagnosticsReport diagnose(const Distribution& dist, const MpPair& mp) {
  DiagnosticsReport report = sufficiency_check(dist, mp);
  if (!dist.has_density()) {
    report.notes.emplace_back("uniqueness: not applicable (no density)");
    return report;
  }
  const auto grid = default_diagnostic_grid(dist);
  if (grid.size() < 3) {
    report.notes.emplace_back("uniqueness: support too narrow for the default grid");
    return report;
  }
  DiagnosticsReport unique = uniqueness_diagnostic(dist, grid);
  report.zeta_decreasing = unique.zeta_decreasing;
  report.vanishes_at_zero = unique.vanishes_at_zero;
  report.zeta_grid = std::move(unique.zeta_grid);
  report.notes.insert(report.notes.end(), unique.notes.begin(), unique.notes.end());
  return report;
}

bool uniqueness_certified(const Distribution& dist) {
  if (!dist.has_density()) return false;
  const auto grid = default_diagnostic_grid(dist);
  if (grid.size() < 3) return false;
  const auto report = uniqueness_diagnostic(dist, grid);
  return report.zeta_decreasing.value_or(false) && report.vanishes_at_zero.value_or(false);
}

}  // namespace mprisk
