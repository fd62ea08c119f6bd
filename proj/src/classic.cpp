#include "mprisk/classic.hpp"

#include <algorithm>
#include <cmath>

#include "mprisk/errors.hpp"

namespace mprisk {

RiskLevel::RiskLevel(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("risk level must lie in (0, 1)");
}

double var(const Distribution& dist, RiskLevel level) { return dist.quantile(level.alpha()); }

double es_at_threshold(const Distribution& dist, double v) {
  const double above = dist.survival(v);
  const double atom = dist.point_mass(v);
  const double mass = above + atom;
  if (!(mass > 0.0)) throw DomainError("expected shortfall: degenerate tail");
  const double tail_sum = above > 0.0 ? above * dist.tail_expectation(v) : 0.0;
  return (tail_sum + atom * v) / mass;
}

double es(const Distribution& dist, RiskLevel level) {
  return es_at_threshold(dist, var(dist, level));
}

CrossIdentityReport mp_cross_identities(const Distribution& dist, const MpPair& mp) {
  CrossIdentityReport report;
  const double level = 1.0 - mp.p;
  if (level > 0.0 && level < 1.0) {
    report.lhs_var = 2.0 * var(dist, RiskLevel(level));
  } else {
    // p = 1: every loss sits in the upper cell, VaR_0 is the lower support end.
    report.lhs_var = 2.0 * dist.quantile(0.0);
  }
  // ES taken at the threshold a itself. On continuous laws this is ES at
  // level 1 - p; on samples it stays meaningful when 1 - p hits an atom.
  report.lhs_es = es_at_threshold(dist, mp.a);
  report.var_gap = std::abs(mp.m - report.lhs_var);
  report.es_gap = std::abs(mp.m - report.lhs_es);
  report.max_abs_gap = std::max(report.var_gap, report.es_gap);
  return report;
}

}  // namespace mprisk
