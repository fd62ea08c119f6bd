#pragma once

#include "mprisk/distribution.hpp"
#include "mprisk/quantize.hpp"

namespace mprisk {

/// Confidence level strictly inside (0, 1).
class RiskLevel {
public:
  explicit RiskLevel(double alpha);
  double alpha() const noexcept { return alpha_; }

private:
  double alpha_;
};

/// Value-at-Risk: the left alpha-quantile.
double var(const Distribution& dist, RiskLevel level);

/// Expected Shortfall E[X | X >= VaR_alpha], atoms at the quantile included.
double es(const Distribution& dist, RiskLevel level);

/// E[X | X >= v]. Throws DomainError when P(X >= v) = 0.
double es_at_threshold(const Distribution& dist, double v);

struct CrossIdentityReport {
  double lhs_var = 0.0;  ///< 2 VaR_{1-p}
  double lhs_es = 0.0;   ///< ES at the level whose VaR is m/2
  double var_gap = 0.0;  ///< |m - 2 VaR_{1-p}|
  double es_gap = 0.0;   ///< |m - ES|
  double max_abs_gap = 0.0;
};

/// Compares the magnitude with twice a VaR and with an ES. Exact on
/// continuous laws; on atomic laws the gaps are reported, not asserted.
CrossIdentityReport mp_cross_identities(const Distribution& dist, const MpPair& mp);

}  // namespace mprisk
