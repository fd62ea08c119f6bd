#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mprisk/distribution.hpp"
#include "mprisk/quantize.hpp"

namespace mprisk {

struct ZetaPoint {
  double y;
  double zeta;
};

/// Verdicts are empty when the check does not apply (no density).
struct DiagnosticsReport {
  // Second-order sufficiency at the solved pair.
  std::optional<bool> sufficiency_holds;
  double sufficiency_value = 0.0;  ///< 2p / f(Q(1-p)) - Q(1-p)
  double hazard = 0.0;             ///< h(a) = f(a) / S(a)
  double hazard_bound = 0.0;       ///< 2 / a

  // Log-concavity of x^3 f(x) through ζ(y) = 3/y + f'(y)/f(y).
  std::optional<bool> zeta_decreasing;
  std::optional<bool> vanishes_at_zero;  ///< y f(y) -> 0 along the smallest grid points
  std::vector<ZetaPoint> zeta_grid;

  std::vector<std::string> notes;
};

DiagnosticsReport sufficiency_check(const Distribution& dist, const MpPair& mp);

/// Evaluates ζ on a strictly increasing grid inside the support, with central
/// differences of step max(1e-6, 1e-6 y) for f'.
DiagnosticsReport uniqueness_diagnostic(const Distribution& dist, std::span<const double> grid);

/// Quantiles Q(1 - u) for u log-spaced from 0.999 down to 1e-6, trimmed to the
/// support interior.
std::vector<double> default_diagnostic_grid(const Distribution& dist, int points = 48);

/// Both checks; the uniqueness part uses default_diagnostic_grid.
DiagnosticsReport diagnose(const Distribution& dist, const MpPair& mp);

/// True when the default-grid diagnostic certifies a unique stationary point.
bool uniqueness_certified(const Distribution& dist);

}  // namespace mprisk
