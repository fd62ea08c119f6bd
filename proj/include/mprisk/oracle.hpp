#pragma once

#include "mprisk/distribution.hpp"

namespace mprisk {

/// Brute-force minimizer of L(m) = E[min(X^2, (X - m)^2)].
///
/// The objective is integrated in x-space against the density (or summed
/// over the atoms of an empirical law) and shares no code with the
/// quantile-based solvers, so agreement between the two is a real check.
struct OracleResult {
  double m_star = 0.0;
  double L_star = 0.0;
  double grid_lo = 0.0;
  double grid_hi = 0.0;
  int grid_n = 0;
  int refinement_rounds = 0;
  /// (grid_hi - grid_lo) / grid_n / 10^rounds
  double resolution = 0.0;
  /// The first-round minimizer sat on an end of the bracket.
  bool on_boundary = false;
};

/// Scans grid_n + 1 equispaced points on [grid_lo, grid_hi], then for each of
/// `rounds` rounds recenters on the best point and shrinks the window 10x.
/// Requires 0 <= grid_lo < grid_hi, grid_n >= 100, rounds >= 0, and either a
/// density or an EmpiricalDist.
OracleResult oracle_minimize(const Distribution& dist, double grid_lo, double grid_hi,
                             int grid_n, int rounds);

/// The oracle's own evaluation of L(m): adaptive Simpson (absolute tolerance
/// 1e-10) of min(x^2, (x - m)^2) f(x) up to Q(1 - 1e-9), plus the moment
/// remainder beyond that point.
double oracle_distortion(const Distribution& dist, double m);

}  // namespace mprisk
