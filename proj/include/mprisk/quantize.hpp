#pragma once

#include <optional>
#include <string_view>

#include "mprisk/distribution.hpp"
#include "mprisk/empirical.hpp"
#include "mprisk/families.hpp"

namespace mprisk {

enum class Method { fixed_point, minimize, lloyd, closed_form };

std::string_view to_string(Method method);

/// Optimal constrained two-point quantizer {0, m} of a loss law: the
/// magnitude m, the propensity p = P(X > m/2) and the threshold a = m/2.
struct MpPair {
  double m = 0.0;
  double p = 0.0;
  double a = 0.0;
  double distortion = 0.0;  ///< L(m) = E[min(X^2, (X - m)^2)]
  double w2 = 0.0;          ///< sqrt(distortion)
  double residual = 0.0;    ///< |2a - τ(a)|
  Method method = Method::fixed_point;
  /// Positive mass sits exactly on the threshold; the strict X > a
  /// convention decided which cell it belongs to.
  bool atom_at_threshold = false;
  int iterations = 0;
};

struct SolverConfig {
  /// Absolute tolerance on |2a - τ(a)|. Widened to ~64 ulp of a only when a
  /// is so large that fp_tol falls below double resolution.
  double fp_tol = 1e-10;
  int max_iter = 500;
  /// Starting threshold; the mean when empty.
  std::optional<double> init;
  int grid_points = 4096;
  /// Minimization bracket is [E[X], 2 Q(bracket_quantile)].
  double bracket_quantile = 0.9999;

  /// Throws InvalidArgument on nonpositive values or bracket_quantile >= 1.
  void validate() const;
};

/// Iterates a <- τ(a)/2 from the mean (damped with weight 1/2 after ten
/// non-improving steps), falling back to solve_minimize on stalls or at the
/// iteration cap. When the log-concavity diagnostic cannot certify a unique
/// stationary point the result is cross-checked against the global scan and
/// the lower-distortion pair is returned. Empirical laws are cross-checked
/// against exact_scan_empirical.
MpPair solve_fixed_point(const Distribution& dist, const SolverConfig& config = {});

/// Uniform, exponential and Pareto closed forms; nullopt for Gamma/Weibull.
std::optional<MpPair> closed_form_mp(const ParametricFamily& family);

/// L(m) = E[min(X^2, (X - m)^2)] for m >= 0. Uses the tail form
/// E[X^2] - p m (2τ(m/2) - m) with p = S(m/2), and exact sums for samples.
double distortion(const Distribution& dist, double m);

struct Slope {
  double value = 0.0;
  bool atom_at_threshold = false;
};

/// Classical derivative L'(m) = 2 S(m/2) (m - τ(m/2)) for m > 0.
Slope distortion_derivative(const Distribution& dist, double m);

/// Squared W2 distance between the law and (1 - p) δ_0 + p δ_m, with p free:
/// E[X^2] + m^2 p - 2m ∫_{1-p}^{1} Q(t) dt. Requires m > 0 and 0 < p < 1.
double psi(const Distribution& dist, double m, double p);

/// Grid scan of L over [E[X](1 - 1e-6), 2 Q(bracket_quantile)], golden-section
/// refinement of the best cell, then bisection on the sign of L' to width
/// fp_tol.
MpPair solve_minimize(const Distribution& dist, const SolverConfig& config = {});

/// Sample fixed point a <- Σ x_i 1{x_i > a} / (2 Σ 1{x_i > a}). Stops when the
/// active set repeats; cycles or the iteration cap hand over to
/// exact_scan_empirical.
MpPair lloyd_empirical(const EmpiricalDist& sample, const SolverConfig& config = {});

/// Global minimizer of the empirical distortion. L is piecewise quadratic in
/// m, so each candidate active set {x_i > a} contributes one stationary point
/// m = tail mean; the feasible one with the largest p τ^2 wins.
MpPair exact_scan_empirical(const EmpiricalDist& sample);

}  // namespace mprisk
