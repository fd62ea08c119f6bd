#pragma once

namespace mprisk {

/// Regularized upper incomplete gamma function Q(s, x) = Γ(s, x) / Γ(s).
///
/// Series expansion for x < s + 1, Lentz continued fraction otherwise; each
/// is capped at 300 terms and stops once successive terms fall below 1e-15
/// relative. Throws DomainError for s <= 0 or x < 0 and std::runtime_error
/// if the expansion does not converge within the cap.
double incomplete_gamma_upper_regularized(double s, double x);

/// Regularized lower incomplete gamma function P(s, x) = 1 - Q(s, x),
/// evaluated without cancellation on either side of the split point.
double incomplete_gamma_lower_regularized(double s, double x);

/// log Q(s, x). Stays finite far into the tail where Q itself underflows.
double log_incomplete_gamma_upper_regularized(double s, double x);

}  // namespace mprisk
