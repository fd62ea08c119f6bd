#pragma once

#include <stdexcept>
#include <string>

namespace mprisk {

/// Invalid construction parameters or malformed input data.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation outside the domain of a function (e.g. a threshold beyond the
/// essential supremum of a law).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A solver could not reach its tolerance. Carries the best candidate found.
class SolverFailure : public std::runtime_error {
public:
  SolverFailure(const std::string& what, double best_m, double best_residual)
      : std::runtime_error(what), best_m_(best_m), best_residual_(best_residual) {}

  double best_m() const noexcept { return best_m_; }
  double best_residual() const noexcept { return best_residual_; }

private:
  double best_m_;
  double best_residual_;
};

}  // namespace mprisk
