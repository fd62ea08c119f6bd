#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "mprisk/distribution.hpp"

namespace mprisk::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kSolverFailure = 2 };

/// Runs one invocation. `args` excludes the program name. Never throws;
/// failures map to exit codes with a message on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// A labelled law parsed from a risk spec string:
///   uniform:a=1   exponential:rate=2   pareto:theta=3
///   gamma:alpha=2,beta=1   weibull:alpha=0.5,beta=2
///   discrete:0@0.9,1000@0.1   (value@weight; weights sum to 1)
///   csv:path[#column]         (column name or zero-based index, default 0)
struct NamedRisk {
  std::string label;
  std::shared_ptr<const Distribution> dist;
  bool empirical = false;
};

/// Throws InvalidArgument on malformed specs. `scale` divides csv data.
NamedRisk parse_risk_spec(const std::string& spec, double scale = 1.0);

}  // namespace mprisk::cli
