#include <algorithm>
#include <cmath>

#include "mprisk/errors.hpp"
#include "mprisk/io.hpp"

namespace mprisk {
namespace {

double require_param(const std::map<std::string, double>& params, const std::string& key) {
  const auto it = params.find(key);
  if (it == params.end()) throw InvalidArgument("missing parameter '" + key + "'");
  return it->second;
}

void reject_unknown(const std::map<std::string, double>& params,
                    std::initializer_list<const char*> known) {
  for (const auto& [key, value] : params) {
    const bool found = std::any_of(known.begin(), known.end(), [&](const char* k) { return key == k; });
    if (!found) throw InvalidArgument("unknown parameter '" + key + "'");
  }
}

}  // namespace

ParametricFamily make_family(const std::string& name, const std::map<std::string, double>& params) {
  ParametricFamily family;
  if (name == "uniform") {
    reject_unknown(params, {"a"});
    family = UniformParams{require_param(params, "a")};
  } else if (name == "exponential") {
    reject_unknown(params, {"rate", "lambda"});
    const bool has_rate = params.count("rate") > 0;
    family = ExponentialParams{require_param(params, has_rate ? "rate" : "lambda")};
  } else if (name == "pareto") {
    reject_unknown(params, {"theta"});
    family = ParetoParams{require_param(params, "theta")};
  } else if (name == "gamma") {
    reject_unknown(params, {"alpha", "beta"});
    family = GammaParams{require_param(params, "alpha"), require_param(params, "beta")};
  } else if (name == "weibull") {
    reject_unknown(params, {"alpha", "beta"});
    family = WeibullParams{require_param(params, "alpha"), require_param(params, "beta")};
  } else {
    throw InvalidArgument("unknown distribution family '" + name + "'");
  }
  validate(family);
  return family;
}

SweepResult sweep(const std::string& family_name, const std::string& param_name, double from,
                  double to, int steps, const std::map<std::string, double>& fixed_params,
                  const SolverConfig& config) {
  if (steps < 2) throw InvalidArgument("sweep needs at least two steps");
  if (!std::isfinite(from) || !std::isfinite(to) || from == to) {
    throw InvalidArgument("sweep range must be finite and nonempty");
  }
  config.validate();

  std::vector<double> grid(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    grid[static_cast<std::size_t>(i)] = i == steps - 1 ? to : from + (to - from) * i / (steps - 1);
  }
  std::sort(grid.begin(), grid.end());

  SweepResult result{family_name, param_name, {}};
  result.rows.reserve(grid.size());
  for (double value : grid) {
    SweepRow row;
    row.param_value = value;
    row.mean = std::nan("");
    auto params = fixed_params;
    params[param_name] = value;
    try {
      const auto dist = make_distribution(make_family(family_name, params));
      row.mean = dist->mean();
      const MpPair mp = solve_fixed_point(*dist, config);
      row.m = mp.m;
      row.p = mp.p;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace mprisk
