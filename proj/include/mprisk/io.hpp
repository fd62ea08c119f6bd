#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mprisk/empirical.hpp"
#include "mprisk/families.hpp"
#include "mprisk/quantize.hpp"

namespace mprisk {

// ---------------------------------------------------------------------------
// Sample ingestion

/// Column selector: header name or zero-based index.
using ColumnRef = std::variant<std::string, std::size_t>;

struct CsvSample {
  EmpiricalDist sample;
  std::size_t rows = 0;  ///< data rows used
  bool had_header = false;
  std::vector<std::string> diagnostics;  ///< skipped blank lines etc.
};

/// Reads one numeric column of a comma-separated file. A first row whose
/// selected field is not numeric is taken as the header. Every value is
/// divided by `scale`. Errors name the offending line.
CsvSample read_sample_csv(const std::string& path, const ColumnRef& column, double scale = 1.0);

// ---------------------------------------------------------------------------
// Parameter sweeps

struct SweepRow {
  double param_value = 0.0;
  double m = 0.0;
  double p = 0.0;
  double mean = 0.0;
  std::optional<std::string> error;  ///< set when this row failed to solve

  bool ok() const noexcept { return !error.has_value(); }
};

struct SweepResult {
  std::string family_name;
  std::string param_name;
  std::vector<SweepRow> rows;  ///< ascending param_value
};

/// Builds a family from a name (uniform, exponential, pareto, gamma,
/// weibull) and named parameters. "lambda" is accepted for the exponential
/// rate. Throws InvalidArgument on unknown names or missing parameters.
ParametricFamily make_family(const std::string& name, const std::map<std::string, double>& params);

/// Solves the pair at `steps` equispaced values of `param_name` between
/// `from` and `to` (either order); the other parameters come from
/// `fixed_params`. Row failures are recorded in the row.
SweepResult sweep(const std::string& family_name, const std::string& param_name, double from,
                  double to, int steps, const std::map<std::string, double>& fixed_params,
                  const SolverConfig& config = {});

/// Header `param,m,p,mean`, shortest round-trip decimals, `nan` for failed rows.
std::string sweep_to_csv(const SweepResult& sweep);
void write_sweep_csv(const SweepResult& sweep, const std::string& path);
/// Inverse of write_sweep_csv (names are not stored in the file).
SweepResult read_sweep_csv(const std::string& path);

// ---------------------------------------------------------------------------
// Magnitude-propensity plots

struct PlotOptions {
  bool log_x = false;
  bool labels = false;  ///< annotate each point with the mean of its law
};

/// Standalone SVG 1.1, 800x600: magnitude on x, propensity in [0, 1] on y,
/// one polyline with markers per sweep. Failed rows are skipped. Throws
/// InvalidArgument when no sweep has a plottable row.
std::string render_mp_plot_svg(const std::vector<SweepResult>& sweeps, const PlotOptions& options);
void write_mp_plot_svg(const std::vector<SweepResult>& sweeps, const std::string& path,
                       const PlotOptions& options);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

}  // namespace mprisk
