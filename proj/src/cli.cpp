#include "mprisk/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "mprisk/classic.hpp"
#include "mprisk/diagnostics.hpp"
#include "mprisk/errors.hpp"
#include "mprisk/io.hpp"
#include "mprisk/quantize.hpp"

namespace mprisk::cli {
namespace {

using Json = nlohmann::ordered_json;

struct DistOptions {
  std::string dist;
  std::map<std::string, std::optional<double>> params{
      {"a", std::nullopt},     {"rate", std::nullopt},  {"lambda", std::nullopt},
      {"theta", std::nullopt}, {"alpha", std::nullopt}, {"beta", std::nullopt}};
  std::string data;
  std::string column = "0";
  double scale = 1.0;
};

struct SolverFlags {
  std::optional<double> tol;
  int max_iter = SolverConfig{}.max_iter;
  std::optional<double> init;
  int grid_points = SolverConfig{}.grid_points;
  double bracket_quantile = SolverConfig{}.bracket_quantile;
};

struct OutputOptions {
  std::string format = "text";
  std::string output;
};

void add_dist_options(CLI::App* cmd, DistOptions& opts) {
  cmd->add_option("--dist", opts.dist, "Parametric family: uniform, exponential, pareto, gamma, weibull");
  cmd->add_option("--a", opts.params["a"], "Uniform upper bound");
  cmd->add_option("--rate", opts.params["rate"], "Exponential rate");
  cmd->add_option("--lambda", opts.params["lambda"], "Exponential rate (alias)");
  cmd->add_option("--theta", opts.params["theta"], "Pareto tail index (> 2)");
  cmd->add_option("--alpha", opts.params["alpha"], "Gamma/Weibull shape");
  cmd->add_option("--beta", opts.params["beta"], "Gamma/Weibull scale");
  cmd->add_option("--data", opts.data, "CSV file of observed losses");
  cmd->add_option("--column", opts.column, "CSV column name or zero-based index");
  cmd->add_option("--scale", opts.scale, "Divide every data value by this");
}

void add_solver_options(CLI::App* cmd, SolverFlags& flags) {
  cmd->add_option("--tol", flags.tol, "Fixed-point tolerance (overrides MP_SOLVER_TOL)");
  cmd->add_option("--max-iter", flags.max_iter, "Iteration cap");
  cmd->add_option("--init", flags.init, "Initial threshold (default: mean)");
  cmd->add_option("--grid-points", flags.grid_points, "Grid size for minimization");
  cmd->add_option("--bracket-quantile", flags.bracket_quantile, "Upper bracket quantile level");
}

void add_output_options(CLI::App* cmd, OutputOptions& opts) {
  cmd->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  cmd->add_option("--output,-o", opts.output, "Write the report to this file");
}

SolverConfig make_config(const SolverFlags& flags) {
  SolverConfig config;
  if (const char* env = std::getenv("MP_SOLVER_TOL"); env && *env) {
    char* end = nullptr;
    const double tol = std::strtod(env, &end);
    if (end == env || *end != '\0') throw InvalidArgument("MP_SOLVER_TOL is not a number");
    config.fp_tol = tol;
  }
  if (flags.tol) config.fp_tol = *flags.tol;
  config.max_iter = flags.max_iter;
  config.init = flags.init;
  config.grid_points = flags.grid_points;
  config.bracket_quantile = flags.bracket_quantile;
  config.validate();
  return config;
}

ColumnRef parse_column(const std::string& column) {
  if (!column.empty() && std::all_of(column.begin(), column.end(),
                                     [](unsigned char c) { return std::isdigit(c) != 0; })) {
    return static_cast<std::size_t>(std::stoul(column));
  }
  return column;
}

std::map<std::string, double> given_params(const DistOptions& opts) {
  std::map<std::string, double> params;
  for (const auto& [key, value] : opts.params) {
    if (value) params[key] = *value;
  }
  return params;
}

NamedRisk resolve_risk(const DistOptions& opts, std::vector<std::string>* notes) {
  const bool has_family = !opts.dist.empty();
  const bool has_data = !opts.data.empty();
  if (has_family == has_data) {
    throw InvalidArgument("give exactly one of --dist or --data");
  }
  if (has_data) {
    auto loaded = read_sample_csv(opts.data, parse_column(opts.column), opts.scale);
    if (notes) *notes = loaded.diagnostics;
    NamedRisk risk;
    risk.label = opts.data;
    risk.dist = std::make_shared<EmpiricalDist>(std::move(loaded.sample));
    risk.empirical = true;
    return risk;
  }
  NamedRisk risk;
  risk.dist = make_distribution(make_family(opts.dist, given_params(opts)));
  risk.label = risk.dist->name();
  return risk;
}

MpPair solve_risk(const NamedRisk& risk, const SolverConfig& config) {
  if (risk.empirical) {
    return lloyd_empirical(static_cast<const EmpiricalDist&>(*risk.dist), config);
  }
  return solve_fixed_point(*risk.dist, config);
}

Json mp_json(const MpPair& mp) {
  Json j;
  j["m"] = mp.m;
  j["p"] = mp.p;
  j["a"] = mp.a;
  j["distortion"] = mp.distortion;
  j["w2"] = mp.w2;
  j["residual"] = mp.residual;
  j["method"] = std::string(to_string(mp.method));
  return j;
}

const char* kMpFields[] = {"m", "p", "a", "distortion", "w2", "residual", "method"};

std::vector<std::string> mp_values(const MpPair& mp) {
  return {format_double(mp.m),        format_double(mp.p),  format_double(mp.a),
          format_double(mp.distortion), format_double(mp.w2), format_double(mp.residual),
          std::string(to_string(mp.method))};
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::string text_mp(const std::string& label, const MpPair& mp) {
  std::ostringstream os;
  os << "distribution: " << label << '\n';
  const auto values = mp_values(mp);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::string key = kMpFields[i];
    key.resize(12, ' ');
    os << key << values[i] << '\n';
  }
  if (mp.atom_at_threshold) os << "warning: probability mass sits exactly at the threshold\n";
  return os.str();
}

void emit(const OutputOptions& opts, const std::string& text, std::ostream& out) {
  if (opts.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(opts.output, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + opts.output + " for writing");
  file << text;
}

std::string optional_bool(const std::optional<bool>& v) {
  if (!v) return "not applicable";
  return *v ? "yes" : "no";
}

Json optional_bool_json(const std::optional<bool>& v) {
  if (!v) return "not applicable";
  return *v;
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_solve(const DistOptions& dist_opts, const SolverFlags& flags, const OutputOptions& out_opts,
              std::ostream& out, std::ostream& err) {
  const SolverConfig config = make_config(flags);
  std::vector<std::string> notes;
  const NamedRisk risk = resolve_risk(dist_opts, &notes);
  for (const auto& n : notes) err << n << '\n';
  const MpPair mp = solve_risk(risk, config);
  std::string text;
  if (out_opts.format == "json") {
    text = mp_json(mp).dump(2) + '\n';
  } else if (out_opts.format == "csv") {
    text = join({std::begin(kMpFields), std::end(kMpFields)}, ",") + '\n' + join(mp_values(mp), ",") + '\n';
  } else {
    text = text_mp(risk.label, mp);
  }
  emit(out_opts, text, out);
  return kOk;
}

struct SweepOptions {
  std::string param;
  double from = 0.0;
  double to = 0.0;
  int steps = 0;
  std::string csv;
  std::string svg;
  bool log_x = false;
  bool labels = false;
};

int cmd_sweep(const DistOptions& dist_opts, const SolverFlags& flags, const SweepOptions& sweep_opts,
              const OutputOptions& out_opts, std::ostream& out, std::ostream& err) {
  if (dist_opts.dist.empty()) throw InvalidArgument("sweep needs --dist");
  if (sweep_opts.param.empty()) throw InvalidArgument("sweep needs --param");
  if (sweep_opts.steps < 2) throw InvalidArgument("sweep needs --steps of at least 2");
  const SolverConfig config = make_config(flags);
  auto fixed = given_params(dist_opts);
  fixed.erase(sweep_opts.param);
  const SweepResult result = sweep(dist_opts.dist, sweep_opts.param, sweep_opts.from, sweep_opts.to,
                                   sweep_opts.steps, fixed, config);

  std::size_t failures = 0;
  for (const auto& row : result.rows) {
    if (!row.ok()) {
      ++failures;
      err << "row " << sweep_opts.param << '=' << format_double(row.param_value)
          << " failed: " << *row.error << '\n';
    }
  }
  if (!sweep_opts.csv.empty()) write_sweep_csv(result, sweep_opts.csv);
  if (!sweep_opts.svg.empty() && failures < result.rows.size()) {
    write_mp_plot_svg({result}, sweep_opts.svg, PlotOptions{sweep_opts.log_x, sweep_opts.labels});
  }

  std::string text;
  if (out_opts.format == "json") {
    Json j;
    j["family"] = result.family_name;
    j["param"] = result.param_name;
    j["rows"] = Json::array();
    for (const auto& row : result.rows) {
      Json r;
      r["param"] = row.param_value;
      r["m"] = row.ok() ? Json(row.m) : Json(nullptr);
      r["p"] = row.ok() ? Json(row.p) : Json(nullptr);
      r["mean"] = row.mean;
      if (!row.ok()) r["error"] = *row.error;
      j["rows"].push_back(r);
    }
    text = j.dump(2) + '\n';
  } else if (out_opts.format == "csv") {
    text = sweep_to_csv(result);
  } else {
    std::ostringstream os;
    os << "sweep " << result.family_name << " over " << result.param_name << '\n';
    for (const auto& row : result.rows) {
      os << result.param_name << '=' << format_double(row.param_value) << "  ";
      if (row.ok()) {
        os << "m=" << format_double(row.m) << "  p=" << format_double(row.p)
           << "  mean=" << format_double(row.mean) << '\n';
      } else {
        os << "failed: " << *row.error << '\n';
      }
    }
    text = os.str();
  }
  emit(out_opts, text, out);
  return failures == result.rows.size() ? kSolverFailure : kOk;
}

int cmd_diagnose(const DistOptions& dist_opts, const SolverFlags& flags, const OutputOptions& out_opts,
                 std::ostream& out, std::ostream& err) {
  const SolverConfig config = make_config(flags);
  std::vector<std::string> notes;
  const NamedRisk risk = resolve_risk(dist_opts, &notes);
  for (const auto& n : notes) err << n << '\n';
  const MpPair mp = solve_risk(risk, config);
  const DiagnosticsReport report = diagnose(*risk.dist, mp);

  std::string text;
  if (out_opts.format == "json") {
    Json j;
    j["solve"] = mp_json(mp);
    Json suff;
    suff["holds"] = optional_bool_json(report.sufficiency_holds);
    if (report.sufficiency_holds) {
      suff["value"] = report.sufficiency_value;
      suff["hazard"] = report.hazard;
      suff["hazard_bound"] = report.hazard_bound;
    }
    j["sufficiency"] = suff;
    Json uniq;
    uniq["zeta_decreasing"] = optional_bool_json(report.zeta_decreasing);
    uniq["vanishes_at_zero"] = optional_bool_json(report.vanishes_at_zero);
    uniq["zeta_grid"] = Json::array();
    for (const auto& pt : report.zeta_grid) uniq["zeta_grid"].push_back({pt.y, pt.zeta});
    j["uniqueness"] = uniq;
    j["notes"] = report.notes;
    text = j.dump(2) + '\n';
  } else if (out_opts.format == "csv") {
    std::ostringstream os;
    os << "y,zeta\n";
    for (const auto& pt : report.zeta_grid) {
      os << format_double(pt.y) << ',' << format_double(pt.zeta) << '\n';
    }
    text = os.str();
  } else {
    std::ostringstream os;
    os << text_mp(risk.label, mp);
    os << "sufficiency holds: " << optional_bool(report.sufficiency_holds) << '\n';
    if (report.sufficiency_holds) {
      os << "  2p/f(Q(1-p)) - Q(1-p) = " << format_double(report.sufficiency_value) << '\n';
      os << "  hazard h(a) = " << format_double(report.hazard)
         << "  vs 2/a = " << format_double(report.hazard_bound) << '\n';
    }
    os << "zeta decreasing: " << optional_bool(report.zeta_decreasing) << '\n';
    os << "y f(y) -> 0 near zero: " << optional_bool(report.vanishes_at_zero) << '\n';
    for (const auto& pt : report.zeta_grid) {
      os << "  y=" << format_double(pt.y) << "  zeta=" << format_double(pt.zeta) << '\n';
    }
    for (const auto& n : report.notes) os << "note: " << n << '\n';
    text = os.str();
  }
  emit(out_opts, text, out);
  return kOk;
}

struct CompareOptions {
  std::vector<std::string> risks;
  std::vector<double> levels{0.9, 0.95, 0.99};
  std::string svg;
  bool log_x = false;
};

struct CompareRow {
  std::string label;
  double mean = std::nan("");
  std::optional<MpPair> mp;
  std::vector<double> vars;
  std::vector<double> ess;
  CrossIdentityReport gaps;
  std::optional<std::string> error;
};

int cmd_compare(const DistOptions& dist_opts, const SolverFlags& flags, const CompareOptions& cmp,
                const OutputOptions& out_opts, std::ostream& out, std::ostream& err) {
  if (cmp.risks.size() < 2) throw InvalidArgument("compare needs at least two --risk specs");
  const SolverConfig config = make_config(flags);
  std::vector<RiskLevel> levels;
  for (double l : cmp.levels) levels.emplace_back(l);

  std::vector<NamedRisk> risks;
  for (const auto& spec : cmp.risks) risks.push_back(parse_risk_spec(spec, dist_opts.scale));

  std::vector<CompareRow> rows;
  for (const auto& risk : risks) {
    CompareRow row;
    row.label = risk.label;
    row.mean = risk.dist->mean();
    try {
      const MpPair mp = solve_risk(risk, config);
      row.mp = mp;
      for (const auto& level : levels) {
        row.vars.push_back(var(*risk.dist, level));
        row.ess.push_back(es(*risk.dist, level));
      }
      row.gaps = mp_cross_identities(*risk.dist, mp);
    } catch (const std::exception& e) {
      row.error = e.what();
      err << risk.label << ": " << e.what() << '\n';
    }
    rows.push_back(std::move(row));
  }

  if (!cmp.svg.empty()) {
    std::vector<SweepResult> points;
    for (const auto& row : rows) {
      if (!row.mp) continue;
      points.push_back(SweepResult{row.label, "", {SweepRow{0.0, row.mp->m, row.mp->p, row.mean, std::nullopt}}});
    }
    if (!points.empty()) write_mp_plot_svg(points, cmp.svg, PlotOptions{cmp.log_x, true});
  }

  std::vector<std::string> header{"risk", "mean", "m", "p"};
  for (double l : cmp.levels) header.push_back("var_" + format_double(l));
  for (double l : cmp.levels) header.push_back("es_" + format_double(l));
  header.push_back("var_gap");
  header.push_back("es_gap");

  auto row_values = [&](const CompareRow& row) {
    std::vector<std::string> v{row.label, format_double(row.mean)};
    if (!row.mp) {
      v.resize(header.size(), "nan");
      return v;
    }
    v.push_back(format_double(row.mp->m));
    v.push_back(format_double(row.mp->p));
    for (double x : row.vars) v.push_back(format_double(x));
    for (double x : row.ess) v.push_back(format_double(x));
    v.push_back(format_double(row.gaps.var_gap));
    v.push_back(format_double(row.gaps.es_gap));
    return v;
  };

  std::string text;
  if (out_opts.format == "json") {
    Json j = Json::array();
    for (const auto& row : rows) {
      Json r;
      const auto values = row_values(row);
      r["risk"] = row.label;
      r["mean"] = row.mean;
      if (row.mp) {
        r["m"] = row.mp->m;
        r["p"] = row.mp->p;
        for (std::size_t i = 0; i < levels.size(); ++i) {
          r[header[4 + i]] = row.vars[i];
          r[header[4 + levels.size() + i]] = row.ess[i];
        }
        r["var_gap"] = row.gaps.var_gap;
        r["es_gap"] = row.gaps.es_gap;
      } else {
        r["error"] = *row.error;
      }
      j.push_back(r);
    }
    text = j.dump(2) + '\n';
  } else if (out_opts.format == "csv") {
    text = join(header, ",") + '\n';
    for (const auto& row : rows) text += join(row_values(row), ",") + '\n';
  } else {
    std::vector<std::vector<std::string>> table{header};
    for (const auto& row : rows) table.push_back(row_values(row));
    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& r : table) {
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    std::ostringstream os;
    for (const auto& r : table) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        std::string cell = r[i];
        cell.resize(width[i], ' ');
        os << cell << (i + 1 < r.size() ? "  " : "\n");
      }
    }
    for (const auto& row : rows) {
      if (row.error) os << "failed: " << row.label << ": " << *row.error << '\n';
    }
    text = os.str();
  }
  emit(out_opts, text, out);
  const bool all_failed = std::none_of(rows.begin(), rows.end(), [](const CompareRow& r) { return r.mp.has_value(); });
  return all_failed ? kSolverFailure : kOk;
}

}  // namespace

// ---------------------------------------------------------------------------

NamedRisk parse_risk_spec(const std::string& spec, double scale) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw InvalidArgument("risk spec '" + spec + "' lacks a ':'");
  const std::string kind = spec.substr(0, colon);
  const std::string body = spec.substr(colon + 1);

  auto to_number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) {
      throw InvalidArgument("risk spec '" + spec + "': cannot parse '" + s + "'");
    }
    return v;
  };
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string part; std::getline(ss, part, sep);) parts.push_back(part);
    return parts;
  };

  NamedRisk risk;
  if (kind == "csv") {
    const auto hash = body.rfind('#');
    const std::string path = body.substr(0, hash);
    const std::string column = hash == std::string::npos ? "0" : body.substr(hash + 1);
    auto loaded = read_sample_csv(path, parse_column(column), scale);
    risk.dist = std::make_shared<EmpiricalDist>(std::move(loaded.sample));
    risk.empirical = true;
    risk.label = spec;
    return risk;
  }
  if (kind == "discrete") {
    std::vector<double> values;
    std::vector<double> weights;
    for (const auto& item : split(body, ',')) {
      const auto at = item.find('@');
      if (at == std::string::npos) throw InvalidArgument("discrete atom '" + item + "' needs value@weight");
      values.push_back(to_number(item.substr(0, at)));
      weights.push_back(to_number(item.substr(at + 1)));
    }
    risk.dist = std::make_shared<EmpiricalDist>(make_empirical(std::move(values), std::move(weights)));
    risk.empirical = true;
    risk.label = spec;
    return risk;
  }
  std::map<std::string, double> params;
  for (const auto& item : split(body, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InvalidArgument("parameter '" + item + "' needs key=value");
    params[item.substr(0, eq)] = to_number(item.substr(eq + 1));
  }
  risk.dist = make_distribution(make_family(kind, params));
  risk.label = risk.dist->name();
  return risk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Magnitude-propensity risk measures by constrained two-point quantization"};
  app.require_subcommand(1);

  DistOptions dist_opts;
  SolverFlags flags;
  OutputOptions out_opts;
  SweepOptions sweep_opts;
  CompareOptions cmp;

  auto* solve = app.add_subcommand("solve", "Solve the (m, p) pair of one risk");
  add_dist_options(solve, dist_opts);
  add_solver_options(solve, flags);
  add_output_options(solve, out_opts);

  auto* sweep_cmd = app.add_subcommand("sweep", "Solve along a parameter range");
  add_dist_options(sweep_cmd, dist_opts);
  add_solver_options(sweep_cmd, flags);
  add_output_options(sweep_cmd, out_opts);
  sweep_cmd->add_option("--param", sweep_opts.param, "Parameter to vary")->required();
  sweep_cmd->add_option("--from", sweep_opts.from, "First parameter value")->required();
  sweep_cmd->add_option("--to", sweep_opts.to, "Last parameter value")->required();
  sweep_cmd->add_option("--steps", sweep_opts.steps, "Number of values (>= 2)")->required();
  sweep_cmd->add_option("--csv", sweep_opts.csv, "Write param,m,p,mean rows here");
  sweep_cmd->add_option("--svg", sweep_opts.svg, "Write a magnitude-propensity plot here");
  sweep_cmd->add_flag("--log-x", sweep_opts.log_x, "Logarithmic magnitude axis");
  sweep_cmd->add_flag("--labels", sweep_opts.labels, "Label points with the mean");

  auto* diag = app.add_subcommand("diagnose", "Solve, then check sufficiency and uniqueness conditions");
  add_dist_options(diag, dist_opts);
  add_solver_options(diag, flags);
  add_output_options(diag, out_opts);

  auto* compare = app.add_subcommand("compare", "Tabulate (m, p), VaR and ES for several risks");
  compare->add_option("--risk", cmp.risks, "Risk spec, e.g. uniform:a=1 or discrete:0@0.9,1000@0.1")
      ->required();
  compare->add_option("--levels", cmp.levels, "VaR/ES levels")->delimiter(',');
  compare->add_option("--svg", cmp.svg, "Write a combined plot here");
  compare->add_flag("--log-x", cmp.log_x, "Logarithmic magnitude axis");
  compare->add_option("--scale", dist_opts.scale, "Divide csv risk data by this");
  add_solver_options(compare, flags);
  add_output_options(compare, out_opts);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (*solve) return cmd_solve(dist_opts, flags, out_opts, out, err);
    if (*sweep_cmd) return cmd_sweep(dist_opts, flags, sweep_opts, out_opts, out, err);
    if (*diag) return cmd_diagnose(dist_opts, flags, out_opts, out, err);
    if (*compare) return cmd_compare(dist_opts, flags, cmp, out_opts, out, err);
  } catch (const SolverFailure& e) {
    err << "solver failure: " << e.what() << " (best m=" << format_double(e.best_m())
        << ", residual=" << format_double(e.best_residual()) << ")\n";
    return kSolverFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace mprisk::cli
