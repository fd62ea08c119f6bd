#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include "mprisk/errors.hpp"
#include "mprisk/io.hpp"

namespace mprisk {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '"' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::optional<double> parse_number(std::string_view s) {
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::string line_error(const std::string& path, std::size_t line, const std::string& what) {
  return path + ":" + std::to_string(line) + ": " + what;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

CsvSample read_sample_csv(const std::string& path, const ColumnRef& column, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidArgument("scale must be positive");
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);

  std::vector<double> values;
  std::vector<std::string> diagnostics;
  std::optional<std::size_t> index;
  if (const auto* i = std::get_if<std::size_t>(&column)) index = *i;
  bool first_row = true;
  bool had_header = false;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    if (trim(line).empty()) {
      diagnostics.push_back(line_error(path, line_no, "blank line skipped"));
      continue;
    }
    const auto fields = split_fields(line);
    if (first_row) {
      first_row = false;
      if (const auto* name = std::get_if<std::string>(&column)) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
          if (fields[i] == *name) index = i;
        }
        if (!index) throw InvalidArgument(line_error(path, line_no, "no column named '" + *name + "'"));
        had_header = true;
        continue;
      }
      if (*index < fields.size() && !parse_number(fields[*index])) {
        had_header = true;
        continue;
      }
    }
    if (*index >= fields.size()) {
      throw InvalidArgument(line_error(path, line_no, "missing column " + std::to_string(*index)));
    }
    const auto value = parse_number(fields[*index]);
    if (!value || !std::isfinite(*value)) {
      throw InvalidArgument(
          line_error(path, line_no, "cannot parse '" + std::string(fields[*index]) + "'"));
    }
    if (*value < 0.0) {
      throw InvalidArgument(line_error(path, line_no, "negative loss value " + format_double(*value)));
    }
    values.push_back(*value / scale);
  }
  if (values.empty()) throw InvalidArgument(path + ": selected column is empty");
  const std::size_t rows = values.size();
  return CsvSample{make_empirical(std::move(values)), rows, had_header, std::move(diagnostics)};
}

std::string sweep_to_csv(const SweepResult& sweep) {
  std::string out = "param,m,p,mean\n";
  for (const auto& row : sweep.rows) {
    const double nan = std::nan("");
    out += format_double(row.param_value) + ',' + format_double(row.ok() ? row.m : nan) + ',' +
           format_double(row.ok() ? row.p : nan) + ',' + format_double(row.mean) + '\n';
  }
  return out;
}

void write_sweep_csv(const SweepResult& sweep, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << sweep_to_csv(sweep);
  if (!out) throw std::runtime_error("write failed: " + path);
}

SweepResult read_sweep_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  SweepResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (trim(line) != "param,m,p,mean") {
        throw InvalidArgument(line_error(path, line_no, "expected header param,m,p,mean"));
      }
      continue;
    }
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 4) throw InvalidArgument(line_error(path, line_no, "expected 4 fields"));
    double parsed[4];
    for (std::size_t i = 0; i < 4; ++i) {
      const auto v = fields[i] == "nan" ? std::optional<double>(std::nan("")) : parse_number(fields[i]);
      if (!v) throw InvalidArgument(line_error(path, line_no, "cannot parse field"));
      parsed[i] = *v;
    }
    SweepRow row{parsed[0], parsed[1], parsed[2], parsed[3], std::nullopt};
    if (std::isnan(row.m)) row.error = "failed";
    result.rows.push_back(row);
  }
  return result;
}

}  // namespace mprisk
