#include "lrlab/table.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "lrlab/errors.hpp"

namespace lrlab {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

double parse_number(std::string_view s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw DomainError("csv: not a number: '" + std::string(s) + "'");
  return x;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

bool plain_field(std::string_view s) { return s.find_first_of(",\n\r\"") == std::string_view::npos; }

}  // namespace

ResultTable::ResultTable(std::string experiment, std::vector<std::string> param_names)
    : experiment_(std::move(experiment)), param_names_(std::move(param_names)) {
  if (!plain_field(experiment_)) throw DomainError("ResultTable: experiment name must not contain separators");
  for (const auto& p : param_names_)
    if (!plain_field(p) || p.empty()) throw DomainError("ResultTable: bad parameter name '" + p + "'");
}

void ResultTable::add(std::string quantity, std::vector<double> params, double value, double error) {
  if (params.size() != param_names_.size()) throw DomainError("ResultTable: parameter count mismatch");
  if (!plain_field(quantity) || quantity.empty()) throw DomainError("ResultTable: bad quantity '" + quantity + "'");
  rows_.push_back({std::move(quantity), std::move(params), value, error});
}

int ResultTable::param_index(std::string_view name) const {
  for (std::size_t i = 0; i < param_names_.size(); ++i)
    if (param_names_[i] == name) return static_cast<int>(i);
  return -1;
}

std::string ResultTable::to_csv() const {
  std::ostringstream out;
  out << kCsvVersionLine << '\n' << "experiment,quantity";
  for (const auto& p : param_names_) out << ',' << p;
  out << ",value,error\n";
  for (const auto& row : rows_) {
    out << experiment_ << ',' << row.quantity;
    for (double p : row.params) out << ',' << (std::isnan(p) ? std::string() : format_number(p));
    out << ',' << format_number(row.value) << ',' << format_number(row.error) << '\n';
  }
  return out.str();
}

ResultTable ResultTable::from_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  if (lines.size() < 2 || lines[0] != kCsvVersionLine) throw DomainError("csv: missing version line");
  const auto header = split(lines[1]);
  if (header.size() < 4 || header[0] != "experiment" || header[1] != "quantity" ||
      header[header.size() - 2] != "value" || header.back() != "error")
    throw DomainError("csv: unexpected header");
  std::vector<std::string> params;
  for (std::size_t i = 2; i + 2 < header.size(); ++i) params.emplace_back(header[i]);
  std::string experiment;
  std::vector<TableRow> rows;
  for (std::size_t li = 2; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    const auto f = split(lines[li]);
    if (f.size() != header.size()) throw DomainError("csv: wrong field count on line " + std::to_string(li + 1));
    if (experiment.empty()) experiment = std::string(f[0]);
    TableRow row;
    row.quantity = std::string(f[1]);
    for (std::size_t i = 0; i < params.size(); ++i) row.params.push_back(parse_number(f[2 + i]));
    row.value = parse_number(f[f.size() - 2]);
    row.error = parse_number(f.back());
    rows.push_back(std::move(row));
  }
  ResultTable table(experiment.empty() ? "unknown" : experiment, params);
  for (auto& r : rows) table.add(std::move(r.quantity), std::move(r.params), r.value, r.error);
  return table;
}

}  // namespace lrlab
