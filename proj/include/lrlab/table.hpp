#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lrlab {

inline constexpr std::string_view kCsvVersionLine = "# lrlab-csv v1";

struct TableRow {
  std::string quantity;
  std::vector<double> params;  ///< NaN marks a parameter that does not apply
  double value = 0.0;
  double error = 0.0;
};

/// Experiment output: one row per grid point and quantity.
///
/// CSV layout: a version comment line, then the header
/// experiment,quantity,<param names...>,value,error
/// Numbers use 17 significant digits; inapplicable parameters are empty.
class ResultTable {
 public:
  ResultTable(std::string experiment, std::vector<std::string> param_names);

  void add(std::string quantity, std::vector<double> params, double value, double error = 0.0);

  const std::string& experiment() const { return experiment_; }
  const std::vector<std::string>& param_names() const { return param_names_; }
  const std::vector<TableRow>& rows() const { return rows_; }
  int param_index(std::string_view name) const;

  std::string to_csv() const;
  static ResultTable from_csv(std::string_view text);

 private:
  std::string experiment_;
  std::vector<std::string> param_names_;
  std::vector<TableRow> rows_;
};

/// %.17g, with "nan", "inf" and "-inf" spelled out.
std::string format_number(double x);

}  // namespace lrlab
