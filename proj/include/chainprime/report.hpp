#pragma once

// Output formats shared by the command-line tool and the acceptance run.
// CSV: '#'-prefixed header lines, then a column row and data rows; numbers
// with 12 significant digits. JSON: one object with a "meta" member first.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace chainprime {

struct OutputHeader {
  std::string command;
  /// Result-affecting settings, in the order given.
  std::vector<std::pair<std::string, std::string>> config;
  std::uint64_t seed = 0;
};

/// "%.12g".
std::string format_number(double v);

using Cell = std::variant<std::string, std::uint64_t, std::int64_t, double>;

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  void add_row(std::vector<Cell> row);
  std::size_t rows() const noexcept { return rows_.size(); }
  const std::vector<std::string>& columns() const noexcept { return columns_; }

  void write(std::ostream& out, const OutputHeader& header) const;
  std::string str(const OutputHeader& header) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

void write_header(std::ostream& out, const OutputHeader& header);

/// Doubles rounded to 12 significant digits so JSON and CSV agree.
double round12(double v);

nlohmann::ordered_json json_meta(const OutputHeader& header);

}  // namespace chainprime
