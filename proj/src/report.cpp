#include "chainprime/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include "chainprime/errors.hpp"

namespace chainprime {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double round12(double v) { return std::strtod(format_number(v).c_str(), nullptr); }

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) throw InvariantError("CSV row width differs from the header");
  std::vector<std::string> cells;
  cells.reserve(row.size());
  for (const auto& cell : row) {
    cells.push_back(std::visit(
        [](const auto& v) -> std::string {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, std::string>)
            return v;
          else if constexpr (std::is_same_v<T, double>)
            return format_number(v);
          else
            return std::to_string(v);
        },
        cell));
  }
  rows_.push_back(std::move(cells));
}

void write_header(std::ostream& out, const OutputHeader& header) {
  out << "# chainprime " << CHAINPRIME_VERSION << '\n';
  out << "# command: " << header.command << '\n';
  out << "# config:";
  for (const auto& [k, v] : header.config) out << ' ' << k << '=' << v;
  out << '\n';
  out << "# seed: " << header.seed << '\n';
}

void CsvTable::write(std::ostream& out, const OutputHeader& header) const {
  write_header(out, header);
  for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

std::string CsvTable::str(const OutputHeader& header) const {
  std::ostringstream os;
  write(os, header);
  return os.str();
}

nlohmann::ordered_json json_meta(const OutputHeader& header) {
  nlohmann::ordered_json meta;
  meta["tool"] = "chainprime";
  meta["version"] = CHAINPRIME_VERSION;
  meta["command"] = header.command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [k, v] : header.config) config[k] = v;
  meta["config"] = std::move(config);
  meta["seed"] = header.seed;
  return meta;
}

}  // namespace chainprime
