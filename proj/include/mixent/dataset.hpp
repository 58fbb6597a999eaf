#pragma once

// CSV ingestion for the command-line front end: comma separated, header row
// required, '.' decimal separator.

#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mixent/errors.hpp"
#include "mixent/io.hpp"
#include "mixent/numkernel.hpp"

namespace mixent {

struct Dataset {
  Matrix rows;
  std::vector<std::string> column_names;
  std::vector<std::string> groups;  ///< per-row group label; empty when ungrouped
};

struct CsvOptions {
  std::vector<std::string> columns;  ///< empty: every column except the group column
  std::optional<std::string> group_by;
  bool log_returns = false;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  if (quoted) throw DataError("line " + std::to_string(line_no) + ": unterminated quote");
  out.push_back(std::move(cur));
  return out;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

inline Dataset read_csv(std::istream& in, const CsvOptions& options = {}) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw DataError("empty CSV input (header row required)");
  std::vector<std::string> header = detail::split_csv_line(line, line_no);
  for (auto& h : header) h = detail::trim(h);
  if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);

  auto find_column = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw DataError("column '" + name + "' not found in header");
  };
  std::optional<std::size_t> group_col;
  if (options.group_by) group_col = find_column(*options.group_by);
  std::vector<std::size_t> cols;
  if (options.columns.empty()) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (!group_col || i != *group_col) cols.push_back(i);
  } else {
    for (const auto& c : options.columns) cols.push_back(find_column(c));
  }
  if (cols.empty()) throw DataError("no data columns selected");

  std::vector<std::vector<double>> values;
  std::vector<std::string> groups;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty() || detail::trim(line) == "\r") continue;
    const auto fields = detail::split_csv_line(line, line_no);
    if (fields.size() != header.size())
      throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                      " fields, found " + std::to_string(fields.size()));
    std::vector<double> row;
    row.reserve(cols.size());
    for (auto c : cols) {
      const std::string f = detail::trim(fields[c]);
      double v = 0.0;
      std::size_t used = 0;
      try {
        v = std::stod(f, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != f.size())
        throw DataError("line " + std::to_string(line_no) + ": column '" + header[c] + "' is not numeric ('" + f +
                        "')");
      if (!std::isfinite(v))
        throw DataError("line " + std::to_string(line_no) + ": column '" + header[c] + "' is not finite");
      row.push_back(v);
    }
    values.push_back(std::move(row));
    if (group_col) groups.push_back(detail::trim(fields[*group_col]));
  }

  if (options.log_returns) {
    if (values.size() < 2) throw DataError("log returns need at least two rows");
    std::vector<std::vector<double>> returns;
    for (std::size_t t = 1; t < values.size(); ++t) {
      std::vector<double> r(cols.size());
      for (std::size_t j = 0; j < cols.size(); ++j) {
        if (!(values[t][j] > 0.0) || !(values[t - 1][j] > 0.0))
          throw DataError("line " + std::to_string(t + 2) + ": log returns need positive prices");
        r[j] = std::log(values[t][j]) - std::log(values[t - 1][j]);
      }
      returns.push_back(std::move(r));
    }
    values = std::move(returns);
    if (!groups.empty()) groups.erase(groups.begin());
  }

  Dataset ds;
  ds.rows.resize(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) ds.rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i][j];
  for (auto c : cols) ds.column_names.push_back(header[c]);
  ds.groups = std::move(groups);
  return ds;
}

inline Dataset read_csv_file(const std::string& path, const CsvOptions& options = {}) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return read_csv(in, options);
}

/// Header plus rows at 17 significant digits, so reading back reproduces
/// every value exactly.
inline void write_csv(std::ostream& os, const Dataset& ds) {
  const bool grouped = !ds.groups.empty();
  if (grouped) os << "group,";
  for (std::size_t j = 0; j < ds.column_names.size(); ++j) os << (j ? "," : "") << ds.column_names[j];
  os << '\n';
  for (Eigen::Index i = 0; i < ds.rows.rows(); ++i) {
    if (grouped) os << ds.groups[static_cast<std::size_t>(i)] << ',';
    for (Eigen::Index j = 0; j < ds.rows.cols(); ++j) os << (j ? "," : "") << format_double(ds.rows(i, j));
    os << '\n';
  }
}

/// (label, rows) per group in order of first appearance; a single unnamed
/// group when the dataset is ungrouped.
inline std::vector<std::pair<std::string, Matrix>> split_groups(const Dataset& ds) {
  if (ds.groups.empty()) return {{"", ds.rows}};
  std::vector<std::string> labels;
  std::vector<std::vector<Eigen::Index>> members;
  for (Eigen::Index i = 0; i < ds.rows.rows(); ++i) {
    const auto& g = ds.groups[static_cast<std::size_t>(i)];
    std::size_t k = 0;
    while (k < labels.size() && labels[k] != g) ++k;
    if (k == labels.size()) {
      labels.push_back(g);
      members.emplace_back();
    }
    members[k].push_back(i);
  }
  std::vector<std::pair<std::string, Matrix>> out;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    Matrix m(static_cast<Eigen::Index>(members[k].size()), ds.rows.cols());
    for (std::size_t r = 0; r < members[k].size(); ++r) m.row(static_cast<Eigen::Index>(r)) = ds.rows.row(members[k][r]);
    out.emplace_back(labels[k], std::move(m));
  }
  return out;
}

}  // namespace mixent
