#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dimred/core.hpp"

namespace dimred {

// n x p numeric matrix with column names: the on-disk sample of X.
struct DataMatrix {
  Matrix values;
  std::vector<std::string> column_names;

  Index col_index(const std::string& name) const {
    for (std::size_t j = 0; j < column_names.size(); ++j) {
      if (column_names[j] == name) return static_cast<Index>(j);
    }
    return -1;
  }
};

namespace csv_detail {

inline std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace csv_detail

// Comma-separated, header row required, '.' decimal separator. Parse errors
// report the 1-based row and column.
inline DataMatrix read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open CSV file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw data_error(path + ": missing header row");
  DataMatrix dm;
  for (const auto& f : csv_detail::split_fields(line)) {
    const std::string name = csv_detail::trimmed(f);
    if (name.empty()) throw data_error(path + ": empty column name in header");
    dm.column_names.push_back(name);
  }
  const std::size_t p = dm.column_names.size();

  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (csv_detail::trimmed(line).empty()) continue;
    const auto fields = csv_detail::split_fields(line);
    if (fields.size() != p) {
      throw data_error(path + ": row " + std::to_string(lineno) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(p));
    }
    for (std::size_t j = 0; j < p; ++j) {
      const std::string field = csv_detail::trimmed(fields[j]);
      const char* begin = field.c_str();
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (field.empty() || end != begin + field.size()) {
        throw data_error(path + ": malformed number '" + fields[j] + "' at row " +
                         std::to_string(lineno) + ", column " + std::to_string(j + 1));
      }
      values.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw data_error(path + ": no data rows");

  dm.values.resize(static_cast<Index>(rows), static_cast<Index>(p));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < p; ++j)
      dm.values(static_cast<Index>(i), static_cast<Index>(j)) = values[i * p + j];
  return dm;
}

// Numbers are written with 17 significant digits so values round-trip exactly.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_csv(const std::string& path, const DataMatrix& dm) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write CSV file: " + path);
  for (std::size_t j = 0; j < dm.column_names.size(); ++j) {
    if (j) out << ',';
    out << dm.column_names[j];
  }
  out << '\n';
  for (Index i = 0; i < dm.values.rows(); ++i) {
    for (Index j = 0; j < dm.values.cols(); ++j) {
      if (j) out << ',';
      out << format_number(dm.values(i, j));
    }
    out << '\n';
  }
}

}  // namespace dimred
