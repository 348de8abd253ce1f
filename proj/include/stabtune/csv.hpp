#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "stabtune/dataset.hpp"
#include "stabtune/error.hpp"

namespace stabtune {
namespace detail {

// One CSV record. Fields may be double-quoted; inside quotes, "" is a
// literal quote and commas are ordinary characters.
inline std::vector<std::string> split_csv_record(const std::string& line,
                                                 std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (in_quotes)
    throw DataError("unterminated quote on line " + std::to_string(line_no));
  fields.push_back(std::move(cur));
  return fields;
}

inline std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline double parse_cell(const std::string& raw, std::size_t line_no,
                         const std::string& column) {
  const std::string s = trim(raw);
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw DataError("could not parse '" + s + "' as a number on line " +
                    std::to_string(line_no) + ", column '" + column + "'");
  if (!std::isfinite(value))
    throw DataError("non-finite value on line " + std::to_string(line_no) +
                    ", column '" + column + "'");
  return value;
}

inline bool parse_flag(const std::string& raw, std::size_t line_no,
                       const std::string& column) {
  std::string s = trim(raw);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "t" || s == "true" || s == "1" || s == "yes") return true;
  if (s == "f" || s == "false" || s == "0" || s == "no") return false;
  throw DataError("could not parse '" + raw + "' as a boolean on line " +
                  std::to_string(line_no) + ", column '" + column + "'");
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // each sized like header
};

inline CsvTable read_csv_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file '" + path + "'");
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_record(line, line_no);
    if (table.header.empty()) {
      for (auto& f : fields) f = trim(f);
      table.header = std::move(fields);
      continue;
    }
    if (fields.size() != table.header.size())
      throw DataError("line " + std::to_string(line_no) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(table.header.size()));
    table.rows.push_back(std::move(fields));
  }
  if (table.header.empty()) throw DataError("file '" + path + "' is empty");
  if (table.rows.empty())
    throw DataError("file '" + path + "' has a header but no data rows");
  return table;
}

inline std::size_t find_column(const CsvTable& table, const std::string& name,
                               const std::string& path) {
  const auto it = std::find(table.header.begin(), table.header.end(), name);
  if (it == table.header.end()) {
    std::string have;
    for (const auto& h : table.header) {
      if (!have.empty()) have += ", ";
      have += h;
    }
    throw DataError("column '" + name + "' not found in '" + path +
                    "' (columns: " + have + ")");
  }
  return static_cast<std::size_t>(it - table.header.begin());
}

inline Dataset table_to_dataset(const CsvTable& table, std::size_t y_col,
                                const std::vector<std::size_t>& skip_cols) {
  const std::size_t n = table.rows.size();
  std::vector<std::size_t> x_cols;
  std::vector<std::string> names;
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (j == y_col) continue;
    if (std::find(skip_cols.begin(), skip_cols.end(), j) != skip_cols.end())
      continue;
    x_cols.push_back(j);
    names.push_back(table.header[j]);
  }
  if (x_cols.empty()) throw DataError("no predictor columns remain");
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  Eigen::MatrixXd X(static_cast<Eigen::Index>(n),
                    static_cast<Eigen::Index>(x_cols.size()));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t line_no = i + 2;  // header is line 1
    y(static_cast<Eigen::Index>(i)) =
        parse_cell(table.rows[i][y_col], line_no, table.header[y_col]);
    for (std::size_t k = 0; k < x_cols.size(); ++k)
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          parse_cell(table.rows[i][x_cols[k]], line_no,
                     table.header[x_cols[k]]);
  }
  return Dataset::from_raw(std::move(y), std::move(X), std::move(names));
}

}  // namespace detail

// Loads a headered, comma-separated file. The named column becomes the
// response; every other column becomes a predictor, in file order.
inline Dataset load_csv(const std::string& path,
                        const std::string& response_column) {
  const auto table = detail::read_csv_table(path);
  const std::size_t y_col = detail::find_column(table, response_column, path);
  return detail::table_to_dataset(table, y_col, {});
}

// As load_csv, but additionally reads a boolean column (accepted spellings:
// t/f, true/false, 1/0, yes/no, case-insensitive) that marks membership in
// the first of the two returned datasets. The flag column is excluded from
// the predictors.
inline std::pair<Dataset, Dataset> load_csv_split(
    const std::string& path, const std::string& response_column,
    const std::string& split_column) {
  const auto table = detail::read_csv_table(path);
  const std::size_t y_col = detail::find_column(table, response_column, path);
  const std::size_t s_col = detail::find_column(table, split_column, path);
  if (y_col == s_col)
    throw DataError("response and split column are both '" + response_column +
                    "'");
  const Dataset all = detail::table_to_dataset(table, y_col, {s_col});
  std::vector<int> in_idx;
  std::vector<int> out_idx;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const bool flag = detail::parse_flag(table.rows[i][s_col], i + 2,
                                         table.header[s_col]);
    (flag ? in_idx : out_idx).push_back(static_cast<int>(i));
  }
  if (in_idx.empty() || out_idx.empty())
    throw DataError("split column '" + split_column +
                    "' does not separate the rows into two nonempty groups");
  return {all.rows(in_idx), all.rows(out_idx)};
}

}  // namespace stabtune
