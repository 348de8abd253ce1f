#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "stabtune/criteria.hpp"
#include "stabtune/error.hpp"
#include "stabtune/sim.hpp"
#include "stabtune/stability.hpp"

namespace stabtune {

// 17 significant digits: enough to round-trip any double exactly, so that
// re-running a study can be checked byte-for-byte.
inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

// Comma-separated, LF-terminated rows. The file is written in binary mode
// so the line endings are identical on every platform.
inline void write_csv(const std::string& path,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file '" + path + "'");
  const auto write_row = [&out](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ',';
      out << csv_escape(row[i]);
    }
    out << '\n';
  };
  write_row(header);
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw ArgumentError("csv row width does not match the header");
    write_row(row);
  }
  if (!out) throw DataError("write to '" + path + "' failed");
}

inline void write_replicates_csv(const std::string& path,
                                 const std::vector<ReplicateMetrics>& rows) {
  std::vector<std::vector<std::string>> body;
  body.reserve(rows.size());
  for (const ReplicateMetrics& r : rows) {
    if (r.error.empty()) {
      body.push_back({std::to_string(r.replicate), to_string(r.penalty),
                      to_string(r.criterion), format_double(r.lambda_hat),
                      r.exact_recovery ? "1" : "0",
                      std::to_string(r.correct_zeros),
                      std::to_string(r.incorrect_zeros), format_double(r.rpe),
                      ""});
    } else {
      body.push_back({std::to_string(r.replicate), to_string(r.penalty),
                      to_string(r.criterion), "", "", "", "", "", r.error});
    }
  }
  write_csv(path,
            {"replicate", "penalty", "criterion", "lambda_hat", "exact", "C",
             "I", "rpe", "error"},
            body);
}

inline void write_aggregates_csv(const std::string& path,
                                 const std::vector<AggregateRow>& aggregates) {
  std::vector<std::vector<std::string>> body;
  body.reserve(aggregates.size());
  for (const AggregateRow& a : aggregates) {
    body.push_back({to_string(a.penalty), to_string(a.criterion),
                    std::to_string(a.n_ok), std::to_string(a.n_error),
                    format_double(a.pct_true_set),
                    format_double(a.mean_correct_zeros),
                    format_double(a.mean_incorrect_zeros),
                    format_double(a.mean_rpe), format_double(a.rpe_q25),
                    format_double(a.rpe_median), format_double(a.rpe_q75)});
  }
  write_csv(path,
            {"penalty", "criterion", "n_ok", "n_error", "pct_true_set",
             "mean_C", "mean_I", "mean_rpe", "rpe_q25", "rpe_median",
             "rpe_q75"},
            body);
}

inline void write_stability_curve_csv(const std::string& path,
                                      const StabilityCurve& curve) {
  std::vector<std::vector<std::string>> body;
  body.reserve(curve.lambda_grid.size());
  for (std::size_t l = 0; l < curve.lambda_grid.size(); ++l)
    body.push_back(
        {format_double(curve.lambda_grid[l]), format_double(curve.s_hat[l])});
  write_csv(path, {"lambda", "s_hat"}, body);
}

inline void write_criterion_curve_csv(const std::string& path,
                                      const std::vector<CriterionScore>& scores) {
  std::vector<std::vector<std::string>> body;
  body.reserve(scores.size());
  for (const CriterionScore& s : scores)
    body.push_back({format_double(s.lambda), format_double(s.score),
                    std::to_string(s.df_hat), format_double(s.sse)});
  write_csv(path, {"lambda", "score", "df_hat", "sse"}, body);
}

inline void write_alpha_csv(const std::string& path,
                            const std::vector<AlphaSensitivityRow>& rows) {
  std::vector<std::vector<std::string>> body;
  body.reserve(rows.size());
  for (const AlphaSensitivityRow& r : rows)
    body.push_back({format_double(r.alpha), format_double(r.mean_rpe)});
  write_csv(path, {"alpha", "mean_rpe"}, body);
}

}  // namespace stabtune
