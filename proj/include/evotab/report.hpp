// Copyright 2026 The evotab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <charconv>
#include <cstddef>
#include <string>
#include <vector>

#include "evotab/evaluator.hpp"

namespace evotab {

enum class ReportFormat { markdown, csv, json };

inline std::string format_fixed(double v, int decimals = 3) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                           std::chars_format::fixed, decimals);
  return std::string(buf.data(), res.ptr);
}

namespace detail {

using Row = std::vector<std::string>;

struct TableText {
  std::string title;
  Row header;
  std::vector<Row> rows;
};

inline std::vector<TableText> report_tables(const ExperimentSummary& s) {
  std::vector<TableText> out;
  auto results_table = [&](const std::string& title, bool ga) {
    TableText t;
    t.title = title;
    t.header.push_back("Initial Population Size");
    for (std::size_t i = 0; i < s.config.trials; ++i)
      t.header.push_back("Trial " + std::to_string(i + 1));
    t.header.push_back("Average");
    for (const auto& z : s.sizes) {
      Row row{std::to_string(z.population_size)};
      for (double m : ga ? z.ga_trial_means : z.baseline_trial_means)
        row.push_back(format_fixed(m));
      const auto& avg = ga ? z.ga_mean : z.baseline_mean;
      row.push_back(avg ? format_fixed(*avg) : "n/a");
      t.rows.push_back(std::move(row));
    }
    out.push_back(std::move(t));
  };
  if (runs_ga(s.config.algorithms)) results_table("Genetic Algorithm Results", true);
  if (runs_baseline(s.config.algorithms)) results_table("Baseline Algorithm Results", false);
  if (s.overall_mean_difference) {
    TableText t;
    t.title = "Performance Difference";
    t.header = {"Initial Population Size", "Winner", "Difference in Performance"};
    for (const auto& z : s.sizes)
      t.rows.push_back({std::to_string(z.population_size), z.winner(),
                        format_fixed(*z.difference)});
    t.rows.push_back({"Overall", "", format_fixed(*s.overall_mean_difference)});
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace detail

/// Tables of per-trial means, grand means and the difference/winner table,
/// in the requested format. Cells are individuals per iteration.
inline std::string render_report(const ExperimentSummary& s, ReportFormat format) {
  if (format == ReportFormat::json) return to_json(s).dump(2) + "\n";

  std::string out;
  for (const auto& t : detail::report_tables(s)) {
    if (format == ReportFormat::markdown) {
      out += "### " + t.title + "\n\n|";
      for (const auto& h : t.header) out += " " + h + " |";
      out += "\n|";
      for (std::size_t i = 0; i < t.header.size(); ++i) out += "---|";
      out += "\n";
      for (const auto& r : t.rows) {
        out += "|";
        for (const auto& cell : r) out += " " + cell + " |";
        out += "\n";
      }
      out += "\n";
    } else {
      out += "# " + t.title + "\n";
      for (std::size_t i = 0; i < t.header.size(); ++i)
        out += (i ? "," : "") + t.header[i];
      out += "\n";
      for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + r[i];
        out += "\n";
      }
    }
  }
  return out;
}

}  // namespace evotab
