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

/**
 * @file benchmark_table.hpp
 * @brief Columnar hyperparameter -> BLEU lookup table.
 *
 * A BenchmarkTable holds one column per gene plus a fitness column, all of
 * equal length, with row i describing one trained configuration. It is the
 * fitness oracle for both optimizers: configurations that are not rows of
 * the table score exactly 0.
 */

#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <utility>
#include <vector>

#include "evotab/errors.hpp"
#include "evotab/rng.hpp"

namespace evotab {

inline constexpr std::size_t kGeneCount = 6;

/// Gene values, in schema order. Stored as doubles throughout; equality is
/// exact since every value originates from a finite pool.
using Chromosome = std::array<double, kGeneCount>;

struct ChromosomeHash {
  std::size_t operator()(const Chromosome& c) const noexcept {
    std::uint64_t h = 0x243F6A8885A308D3ULL;
    for (double v : c) {
      // +0.0 and -0.0 compare equal, so they must hash equal.
      const double canon = v == 0.0 ? 0.0 : v;
      h = splitmix64(h ^ std::hash<double>{}(canon));
    }
    return static_cast<std::size_t>(h);
  }
};

struct GeneSpec {
  std::string name;
  std::vector<double> pool;

  bool admits(double v) const {
    return std::find(pool.begin(), pool.end(), v) != pool.end();
  }
  std::size_t rank_of(double v) const {
    return static_cast<std::size_t>(
        std::find(pool.begin(), pool.end(), v) - pool.begin());
  }
};

using Schema = std::array<GeneSpec, kGeneCount>;

/// Chromosome plus its BLEU score. Fitness 0 marks a configuration that is
/// not represented in the table.
struct Individual {
  Chromosome chromosome{};
  double fitness = 0.0;

  friend bool operator==(const Individual&, const Individual&) = default;
};

inline constexpr std::string_view kCsvHeader =
    "bpe_units,num_layers,embed_dim,hidden_units,attn_heads,learning_rate,bleu";

/// Transformer NMT search space: BPE merges, layers, embedding size, hidden
/// units, attention heads, initial learning rate.
inline Schema default_schema() {
  return Schema{{
      {"bpe_units", {10000, 30000, 50000}},
      {"num_layers", {2, 4}},
      {"embed_dim", {256, 512, 1024}},
      {"hidden_units", {1024, 2048}},
      {"attn_heads", {8, 16}},
      {"learning_rate", {0.0003, 0.0006, 0.001}},
  }};
}

/// Returns an empty list when the schema is usable.
inline std::vector<std::string> schema_violations(const Schema& schema) {
  std::vector<std::string> out;
  for (const auto& g : schema) {
    if (g.pool.empty()) out.push_back("gene '" + g.name + "' has an empty pool");
    for (std::size_t i = 0; i < g.pool.size(); ++i) {
      if (!std::isfinite(g.pool[i]))
        out.push_back("gene '" + g.name + "' pool holds a non-finite value");
      for (std::size_t j = 0; j < i; ++j)
        if (g.pool[i] == g.pool[j])
          out.push_back("gene '" + g.name + "' pool repeats a value");
    }
  }
  return out;
}

/// Number of distinct chromosomes the schema admits.
inline std::size_t grid_size(const Schema& schema) {
  std::size_t n = 1;
  for (const auto& g : schema) n *= g.pool.size();
  return n;
}

/// Mixed-radix decode of a grid index, last gene varying fastest.
inline Chromosome grid_point(const Schema& schema, std::size_t index) {
  Chromosome c{};
  for (std::size_t i = kGeneCount; i-- > 0;) {
    const auto& pool = schema[i].pool;
    c[i] = pool[index % pool.size()];
    index /= pool.size();
  }
  return c;
}

inline std::string format_gene(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                           std::chars_format::fixed);
  return std::string(buf.data(), res.ptr);
}

inline std::string format_fitness(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                           std::chars_format::fixed, 2);
  return std::string(buf.data(), res.ptr);
}

inline std::string format_chromosome(const Chromosome& c) {
  std::string s = "[";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += ", ";
    s += format_gene(c[i]);
  }
  return s + "]";
}

namespace detail {

/// Invariant check shared by the constructor and the CSV loader. `label`
/// names row i in diagnostics (a file line number or a row index).
inline std::vector<std::string> table_violations(
    const Schema& schema, std::span<const Chromosome> rows,
    std::span<const double> fitness,
    const std::function<std::string(std::size_t)>& label) {
  std::vector<std::string> out = schema_violations(schema);
  if (rows.size() != fitness.size())
    out.push_back("gene and fitness columns differ in length");
  if (rows.empty()) out.push_back("table has no data rows");

  std::unordered_map<Chromosome, std::size_t, ChromosomeHash> seen;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t g = 0; g < kGeneCount; ++g) {
      const double v = rows[r][g];
      if (!std::isfinite(v)) {
        out.push_back(label(r) + ": " + schema[g].name + " is not finite");
      } else if (!schema[g].admits(v)) {
        out.push_back(label(r) + ": " + schema[g].name + " value " +
                      format_gene(v) + " is not in the pool");
      }
    }
    if (r < fitness.size()) {
      const double f = fitness[r];
      if (!std::isfinite(f) || f <= 0.0)
        out.push_back(label(r) + ": bleu must be finite and > 0, got " +
                      format_gene(f));
    }
    auto [it, fresh] = seen.emplace(rows[r], r);
    if (!fresh)
      out.push_back(label(r) + ": duplicate chromosome " +
                    format_chromosome(rows[r]) + " (first seen at " +
                    label(it->second) + ")");
  }
  return out;
}

}  // namespace detail

/// Immutable columnar benchmark. Safe to share between threads.
class BenchmarkTable {
 public:
  /// Throws ValidationError listing every broken invariant.
  BenchmarkTable(Schema schema, std::vector<Chromosome> rows,
                 std::vector<double> fitness)
      : BenchmarkTable(std::move(schema), std::move(rows), std::move(fitness),
                       [](std::size_t r) { return "row " + std::to_string(r); }) {}

  BenchmarkTable(Schema schema, std::vector<Chromosome> rows,
                 std::vector<double> fitness,
                 const std::function<std::string(std::size_t)>& label)
      : schema_(std::move(schema)), fitness_(std::move(fitness)) {
    auto violations = detail::table_violations(schema_, rows, fitness_, label);
    if (!violations.empty()) throw ValidationError(std::move(violations));
    for (auto& col : genes_) col.reserve(rows.size());
    index_.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t g = 0; g < kGeneCount; ++g) genes_[g].push_back(rows[r][g]);
      index_.emplace(rows[r], r);
    }
  }

  std::size_t size() const noexcept { return fitness_.size(); }
  const Schema& schema() const noexcept { return schema_; }

  std::span<const double> gene_column(std::size_t gene) const {
    return genes_.at(gene);
  }
  std::span<const double> fitness_column() const noexcept { return fitness_; }

  Chromosome chromosome(std::size_t row) const {
    Chromosome c{};
    for (std::size_t g = 0; g < kGeneCount; ++g) c[g] = genes_[g].at(row);
    return c;
  }
  double fitness(std::size_t row) const { return fitness_.at(row); }
  Individual individual(std::size_t row) const {
    return {chromosome(row), fitness(row)};
  }

  std::optional<std::size_t> find(const Chromosome& c) const {
    auto it = index_.find(c);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Number of rows with fitness >= threshold.
  std::size_t count_at_least(double threshold) const {
    return static_cast<std::size_t>(
        std::count_if(fitness_.begin(), fitness_.end(),
                      [&](double f) { return f >= threshold; }));
  }

  friend bool operator==(const BenchmarkTable& a, const BenchmarkTable& b) {
    if (a.fitness_ != b.fitness_ || a.genes_ != b.genes_) return false;
    for (std::size_t g = 0; g < kGeneCount; ++g)
      if (a.schema_[g].name != b.schema_[g].name ||
          a.schema_[g].pool != b.schema_[g].pool)
        return false;
    return true;
  }

 private:
  Schema schema_;
  std::array<std::vector<double>, kGeneCount> genes_;
  std::vector<double> fitness_;
  std::unordered_map<Chromosome, std::size_t, ChromosomeHash> index_;
};

/// Stored fitness of `c`, or exactly 0 when no row matches all genes.
inline double lookup_fitness(const BenchmarkTable& table, const Chromosome& c) {
  auto row = table.find(c);
  return row ? table.fitness(*row) : 0.0;
}

/// Uniformly chosen row index.
template <class Engine>
std::size_t sample_row_index(const BenchmarkTable& table, Engine& rng) {
  return uniform_index(rng, table.size());
}

template <class Engine>
Individual sample_row(const BenchmarkTable& table, Engine& rng) {
  return table.individual(sample_row_index(table, rng));
}

/// Uniform draw from the pool of gene `gene`.
template <class Engine>
double random_pool_value(const BenchmarkTable& table, std::size_t gene,
                         Engine& rng) {
  const auto& pool = table.schema().at(gene).pool;
  return pool[uniform_index(rng, pool.size())];
}

namespace detail {

inline bool parse_double(std::string_view field, double& out) {
  if (field.empty()) return false;
  // from_chars rejects a leading '+', which is harmless in a decimal numeral.
  if (field.front() == '+') field.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

}  // namespace detail

/// Reads the canonical CSV (header + one row per individual, bleu last).
///
/// Throws ParseError at the first malformed line and ValidationError with
/// every invariant violation otherwise. Row order is preserved. Blank lines
/// are skipped; a trailing '\r' is tolerated.
inline BenchmarkTable load_table(std::istream& in,
                                 const Schema& schema = default_schema()) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<Chromosome> rows;
  std::vector<double> fitness;
  std::vector<std::size_t> lines;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header) {
      if (line != kCsvHeader)
        throw ParseError(line_no, "expected header '" + std::string(kCsvHeader) + "'");
      have_header = true;
      continue;
    }
    if (line.empty()) continue;

    std::array<double, kGeneCount + 1> values{};
    std::string_view rest = line;
    std::size_t field = 0;
    while (true) {
      const auto comma = rest.find(',');
      const auto token = rest.substr(0, comma);
      if (field > kGeneCount)
        throw ParseError(line_no, "expected " + std::to_string(kGeneCount + 1) + " fields");
      if (!detail::parse_double(token, values[field]))
        throw ParseError(line_no, "field " + std::to_string(field + 1) +
                                      " is not a decimal number: '" +
                                      std::string(token) + "'");
      ++field;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (field != kGeneCount + 1)
      throw ParseError(line_no, "expected " + std::to_string(kGeneCount + 1) +
                                    " fields, got " + std::to_string(field));
    Chromosome c{};
    std::copy_n(values.begin(), kGeneCount, c.begin());
    rows.push_back(c);
    fitness.push_back(values[kGeneCount]);
    lines.push_back(line_no);
  }
  if (!have_header) throw ParseError(1, "missing header");

  return BenchmarkTable(schema, std::move(rows), std::move(fitness),
                        [&lines](std::size_t r) {
                          return "line " + std::to_string(lines[r]);
                        });
}

/// Writes the canonical CSV: genes in shortest round-trip form, bleu with
/// two decimals.
inline void save_table(std::ostream& out, const BenchmarkTable& table) {
  out << kCsvHeader << '\n';
  for (std::size_t r = 0; r < table.size(); ++r) {
    for (std::size_t g = 0; g < kGeneCount; ++g)
      out << format_gene(table.gene_column(g)[r]) << ',';
    out << format_fitness(table.fitness(r)) << '\n';
  }
}

}  // namespace evotab
