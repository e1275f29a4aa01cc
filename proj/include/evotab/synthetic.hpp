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
 * @file synthetic.hpp
 * @brief Seeded generator for benchmark-shaped tables.
 *
 * Scores every grid point with an additive term over pool ranks plus a
 * pairwise interaction term and Gaussian noise, keeps a uniform random
 * subset of the grid, and maps scores onto BLEU values so that exactly
 * `target_count` rows land at or above the threshold.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "evotab/benchmark_table.hpp"
#include "evotab/errors.hpp"
#include "evotab/rng.hpp"

namespace evotab {

/// Fitness values are emitted at this resolution, matching the CSV format.
inline constexpr double kFitnessQuantum = 0.01;

inline constexpr std::uint64_t kDefaultSyntheticSeed = 1;

struct SyntheticSpec {
  Schema schema = default_schema();
  std::size_t rows_to_keep = 150;
  double target_threshold = 16.0;
  std::size_t target_count = 7;
  double fitness_min = 9.86;
  double fitness_max = 16.41;
  std::uint64_t seed = kDefaultSyntheticSeed;
};

namespace detail {

inline bool on_quantum(double v) {
  const double scaled = v / kFitnessQuantum;
  return std::abs(scaled - std::round(scaled)) < 1e-6;
}

// Divides by the integer scale so results equal the parsed decimal text.
inline double quantize(double v) {
  const double scale = std::round(1.0 / kFitnessQuantum);
  return std::round(v * scale) / scale;
}

}  // namespace detail

inline std::vector<std::string> synthetic_spec_violations(const SyntheticSpec& s) {
  std::vector<std::string> out = schema_violations(s.schema);
  if (!out.empty()) return out;
  const std::size_t grid = grid_size(s.schema);
  if (s.rows_to_keep < 1 || s.rows_to_keep > grid)
    out.push_back("rows_to_keep must be in [1, " + std::to_string(grid) + "]");
  if (s.target_count < 1 || s.target_count > s.rows_to_keep)
    out.push_back("target_count must be in [1, rows_to_keep]");
  if (!(s.fitness_min > 0.0)) out.push_back("fitness_min must be > 0");
  if (!(s.fitness_min < s.fitness_max))
    out.push_back("fitness_min must be < fitness_max");
  if (!(s.target_threshold <= s.fitness_max))
    out.push_back("target_threshold must be <= fitness_max");
  if (s.target_count == s.rows_to_keep) {
    // Every row is a target, so the lowest row is both fitness_min and
    // at/above the threshold.
    if (s.target_threshold != s.fitness_min)
      out.push_back("target_threshold must equal fitness_min when every row is a target");
  } else if (!(s.fitness_min < s.target_threshold)) {
    out.push_back("target_threshold must be > fitness_min");
  }
  for (auto [name, v] : {std::pair{"fitness_min", s.fitness_min},
                         std::pair{"fitness_max", s.fitness_max},
                         std::pair{"target_threshold", s.target_threshold}})
    if (!detail::on_quantum(v))
      out.push_back(std::string(name) + " must be a multiple of 0.01");
  return out;
}

/// Deterministic in `spec.seed`. Throws ValidationError on a bad spec.
inline BenchmarkTable generate_synthetic(const SyntheticSpec& spec) {
  if (auto v = synthetic_spec_violations(spec); !v.empty())
    throw ValidationError(std::move(v));

  Rng rng(spec.seed);
  const std::size_t grid = grid_size(spec.schema);

  std::array<double, kGeneCount> main_weight{};
  for (auto& w : main_weight) w = uniform_unit(rng);
  std::array<std::array<double, kGeneCount>, kGeneCount> pair_weight{};
  for (std::size_t i = 0; i < kGeneCount; ++i)
    for (std::size_t j = i + 1; j < kGeneCount; ++j)
      pair_weight[i][j] = uniform_unit(rng);

  std::vector<double> score(grid);
  for (std::size_t p = 0; p < grid; ++p) {
    const Chromosome c = grid_point(spec.schema, p);
    std::array<std::size_t, kGeneCount> rank{};
    for (std::size_t i = 0; i < kGeneCount; ++i)
      rank[i] = spec.schema[i].rank_of(c[i]);
    double s = 0.0;
    for (std::size_t i = 0; i < kGeneCount; ++i) {
      s += main_weight[i] * static_cast<double>(rank[i]);
      for (std::size_t j = i + 1; j < kGeneCount; ++j)
        s += pair_weight[i][j] * static_cast<double>((rank[i] * rank[j]) % 3);
    }
    score[p] = s;
  }
  const auto [lo, hi] = std::minmax_element(score.begin(), score.end());
  const double span = *hi > *lo ? *hi - *lo : 1.0;
  for (double& s : score) s += 0.05 * span * standard_normal(rng);

  // Partial Fisher-Yates: the first rows_to_keep slots are a uniform
  // sample without replacement.
  std::vector<std::size_t> points(grid);
  std::iota(points.begin(), points.end(), std::size_t{0});
  for (std::size_t i = 0; i < spec.rows_to_keep; ++i)
    std::swap(points[i], points[i + uniform_index(rng, grid - i)]);
  points.resize(spec.rows_to_keep);
  std::sort(points.begin(), points.end());

  // Rank by score, best first; ties go to the lower grid index.
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return score[points[a]] > score[points[b]];
  });

  std::vector<double> fitness(points.size());
  // A group whose scores are all equal maps to `flat` (0 = out_lo, 1 = out_hi).
  auto rescale = [&](std::size_t first, std::size_t last, double out_lo,
                     double out_hi, double flat) {
    if (first == last) return;
    const double s_hi = score[points[order[first]]];
    const double s_lo = score[points[order[last - 1]]];
    for (std::size_t k = first; k < last; ++k) {
      const double s = score[points[order[k]]];
      const double t = s_hi > s_lo ? (s - s_lo) / (s_hi - s_lo) : flat;
      fitness[order[k]] = detail::quantize(out_lo + t * (out_hi - out_lo));
    }
  };
  const std::size_t targets = spec.target_count;
  if (targets == points.size()) {
    rescale(0, targets, spec.fitness_min, spec.fitness_max, 1.0);
    fitness[order.back()] = detail::quantize(spec.fitness_min);
  } else {
    rescale(0, targets, spec.target_threshold, spec.fitness_max, 1.0);
    rescale(targets, points.size(), spec.fitness_min,
            spec.target_threshold - kFitnessQuantum, 0.0);
  }

  std::vector<Chromosome> rows;
  rows.reserve(points.size());
  for (std::size_t p : points) rows.push_back(grid_point(spec.schema, p));
  return BenchmarkTable(spec.schema, std::move(rows), std::move(fitness));
}

}  // namespace evotab
