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
 * @file evaluator.hpp
 * @brief Paired GA-vs-random experiments and their aggregation.
 *
 * Each (population size, trial, iteration) cell gets its own seed from
 * derive_seed(), so cells can run in any order on any number of workers
 * and still produce identical results. Within a cell one initial population
 * is sampled and handed to both optimizers, each of which draws from its
 * own sub-stream.
 *
 * Seed derivation, with splitmix64 the standard SplitMix64 finalizer:
 *
 *     h = splitmix64(master ^ 0x65766F746162)      // "evotab"
 *     h = splitmix64(h ^ trial)
 *     h = splitmix64(h ^ iteration)
 *     seed = splitmix64(h ^ population_size)
 *
 * Sub-streams are std::mt19937_64 seeded with splitmix64(seed ^ tag) where
 * tag is kInitialStreamTag, kGaStreamTag or kBaselineStreamTag.
 */

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "evotab/benchmark_table.hpp"
#include "evotab/errors.hpp"
#include "evotab/ga_engine.hpp"
#include "evotab/random_search.hpp"
#include "evotab/rng.hpp"
#include "evotab/run_outcome.hpp"

namespace evotab {

inline constexpr int kResultsSchemaVersion = 1;
inline constexpr std::uint64_t kDefaultMasterSeed = 1;

inline constexpr std::uint64_t kInitialStreamTag = 0x696E6974;    // "init"
inline constexpr std::uint64_t kGaStreamTag = 0x6761;             // "ga"
inline constexpr std::uint64_t kBaselineStreamTag = 0x72616E64;   // "rand"

inline constexpr std::uint64_t derive_seed(std::uint64_t master_seed,
                                           std::uint64_t trial,
                                           std::uint64_t iteration,
                                           std::uint64_t population_size) {
  std::uint64_t h = splitmix64(master_seed ^ 0x65766F746162ULL);
  h = splitmix64(h ^ trial);
  h = splitmix64(h ^ iteration);
  return splitmix64(h ^ population_size);
}

inline constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(seed ^ tag);
}

enum class InitialPopulationPolicy { allow_targets, exclude_targets };

inline const char* to_string(InitialPopulationPolicy p) {
  return p == InitialPopulationPolicy::allow_targets ? "allow_targets"
                                                     : "exclude_targets";
}

enum class AlgorithmSelection { ga, random, both };

inline const char* to_string(AlgorithmSelection a) {
  switch (a) {
    case AlgorithmSelection::ga: return "ga";
    case AlgorithmSelection::random: return "random";
    case AlgorithmSelection::both: return "both";
  }
  return "?";
}

inline bool runs_ga(AlgorithmSelection a) { return a != AlgorithmSelection::random; }
inline bool runs_baseline(AlgorithmSelection a) { return a != AlgorithmSelection::ga; }

struct ExperimentConfig {
  std::vector<std::size_t> population_sizes{5, 10, 15, 20, 25};
  std::size_t iterations_per_trial = 1000;
  std::size_t trials = 3;
  // Shared by both optimizers; overrides ga_config.target.
  double target = 16.0;
  GaConfig ga_config;
  std::uint64_t master_seed = kDefaultMasterSeed;
  InitialPopulationPolicy initial_population_policy = InitialPopulationPolicy::allow_targets;
  AlgorithmSelection algorithms = AlgorithmSelection::both;
  // 0 means default_max_draws(table).
  std::size_t max_draws = 0;
  // Scheduling only; never affects results.
  std::size_t workers = 1;

  GaConfig effective_ga_config() const {
    GaConfig g = ga_config;
    g.target = target;
    return g;
  }

  /// Throws ConfigError naming the offending field.
  void validate(const BenchmarkTable& table) const {
    if (population_sizes.empty()) throw ConfigError("population_sizes must not be empty");
    for (std::size_t s : population_sizes) {
      if (s < 2 || s > table.size())
        throw ConfigError("population size " + std::to_string(s) +
                          " must be in [2, " + std::to_string(table.size()) + "]");
    }
    if (iterations_per_trial < 1) throw ConfigError("iterations_per_trial must be >= 1");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    effective_ga_config().validate();
  }
};

/// Both optimizers' outcomes for one shared initial population.
struct PairedOutcome {
  std::vector<Individual> initial;
  std::optional<RunOutcome> ga;
  std::optional<RunOutcome> baseline;
};

/// Uniform sample of `size` distinct table rows. Under exclude_targets only
/// rows below `target` are eligible.
template <class Engine>
std::vector<Individual> sample_initial_population(const BenchmarkTable& table,
                                                  std::size_t size, double target,
                                                  InitialPopulationPolicy policy,
                                                  Engine& rng) {
  std::vector<std::size_t> eligible;
  eligible.reserve(table.size());
  for (std::size_t r = 0; r < table.size(); ++r)
    if (policy == InitialPopulationPolicy::allow_targets || table.fitness(r) < target)
      eligible.push_back(r);
  if (eligible.size() < size)
    throw ConfigError("only " + std::to_string(eligible.size()) +
                      " eligible rows for an initial population of " +
                      std::to_string(size));
  std::vector<Individual> out;
  out.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    std::swap(eligible[i], eligible[i + uniform_index(rng, eligible.size() - i)]);
    out.push_back(table.individual(eligible[i]));
  }
  return out;
}

/// One evaluator cell: sample a shared initial population, then run the
/// selected optimizers on independent sub-streams of `seed`.
inline PairedOutcome paired_iteration(const BenchmarkTable& table,
                                      std::size_t population_size,
                                      const ExperimentConfig& config,
                                      std::uint64_t seed) {
  PairedOutcome out;
  Rng init_rng(stream_seed(seed, kInitialStreamTag));
  out.initial = sample_initial_population(table, population_size, config.target,
                                          config.initial_population_policy, init_rng);
  if (runs_ga(config.algorithms)) {
    Rng rng(stream_seed(seed, kGaStreamTag));
    out.ga = run_ga(table, Population(out.initial), config.effective_ga_config(), rng);
  }
  if (runs_baseline(config.algorithms)) {
    Rng rng(stream_seed(seed, kBaselineStreamTag));
    const std::size_t draws =
        config.max_draws ? config.max_draws : default_max_draws(table);
    out.baseline = run_random(table, Population(out.initial), config.target, draws, rng);
  }
  return out;
}

/// Persisted per-cell result (one line of results.jsonl).
struct IterationRecord {
  std::size_t population_size = 0;
  std::size_t trial = 0;
  std::size_t iteration = 0;
  std::uint64_t seed = 0;
  std::optional<std::size_t> ga_result;
  std::optional<std::size_t> ga_additions;
  std::optional<std::size_t> baseline_result;
  std::optional<std::size_t> baseline_additions;

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

struct SizeSummary {
  std::size_t population_size = 0;
  std::vector<double> ga_trial_means;
  std::vector<double> baseline_trial_means;
  std::optional<double> ga_mean;
  std::optional<double> baseline_mean;
  // baseline_mean - ga_mean; positive means the GA needed fewer individuals.
  std::optional<double> difference;

  std::string winner() const {
    if (!difference) return "n/a";
    if (*difference > 0.0) return "Genetic Algorithm";
    if (*difference < 0.0) return "Baseline";
    return "Tie";
  }

  friend bool operator==(const SizeSummary&, const SizeSummary&) = default;
};

struct ExperimentSummary {
  ExperimentConfig config;
  std::size_t table_rows = 0;
  std::vector<SizeSummary> sizes;
  std::optional<double> overall_mean_difference;
};

struct ExperimentResult {
  std::vector<IterationRecord> records;
  ExperimentSummary summary;
};

/// Failure inside one cell, annotated with its coordinates.
class ExperimentError : public std::runtime_error {
 public:
  ExperimentError(const std::string& what, std::size_t population_size,
                  std::size_t trial, std::size_t iteration, bool non_termination)
      : std::runtime_error(what),
        population_size_(population_size),
        trial_(trial),
        iteration_(iteration),
        non_termination_(non_termination) {}

  std::size_t population_size() const noexcept { return population_size_; }
  std::size_t trial() const noexcept { return trial_; }
  std::size_t iteration() const noexcept { return iteration_; }
  bool non_termination() const noexcept { return non_termination_; }

 private:
  std::size_t population_size_;
  std::size_t trial_;
  std::size_t iteration_;
  bool non_termination_;
};

/// Aggregates records into per-trial means, per-size grand means (mean of
/// trial means) and baseline-minus-GA differences. Records may arrive in
/// any order.
inline ExperimentSummary summarize(std::vector<IterationRecord> records,
                                   const ExperimentConfig& config,
                                   std::size_t table_rows) {
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.population_size, a.trial, a.iteration) <
           std::tie(b.population_size, b.trial, b.iteration);
  });

  ExperimentSummary summary;
  summary.config = config;
  summary.table_rows = table_rows;

  auto mean = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };

  double diff_sum = 0.0;
  std::size_t diff_count = 0;
  for (std::size_t size : config.population_sizes) {
    SizeSummary s;
    s.population_size = size;
    for (std::size_t t = 0; t < config.trials; ++t) {
      double ga_sum = 0.0, base_sum = 0.0;
      std::size_t ga_n = 0, base_n = 0;
      for (const auto& r : records) {
        if (r.population_size != size || r.trial != t) continue;
        if (r.ga_result) { ga_sum += static_cast<double>(*r.ga_result); ++ga_n; }
        if (r.baseline_result) {
          base_sum += static_cast<double>(*r.baseline_result);
          ++base_n;
        }
      }
      if (ga_n) s.ga_trial_means.push_back(ga_sum / static_cast<double>(ga_n));
      if (base_n) s.baseline_trial_means.push_back(base_sum / static_cast<double>(base_n));
    }
    if (!s.ga_trial_means.empty()) s.ga_mean = mean(s.ga_trial_means);
    if (!s.baseline_trial_means.empty()) s.baseline_mean = mean(s.baseline_trial_means);
    if (s.ga_mean && s.baseline_mean) {
      s.difference = *s.baseline_mean - *s.ga_mean;
      diff_sum += *s.difference;
      ++diff_count;
    }
    summary.sizes.push_back(std::move(s));
  }
  if (diff_count) summary.overall_mean_difference = diff_sum / static_cast<double>(diff_count);
  return summary;
}

/// Runs every (size, trial, iteration) cell on config.workers threads and
/// aggregates. The result does not depend on the worker count.
///
/// The first failing cell in coordinate order is rethrown as
/// ExperimentError; configuration problems throw ConfigError up front.
inline ExperimentResult run_experiment(const BenchmarkTable& table,
                                       const ExperimentConfig& config) {
  config.validate(table);

  struct Cell {
    std::size_t size, trial, iteration;
  };
  std::vector<Cell> cells;
  cells.reserve(config.population_sizes.size() * config.trials *
                config.iterations_per_trial);
  for (std::size_t size : config.population_sizes)
    for (std::size_t t = 0; t < config.trials; ++t)
      for (std::size_t i = 0; i < config.iterations_per_trial; ++i)
        cells.push_back({size, t, i});

  std::vector<IterationRecord> records(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};

  auto work = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t k = next.fetch_add(1);
      if (k >= cells.size()) return;
      const Cell& c = cells[k];
      IterationRecord& rec = records[k];
      rec.population_size = c.size;
      rec.trial = c.trial;
      rec.iteration = c.iteration;
      rec.seed = derive_seed(config.master_seed, c.trial, c.iteration, c.size);
      try {
        PairedOutcome pair = paired_iteration(table, c.size, config, rec.seed);
        if (pair.ga) {
          rec.ga_result = pair.ga->result_value;
          rec.ga_additions = pair.ga->additions;
        }
        if (pair.baseline) {
          rec.baseline_result = pair.baseline->result_value;
          rec.baseline_additions = pair.baseline->additions;
        }
      } catch (...) {
        errors[k] = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
      }
    }
  };

  const std::size_t n_workers = std::min(config.workers, cells.size());
  if (n_workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(work);
  }

  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (!errors[k]) continue;
    const Cell& c = cells[k];
    const std::string where = "population_size=" + std::to_string(c.size) +
                              " trial=" + std::to_string(c.trial + 1) +
                              " iteration=" + std::to_string(c.iteration + 1);
    try {
      std::rethrow_exception(errors[k]);
    } catch (const NonTerminationError& e) {
      throw ExperimentError(where + ": " + e.what(), c.size, c.trial, c.iteration, true);
    } catch (const std::exception& e) {
      throw ExperimentError(where + ": " + e.what(), c.size, c.trial, c.iteration, false);
    }
  }

  ExperimentResult result;
  result.summary = summarize(records, config, table.size());
  result.records = std::move(records);
  return result;
}

// ---- serialization ----

inline nlohmann::json to_json(const IterationRecord& r) {
  using nlohmann::json;
  auto run = [](const std::optional<std::size_t>& result,
                const std::optional<std::size_t>& additions) -> json {
    if (!result) return nullptr;
    return {{"result_value", *result}, {"additions", additions.value_or(0)}};
  };
  return {{"schema_version", kResultsSchemaVersion},
          {"population_size", r.population_size},
          {"trial", r.trial},
          {"iteration", r.iteration},
          {"seed", r.seed},
          {"ga", run(r.ga_result, r.ga_additions)},
          {"baseline", run(r.baseline_result, r.baseline_additions)}};
}

inline IterationRecord record_from_json(const nlohmann::json& j) {
  IterationRecord r;
  r.population_size = j.at("population_size").get<std::size_t>();
  r.trial = j.at("trial").get<std::size_t>();
  r.iteration = j.at("iteration").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  if (const auto& g = j.at("ga"); !g.is_null()) {
    r.ga_result = g.at("result_value").get<std::size_t>();
    r.ga_additions = g.at("additions").get<std::size_t>();
  }
  if (const auto& b = j.at("baseline"); !b.is_null()) {
    r.baseline_result = b.at("result_value").get<std::size_t>();
    r.baseline_additions = b.at("additions").get<std::size_t>();
  }
  return r;
}

inline void write_records(std::ostream& out, const std::vector<IterationRecord>& records) {
  for (const auto& r : records) out << to_json(r).dump() << '\n';
}

inline std::vector<IterationRecord> read_records(std::istream& in) {
  std::vector<IterationRecord> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(record_from_json(nlohmann::json::parse(line)));
  return out;
}

inline nlohmann::json to_json(const ExperimentSummary& s) {
  using nlohmann::json;
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  const auto& c = s.config;
  json sizes = json::array();
  for (const auto& z : s.sizes)
    sizes.push_back({{"population_size", z.population_size},
                     {"ga_trial_means", z.ga_trial_means},
                     {"baseline_trial_means", z.baseline_trial_means},
                     {"ga_mean", opt(z.ga_mean)},
                     {"baseline_mean", opt(z.baseline_mean)},
                     {"difference", opt(z.difference)},
                     {"winner", z.winner()}});
  return {{"schema_version", kResultsSchemaVersion},
          {"config",
           {{"algorithms", to_string(c.algorithms)},
            {"population_sizes", c.population_sizes},
            {"iterations_per_trial", c.iterations_per_trial},
            {"trials", c.trials},
            {"target", c.target},
            {"mutation_rate", c.ga_config.mutation_rate},
            {"invalid_offspring_policy", to_string(c.ga_config.invalid_offspring_policy)},
            {"max_cycles", c.ga_config.max_cycles},
            {"initial_population_policy", to_string(c.initial_population_policy)},
            {"master_seed", c.master_seed}}},
          {"table_rows", s.table_rows},
          {"sizes", std::move(sizes)},
          {"overall_mean_difference", opt(s.overall_mean_difference)}};
}

}  // namespace evotab
