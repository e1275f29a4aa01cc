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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"

using namespace evotab;
using evotab::testing::check_ga_invariants;
using evotab::testing::kOtherChromosome;
using evotab::testing::kSampleChromosome;
using evotab::testing::population_with;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fixed(double v, int digits = 3) { return format_fixed(v, digits); }

ExperimentConfig default_experiment() {
  ExperimentConfig cfg;
  cfg.algorithms = AlgorithmSelection::both;
  return cfg;
}

// GA needs fewer individuals than random search on the default benchmark.
Verdict ga_beats_random(const BenchmarkTable& table, const ExperimentSummary& s) {
  int wins = 0;
  std::ostringstream diffs;
  for (const auto& size : s.sizes) {
    if (size.difference && *size.difference > 0.0) ++wins;
    diffs << (diffs.tellp() > 0 ? "," : "") << size.population_size << ":"
          << (size.difference ? fixed(*size.difference) : "n/a");
  }
  const double overall = s.overall_mean_difference.value_or(0.0);
  return {wins >= 4 && overall > 0.0,
          "rows=" + std::to_string(table.size()) + " ga_wins=" + std::to_string(wins) +
              "/5 overall=" + fixed(overall) + " differences=[" + diffs.str() + "]"};
}

Verdict baseline_oracle(const BenchmarkTable& table) {
  ExperimentConfig cfg;
  cfg.algorithms = AlgorithmSelection::random;
  cfg.initial_population_policy = InitialPopulationPolicy::exclude_targets;
  cfg.population_sizes = {5, 25};
  cfg.trials = 1;
  cfg.iterations_per_trial = 10000;
  const auto result = run_experiment(table, cfg);
  const double targets = static_cast<double>(table.count_at_least(cfg.target));
  bool pass = true;
  std::ostringstream detail;
  for (std::size_t size : cfg.population_sizes) {
    double sum = 0.0, sum_sq = 0.0, n = 0.0;
    for (const auto& r : result.records) {
      if (r.population_size != size) continue;
      const double a = static_cast<double>(*r.baseline_additions);
      sum += a;
      sum_sq += a * a;
      n += 1.0;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum_sq / n - mean * mean) / n);
    const double expected = (static_cast<double>(table.size() - size) + 1.0) / (targets + 1.0);
    const double z = (mean - expected) / se;
    pass = pass && std::abs(z) < 3.0;
    detail << "size " << size << ": mean=" << fixed(mean) << " expected=" << fixed(expected)
           << " z=" << fixed(z, 2) << "; ";
  }
  return {pass, detail.str()};
}

Verdict roulette() {
  const auto pop = population_with({10, 25, 15, 5, 45});
  const auto bounds = roulette_ranges(pop);
  const std::vector<double> expected_bounds{10, 35, 50, 55, 100};
  const std::vector<double> p{0.10, 0.25, 0.15, 0.05, 0.45};
  constexpr int kDraws = 100000;
  std::vector<int> counts(p.size());
  Rng rng(derive_seed(kDefaultMasterSeed, 0, 0, 5));
  for (int i = 0; i < kDraws; ++i) ++counts[select_parent(pop, rng)];
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double se = std::sqrt(p[i] * (1 - p[i]) / kDraws);
    worst = std::max(worst, std::abs(counts[i] / double(kDraws) - p[i]) / se);
  }
  const bool exact = bounds == expected_bounds;
  return {exact && worst < 5.0,
          std::string("bounds ") + (exact ? "exact" : "mismatch") +
              " max_z=" + fixed(worst, 2)};
}

// Runs the GA, keeping partial outcomes from budget exhaustion, and replays
// the audit trail.
bool invariant_run(const BenchmarkTable& table, std::size_t size,
                   InitialPopulationPolicy init_policy, InvalidOffspringPolicy policy,
                   std::size_t max_cycles, std::uint64_t seed, std::string& why,
                   int& partial) {
  Rng rng(seed);
  const auto initial = sample_initial_population(table, size, 16.0, init_policy, rng);
  GaConfig cfg;
  cfg.invalid_offspring_policy = policy;
  cfg.max_cycles = max_cycles;
  RunOutcome out;
  try {
    out = run_ga(table, Population(initial), cfg, rng);
  } catch (const NonTerminationError& e) {
    out = e.partial();
    ++partial;
  } catch (const SelectionError&) {
    return true;
  }
  why = check_ga_invariants(table, out, policy);
  return why.empty();
}

Verdict invariants() {
  int runs = 0, failures = 0, partial = 0;
  std::string first;
  auto record = [&](bool ok, const std::string& why, const std::string& where) {
    ++runs;
    if (!ok && failures++ == 0) first = where + ": " + why;
  };
  const InvalidOffspringPolicy policies[] = {InvalidOffspringPolicy::assign_zero,
                                             InvalidOffspringPolicy::reject_retry};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SyntheticSpec spec;
    spec.seed = 1000 + seed;
    const auto table = generate_synthetic(spec);
    for (auto policy : policies) {
      std::string why;
      const bool ok = invariant_run(table, 2 + seed % 24, InitialPopulationPolicy::exclude_targets,
                                    policy, 10000, seed, why, partial);
      record(ok, why, "synthetic seed " + std::to_string(seed));
    }
  }
  for (std::size_t n : {2, 3, 10}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      SyntheticSpec spec;
      spec.rows_to_keep = n;
      spec.target_count = 1;
      spec.seed = 5000 + seed;
      const auto table = generate_synthetic(spec);
      const std::size_t size = 2 + seed % (n - 1);
      const auto init = size < n ? InitialPopulationPolicy::exclude_targets
                                 : InitialPopulationPolicy::allow_targets;
      for (auto policy : policies) {
        std::string why;
        const bool ok = invariant_run(table, size, init, policy, 300, seed, why, partial);
        record(ok, why, "N=" + std::to_string(n) + " seed " + std::to_string(seed));
      }
    }
  }
  return {failures == 0, "runs=" + std::to_string(runs) + " partial=" + std::to_string(partial) +
                             " failures=" + std::to_string(failures) +
                             (first.empty() ? "" : " first: " + first)};
}

Verdict lookup(const BenchmarkTable& table) {
  const auto& schema = table.schema();
  std::size_t found = 0, absent = 0, wrong = 0;
  for (std::size_t i = 0; i < grid_size(schema); ++i) {
    const auto c = grid_point(schema, i);
    const auto row = table.find(c);
    const double f = lookup_fitness(table, c);
    if (row) {
      ++found;
      if (f != table.fitness(*row)) ++wrong;
    } else {
      ++absent;
      if (f != 0.0) ++wrong;
    }
  }
  return {found == 150 && absent == 66 && wrong == 0,
          "grid=" + std::to_string(grid_size(schema)) + " found=" + std::to_string(found) +
              " absent=" + std::to_string(absent) + " wrong=" + std::to_string(wrong)};
}

Verdict determinism(const BenchmarkTable& table, const ExperimentSummary& serial) {
  auto cfg = default_experiment();
  cfg.workers = 4;
  const auto parallel = run_experiment(table, cfg).summary;
  const auto a = to_json(serial).dump(2);
  const auto b = to_json(parallel).dump(2);
  return {a == b, "workers 1 vs 4: " + std::to_string(a.size()) + " bytes, " +
                      (a == b ? "identical" : "different")};
}

Verdict crossover_truth() {
  const Chromosome expected{10000, 4, 256, 2048, 16, 0.001};
  bool pass = crossover_at(kSampleChromosome, kOtherChromosome, 2) == expected;
  for (std::size_t k = 1; k < kGeneCount; ++k) {
    const auto child = crossover_at(kSampleChromosome, kOtherChromosome, k);
    for (std::size_t g = 0; g < kGeneCount; ++g)
      pass = pass && child[g] == (g < k ? kSampleChromosome[g] : kOtherChromosome[g]);
  }
  return {pass, "k=2 -> " + format_chromosome(crossover_at(kSampleChromosome, kOtherChromosome, 2))};
}

}  // namespace

int main() {
  const auto table = generate_synthetic(SyntheticSpec{});
  ExperimentSummary serial;
  bool all = true;
  auto report = [&](int id, const std::function<Verdict()>& check) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    all = all && v.pass;
    std::printf("criterion %d: %s  %s (%.1fs)\n", id, v.pass ? "PASS" : "FAIL",
                v.detail.c_str(), took.count());
    std::fflush(stdout);
  };
  report(1, [&] {
    serial = run_experiment(table, default_experiment()).summary;
    return ga_beats_random(table, serial);
  });
  report(2, [&] { return baseline_oracle(table); });
  report(3, roulette);
  report(4, invariants);
  report(5, [&] { return lookup(table); });
  report(6, [&] { return determinism(table, serial); });
  report(7, crossover_truth);
  return all ? 0 : 1;
}
