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
 * @file ga_engine.hpp
 * @brief Steady-state genetic algorithm over a BenchmarkTable.
 *
 * One breeding cycle: roulette selection of two distinct parents, one-point
 * crossover into a scratch offspring, a population mutation with
 * probability mutation_rate, then a validity check. A valid offspring
 * replaces the weakest member. The run stops when an added offspring
 * reaches the target fitness.
 *
 * The result of a run is the number of offspring added plus the initial
 * population size.
 */

#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "evotab/benchmark_table.hpp"
#include "evotab/errors.hpp"
#include "evotab/rng.hpp"
#include "evotab/run_outcome.hpp"

namespace evotab {

using ChromosomeSet = std::unordered_set<Chromosome, ChromosomeHash>;

/// Ordered members plus cached indices of the two fittest.
///
/// Fittest/second-fittest and weakest break ties toward the lower index.
class Population {
 public:
  /// Throws ContractViolation if empty, if fitness is negative, or if two
  /// members share a chromosome.
  explicit Population(std::vector<Individual> members)
      : members_(std::move(members)) {
    if (members_.empty()) throw ContractViolation("population must be non-empty");
    ChromosomeSet seen;
    for (const auto& m : members_) {
      if (!(m.fitness >= 0.0))
        throw ContractViolation("member fitness must be >= 0");
      if (!seen.insert(m.chromosome).second)
        throw ContractViolation("duplicate chromosome " +
                                format_chromosome(m.chromosome) +
                                " in population");
    }
    refresh();
  }

  std::size_t size() const noexcept { return members_.size(); }
  const std::vector<Individual>& members() const noexcept { return members_; }
  const Individual& operator[](std::size_t i) const { return members_.at(i); }

  std::size_t fittest() const noexcept { return fittest_; }
  std::size_t second_fittest() const noexcept { return second_; }

  std::size_t weakest() const {
    std::size_t w = 0;
    for (std::size_t i = 1; i < members_.size(); ++i)
      if (members_[i].fitness < members_[w].fitness) w = i;
    return w;
  }

  double total_fitness() const {
    double t = 0.0;
    for (const auto& m : members_) t += m.fitness;
    return t;
  }

  std::size_t positive_count() const {
    return static_cast<std::size_t>(
        std::count_if(members_.begin(), members_.end(),
                      [](const Individual& m) { return m.fitness > 0.0; }));
  }

  bool contains(const Chromosome& c) const {
    return std::any_of(members_.begin(), members_.end(),
                       [&](const Individual& m) { return m.chromosome == c; });
  }

  /// Overwrites member i. The caller is responsible for uniqueness.
  void set(std::size_t i, Individual ind) {
    members_.at(i) = std::move(ind);
    refresh();
  }

  /// Appends a member (random search grows its population).
  void append(Individual ind) {
    members_.push_back(std::move(ind));
    refresh();
  }

 private:
  void refresh() {
    fittest_ = 0;
    for (std::size_t i = 1; i < members_.size(); ++i)
      if (members_[i].fitness > members_[fittest_].fitness) fittest_ = i;
    second_ = fittest_;
    for (std::size_t i = 0; i < members_.size(); ++i) {
      if (i == fittest_) continue;
      if (second_ == fittest_ || members_[i].fitness > members_[second_].fitness)
        second_ = i;
    }
  }

  std::vector<Individual> members_;
  std::size_t fittest_ = 0;
  std::size_t second_ = 0;
};

enum class InvalidOffspringPolicy {
  // Absent offspring join with fitness 0 and are counted as added.
  assign_zero,
  // Absent offspring are discarded (but remembered, so never retried).
  reject_retry,
};

inline const char* to_string(InvalidOffspringPolicy p) {
  return p == InvalidOffspringPolicy::assign_zero ? "assign_zero" : "reject_retry";
}

struct GaConfig {
  double mutation_rate = 0.125;
  double target = 16.0;
  InvalidOffspringPolicy invalid_offspring_policy = InvalidOffspringPolicy::assign_zero;
  std::size_t max_cycles = 10000;

  void validate() const {
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0))
      throw ConfigError("mutation_rate must be in [0, 1]");
    if (!(target > 0.0)) throw ConfigError("target must be > 0");
    if (max_cycles < 1) throw ConfigError("max_cycles must be >= 1");
  }
};

/// Mutable state of one GA run.
struct GaState {
  explicit GaState(Population initial)
      : population(std::move(initial)), initial_size(population.size()) {
    for (const auto& m : population.members()) history.insert(m.chromosome);
  }

  Population population;
  // Initial members plus every offspring that was added (or, under
  // reject_retry, discarded as absent). Never shrinks.
  ChromosomeSet history;
  // Offspring under construction; all-zero until the first crossover.
  Individual placeholder{};
  std::size_t additions = 0;
  std::size_t initial_size = 0;
};

/// Cumulative selection bounds, scaled so the last bound equals `scale`
/// exactly. Throws SelectionError when total fitness is not positive.
inline std::vector<double> roulette_ranges(const Population& population,
                                           double scale = 100.0) {
  const double total = population.total_fitness();
  if (!(total > 0.0))
    throw SelectionError("cannot select from a population with zero total fitness");
  std::vector<double> bounds;
  bounds.reserve(population.size());
  double cumulative = 0.0;
  for (const auto& m : population.members()) {
    cumulative += m.fitness;
    bounds.push_back(cumulative * scale / total);
  }
  bounds.back() = scale;
  return bounds;
}

/// Fitness-proportional draw. Member i wins when bound[i-1] <= u < bound[i].
template <class Engine>
std::size_t select_parent(const Population& population, Engine& rng) {
  const auto bounds = roulette_ranges(population);
  const double u = uniform_unit(rng) * bounds.back();
  const auto it = std::upper_bound(bounds.begin(), bounds.end(), u);
  return static_cast<std::size_t>(it - bounds.begin());
}

struct ParentPair {
  std::size_t first = 0;   // fitter parent, contributes the leading genes
  std::size_t second = 0;
};

inline constexpr int kParentResampleLimit = 64;

/// Two distinct members, fitter first (ties: lower index first).
template <class Engine>
ParentPair select_parents(const Population& population, Engine& rng) {
  if (population.positive_count() < 2)
    throw SelectionError("need at least two members with positive fitness");
  const std::size_t a = select_parent(population, rng);
  std::size_t b = a;
  for (int attempt = 0; attempt < kParentResampleLimit && b == a; ++attempt)
    b = select_parent(population, rng);
  if (b == a) {
    b = a == 0 ? 1 : 0;
    for (std::size_t i = 0; i < population.size(); ++i)
      if (i != a && population[i].fitness > population[b].fitness) b = i;
  }
  const auto& pa = population[a];
  const auto& pb = population[b];
  const bool a_first = pa.fitness > pb.fitness || (pa.fitness == pb.fitness && a < b);
  return a_first ? ParentPair{a, b} : ParentPair{b, a};
}

/// Cut point in [1, kGeneCount - 1], so both parents contribute.
template <class Engine>
std::size_t draw_crossover_point(Engine& rng) {
  return 1 + uniform_index(rng, kGeneCount - 1);
}

/// Genes [0, point) from `first`, [point, end) from `second`.
inline Chromosome crossover_at(const Chromosome& first, const Chromosome& second,
                               std::size_t point) {
  if (point > kGeneCount) throw ContractViolation("crossover point out of range");
  Chromosome child = second;
  std::copy_n(first.begin(), point, child.begin());
  return child;
}

template <class Engine>
Chromosome crossover(const Individual& first, const Individual& second,
                     Engine& rng) {
  return crossover_at(first.chromosome, second.chromosome,
                      draw_crossover_point(rng));
}

inline Individual evaluate_offspring(const BenchmarkTable& table,
                                     const Chromosome& c) {
  return {c, lookup_fitness(table, c)};
}

/// With probability config.mutation_rate, resets one random gene of one
/// random member (never the weakest) to a random pool value and
/// re-evaluates it.
///
/// The change is undone if it would give two members the same chromosome or
/// a second fitness-0 member; the report says so. Never touches additions
/// or history.
template <class Engine>
MutationReport mutate(GaState& state, const BenchmarkTable& table,
                      const GaConfig& config, Engine& rng) {
  Population& pop = state.population;
  if (pop.size() < 2) throw ContractViolation("mutation needs at least two members");

  MutationReport report;
  if (!bernoulli(rng, config.mutation_rate)) return report;
  report.fired = true;

  const std::size_t weakest = pop.weakest();
  std::size_t member = uniform_index(rng, pop.size() - 1);
  if (member >= weakest) ++member;
  report.member = member;
  report.gene = uniform_index(rng, kGeneCount);
  report.new_value = random_pool_value(table, report.gene, rng);

  const Individual& before = pop[member];
  report.old_value = before.chromosome[report.gene];
  report.old_fitness = before.fitness;

  Chromosome mutated = before.chromosome;
  mutated[report.gene] = report.new_value;
  report.new_fitness = lookup_fitness(table, mutated);

  if (mutated != before.chromosome && pop.contains(mutated)) {
    report.outcome = MutationOutcome::reverted_duplicate_member;
  } else if (report.new_fitness == 0.0 && pop[weakest].fitness == 0.0) {
    report.outcome = MutationOutcome::reverted_second_zero;
  } else {
    pop.set(member, Individual{mutated, report.new_fitness});
  }
  return report;
}

/// Swaps the weakest member for `offspring` in place and returns the slot.
/// Throws ContractViolation if the offspring duplicates a member.
inline std::size_t replace_weakest(Population& population, Individual offspring) {
  if (population.contains(offspring.chromosome))
    throw ContractViolation("offspring " + format_chromosome(offspring.chromosome) +
                            " duplicates a current member");
  const std::size_t slot = population.weakest();
  population.set(slot, std::move(offspring));
  return slot;
}

namespace detail {

inline void require_table_rows(const BenchmarkTable& table,
                               const Population& initial) {
  for (const auto& m : initial.members()) {
    const auto row = table.find(m.chromosome);
    if (!row || table.fitness(*row) != m.fitness)
      throw ContractViolation("initial member " + format_chromosome(m.chromosome) +
                              " is not a row of the table");
  }
}

}  // namespace detail

/// Runs the GA until an added offspring reaches config.target.
///
/// Throws NonTerminationError (with the partial outcome) after
/// config.max_cycles breeding cycles, and SelectionError when the initial
/// population has fewer than two members and none meets the target.
template <class Engine>
RunOutcome run_ga(const BenchmarkTable& table, Population initial,
                  const GaConfig& config, Engine& rng) {
  config.validate();
  detail::require_table_rows(table, initial);

  RunOutcome out;
  out.algorithm = "ga";
  out.initial = initial.members();
  out.result_value = initial.size();

  if (initial[initial.fittest()].fitness >= config.target) {
    out.terminated = true;
    out.winner = initial[initial.fittest()];
    return out;
  }
  if (initial.positive_count() < 2)
    throw SelectionError("GA needs at least two initial members with positive fitness");

  GaState state(std::move(initial));
  Population& pop = state.population;

  while (true) {
    if (out.cycles >= config.max_cycles) {
      out.additions = state.additions;
      out.result_value = state.additions + state.initial_size;
      throw NonTerminationError(
          "GA did not reach target " + std::to_string(config.target) + " within " +
              std::to_string(config.max_cycles) + " cycles",
          std::move(out));
    }
    BreedEvent event;
    event.cycle = out.cycles++;

    // A size-2 population can hold one positive member and one fitness-0
    // offspring; roulette cannot pick a distinct pair then, so the zero
    // member is paired with the positive one.
    ParentPair parents;
    if (pop.positive_count() >= 2) {
      parents = select_parents(pop, rng);
    } else {
      parents = {pop.fittest(), pop.second_fittest()};
    }
    event.parent1 = parents.first;
    event.parent2 = parents.second;
    event.parent1_chromosome = pop[parents.first].chromosome;
    event.parent2_chromosome = pop[parents.second].chromosome;

    event.crossover_point = draw_crossover_point(rng);
    state.placeholder.chromosome = crossover_at(
        event.parent1_chromosome, event.parent2_chromosome, event.crossover_point);

    event.mutation = mutate(state, table, config, rng);

    state.placeholder = evaluate_offspring(table, state.placeholder.chromosome);
    event.offspring = state.placeholder;

    if (state.history.contains(state.placeholder.chromosome) ||
        pop.contains(state.placeholder.chromosome)) {
      event.disposition = Disposition::rejected_duplicate;
    } else if (state.placeholder.fitness == 0.0 &&
               config.invalid_offspring_policy == InvalidOffspringPolicy::reject_retry) {
      state.history.insert(state.placeholder.chromosome);
      event.disposition = Disposition::rejected_invalid;
    } else {
      event.replaced = replace_weakest(pop, state.placeholder);
      state.history.insert(state.placeholder.chromosome);
      ++state.additions;
      event.disposition = Disposition::added;
    }
    event.additions = state.additions;
    const bool reached = event.disposition == Disposition::added &&
                         state.placeholder.fitness >= config.target;
    out.audit.emplace_back(std::move(event));

    if (reached) {
      out.terminated = true;
      out.winner = state.placeholder;
      out.additions = state.additions;
      out.result_value = state.additions + state.initial_size;
      return out;
    }
  }
}

}  // namespace evotab
