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

#include <cstddef>
#include <string>
#include <utility>

#include "evotab/benchmark_table.hpp"
#include "evotab/errors.hpp"
#include "evotab/ga_engine.hpp"
#include "evotab/rng.hpp"
#include "evotab/run_outcome.hpp"

namespace evotab {

inline std::size_t default_max_draws(const BenchmarkTable& table) {
  return 100 * table.size();
}

/// Random-search baseline: draw uniform rows, skip ones already in the
/// population, append the rest, stop once an appended row reaches `target`.
///
/// The population only grows, so it doubles as the history. Every draw
/// (including rejected ones) counts against `max_draws`; exceeding it
/// throws NonTerminationError.
template <class Engine>
RunOutcome run_random(const BenchmarkTable& table, Population initial,
                      double target, std::size_t max_draws, Engine& rng) {
  if (!(target > 0.0)) throw ConfigError("target must be > 0");
  if (max_draws < 1) throw ConfigError("max_draws must be >= 1");
  detail::require_table_rows(table, initial);

  RunOutcome out;
  out.algorithm = "random";
  out.initial = initial.members();
  out.result_value = initial.size();
  if (initial[initial.fittest()].fitness >= target) {
    out.terminated = true;
    out.winner = initial[initial.fittest()];
    return out;
  }

  Population pop = std::move(initial);
  ChromosomeSet seen;
  for (const auto& m : pop.members()) seen.insert(m.chromosome);

  while (true) {
    if (out.cycles >= max_draws) {
      out.result_value = out.additions + out.initial.size();
      throw NonTerminationError("random search did not reach target " +
                                    std::to_string(target) + " within " +
                                    std::to_string(max_draws) + " draws",
                                std::move(out));
    }
    DrawEvent event;
    event.cycle = out.cycles++;
    event.row = sample_row_index(table, rng);
    event.offspring = table.individual(event.row);
    if (!seen.insert(event.offspring.chromosome).second) {
      event.disposition = Disposition::rejected_duplicate;
      event.additions = out.additions;
      out.audit.emplace_back(std::move(event));
      continue;
    }
    pop.append(event.offspring);
    event.disposition = Disposition::added;
    event.additions = ++out.additions;
    const Individual added = event.offspring;
    out.audit.emplace_back(std::move(event));
    if (added.fitness >= target) {
      out.terminated = true;
      out.winner = added;
      out.result_value = out.additions + out.initial.size();
      return out;
    }
  }
}

template <class Engine>
RunOutcome run_random(const BenchmarkTable& table, Population initial,
                      double target, Engine& rng) {
  return run_random(table, std::move(initial), target, default_max_draws(table), rng);
}

}  // namespace evotab
