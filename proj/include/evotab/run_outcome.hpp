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

// Result of one optimization run plus its audit trail.
//
// JSON audit record (schema_version 1):
//   {
//     "schema_version": 1,
//     "algorithm": "ga" | "random",
//     "initial": [{"chromosome": [6 numbers], "fitness": f}, ...],
//     "events": [ <breed event> | <draw event> ... ],
//     "additions": n, "result_value": n, "cycles": n, "terminated": bool,
//     "winner": {"chromosome": [...], "fitness": f} | null
//   }
// breed event (GA, one per breeding cycle):
//   {"type": "breed", "cycle", "parents": [i, j],
//    "parent_chromosomes": [[...], [...]], "crossover_point": k,
//    "mutation": null | {"member", "gene", "old_value", "new_value",
//                        "old_fitness", "new_fitness", "outcome"},
//    "offspring": [...], "fitness", "disposition",
//    "replaced": i | null, "additions"}
// draw event (random search, one per draw):
//   {"type": "draw", "cycle", "row", "offspring": [...], "fitness",
//    "disposition", "additions"}
// disposition is "added", "rejected_duplicate" or "rejected_invalid".

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "evotab/benchmark_table.hpp"

namespace evotab {

inline constexpr int kAuditSchemaVersion = 1;

enum class Disposition { added, rejected_duplicate, rejected_invalid };

inline const char* to_string(Disposition d) {
  switch (d) {
    case Disposition::added: return "added";
    case Disposition::rejected_duplicate: return "rejected_duplicate";
    case Disposition::rejected_invalid: return "rejected_invalid";
  }
  return "?";
}

enum class MutationOutcome {
  applied,
  // The new chromosome equals another current member's.
  reverted_duplicate_member,
  // The new chromosome is absent from the table while another member
  // already has fitness 0.
  reverted_second_zero,
};

inline const char* to_string(MutationOutcome m) {
  switch (m) {
    case MutationOutcome::applied: return "applied";
    case MutationOutcome::reverted_duplicate_member: return "reverted_duplicate_member";
    case MutationOutcome::reverted_second_zero: return "reverted_second_zero";
  }
  return "?";
}

struct MutationReport {
  bool fired = false;
  std::size_t member = 0;
  std::size_t gene = 0;
  double old_value = 0.0;
  double new_value = 0.0;
  double old_fitness = 0.0;
  double new_fitness = 0.0;
  MutationOutcome outcome = MutationOutcome::applied;

  bool changed_population() const {
    return fired && outcome == MutationOutcome::applied;
  }

  friend bool operator==(const MutationReport&, const MutationReport&) = default;
};

struct BreedEvent {
  std::size_t cycle = 0;
  std::size_t parent1 = 0;
  std::size_t parent2 = 0;
  Chromosome parent1_chromosome{};
  Chromosome parent2_chromosome{};
  std::size_t crossover_point = 0;
  MutationReport mutation;
  Individual offspring;
  Disposition disposition = Disposition::added;
  std::optional<std::size_t> replaced;
  std::size_t additions = 0;

  friend bool operator==(const BreedEvent&, const BreedEvent&) = default;
};

struct DrawEvent {
  std::size_t cycle = 0;
  std::size_t row = 0;
  Individual offspring;
  Disposition disposition = Disposition::added;
  std::size_t additions = 0;

  friend bool operator==(const DrawEvent&, const DrawEvent&) = default;
};

using AuditEvent = std::variant<BreedEvent, DrawEvent>;

struct RunOutcome {
  std::string algorithm;
  std::vector<Individual> initial;
  std::size_t additions = 0;
  std::size_t result_value = 0;
  std::size_t cycles = 0;
  bool terminated = false;
  std::optional<Individual> winner;
  std::vector<AuditEvent> audit;

  std::size_t initial_size() const { return initial.size(); }

  friend bool operator==(const RunOutcome&, const RunOutcome&) = default;
};

/// Thrown when a run exhausts its cycle or draw budget. Carries the partial
/// outcome for diagnostics.
class NonTerminationError : public std::runtime_error {
 public:
  NonTerminationError(const std::string& what, RunOutcome partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}

  const RunOutcome& partial() const noexcept { return partial_; }

 private:
  RunOutcome partial_;
};

inline nlohmann::json chromosome_json(const Chromosome& c) {
  return nlohmann::json(std::vector<double>(c.begin(), c.end()));
}

inline nlohmann::json individual_json(const Individual& ind) {
  return {{"chromosome", chromosome_json(ind.chromosome)},
          {"fitness", ind.fitness}};
}

inline nlohmann::json audit_event_json(const AuditEvent& event) {
  using nlohmann::json;
  if (const auto* b = std::get_if<BreedEvent>(&event)) {
    json mutation = nullptr;
    if (b->mutation.fired)
      mutation = {{"member", b->mutation.member},
                  {"gene", b->mutation.gene},
                  {"old_value", b->mutation.old_value},
                  {"new_value", b->mutation.new_value},
                  {"old_fitness", b->mutation.old_fitness},
                  {"new_fitness", b->mutation.new_fitness},
                  {"outcome", to_string(b->mutation.outcome)}};
    return {{"type", "breed"},
            {"cycle", b->cycle},
            {"parents", {b->parent1, b->parent2}},
            {"parent_chromosomes",
             {chromosome_json(b->parent1_chromosome),
              chromosome_json(b->parent2_chromosome)}},
            {"crossover_point", b->crossover_point},
            {"mutation", mutation},
            {"offspring", chromosome_json(b->offspring.chromosome)},
            {"fitness", b->offspring.fitness},
            {"disposition", to_string(b->disposition)},
            {"replaced", b->replaced ? json(*b->replaced) : json(nullptr)},
            {"additions", b->additions}};
  }
  const auto& d = std::get<DrawEvent>(event);
  return {{"type", "draw"},
          {"cycle", d.cycle},
          {"row", d.row},
          {"offspring", chromosome_json(d.offspring.chromosome)},
          {"fitness", d.offspring.fitness},
          {"disposition", to_string(d.disposition)},
          {"additions", d.additions}};
}

inline nlohmann::json to_json(const RunOutcome& outcome) {
  nlohmann::json initial = nlohmann::json::array();
  for (const auto& ind : outcome.initial) initial.push_back(individual_json(ind));
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : outcome.audit) events.push_back(audit_event_json(e));
  return {{"schema_version", kAuditSchemaVersion},
          {"algorithm", outcome.algorithm},
          {"initial", std::move(initial)},
          {"events", std::move(events)},
          {"additions", outcome.additions},
          {"result_value", outcome.result_value},
          {"cycles", outcome.cycles},
          {"terminated", outcome.terminated},
          {"winner", outcome.winner ? individual_json(*outcome.winner)
                                    : nlohmann::json(nullptr)}};
}

}  // namespace evotab
