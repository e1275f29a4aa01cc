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

// Runs one GA optimization on the built-in synthetic benchmark and prints
// the audit record.

#include <iostream>

#include "evotab/evotab.hpp"

int main() {
  const auto table = evotab::generate_synthetic(evotab::SyntheticSpec{});
  evotab::Rng rng(7);
  const auto initial = evotab::sample_initial_population(
      table, 5, 16.0, evotab::InitialPopulationPolicy::exclude_targets, rng);
  const auto outcome = evotab::run_ga(table, evotab::Population(initial),
                                      evotab::GaConfig{}, rng);
  std::cout << evotab::to_json(outcome).dump(2) << '\n';
  std::cout << "individuals needed: " << outcome.result_value << '\n';
}
