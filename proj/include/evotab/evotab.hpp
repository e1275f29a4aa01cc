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

// Umbrella header.

#pragma once

#include "evotab/benchmark_table.hpp"
#include "evotab/errors.hpp"
#include "evotab/evaluator.hpp"
#include "evotab/ga_engine.hpp"
#include "evotab/random_search.hpp"
#include "evotab/report.hpp"
#include "evotab/rng.hpp"
#include "evotab/run_outcome.hpp"
#include "evotab/synthetic.hpp"
