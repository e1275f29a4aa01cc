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

// evotab: generate synthetic benchmarks, validate datasets, and run paired
// GA-vs-random experiments.
//
// Exit codes: 0 success, 1 runtime failure, 2 invalid flags or dataset.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "evotab/evotab.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Flag-level validation failure; the message starts with the flag name.
struct FlagError {
  std::string message;
};

const std::map<std::string, evotab::ReportFormat> kFormats{
    {"markdown", evotab::ReportFormat::markdown},
    {"csv", evotab::ReportFormat::csv},
    {"json", evotab::ReportFormat::json}};

struct Shared {
  std::string dataset;
  std::optional<std::uint64_t> seed;
  std::string format = "markdown";
  std::size_t workers = 1;
};

void add_shared(CLI::App& cmd, Shared& s, const std::string& dataset_help) {
  cmd.add_option("--dataset", s.dataset, dataset_help);
  cmd.add_option("--format", s.format, "Output format")
      ->check(CLI::IsMember({"markdown", "csv", "json"}))
      ->capture_default_str();
  cmd.add_option("--workers", s.workers, "Worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

evotab::BenchmarkTable load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FlagError{"--dataset: cannot open '" + path + "'"};
  return evotab::load_table(in);
}

void print_violations(const evotab::DatasetError& e) {
  if (const auto* v = dynamic_cast<const evotab::ValidationError*>(&e)) {
    std::cerr << "dataset invalid (" << v->violations().size() << " violation"
              << (v->violations().size() == 1 ? "" : "s") << "):\n";
    for (const auto& line : v->violations()) std::cerr << "  " << line << '\n';
  } else {
    std::cerr << "dataset invalid: " << e.what() << '\n';
  }
}

// ---- generate ----

struct GenerateFlags {
  Shared shared;
  evotab::SyntheticSpec spec;
};

int cmd_generate(GenerateFlags& f) {
  if (f.shared.dataset.empty()) throw FlagError{"--out: output path is required"};
  if (f.shared.seed) f.spec.seed = *f.shared.seed;
  if (auto v = evotab::synthetic_spec_violations(f.spec); !v.empty()) {
    for (const auto& m : v) std::cerr << "invalid generator flags: " << m << '\n';
    return kExitUsage;
  }
  const auto table = evotab::generate_synthetic(f.spec);
  std::ofstream out(f.shared.dataset, std::ios::binary);
  if (out) evotab::save_table(out, table);
  if (!out) {
    std::cerr << "cannot write '" << f.shared.dataset << "'\n";
    return kExitRuntime;
  }
  std::cout << "wrote " << f.shared.dataset << ": rows=" << table.size()
            << ", targets(≥" << evotab::format_gene(f.spec.target_threshold)
            << ")=" << table.count_at_least(f.spec.target_threshold) << '\n';
  return kExitOk;
}

// ---- validate ----

struct ValidateFlags {
  Shared shared;
  double target = 16.0;
};

int cmd_validate(ValidateFlags& f) {
  if (f.shared.dataset.empty()) throw FlagError{"--dataset: path is required"};
  std::optional<evotab::BenchmarkTable> table;
  try {
    table.emplace(load_dataset(f.shared.dataset));
  } catch (const evotab::DatasetError& e) {
    print_violations(e);
    return kExitUsage;
  }
  const auto& t = *table;
  const auto fit = t.fitness_column();
  const auto [lo, hi] = std::minmax_element(fit.begin(), fit.end());
  const std::size_t grid = evotab::grid_size(t.schema());
  const std::size_t targets = t.count_at_least(f.target);

  nlohmann::json pools = nlohmann::json::object();
  for (std::size_t g = 0; g < evotab::kGeneCount; ++g) {
    const auto col = t.gene_column(g);
    std::set<double> values(col.begin(), col.end());
    pools[t.schema()[g].name] = std::vector<double>(values.begin(), values.end());
  }

  const auto format = kFormats.at(f.shared.format);
  if (format == evotab::ReportFormat::json) {
    nlohmann::json j{{"rows", t.size()},
                     {"target", f.target},
                     {"targets", targets},
                     {"grid_size", grid},
                     {"coverage", static_cast<double>(t.size()) / static_cast<double>(grid)},
                     {"fitness_min", *lo},
                     {"fitness_max", *hi},
                     {"pools", pools}};
    std::cout << j.dump(2) << '\n';
    return kExitOk;
  }

  const std::string tgt = evotab::format_gene(f.target);
  std::cout << "rows=" << t.size() << ", targets(≥" << tgt << ")=" << targets
            << ", coverage=" << t.size() << "/" << grid << '\n';
  if (format == evotab::ReportFormat::csv) {
    std::cout << "gene,values\n";
    for (const auto& [name, vals] : pools.items()) {
      std::cout << name << ",";
      for (std::size_t i = 0; i < vals.size(); ++i)
        std::cout << (i ? " " : "") << evotab::format_gene(vals[i].get<double>());
      std::cout << '\n';
    }
    std::cout << "fitness_min," << evotab::format_fitness(*lo) << "\nfitness_max,"
              << evotab::format_fitness(*hi) << '\n';
  } else {
    std::cout << "\n| gene | values |\n|---|---|\n";
    for (std::size_t g = 0; g < evotab::kGeneCount; ++g) {
      const auto& name = t.schema()[g].name;
      std::cout << "| " << name << " |";
      for (const auto& v : pools[name]) std::cout << ' ' << evotab::format_gene(v.get<double>());
      std::cout << " |\n";
    }
    std::cout << "\nfitness: min=" << evotab::format_fitness(*lo)
              << " max=" << evotab::format_fitness(*hi) << '\n';
  }
  return kExitOk;
}

// ---- run ----

struct RunFlags {
  Shared shared;
  std::string algo = "both";
  std::vector<std::size_t> pop_sizes{5, 10, 15, 20, 25};
  std::size_t iterations = 1000;
  std::size_t trials = 3;
  double target = 16.0;
  double mutation_rate = 0.125;
  std::size_t max_cycles = 10000;
  std::string invalid_policy = "assign_zero";
  std::string initial_policy = "allow_targets";
  std::string out_dir = "evotab-out";
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
}

int cmd_run(RunFlags& f) {
  std::optional<evotab::BenchmarkTable> table;
  if (f.shared.dataset.empty()) {
    table.emplace(evotab::generate_synthetic(evotab::SyntheticSpec{}));
  } else {
    try {
      table.emplace(load_dataset(f.shared.dataset));
    } catch (const evotab::DatasetError& e) {
      print_violations(e);
      return kExitUsage;
    }
  }

  evotab::ExperimentConfig config;
  config.algorithms = f.algo == "ga"       ? evotab::AlgorithmSelection::ga
                      : f.algo == "random" ? evotab::AlgorithmSelection::random
                                           : evotab::AlgorithmSelection::both;
  config.population_sizes = f.pop_sizes;
  config.iterations_per_trial = f.iterations;
  config.trials = f.trials;
  config.target = f.target;
  config.ga_config.mutation_rate = f.mutation_rate;
  config.ga_config.max_cycles = f.max_cycles;
  config.ga_config.invalid_offspring_policy =
      f.invalid_policy == "reject_retry" ? evotab::InvalidOffspringPolicy::reject_retry
                                         : evotab::InvalidOffspringPolicy::assign_zero;
  config.initial_population_policy =
      f.initial_policy == "exclude_targets" ? evotab::InitialPopulationPolicy::exclude_targets
                                            : evotab::InitialPopulationPolicy::allow_targets;
  config.master_seed = f.shared.seed.value_or(evotab::kDefaultMasterSeed);
  config.workers = f.shared.workers;

  for (std::size_t s : f.pop_sizes)
    if (s < 2 || s > table->size())
      throw FlagError{"--pop-sizes: " + std::to_string(s) + " is outside [2, " +
                      std::to_string(table->size()) + "] for this dataset"};
  if (config.initial_population_policy == evotab::InitialPopulationPolicy::exclude_targets) {
    const std::size_t eligible = table->size() - table->count_at_least(f.target);
    for (std::size_t s : f.pop_sizes)
      if (s > eligible)
        throw FlagError{"--initial-policy: exclude_targets leaves only " +
                        std::to_string(eligible) + " rows for --pop-sizes " +
                        std::to_string(s)};
  }
  if (config.algorithms != evotab::AlgorithmSelection::random && table->count_at_least(f.target) == 0)
    std::cerr << "warning: no dataset row reaches --target; runs will not terminate\n";

  std::error_code ec;
  fs::create_directories(f.out_dir, ec);
  if (ec) {
    std::cerr << "--out-dir: cannot create '" << f.out_dir << "': " << ec.message() << '\n';
    return kExitRuntime;
  }

  evotab::ExperimentResult result;
  try {
    result = evotab::run_experiment(*table, config);
  } catch (const evotab::ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitUsage;
  } catch (const evotab::ExperimentError& e) {
    std::cerr << "experiment aborted at " << e.what() << '\n';
    return kExitRuntime;
  }

  const auto format = kFormats.at(f.shared.format);
  const std::string report = evotab::render_report(result.summary, format);
  const fs::path dir(f.out_dir);
  std::ostringstream jsonl;
  evotab::write_records(jsonl, result.records);
  write_file(dir / "results.jsonl", jsonl.str());
  write_file(dir / "summary.json", evotab::to_json(result.summary).dump(2) + "\n");
  const char* ext = format == evotab::ReportFormat::markdown ? "md"
                    : format == evotab::ReportFormat::csv    ? "csv"
                                                             : "json";
  write_file(dir / (std::string("report.") + ext), report);
  std::cout << report;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evotab: steady-state GA vs. random search on tabular "
               "hyperparameter benchmarks"};
  app.require_subcommand(1);

  GenerateFlags gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic benchmark CSV");
  add_shared(*generate, gen.shared, "Output CSV path (alias of --out)");
  generate->add_option("--out", gen.shared.dataset, "Output CSV path");
  generate->add_option("--seed", gen.shared.seed, "Generator seed (default 1)");
  generate->add_option("--rows", gen.spec.rows_to_keep, "Grid points to keep")->capture_default_str();
  generate->add_option("--targets", gen.spec.target_count, "Rows at/above --threshold")->capture_default_str();
  generate->add_option("--threshold", gen.spec.target_threshold, "Target fitness threshold")->capture_default_str();
  generate->add_option("--fitness-min", gen.spec.fitness_min, "Lowest BLEU")->capture_default_str();
  generate->add_option("--fitness-max", gen.spec.fitness_max, "Highest BLEU")->capture_default_str();

  ValidateFlags val;
  auto* validate = app.add_subcommand("validate", "Check a benchmark CSV and summarize it");
  add_shared(*validate, val.shared, "Benchmark CSV to check");
  validate->add_option("--seed", val.shared.seed, "Unused; accepted for symmetry");
  validate->add_option("--target", val.target, "Target threshold for the row count")->capture_default_str();

  RunFlags run;
  auto* runcmd = app.add_subcommand("run", "Run paired GA/random-search experiments");
  add_shared(*runcmd, run.shared,
             "Benchmark CSV (default: built-in 150-row synthetic benchmark, seed 1)");
  runcmd->add_option("--seed", run.shared.seed, "Master seed (default 1)")->envname("EVOTAB_SEED");
  runcmd->add_option("--algo", run.algo, "Which optimizers to run")
      ->check(CLI::IsMember({"ga", "random", "both"}))
      ->capture_default_str();
  runcmd->add_option("--pop-sizes", run.pop_sizes, "Comma-separated initial population sizes")
      ->delimiter(',')
      ->capture_default_str();
  runcmd->add_option("--iterations", run.iterations, "Iterations per trial")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  runcmd->add_option("--trials", run.trials, "Trials per population size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  runcmd->add_option("--target", run.target, "Target BLEU")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  runcmd->add_option("--mutation-rate", run.mutation_rate, "Per-cycle mutation probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  runcmd->add_option("--max-cycles", run.max_cycles, "GA breeding-cycle cap per run")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  runcmd->add_option("--invalid-policy", run.invalid_policy,
                     "Offspring absent from the table: add with fitness 0, or discard")
      ->check(CLI::IsMember({"assign_zero", "reject_retry"}))
      ->capture_default_str();
  runcmd->add_option("--initial-policy", run.initial_policy,
                     "Whether initial populations may contain target rows")
      ->check(CLI::IsMember({"allow_targets", "exclude_targets"}))
      ->capture_default_str();
  runcmd->add_option("--out-dir", run.out_dir, "Directory for results.jsonl, summary.json, report.*")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*generate) return cmd_generate(gen);
    if (*validate) return cmd_validate(val);
    return cmd_run(run);
  } catch (const FlagError& e) {
    std::cerr << e.message << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
