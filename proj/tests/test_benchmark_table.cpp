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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "test_support.hpp"

using namespace evotab;
using evotab::testing::kOtherChromosome;
using evotab::testing::kSampleChromosome;
using evotab::testing::load_csv;
using evotab::testing::make_table;

namespace {
const std::string kHeader = std::string(kCsvHeader) + "\n";
}

TEST_CASE("load_table reads a single sample row", "[benchmark_table]") {
  auto t = load_csv(kHeader + "10000,4,512,1024,8,0.0006,16.41\n");
  REQUIRE(t.size() == 1);
  CHECK(t.fitness(0) == 16.41);
  CHECK(t.chromosome(0) == kSampleChromosome);
  CHECK(t.gene_column(5)[0] == 0.0006);
}

TEST_CASE("load_table preserves row order and tolerates CRLF", "[benchmark_table]") {
  auto t = load_csv(kHeader + "30000,2,256,2048,16,0.001,9.86\r\n10000,4,512,1024,8,0.0006,16.41\r\n\n");
  REQUIRE(t.size() == 2);
  CHECK(t.chromosome(0) == kOtherChromosome);
  CHECK(t.fitness(1) == 16.41);
}

TEST_CASE("load_table rejects a header-only file", "[benchmark_table]") {
  CHECK_THROWS_AS(load_csv(kHeader), ValidationError);
  CHECK_THROWS_AS(load_csv(""), ParseError);
}

TEST_CASE("load_table reports malformed rows with their line number", "[benchmark_table]") {
  try {
    load_csv(kHeader + "10000,4,512,1024,8,0.0006,16.41\n10000,4,512,abc,8,0.0006,12\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(load_csv(kHeader + "10000,4,512,1024,8,16.41\n"), ParseError);
  CHECK_THROWS_AS(load_csv(kHeader + "10000,4,512,1024,8,0.0006,16.41,1\n"), ParseError);
  CHECK_THROWS_AS(load_csv("bpe,layers\n10000,4\n"), ParseError);
}

TEST_CASE("load_table flags duplicates naming both lines", "[benchmark_table]") {
  try {
    load_csv(kHeader + "10000,4,512,1024,8,0.0006,16.41\n30000,2,256,2048,16,0.001,12\n"
                       "10000,4,512,1024,8,0.0006,11.2\n");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    REQUIRE(e.violations().size() == 1);
    CHECK_THAT(e.violations()[0], Catch::Matchers::ContainsSubstring("line 4") &&
                                      Catch::Matchers::ContainsSubstring("line 2"));
  }
}

TEST_CASE("load_table rejects out-of-pool genes and non-positive fitness", "[benchmark_table]") {
  CHECK_THROWS_AS(load_csv(kHeader + "20000,4,512,1024,8,0.0006,16.41\n"), ValidationError);
  CHECK_THROWS_AS(load_csv(kHeader + "10000,4,512,1024,8,0.0006,0\n"), ValidationError);
  CHECK_THROWS_AS(load_csv(kHeader + "10000,4,512,1024,8,0.0006,-1\n"), ValidationError);
  CHECK_THROWS_AS(load_csv(kHeader + "10000,4,512,1024,8,0.0006,nan\n"), ValidationError);
}

TEST_CASE("validation collects every violation", "[benchmark_table]") {
  try {
    load_csv(kHeader + "20000,4,512,1024,8,0.0006,16.41\n10000,4,512,1024,8,0.0006,0\n");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.violations().size() == 2);
  }
}

TEST_CASE("lookup_fitness returns stored fitness or exactly 0", "[benchmark_table]") {
  auto t = make_table({{kSampleChromosome, 16.41}, {kOtherChromosome, 12.0}});
  CHECK(lookup_fitness(t, kSampleChromosome) == 16.41);
  CHECK(lookup_fitness(t, kOtherChromosome) == 12.0);
  Chromosome absent = kSampleChromosome;
  absent[4] = 16;  // every gene in its pool, combination not a row
  CHECK(lookup_fitness(t, absent) == 0.0);
  CHECK(lookup_fitness(t, Chromosome{}) == 0.0);

  auto single = make_table({{kOtherChromosome, 9.86}});
  CHECK(lookup_fitness(single, kOtherChromosome) == 9.86);
}

TEST_CASE("lookup soundness over the whole grid", "[benchmark_table][property]") {
  for (std::uint64_t seed : {1, 2, 3, 99}) {
    SyntheticSpec spec;
    spec.seed = seed;
    auto t = generate_synthetic(spec);
    std::size_t hits = 0;
    for (std::size_t p = 0; p < grid_size(t.schema()); ++p) {
      const auto c = grid_point(t.schema(), p);
      const auto row = t.find(c);
      if (row) {
        ++hits;
        CHECK(lookup_fitness(t, c) == t.fitness(*row));
      } else {
        CHECK(lookup_fitness(t, c) == 0.0);
      }
    }
    CHECK(hits == t.size());
  }
}

TEST_CASE("sample_row is uniform over rows", "[benchmark_table][statistical]") {
  auto t = generate_synthetic(SyntheticSpec{});
  REQUIRE(t.size() == 150);
  Rng rng(12345);
  constexpr int kDraws = 100000;
  std::vector<int> counts(t.size());
  for (int i = 0; i < kDraws; ++i) {
    const auto row = sample_row_index(t, rng);
    ++counts.at(row);
  }
  // Binomial(kDraws, 1/150) per index.
  const double p = 1.0 / 150.0;
  const double expected = kDraws * p;
  const double sd = std::sqrt(kDraws * p * (1 - p));
  for (int c : counts) CHECK(std::abs(c - expected) < 5 * sd);

  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) CHECK(sample_row(t, a) == sample_row(t, b));

  auto single = make_table({{kSampleChromosome, 16.41}});
  Rng r(1);
  for (int i = 0; i < 20; ++i) CHECK(sample_row(single, r).fitness == 16.41);
}

TEST_CASE("sample_row individual matches the table row", "[benchmark_table]") {
  auto t = generate_synthetic(SyntheticSpec{});
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto ind = sample_row(t, rng);
    CHECK(lookup_fitness(t, ind.chromosome) == ind.fitness);
  }
}

TEST_CASE("random_pool_value draws from the gene's pool", "[benchmark_table]") {
  auto t = make_table({{kSampleChromosome, 16.41}});
  Rng rng(9);
  std::set<double> layers, lr;
  for (int i = 0; i < 500; ++i) {
    layers.insert(random_pool_value(t, 1, rng));
    lr.insert(random_pool_value(t, 5, rng));
  }
  CHECK(layers == std::set<double>{2, 4});
  CHECK(lr == std::set<double>{0.0003, 0.0006, 0.001});

  auto schema = default_schema();
  schema[2].pool = {512};
  BenchmarkTable narrow(schema, {Chromosome{10000, 4, 512, 1024, 8, 0.0006}}, {14.0});
  for (int i = 0; i < 20; ++i) CHECK(random_pool_value(narrow, 2, rng) == 512);
}

TEST_CASE("save_table writes the canonical format", "[benchmark_table]") {
  auto t = make_table({{kSampleChromosome, 16.41}, {kOtherChromosome, 9.8}});
  std::ostringstream out;
  save_table(out, t);
  CHECK(out.str() == kHeader + "10000,4,512,1024,8,0.0006,16.41\n"
                               "30000,2,256,2048,16,0.001,9.80\n");
}

TEST_CASE("save(load(f)) reproduces canonical files", "[benchmark_table][property]") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SyntheticSpec spec;
    spec.seed = seed;
    std::ostringstream first;
    save_table(first, generate_synthetic(spec));
    std::istringstream in(first.str());
    auto loaded = load_table(in);
    std::ostringstream second;
    save_table(second, loaded);
    CHECK(first.str() == second.str());
    CHECK(loaded == generate_synthetic(spec));
  }
}

TEST_CASE("schema violations are reported", "[benchmark_table]") {
  auto schema = default_schema();
  CHECK(schema_violations(schema).empty());
  CHECK(grid_size(schema) == 216);
  schema[0].pool = {};
  schema[1].pool = {2, 2};
  CHECK(schema_violations(schema).size() == 2);
}
