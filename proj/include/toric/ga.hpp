#pragma once

/// @file ga.hpp
/// @brief Genetic algorithm over lattice point sets.
///
/// A chromosome is a set V of m distinct lattice points (genes). Fitness is
/// offset + d_approx - |k_C - k| for a new V, and a flat duplicate score for a
/// V that was scored before, in this run or an earlier one.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "toric/field.hpp"
#include "toric/lattice.hpp"
#include "toric/predictor.hpp"

namespace toric {

using Rng = std::mt19937_64;

struct GAConfig {
  unsigned q = 7;
  std::size_t m = 6;
  std::size_t target_k = 6;
  std::size_t population_size = 300;
  std::size_t parents = 200;
  std::size_t elites = 30;
  double mutation_probability = 0.10;
  bool per_gene_mutation = false;
  std::size_t generations = 200;
  std::uint64_t seed = 0;
  double offset = 300.0;
  double duplicate_score = 10.0;
  std::size_t crossover_retries = 20;

  /// Throws Error on an inconsistent configuration.
  void validate() const;
};

/// Flat key=value text, '#' starts a comment. Unknown keys throw ParseError.
GAConfig parse_ga_config(const std::string& text, GAConfig base = {});
GAConfig load_ga_config(const std::string& path, GAConfig base = {});
std::string to_config_text(const GAConfig& config);

class SeenSet {
 public:
  bool contains(const LatticePointSet& v) const { return items_.count(v) != 0; }
  /// True when `v` was not present before.
  bool insert(const LatticePointSet& v) { return items_.insert(v).second; }
  std::size_t size() const noexcept { return items_.size(); }
  const std::set<LatticePointSet>& items() const noexcept { return items_; }

 private:
  std::set<LatticePointSet> items_;
};

struct Evaluation {
  LatticePointSet points;
  std::size_t k = 0;
  double d_approx = 0.0;
  double fitness = 0.0;
};

struct FitnessContext {
  FieldPtr field;
  Predictor* predictor = nullptr;
  std::size_t target_k = 0;
  double offset = 300.0;
  double duplicate_score = 10.0;
  SeenSet seen;
  std::vector<Evaluation> evaluated;  // every predictor-scored V, in order
  std::uint64_t predictor_calls = 0;
};

/// Throws PredictorFailure; `v` is then not marked as seen.
double fitness(const LatticePointSet& v, FitnessContext& ctx);

/// Stochastic universal sampling: `count` indices into `scores`, with
/// multiplicity. Throws EmptyPopulation, or Error on a non-positive score.
std::vector<std::size_t> select_sus(std::span<const double> scores, std::size_t count, Rng& rng);

/// One-point crossover at a gene boundary of the sorted gene lists. nullopt
/// when a child would repeat a lattice point.
std::optional<std::pair<LatticePointSet, LatticePointSet>> crossover(const LatticePointSet& p1,
                                                                     const LatticePointSet& p2, Rng& rng);

/// With `probability` (per chromosome, or per gene when `per_gene` is set)
/// replaces a gene by a uniformly chosen unused point.
LatticePointSet mutate(const LatticePointSet& v, Rng& rng, double probability, bool per_gene = false);

/// Uniform random m-subset of [0, period)^2.
LatticePointSet random_point_set(int period, std::size_t m, Rng& rng);

struct Individual {
  LatticePointSet points;
  std::optional<double> fitness;
};

struct GARunReport {
  std::vector<Evaluation> evaluated;
  std::vector<Individual> final_population;
  std::optional<Individual> best;
  std::size_t generations_run = 0;
  std::optional<std::string> failure;  // set when a predictor failure aborted the run
};

/// Runs the GA, appending to ctx.seen and ctx.evaluated. A predictor failure
/// stops the run and is reported in `failure`.
GARunReport run_ga(const GAConfig& config, FitnessContext& ctx);

/// One JSON object per evaluated code.
void write_report_jsonl(const GARunReport& report, std::ostream& out);

}  // namespace toric
