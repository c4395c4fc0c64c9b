#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qsearch/game.hpp"
#include "qsearch/graph.hpp"
#include "qsearch/strategies.hpp"

namespace qsearch {

struct StrategyOutcome {
  std::size_t rounds = 0;
  std::size_t budget = 0;
  bool success = false;  // |V_t| = 1 within the budget
  std::vector<std::size_t> candidate_sizes;
  std::uint64_t seed = 0;
};

struct TrialSpec {
  std::string algorithm;
  std::string adversary = "adv-halving";
  QueryKind kind = QueryKind::Pair;
  StrategySpec strategy;
  AdversarySpec adversary_spec;
  std::optional<std::size_t> budget;  // default_budget() when unset
  // Append shortest-path elimination after the budget runs out. Off by
  // default so that success rates reflect the strategy alone.
  bool finish_greedy = false;
};

StrategyOutcome run_trial(const Graph& g, const TrialSpec& spec);

// Runs body(0..count-1) on `jobs` threads (1 = inline).
void parallel_for(std::size_t count, unsigned jobs,
                  const std::function<void(std::size_t)>& body);

// G(n,p) resampled with derived seeds until its diameter equals `diameter`.
Graph sample_gnp_with_diameter(std::size_t n, double p, Distance diameter,
                               std::uint64_t seed, unsigned max_attempts = 50);

struct SimulationRow {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::string algorithm;
  std::string adversary;
  QueryKind kind = QueryKind::Pair;
  std::size_t n = 0;
  std::size_t budget = 0;
  std::size_t rounds = 0;
  bool success = false;
  std::size_t final_candidates = 0;
};

// Graph source for a simulation batch: a fixed graph, or a fresh G(n,p)
// sample per trial (connected, optionally with a required diameter).
struct GraphSource {
  std::optional<Graph> fixed;
  std::size_t n = 0;
  double p = 0.0;
  std::optional<Distance> diameter;
};

struct SimulationConfig {
  GraphSource source;
  TrialSpec trial;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

// Trial t uses seed derive_seed(seed, "trial", t) for its strategy and graph.
// Rows come back sorted by trial regardless of `jobs`.
std::vector<SimulationRow> simulate(const SimulationConfig& config);
void write_simulation_csv(std::ostream& out, const std::vector<SimulationRow>& rows);

// Grid over d = n^xi for the exponent experiment.
struct SweepConfig {
  std::vector<double> xis;
  std::vector<std::size_t> ns;
  std::size_t trials = 1;
  std::string algorithm = "phase-pair";
  std::string adversary = "adv-halving";
  double b = 4.0;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  // Keep querying with shortest-path elimination after the phase budget so
  // that every row records a finite localization time.
  bool finish_greedy = true;
};

struct SweepRow {
  double xi = 0.0;
  std::size_t n = 0;
  double d = 0.0;
  unsigned i = 1;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  std::size_t rounds = 0;
  bool success = false;
};

// Throws InvalidArgument on an empty grid, xi outside (0,1) or trials = 0.
void validate_sweep(const SweepConfig& config);
std::vector<SweepRow> sweep(const SweepConfig& config);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

// Least-squares slope of ln(median rounds) against ln n for each xi.
struct ExponentFit {
  double xi = 0.0;
  unsigned i = 1;
  double slope = 0.0;
  double reference = 0.0;  // 1 - i xi
  std::vector<std::pair<std::size_t, double>> medians;  // (n, median rounds)
};

std::vector<ExponentFit> fit_exponents(const std::vector<SweepRow>& rows);

double median(std::vector<double> values);

}  // namespace qsearch
