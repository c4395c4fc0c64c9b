#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qsearch/graph.hpp"

namespace qsearch {

// Largest integer i >= 1 with d^i < n. Throws InvalidArgument when d <= 1 or
// d >= n.
unsigned effective_exponent(std::size_t n, double d);

// Finite-n stand-ins for the asymptotic regime: d = p n, omega = d / ln n,
// omega_hat = min(sqrt(omega), n / d^i). They only feed tolerances.
struct RegimeParams {
  std::size_t n = 0;
  double p = 0.0;
  double d = 0.0;
  unsigned i = 1;
  double omega = 0.0;
  double omega_hat = 0.0;

  static RegimeParams make(std::size_t n, double p);
};

struct GrowthReport {
  std::size_t sphere = 0;    // |N_i(Z)|
  std::size_t ball = 0;      // |N_<=i(Z)|
  double reference = 0.0;    // d^i |Z|
  double sphere_ratio = 0.0;
  double ball_ratio = 0.0;
};

GrowthReport sphere_growth(const Graph& g, const VertexSet& z, unsigned i, double d);

// At least two vertices at distance >= i+1 from Z, i.e. |N_<=i(Z)| <= n-2.
bool far_pair_exists(const Graph& g, const VertexSet& z, unsigned i);

// X = N_i(x) \ N_<=i(y), Y symmetric, Z = V \ N_<=i({x,y}), R the rest.
struct PairPartition {
  VertexSet x_part;
  VertexSet y_part;
  VertexSet z_part;
  VertexSet r_part;
};

PairPartition pair_partition(const Graph& g, Vertex x, Vertex y, unsigned i);

// Cross-degree statistics over the pair partition: neighbours in R of
// vertices in X u Y u Z, neighbours in Y of X u Z, neighbours in X of Y u Z.
struct CrossDegrees {
  std::size_t max_r_neighbours = 0;
  double mean_r_neighbours = 0.0;
  double min_y_neighbours = 0.0;  // over X u Z
  double mean_y_neighbours = 0.0;
  double min_x_neighbours = 0.0;  // over Y u Z
  double mean_x_neighbours = 0.0;
};

CrossDegrees cross_degrees(const Graph& g, const PairPartition& part);

struct LowerBoundCertificate {
  std::size_t k = 0;        // every sampled 2k-set leaves a far pair
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

// Requires diameter(g) == i + 1 (InvalidArgument otherwise). Each sample is a
// random vertex order; the certificate is the largest k such that, in every
// sample, the first 2k vertices leave two vertices at distance >= i+1.
// Capped at k_max (0 = n / 2).
LowerBoundCertificate lower_bound_certificate(const Graph& g, unsigned i, std::size_t samples,
                                              std::uint64_t seed, std::size_t k_max = 0);

// Fraction of `samples` uniformly random 2k-sets that leave a far pair.
double far_pair_rate(const Graph& g, unsigned i, std::size_t k, std::size_t samples,
                     std::uint64_t seed);

struct NicenessReport {
  std::size_t pairs = 0;
  std::size_t nice_pairs = 0;
  double tolerance = 0.0;
  double worst_exclusive_ratio = 0.0;  // |N_i(x) \ N_<=i(y)| / d^i farthest from 1
  double worst_overlap_ratio = 0.0;    // |N_<=i(x) & N_<=i(y)| / d^i largest

  double rate() const { return pairs == 0 ? 0.0 : double(nice_pairs) / double(pairs); }
};

// Ordered pair (x,y) is nice when |N_i(x) \ N_<=i(y)| / d^i is within
// `tolerance` of 1 and |N_<=i(x) & N_<=i(y)| / d^i <= tolerance.
NicenessReport niceness_check(const Graph& g, unsigned i, double d, std::size_t pairs,
                              double tolerance, std::uint64_t seed);

// One line of an expansion CSV report.
struct CheckRow {
  std::string check;
  std::string params;
  double observed = 0.0;
  double reference = 0.0;
  double ratio = 0.0;
  bool pass = false;
};

// Monte Carlo battery behind `qsearch expand`: sphere growth around single
// vertices, the pair partition, niceness, far pairs after 2k named vertices
// with k = floor(n / (4 d^i) * ln d), and the diameter. A sampled check
// passes when at least `required_rate` of its samples are within tolerance.
struct ExpansionChecks {
  double d = 0.0;
  unsigned i = 1;
  std::size_t samples = 100;
  double growth_tolerance = 0.15;
  double partition_tolerance = 0.2;
  double nice_tolerance = 0.2;
  double required_rate = 0.9;
  std::uint64_t seed = 0;
};

std::vector<CheckRow> run_expansion_checks(const Graph& g, const ExpansionChecks& config);

}  // namespace qsearch
