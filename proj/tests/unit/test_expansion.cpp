#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qsearch/error.hpp"
#include "qsearch/expansion.hpp"
#include "qsearch/experiment.hpp"

using namespace qsearch;

namespace {

// P(lo <= Bin(trials, q) <= hi), summed in log space.
double binomial_mass(std::size_t trials, double q, double lo, double hi) {
  double total = 0.0;
  const double nt = static_cast<double>(trials);
  for (std::size_t j = 0; j <= trials; ++j) {
    const double x = static_cast<double>(j);
    if (x < lo || x > hi) continue;
    total += std::exp(std::lgamma(nt + 1) - std::lgamma(x + 1) - std::lgamma(nt - x + 1) +
                      x * std::log(q) + (nt - x) * std::log1p(-q));
  }
  return total;
}

// Observed rate over `samples` draws agrees with probability `expect` within
// four binomial standard deviations.
void check_rate(double observed, double expect, std::size_t samples) {
  const double sd = std::sqrt(expect * (1 - expect) / static_cast<double>(samples));
  CAPTURE(observed);
  CAPTURE(expect);
  CHECK(std::abs(observed - expect) <= 4 * sd + 1e-9);
}

}  // namespace

TEST_CASE("effective exponent") {
  CHECK(effective_exponent(2000, 204) == 1);
  CHECK(effective_exponent(1000000, 50) == 3);
  CHECK(effective_exponent(3000, 16) == 2);
  CHECK_THROWS_AS(effective_exponent(100, 100), InvalidArgument);
  CHECK_THROWS_AS(effective_exponent(100, 1.0), InvalidArgument);
  for (std::size_t n : {50UL, 1000UL, 123456UL}) {
    unsigned prev = 1000;
    for (double d = 1.5; d < static_cast<double>(n); d *= 1.3) {
      const unsigned i = effective_exponent(n, d);
      CHECK(i >= 1);
      CHECK(i <= prev);
      CHECK(std::pow(d, i) < static_cast<double>(n));
      CHECK(std::pow(d, i + 1) >= static_cast<double>(n));
      prev = i;
    }
  }
  const RegimeParams r = RegimeParams::make(2000, 0.102);
  CHECK(r.d == doctest::Approx(204));
  CHECK(r.i == 1);
  CHECK(r.omega == doctest::Approx(204 / std::log(2000.0)));
  CHECK(r.omega_hat == doctest::Approx(std::min(std::sqrt(r.omega), 2000 / 204.0)));
}

TEST_CASE("sphere growth") {
  const Graph k = make_complete(9);
  const GrowthReport one = sphere_growth(k, VertexSet(9, {4}), 1, 8.0);
  CHECK(one.sphere == 8);
  CHECK(one.ball == 9);
  CHECK(one.sphere_ratio == doctest::Approx(1.0));
  const Graph p = make_path(7);
  const GrowthReport whole = sphere_growth(p, VertexSet::full(7), 0, 2.0);
  CHECK(whole.ball == 7);
  CHECK(sphere_growth(p, VertexSet(7, {0}), 2, 2.0).sphere == 1);
}

TEST_CASE("sphere growth on G(5000, 0.02) follows the binomial degree law") {
  // |N_1(v)| ~ Bin(4999, 0.02) against d = 100.
  const Graph g = sample_gnp({5000, 0.02, 31});
  const std::size_t samples = 100;
  std::size_t within = 0;
  double mean = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const auto v = static_cast<Vertex>(Rng(derive_seed(31, "z", s)).below(5000));
    const GrowthReport r = sphere_growth(g, VertexSet(5000, {v}), 1, 100.0);
    mean += r.sphere_ratio / samples;
    within += std::abs(r.sphere_ratio - 1.0) <= 0.15;
  }
  CHECK(mean == doctest::Approx(1.0).epsilon(0.03));
  check_rate(double(within) / samples, binomial_mass(4999, 0.02, 85, 115), samples);
}

TEST_CASE("far pairs") {
  const Graph k = make_complete(6);
  CHECK_FALSE(far_pair_exists(k, VertexSet(6, {2}), 1));
  const Graph p = make_path(8);
  CHECK_FALSE(far_pair_exists(p, VertexSet::full(8), 1));
  CHECK(far_pair_exists(p, VertexSet(8, {0}), 1));
  CHECK(far_pair_exists(p, VertexSet(8, {0, 6}), 1));
  CHECK_FALSE(far_pair_exists(p, VertexSet(8, {1, 4, 6}), 1));

  const std::size_t n = 3000;
  const double d = 150;
  const Graph g = sample_gnp({n, d / n, 8});
  const auto z = static_cast<std::size_t>(std::floor(n / d * std::log(d) / 2));
  std::size_t hits = 0;
  for (std::size_t t = 0; t < 100; ++t) {
    Rng rng(derive_seed(8, "far", t));
    VertexSet set(n);
    while (set.size() < z) set.insert(static_cast<Vertex>(rng.below(n)));
    hits += far_pair_exists(g, set, 1);
  }
  CHECK(hits >= 95);
}

TEST_CASE("pair partition") {
  const Graph k = make_complete(6);
  const PairPartition kp = pair_partition(k, 0, 1, 1);
  CHECK(kp.z_part.empty());
  CHECK(kp.x_part.empty());
  CHECK(kp.r_part.size() == 6);

  for (std::uint64_t s = 0; s < 30; ++s) {
    const Graph g = oracle::random_connected(derive_seed(14, "pp", s), 3, 40);
    const auto fw = oracle::floyd_warshall(g);
    const std::size_t n = g.order();
    for (unsigned i = 1; i <= 3; ++i) {
      const Vertex x = 0, y = static_cast<Vertex>(n - 1);
      const PairPartition p = pair_partition(g, x, y, i);
      CHECK((p.x_part | p.y_part | p.z_part | p.r_part) == VertexSet::full(n));
      CHECK(p.x_part.size() + p.y_part.size() + p.z_part.size() + p.r_part.size() == n);
      for (Vertex v = 0; v < n; ++v) {
        const int dx = fw[x][v], dy = fw[y][v];
        const int ii = static_cast<int>(i);
        CHECK(p.x_part.contains(v) == (dx == ii && dy > ii));
        CHECK(p.y_part.contains(v) == (dy == ii && dx > ii));
        CHECK(p.z_part.contains(v) == (dx > ii && dy > ii));
      }
    }
  }
  CHECK_THROWS_AS(pair_partition(k, 2, 2, 1), InvalidArgument);
}

TEST_CASE("dense pair partition") {
  // |X| ~ Bin(n-2, p(1-p)) with mean 249.5 against p(1-p)n = 250.
  const Graph g = sample_gnp({1000, 0.5, 77});
  std::size_t within = 0;
  for (std::size_t s = 0; s < 100; ++s) {
    Rng rng(derive_seed(77, "pair", s));
    const auto x = static_cast<Vertex>(rng.below(1000));
    auto y = static_cast<Vertex>(rng.below(999));
    if (y >= x) ++y;
    const PairPartition p = pair_partition(g, x, y, 1);
    within += std::abs(static_cast<double>(p.x_part.size()) / 250.0 - 1.0) <= 0.15;
  }
  check_rate(within / 100.0, binomial_mass(998, 0.25, 212.5, 287.5), 100);
  CHECK(within >= 90);
}

TEST_CASE("regime ensemble on G(2000, 204/2000)") {
  const Graph g = sample_gnp_with_diameter(2000, 0.102, 2, 5);
  CHECK(diameter(g) == 2);

  SUBCASE("distance classes when the diameter is i + 1") {
    for (std::size_t s = 0; s < 20; ++s) {
      Rng rng(derive_seed(5, "cls", s));
      const auto x = static_cast<Vertex>(rng.below(2000));
      const auto y = static_cast<Vertex>((x + 1 + rng.below(1999)) % 2000);
      const PairPartition p = pair_partition(g, x, y, 1);
      p.x_part.for_each([&](Vertex v) {
        CHECK(g.distance(x, v) == 1);
        CHECK(g.distance(y, v) == 2);
      });
      p.z_part.for_each([&](Vertex v) {
        CHECK(g.distance(x, v) == 2);
        CHECK(g.distance(y, v) == 2);
      });
      const CrossDegrees c = cross_degrees(g, p);
      CHECK(c.mean_y_neighbours > 0);
      CHECK(c.mean_r_neighbours <= c.mean_y_neighbours);
    }
  }

  SUBCASE("niceness rate matches the binomial law") {
    // |N_1(x) \ N_<=1(y)| ~ Bin(1998, p(1-p)) for a non-adjacent pair; the
    // overlap condition almost never binds at this density.
    const NicenessReport r = niceness_check(g, 1, 204.0, 200, 0.2, 9);
    CHECK(r.pairs == 200);
    const double p = 0.102;
    check_rate(r.rate(), binomial_mass(1998, p * (1 - p), 0.8 * 204, 1.2 * 204), 200);
  }

  SUBCASE("lower-bound certificate") {
    const LowerBoundCertificate c = lower_bound_certificate(g, 1, 100, 3);
    const double k_th = std::floor(2000 / (2 * 204.0) * std::log(204.0));
    CHECK(static_cast<double>(c.k) >= k_th / 2);
    CHECK(static_cast<double>(c.k) <= 2 * k_th);
    CHECK(c.samples == 100);
    CHECK(lower_bound_certificate(g, 1, 100, 3).k == c.k);
    const std::size_t k4 = static_cast<std::size_t>(std::floor(2000 / (4 * 204.0) * std::log(204.0)));
    CHECK(far_pair_rate(g, 1, k4, 100, 4) >= 0.95);
  }
}

TEST_CASE("non-nice graphs") {
  const Graph star = make_star(30);
  const NicenessReport s = niceness_check(star, 1, 2.0, 50, 0.2, 1);
  CHECK(s.nice_pairs < s.pairs);
  const NicenessReport k = niceness_check(make_complete(30), 1, 29.0, 50, 0.2, 1);
  CHECK(k.nice_pairs == 0);
}

TEST_CASE("certificate preconditions") {
  CHECK_THROWS_AS(lower_bound_certificate(make_path(10), 1, 10, 1), InvalidArgument);
  CHECK(lower_bound_certificate(make_path(3), 1, 10, 1).k == 0);
}

TEST_CASE("check battery is reproducible") {
  const Graph g = sample_gnp_with_diameter(600, 0.2, 2, 2);
  ExpansionChecks cfg;
  cfg.d = 120;
  cfg.samples = 40;
  cfg.seed = 3;
  const auto a = run_expansion_checks(g, cfg);
  const auto b = run_expansion_checks(g, cfg);
  REQUIRE(a.size() == 5);
  for (std::size_t r = 0; r < a.size(); ++r) {
    CHECK(a[r].check == b[r].check);
    CHECK(a[r].observed == b[r].observed);
    CHECK(a[r].pass == b[r].pass);
  }
  CHECK(a[4].check == "diameter");
  CHECK(a[4].pass);
}
