#include "qsearch/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "qsearch/error.hpp"
#include "qsearch/rng.hpp"

namespace qsearch {

unsigned effective_exponent(std::size_t n, double d) {
  if (!(d > 1.0)) throw InvalidArgument("effective exponent needs d > 1");
  const long double nn = static_cast<long double>(n);
  if (static_cast<long double>(d) >= nn) {
    throw InvalidArgument("effective exponent needs d < n (d = " + std::to_string(d) +
                          ", n = " + std::to_string(n) + ")");
  }
  unsigned i = 1;
  long double power = d;
  while (power * d < nn) {
    power *= d;
    ++i;
  }
  return i;
}

RegimeParams RegimeParams::make(std::size_t n, double p) {
  RegimeParams r;
  r.n = n;
  r.p = p;
  r.d = p * static_cast<double>(n);
  r.i = effective_exponent(n, r.d);
  const double ln_n = std::log(static_cast<double>(n));
  r.omega = r.d / ln_n;
  r.omega_hat = std::min(std::sqrt(r.omega), static_cast<double>(n) / std::pow(r.d, r.i));
  return r;
}

GrowthReport sphere_growth(const Graph& g, const VertexSet& z, unsigned i, double d) {
  GrowthReport rep;
  const auto dist = distances_to_set(g, z, static_cast<Distance>(i));
  for (Distance x : dist) {
    if (x <= static_cast<Distance>(i)) ++rep.ball;
    if (x == static_cast<Distance>(i)) ++rep.sphere;
  }
  rep.reference = std::pow(d, static_cast<double>(i)) * static_cast<double>(z.size());
  if (rep.reference > 0) {
    rep.sphere_ratio = static_cast<double>(rep.sphere) / rep.reference;
    rep.ball_ratio = static_cast<double>(rep.ball) / rep.reference;
  }
  return rep;
}

bool far_pair_exists(const Graph& g, const VertexSet& z, unsigned i) {
  return ball(g, z, static_cast<Distance>(i)).size() + 2 <= g.order();
}

PairPartition pair_partition(const Graph& g, Vertex x, Vertex y, unsigned i) {
  if (x == y) throw InvalidArgument("pair_partition needs two distinct vertices");
  const std::size_t n = g.order();
  const auto r = static_cast<Distance>(i);
  const VertexSet vx(n, {x}), vy(n, {y});
  const VertexSet bx = ball(g, vx, r), by = ball(g, vy, r);
  PairPartition p;
  p.x_part = sphere(g, vx, r) - by;
  p.y_part = sphere(g, vy, r) - bx;
  p.z_part = VertexSet::full(n) - (bx | by);
  p.r_part = VertexSet::full(n) - p.x_part - p.y_part - p.z_part;
  return p;
}

CrossDegrees cross_degrees(const Graph& g, const PairPartition& part) {
  CrossDegrees out;
  auto count_in = [&](Vertex v, const VertexSet& target) {
    std::size_t c = 0;
    for (Vertex w : g.neighbors(v)) c += target.contains(w) ? 1 : 0;
    return c;
  };
  struct Acc {
    double min = 0.0, sum = 0.0;
    std::size_t count = 0;
    void add(double v) {
      min = count == 0 ? v : std::min(min, v);
      sum += v;
      ++count;
    }
    double mean() const { return count == 0 ? 0.0 : sum / static_cast<double>(count); }
  };
  Acc r_nb, y_nb, x_nb;
  std::size_t max_r = 0;
  const VertexSet outside_r = part.x_part | part.y_part | part.z_part;
  outside_r.for_each([&](Vertex v) {
    const std::size_t c = count_in(v, part.r_part);
    max_r = std::max(max_r, c);
    r_nb.add(static_cast<double>(c));
  });
  (part.x_part | part.z_part).for_each(
      [&](Vertex v) { y_nb.add(static_cast<double>(count_in(v, part.y_part))); });
  (part.y_part | part.z_part).for_each(
      [&](Vertex v) { x_nb.add(static_cast<double>(count_in(v, part.x_part))); });
  out.max_r_neighbours = max_r;
  out.mean_r_neighbours = r_nb.mean();
  out.min_y_neighbours = y_nb.min;
  out.mean_y_neighbours = y_nb.mean();
  out.min_x_neighbours = x_nb.min;
  out.mean_x_neighbours = x_nb.mean();
  return out;
}

namespace {

std::vector<Vertex> shuffled(std::size_t n, Rng& rng) {
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  for (std::size_t j = n; j > 1; --j) std::swap(order[j - 1], order[rng.below(j)]);
  return order;
}

// Marks N_<=radius(v) in `covered`, returning the number of new vertices.
std::size_t cover_ball(const Graph& g, Vertex v, Distance radius, std::vector<char>& covered,
                       std::vector<Distance>& scratch, std::vector<Vertex>& touched) {
  std::size_t added = 0;
  touched.clear();
  std::vector<Vertex> frontier{v};
  scratch[v] = 0;
  touched.push_back(v);
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const Vertex u = frontier[head];
    if (!covered[u]) {
      covered[u] = 1;
      ++added;
    }
    if (scratch[u] == radius) continue;
    for (Vertex w : g.neighbors(u)) {
      if (scratch[w] == kUnreachable) {
        scratch[w] = scratch[u] + 1;
        touched.push_back(w);
        frontier.push_back(w);
      }
    }
  }
  for (Vertex t : touched) scratch[t] = kUnreachable;
  return added;
}

}  // namespace

LowerBoundCertificate lower_bound_certificate(const Graph& g, unsigned i, std::size_t samples,
                                              std::uint64_t seed, std::size_t k_max) {
  const Distance diam = diameter(g);
  if (diam != static_cast<Distance>(i) + 1) {
    throw InvalidArgument("lower-bound certificate needs diameter i+1 = " + std::to_string(i + 1) +
                          ", graph has diameter " + std::to_string(diam));
  }
  const std::size_t n = g.order();
  if (k_max == 0) k_max = n / 2;
  LowerBoundCertificate cert;
  cert.samples = samples;
  cert.seed = seed;
  cert.k = k_max;
  std::vector<char> covered(n);
  std::vector<Distance> scratch(n, kUnreachable);
  std::vector<Vertex> touched;
  for (std::size_t s = 0; s < samples; ++s) {
    Rng rng(derive_seed(seed, "lower-bound", s));
    const auto order = shuffled(n, rng);
    std::fill(covered.begin(), covered.end(), 0);
    std::size_t count = 0, k = 0;
    // The prefix of 2(k+1) vertices must still leave two vertices uncovered.
    while (k < cert.k) {
      count += cover_ball(g, order[2 * k], static_cast<Distance>(i), covered, scratch, touched);
      count += cover_ball(g, order[2 * k + 1], static_cast<Distance>(i), covered, scratch, touched);
      if (count + 2 > n) break;
      ++k;
    }
    cert.k = std::min(cert.k, k);
  }
  if (samples == 0) cert.k = 0;
  return cert;
}

double far_pair_rate(const Graph& g, unsigned i, std::size_t k, std::size_t samples,
                     std::uint64_t seed) {
  const std::size_t n = g.order();
  if (2 * k > n) throw InvalidArgument("far_pair_rate: 2k exceeds n");
  if (samples == 0) return 0.0;
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    Rng rng(derive_seed(seed, "far-pair", s));
    const auto order = shuffled(n, rng);
    VertexSet z(n);
    for (std::size_t j = 0; j < 2 * k; ++j) z.insert(order[j]);
    hits += far_pair_exists(g, z, i) ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

NicenessReport niceness_check(const Graph& g, unsigned i, double d, std::size_t pairs,
                              double tolerance, std::uint64_t seed) {
  const std::size_t n = g.order();
  if (n < 2) throw InvalidArgument("niceness check needs two vertices");
  NicenessReport rep;
  rep.tolerance = tolerance;
  const double ref = std::pow(d, static_cast<double>(i));
  const auto r = static_cast<Distance>(i);
  double worst_gap = -1.0;
  for (std::size_t s = 0; s < pairs; ++s) {
    Rng rng(derive_seed(seed, "niceness", s));
    const auto x = static_cast<Vertex>(rng.below(n));
    auto y = static_cast<Vertex>(rng.below(n - 1));
    if (y >= x) ++y;
    const VertexSet vx(n, {x}), vy(n, {y});
    const VertexSet bx = ball(g, vx, r), by = ball(g, vy, r);
    const double excl = static_cast<double>((sphere(g, vx, r) - by).size()) / ref;
    const double overlap = static_cast<double>((bx & by).size()) / ref;
    ++rep.pairs;
    if (std::abs(excl - 1.0) <= tolerance && overlap <= tolerance) ++rep.nice_pairs;
    if (std::abs(excl - 1.0) > worst_gap) {
      worst_gap = std::abs(excl - 1.0);
      rep.worst_exclusive_ratio = excl;
    }
    rep.worst_overlap_ratio = std::max(rep.worst_overlap_ratio, overlap);
  }
  return rep;
}

}  // namespace qsearch

namespace qsearch {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

std::vector<CheckRow> run_expansion_checks(const Graph& g, const ExpansionChecks& cfg) {
  const std::size_t n = g.order();
  if (n < 3) throw InvalidArgument("expansion checks need at least three vertices");
  if (cfg.samples == 0) throw InvalidArgument("expansion checks need at least one sample");
  const double ref = std::pow(cfg.d, static_cast<double>(cfg.i));
  const double samples = static_cast<double>(cfg.samples);
  const std::string common = "n=" + std::to_string(n) + " d=" + fmt(cfg.d) +
                             " i=" + std::to_string(cfg.i) +
                             " samples=" + std::to_string(cfg.samples) +
                             " seed=" + std::to_string(cfg.seed);
  std::vector<CheckRow> rows;

  {
    double total = 0.0;
    std::size_t within = 0;
    for (std::size_t s = 0; s < cfg.samples; ++s) {
      Rng rng(derive_seed(cfg.seed, "growth", s));
      const VertexSet z(n, {static_cast<Vertex>(rng.below(n))});
      const GrowthReport r = sphere_growth(g, z, cfg.i, cfg.d);
      total += static_cast<double>(r.sphere);
      within += std::abs(r.sphere_ratio - 1.0) <= cfg.growth_tolerance ? 1 : 0;
    }
    const double rate = static_cast<double>(within) / samples;
    rows.push_back({"sphere_growth",
                    common + " tol=" + fmt(cfg.growth_tolerance) + " within=" + fmt(rate),
                    total / samples, ref, total / samples / ref, rate >= cfg.required_rate});
  }
  {
    double total_x = 0.0;
    std::size_t within = 0;
    for (std::size_t s = 0; s < cfg.samples; ++s) {
      Rng rng(derive_seed(cfg.seed, "partition", s));
      const auto x = static_cast<Vertex>(rng.below(n));
      auto y = static_cast<Vertex>(rng.below(n - 1));
      if (y >= x) ++y;
      const PairPartition p = pair_partition(g, x, y, cfg.i);
      const double rx = static_cast<double>(p.x_part.size()) / ref;
      const double ry = static_cast<double>(p.y_part.size()) / ref;
      const double rr = static_cast<double>(p.r_part.size()) / ref;
      total_x += static_cast<double>(p.x_part.size());
      const double tol = cfg.partition_tolerance;
      within += (std::abs(rx - 1.0) <= tol && std::abs(ry - 1.0) <= tol && rr <= tol) ? 1 : 0;
    }
    const double rate = static_cast<double>(within) / samples;
    rows.push_back({"pair_partition",
                    common + " tol=" + fmt(cfg.partition_tolerance) + " within=" + fmt(rate),
                    total_x / samples, ref, total_x / samples / ref, rate >= cfg.required_rate});
  }
  {
    const NicenessReport r =
        niceness_check(g, cfg.i, cfg.d, cfg.samples, cfg.nice_tolerance, cfg.seed);
    rows.push_back({"niceness", common + " tol=" + fmt(cfg.nice_tolerance), r.rate(),
                    cfg.required_rate, r.rate() / cfg.required_rate,
                    r.rate() >= cfg.required_rate});
  }
  {
    const auto k = static_cast<std::size_t>(
        std::floor(static_cast<double>(n) / (4.0 * ref) * std::log(cfg.d)));
    const std::size_t kk = std::min(k, n / 2);
    const double rate = far_pair_rate(g, cfg.i, kk, cfg.samples, cfg.seed);
    rows.push_back({"far_pair", common + " k=" + std::to_string(kk), rate, cfg.required_rate,
                    rate / cfg.required_rate, rate >= cfg.required_rate});
  }
  {
    const double diam = g.connected() ? static_cast<double>(diameter(g)) : -1.0;
    const double want = static_cast<double>(cfg.i + 1);
    rows.push_back({"diameter", "n=" + std::to_string(n) + " i=" + std::to_string(cfg.i), diam,
                    want, diam / want, diam == want});
  }
  return rows;
}

}  // namespace qsearch
