#include <algorithm>
#include <cmath>

#include "qsearch/error.hpp"
#include "qsearch/expansion.hpp"
#include "qsearch/rng.hpp"
#include "qsearch/strategies.hpp"

namespace qsearch {

namespace {

// Round up, ignoring representation noise such as 40.000000000000007.
std::size_t ceil_count(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::ceil(x));
}

Vertex uniform_other(Rng& rng, std::size_t n, Vertex avoid) {
  auto v = static_cast<Vertex>(rng.below(n - 1));
  return v >= avoid ? v + 1 : v;
}

Vertex uniform_neighbour(Rng& rng, const Graph& g, Vertex v) {
  const auto nb = g.neighbors(v);
  if (nb.empty()) {
    throw StrategyError("vertex " + std::to_string(v) + " has no neighbours to query");
  }
  return nb[rng.below(nb.size())];
}

Vertex endpoint(const Query& q, Side s) { return s == Side::U ? q.u : q.v; }

}  // namespace

PhaseConfig PhaseConfig::make(std::size_t n, double d, double b, std::optional<unsigned> exponent) {
  if (n < 2) throw InvalidArgument("phase strategy needs at least two vertices");
  if (!(b > 1.0)) throw InvalidArgument("phase parameter b must exceed 1");
  if (!(d > 1.0)) throw InvalidArgument("phase strategy needs d = pn > 1");
  PhaseConfig cfg;
  cfg.b = b;
  if (exponent) {
    if (*exponent == 0) throw InvalidArgument("phase exponent must be at least 1");
    cfg.exponent = *exponent;
  } else {
    // d >= n (near-complete graphs) has no admissible exponent; use 1.
    cfg.exponent = d < static_cast<double>(n) ? effective_exponent(n, d) : 1U;
  }
  const double ln_n = std::log(static_cast<double>(n));
  cfg.phases = std::max<std::size_t>(1, ceil_count(cfg.a() * ln_n));
  const double per_phase =
      b * static_cast<double>(n) / std::pow(d, static_cast<double>(cfg.exponent));
  cfg.sequence_length = std::max<std::size_t>(1, ceil_count(per_phase)) + 1;
  return cfg;
}

std::size_t dense_edge_budget(std::size_t n, double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("dense-edge needs 0 < p < 1");
  if (n < 2) return 1;
  const double q = p * (1.0 - p);
  const double k = 3.0 / (q * q) * std::log(static_cast<double>(n));
  return std::max<std::size_t>(1, ceil_count(k));
}

// ---------------------------------------------------------------------------

PhasePair::PhasePair(std::size_t n, PhaseConfig config, std::uint64_t seed)
    : n_(n), config_(config), seed_(seed) {
  if (n_ < 2) throw InvalidArgument("phase-pair needs at least two vertices");
}

const PhasePair::Tape& PhasePair::tape(std::size_t phase) {
  while (tapes_.size() <= phase) {
    Rng rng(derive_seed(seed_, "phase-pair", tapes_.size()));
    Tape t;
    t.sequence.reserve(config_.sequence_length);
    for (std::size_t j = 0; j < config_.sequence_length; ++j) {
      t.sequence.push_back(static_cast<Vertex>(rng.below(n_)));
    }
    for (std::size_t j = 0; j < config_.sequence_length; ++j) t.spare.push_back(rng.next());
    tapes_.push_back(std::move(t));
  }
  return tapes_[phase];
}

Query PhasePair::next_query(const Position&) {
  const std::size_t per = config_.rounds_per_phase();
  const std::size_t j = round_ % per;
  const Tape& t = tape(round_ / per);
  const Vertex u = j == 0 ? t.sequence[0] : *carried_;
  Vertex v = t.sequence[j + 1];
  if (v == u) {
    Rng spare(t.spare[j + 1]);
    v = uniform_other(spare, n_, u);
  }
  return {u, v};
}

void PhasePair::observe(const Query& q, Side reply, const CandidateSet&) {
  carried_ = endpoint(q, reply);
  ++round_;
}

std::unique_ptr<Algorithm> PhasePair::clone() const { return std::make_unique<PhasePair>(*this); }

std::string PhasePair::state_key() const {
  const std::size_t per = config_.rounds_per_phase();
  // The carried vertex is dead at a phase boundary.
  if (round_ % per == 0) return std::to_string(round_);
  return std::to_string(round_) + ":" + std::to_string(*carried_);
}

// ---------------------------------------------------------------------------

PhaseEdge::PhaseEdge(std::size_t n, PhaseConfig config, std::uint64_t seed)
    : n_(n), config_(config), seed_(seed) {
  if (n_ < 2) throw InvalidArgument("phase-edge needs at least two vertices");
}

Query PhaseEdge::next_query(const Position& pos) {
  Rng rng(derive_seed(seed_, "phase-edge", round_));
  const bool fresh = round_ % config_.rounds_per_phase() == 0;
  const Vertex u = fresh ? static_cast<Vertex>(rng.below(n_)) : *carried_;
  return {u, uniform_neighbour(rng, pos.graph, u)};
}

void PhaseEdge::observe(const Query& q, Side reply, const CandidateSet&) {
  carried_ = endpoint(q, reply);
  ++round_;
}

std::unique_ptr<Algorithm> PhaseEdge::clone() const { return std::make_unique<PhaseEdge>(*this); }

std::string PhaseEdge::state_key() const {
  if (round_ % config_.rounds_per_phase() == 0) return std::to_string(round_);
  return std::to_string(round_) + ":" + std::to_string(*carried_);
}

// ---------------------------------------------------------------------------

DenseEdge::DenseEdge(std::size_t n, double p, std::uint64_t seed)
    : n_(n), seed_(seed), budget_(dense_edge_budget(n, p)) {
  if (n_ < 2) throw InvalidArgument("dense-edge needs at least two vertices");
}

Query DenseEdge::next_query(const Position& pos) {
  Rng rng(derive_seed(seed_, "dense-edge", round_));
  const auto u = static_cast<Vertex>(rng.below(n_));
  return {u, uniform_neighbour(rng, pos.graph, u)};
}

void DenseEdge::observe(const Query&, Side, const CandidateSet&) { ++round_; }

std::unique_ptr<Algorithm> DenseEdge::clone() const { return std::make_unique<DenseEdge>(*this); }

std::string DenseEdge::state_key() const { return std::to_string(round_); }

}  // namespace qsearch
