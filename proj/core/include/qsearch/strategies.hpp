#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsearch/game.hpp"
#include "qsearch/graph.hpp"

namespace qsearch {

class ExactSolver;

// ---------------------------------------------------------------------------
// Deterministic algorithms

// Picks the two smallest candidates x < y and queries the first edge of a
// shortest x-y path. Every reply removes x or y.
class ShortestPathElimination final : public Algorithm {
 public:
  std::string name() const override { return "sp-elim"; }
  Query next_query(const Position& pos) override;
  std::unique_ptr<Algorithm> clone() const override;
};

// Binary search along a path graph with edge queries.
class PathBisection final : public Algorithm {
 public:
  // Throws InvalidArgument if g is not a path.
  explicit PathBisection(const Graph& g);

  std::string name() const override { return "path-bisect"; }
  Query next_query(const Position& pos) override;
  std::unique_ptr<Algorithm> clone() const override;

 private:
  std::vector<Vertex> order_;     // vertices along the path
  std::vector<std::size_t> pos_;  // inverse of order_
};

// G_k strategy: descend the tree by querying the two children of the deepest
// vertex whose subtree still splits the candidates, then eliminate one vertex
// per round along the remaining ancestor chain.
class SeparationDescent final : public Algorithm {
 public:
  // Reads the "t:<level>:<index>" labels; throws InvalidArgument if missing.
  explicit SeparationDescent(const Graph& g);

  std::string name() const override { return "gk-descent"; }
  Query next_query(const Position& pos) override;
  std::unique_ptr<Algorithm> clone() const override;

  unsigned height() const noexcept { return height_; }

 private:
  struct Node {
    Vertex vertex;
    int left = -1;   // tree-node indices
    int right = -1;
    VertexSet subtree;
  };
  unsigned height_ = 0;
  std::vector<Node> nodes_;  // heap order
};

// Minimizes the size of the worse branch over all admissible queries;
// ties broken by smaller (u, v).
class GreedySplit final : public Algorithm {
 public:
  std::string name() const override { return "greedy-split"; }
  Query next_query(const Position& pos) override;
  std::unique_ptr<Algorithm> clone() const override;
};

// ---------------------------------------------------------------------------
// Randomized phase strategies for G(n,p)

// Parameters of the phase strategy. All counts round up.
struct PhaseConfig {
  double b = 4.0;
  unsigned exponent = 1;          // i
  std::size_t phases = 1;         // ceil(a ln n), a = 2/(b-1)
  std::size_t sequence_length = 2;  // ceil(b n / d^i) + 1

  double a() const { return 2.0 / (b - 1.0); }
  std::size_t rounds_per_phase() const { return sequence_length - 1; }
  std::size_t budget() const { return phases * rounds_per_phase(); }

  // d = p n; i = effective_exponent(n, d) unless given.
  static PhaseConfig make(std::size_t n, double d, double b = 4.0,
                          std::optional<unsigned> exponent = std::nullopt);
};

// Round budget ceil(3 / (p^2 (1-p)^2) * ln n) of the dense edge strategy
// (at least 1).
std::size_t dense_edge_budget(std::size_t n, double p);

// Each phase draws sequence_length uniform vertices. Round one of a phase
// queries the first two; later rounds query (previous reply, next vertex).
// The random tape is fixed by the seed, so the strategy is deterministic
// per seed. When the next vertex coincides with the carried one, a vertex
// drawn uniformly from the others takes its place.
class PhasePair final : public Algorithm {
 public:
  PhasePair(std::size_t n, PhaseConfig config, std::uint64_t seed);

  std::string name() const override { return "phase-pair"; }
  Query next_query(const Position& pos) override;
  void observe(const Query& q, Side reply, const CandidateSet& after) override;
  std::unique_ptr<Algorithm> clone() const override;
  std::string state_key() const override;

  const PhaseConfig& config() const noexcept { return config_; }

 private:
  struct Tape {
    std::vector<Vertex> sequence;
    std::vector<std::uint64_t> spare;
  };
  const Tape& tape(std::size_t phase);

  std::size_t n_;
  PhaseConfig config_;
  std::uint64_t seed_;
  std::size_t round_ = 0;
  std::optional<Vertex> carried_;
  std::vector<Tape> tapes_;
};

// Edge version: round one of a phase queries a uniform vertex and a uniform
// neighbour of it; later rounds query the previous reply and a uniform
// neighbour of the reply.
class PhaseEdge final : public Algorithm {
 public:
  PhaseEdge(std::size_t n, PhaseConfig config, std::uint64_t seed);

  std::string name() const override { return "phase-edge"; }
  Query next_query(const Position& pos) override;
  void observe(const Query& q, Side reply, const CandidateSet& after) override;
  std::unique_ptr<Algorithm> clone() const override;
  std::string state_key() const override;

  const PhaseConfig& config() const noexcept { return config_; }

 private:
  std::size_t n_;
  PhaseConfig config_;
  std::uint64_t seed_;
  std::size_t round_ = 0;
  std::optional<Vertex> carried_;
};

// Every round: uniform vertex u, uniform neighbour v of u.
class DenseEdge final : public Algorithm {
 public:
  DenseEdge(std::size_t n, double p, std::uint64_t seed);

  std::string name() const override { return "dense-edge"; }
  Query next_query(const Position& pos) override;
  void observe(const Query& q, Side reply, const CandidateSet& after) override;
  std::unique_ptr<Algorithm> clone() const override;
  std::string state_key() const override;

  std::size_t budget() const noexcept { return budget_; }

 private:
  std::size_t n_;
  std::uint64_t seed_;
  std::size_t budget_;
  std::size_t round_ = 0;
};

// Random progress-making queries: u uniform from the candidates, v uniform
// from V (pair) or from the neighbours of u (edge); redrawn until the query
// splits the candidates, falling back to shortest-path elimination.
class RandomProgress final : public Algorithm {
 public:
  explicit RandomProgress(std::uint64_t seed);

  std::string name() const override { return "random"; }
  Query next_query(const Position& pos) override;
  std::unique_ptr<Algorithm> clone() const override;
  std::string state_key() const override;

 private:
  std::uint64_t seed_;
  std::size_t calls_ = 0;
};

// ---------------------------------------------------------------------------
// Adversaries

// Keeps the larger of the two possible survivor sets; u-side on ties.
class HalvingAdversary final : public Adversary {
 public:
  std::string name() const override { return "adv-halving"; }
  Side reply(const Position& pos, const Query& q, const Partition& part) override;
};

// Answers consistently with a planted target; equidistant queries keep the
// larger survivor set (u-side on ties).
class FixedTargetAdversary final : public Adversary {
 public:
  explicit FixedTargetAdversary(Vertex target) : target_(target) {}

  std::string name() const override { return "adv-target"; }
  Side reply(const Position& pos, const Query& q, const Partition& part) override;
  Vertex target() const noexcept { return target_; }

 private:
  Vertex target_;
};

// Optimal adversary backed by the exact solver: keeps the branch with the
// larger game value, then the larger set, then the u-side.
class ExhaustiveAdversary final : public Adversary {
 public:
  explicit ExhaustiveAdversary(std::shared_ptr<ExactSolver> solver);

  std::string name() const override { return "adv-exhaustive"; }
  Side reply(const Position& pos, const Query& q, const Partition& part) override;

 private:
  std::shared_ptr<ExactSolver> solver_;
};

// ---------------------------------------------------------------------------
// Registry of stable CLI identifiers

struct StrategySpec {
  std::uint64_t seed = 0;
  double b = 4.0;
  std::optional<double> p;          // density; default 2|E| / (n (n-1))
  std::optional<unsigned> exponent; // phase exponent i
};

const std::vector<std::string>& algorithm_names();
const std::vector<std::string>& adversary_names();

// Throws InvalidArgument for unknown names.
std::unique_ptr<Algorithm> make_algorithm(std::string_view name, const Graph& g,
                                          QueryKind kind, const StrategySpec& spec = {});

struct AdversarySpec {
  std::optional<Vertex> target;  // adv-target
  std::uint64_t seed = 0;        // adv-target picks a seeded vertex when unset
};

std::unique_ptr<Adversary> make_adversary(std::string_view name, const Graph& g,
                                          QueryKind kind, const AdversarySpec& spec = {});

// Default round budget for a named algorithm (phase budgets, dense budget,
// otherwise n - 1 with a floor of 1).
std::size_t default_budget(std::string_view name, const Graph& g, const StrategySpec& spec);

// ---------------------------------------------------------------------------
// Certification

struct CertifyLimits {
  std::size_t max_states = 2'000'000;
};

// Worst case over every adversary of the number of rounds `algorithm` needs
// from `start` (default V): depth-first search over both replies at every
// round, memoized on (state_key, candidate set). Replies that would leave no
// candidate are not explored. Returns nullopt when some line of play exceeds
// `budget`. Throws ResourceLimit when the state space exceeds the limits.
std::optional<std::size_t> certify_upper(const Graph& g, QueryKind kind,
                                         const Algorithm& algorithm, std::size_t budget,
                                         std::optional<CandidateSet> start = std::nullopt,
                                         const CertifyLimits& limits = {});

}  // namespace qsearch
