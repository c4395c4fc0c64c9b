#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "qsearch/game.hpp"
#include "qsearch/graph.hpp"

namespace qsearch {

struct SolverLimits {
  std::size_t max_vertices = 18;
  std::size_t max_memo_entries = std::size_t{1} << 24;
  std::chrono::milliseconds time_budget{std::chrono::minutes(10)};
};

struct SolverOptions {
  // Keep the optimal first query of every solved candidate set so that
  // strategies can be extracted afterwards.
  bool retain_strategy = false;
  // Experimental: only query vertices of the current candidate set. Not
  // assumed to give the same value as the unrestricted game.
  bool restrict_to_candidates = false;
};

struct GameValue {
  unsigned value = 0;
  std::optional<Query> first_query;  // set when retention is on and |V_0| >= 2
};

// Decision tree of an optimal strategy: the query asked at each reachable
// candidate set and the subtree for either reply. Leaves are singletons.
struct StrategyNode {
  CandidateSet candidates;
  std::optional<Query> query;
  std::unique_ptr<StrategyNode> on_u;
  std::unique_ptr<StrategyNode> on_v;
};

class StrategyTree {
 public:
  StrategyTree() = default;
  explicit StrategyTree(std::unique_ptr<StrategyNode> root) : root_(std::move(root)) {}

  const StrategyNode* root() const noexcept { return root_.get(); }
  bool empty() const noexcept { return !root_ || !root_->query; }
  // Number of queries on the longest root-to-leaf path.
  unsigned depth() const;
  std::size_t leaf_count() const;

  // Indented text: one line per node.
  void print(std::ostream& out, const Graph& g) const;

 private:
  std::unique_ptr<StrategyNode> root_;
};

// Exact pqn/eqn by memoized minimax over candidate sets:
//
//   f(S) = 0                                         if |S| <= 1
//   f(S) = min_q 1 + max(f(S & C(u,v)), f(S & C(v,u)))   otherwise
//
// Queries range over all admissible pairs of V. Queries that leave S
// unchanged on one branch are skipped, as are queries inducing the same split
// as an earlier (lexicographically smaller) query. Branches are cut with the
// lower bound ceil(log2 |S|) and the incumbent; the incumbent starts at |S|,
// one above what shortest-path elimination guarantees.
class ExactSolver {
 public:
  ExactSolver(const Graph& g, QueryKind kind, SolverLimits limits = {},
              SolverOptions options = {});
  ~ExactSolver();
  ExactSolver(ExactSolver&&) noexcept;
  ExactSolver& operator=(ExactSolver&&) noexcept;

  QueryKind kind() const noexcept;
  const Graph& graph() const noexcept;

  unsigned value();
  unsigned value(const CandidateSet& start);

  // value(start) <= threshold, with early termination.
  bool decide(unsigned threshold);
  bool decide(unsigned threshold, const CandidateSet& start);

  // Lexicographically smallest optimal query for s (|s| >= 2). Requires
  // retain_strategy; throws InvalidArgument otherwise.
  Query best_query(const CandidateSet& s);

  StrategyTree extract_strategy();
  StrategyTree extract_strategy(const CandidateSet& start);

  std::size_t solved_sets() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

GameValue game_value(const Graph& g, QueryKind kind, const SolverLimits& limits = {},
                     const SolverOptions& options = {});
GameValue game_value(const Graph& g, QueryKind kind, const CandidateSet& start,
                     const SolverLimits& limits = {}, const SolverOptions& options = {});

bool decide(const Graph& g, QueryKind kind, unsigned threshold,
            const SolverLimits& limits = {});

StrategyTree extract_strategy(const Graph& g, QueryKind kind,
                              const SolverLimits& limits = {});

unsigned ceil_log2(std::size_t x) noexcept;

}  // namespace qsearch
