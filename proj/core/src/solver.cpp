#include "qsearch/solver.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <ostream>

#include "qsearch/error.hpp"

namespace qsearch {

unsigned ceil_log2(std::size_t x) noexcept {
  return x <= 1 ? 0U : static_cast<unsigned>(std::bit_width(x - 1));
}

namespace {

using Mask = std::uint32_t;
constexpr std::uint8_t kUnknown = 0xFF;
constexpr std::size_t kHardVertexCap = 30;

unsigned popcount(Mask m) { return static_cast<unsigned>(std::popcount(m)); }

// Per-node set of already-seen splits, keyed by the unordered pair of
// branches. Open addressing with generation stamps so clearing is O(1).
class SplitTable {
 public:
  void reset(std::size_t expected) {
    std::size_t cap = 16;
    while (cap < 2 * expected + 2) cap <<= 1;
    if (cap > keys_.size()) {
      keys_.assign(cap, 0);
      stamps_.assign(cap, 0);
      generation_ = 0;
    }
    if (++generation_ == 0) {
      std::fill(stamps_.begin(), stamps_.end(), 0);
      generation_ = 1;
    }
    mask_ = keys_.size() - 1;
  }

  // True when the split was new.
  bool insert(Mask a, Mask b) {
    if (a > b) std::swap(a, b);
    const std::uint64_t key = (std::uint64_t{a} << 32) | b;
    std::size_t h = static_cast<std::size_t>((key * 0x9E3779B97F4A7C15ULL) >> 17) & mask_;
    while (stamps_[h] == generation_) {
      if (keys_[h] == key) return false;
      h = (h + 1) & mask_;
    }
    stamps_[h] = generation_;
    keys_[h] = key;
    return true;
  }

 private:
  std::vector<std::uint64_t> keys_;
  std::vector<std::uint32_t> stamps_;
  std::uint32_t generation_ = 0;
  std::size_t mask_ = 0;
};

}  // namespace

struct ExactSolver::Impl {
  const Graph* graph;
  Graph graph_copy;
  QueryKind kind;
  SolverLimits limits;
  SolverOptions options;
  std::size_t n;

  std::vector<Query> queries;
  std::vector<Mask> closer_u;  // C(u,v) per query
  std::vector<Mask> closer_v;  // C(v,u) per query

  std::vector<std::uint8_t> memo;
  std::vector<std::uint16_t> best;
  std::vector<std::uint8_t> lower;  // decide(): proven lower bounds
  std::size_t solved = 0;

  std::vector<SplitTable> tables;  // one per recursion depth
  std::chrono::steady_clock::time_point deadline;
  std::size_t ticks = 0;

  Impl(const Graph& g, QueryKind k, SolverLimits lim, SolverOptions opt)
      : graph_copy(g), kind(k), limits(lim), options(opt), n(g.order()) {
    graph = &graph_copy;
    if (limits.max_vertices == 0 || limits.max_memo_entries == 0 ||
        limits.time_budget.count() <= 0) {
      throw InvalidArgument("solver limits must be positive");
    }
    if (n > limits.max_vertices || n > kHardVertexCap) {
      throw ResourceLimit("exact solver: graph has " + std::to_string(n) +
                          " vertices, limit is " +
                          std::to_string(std::min(limits.max_vertices, kHardVertexCap)));
    }
    const std::size_t entries = std::size_t{1} << n;
    if (entries > limits.max_memo_entries) {
      throw ResourceLimit("exact solver: 2^" + std::to_string(n) +
                          " memo entries exceed the limit of " +
                          std::to_string(limits.max_memo_entries));
    }
    if (n > 1) g.require_connected();

    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = u + 1; v < n; ++v) {
        if (kind == QueryKind::Edge && !g.adjacent(u, v)) continue;
        const auto du = g.distances_from(u);
        const auto dv = g.distances_from(v);
        Mask cu = 0, cv = 0;
        for (Vertex x = 0; x < n; ++x) {
          if (du[x] <= dv[x]) cu |= Mask{1} << x;
          if (dv[x] <= du[x]) cv |= Mask{1} << x;
        }
        queries.push_back({u, v});
        closer_u.push_back(cu);
        closer_v.push_back(cv);
      }
    }
    memo.assign(entries, kUnknown);
    if (options.retain_strategy) best.assign(entries, 0);
    tables.resize(n + 2);
  }

  Mask to_mask(const CandidateSet& s) const {
    if (s.universe() != n) throw InvalidArgument("candidate set universe does not match graph");
    Mask m = 0;
    s.for_each([&](Vertex v) { m |= Mask{1} << v; });
    return m;
  }

  CandidateSet to_set(Mask m) const {
    CandidateSet s(n);
    for (Vertex v = 0; v < n; ++v) {
      if ((m >> v) & 1U) s.insert(v);
    }
    return s;
  }

  void start_clock() { deadline = std::chrono::steady_clock::now() + limits.time_budget; }

  void tick() {
    if ((++ticks & 1023U) == 0 && std::chrono::steady_clock::now() > deadline) {
      throw ResourceLimit("exact solver: time budget of " +
                          std::to_string(limits.time_budget.count()) + " ms exhausted");
    }
  }

  bool admissible_here(std::size_t qi, Mask s) const {
    if (!options.restrict_to_candidates) return true;
    return ((s >> queries[qi].u) & 1U) && ((s >> queries[qi].v) & 1U);
  }

  [[noreturn]] void unsearchable(Mask s) const {
    throw Error("exact solver: no query splits candidate set " + to_set(s).to_string());
  }

  unsigned solve(Mask s, std::size_t depth) {
    const unsigned count = popcount(s);
    if (count <= 1) return 0;
    if (memo[s] != kUnknown) return memo[s];
    tick();

    const unsigned floor = ceil_log2(count);
    unsigned incumbent = count;
    int chosen = -1;
    SplitTable& seen = tables[depth];
    seen.reset(queries.size());
    for (std::size_t qi = 0; qi < queries.size(); ++qi) {
      if (!admissible_here(qi, s)) continue;
      Mask a = s & closer_u[qi];
      Mask b = s & closer_v[qi];
      if (a == s || b == s) continue;
      if (!seen.insert(a, b)) continue;
      if (popcount(a) < popcount(b)) std::swap(a, b);
      if (1 + ceil_log2(popcount(a)) >= incumbent) continue;
      const unsigned va = solve(a, depth + 1);
      if (1 + va >= incumbent) continue;
      const unsigned vb = solve(b, depth + 1);
      const unsigned v = 1 + std::max(va, vb);
      if (v < incumbent) {
        incumbent = v;
        chosen = static_cast<int>(qi);
        if (incumbent == floor) break;
      }
    }
    if (chosen < 0) unsearchable(s);
    memo[s] = static_cast<std::uint8_t>(incumbent);
    if (!best.empty()) best[s] = static_cast<std::uint16_t>(chosen);
    ++solved;
    return incumbent;
  }

  bool within(Mask s, unsigned budget, std::size_t depth) {
    const unsigned count = popcount(s);
    if (count <= 1) return true;
    if (memo[s] != kUnknown) return memo[s] <= budget;
    if (budget < ceil_log2(count)) return false;
    if (budget + 1 >= count) return true;
    if (lower[s] > budget) return false;
    tick();

    SplitTable& seen = tables[depth];
    seen.reset(queries.size());
    std::vector<std::pair<Mask, Mask>> splits;
    for (std::size_t qi = 0; qi < queries.size(); ++qi) {
      if (!admissible_here(qi, s)) continue;
      Mask a = s & closer_u[qi];
      Mask b = s & closer_v[qi];
      if (a == s || b == s) continue;
      if (!seen.insert(a, b)) continue;
      if (popcount(a) < popcount(b)) std::swap(a, b);
      if (ceil_log2(popcount(a)) + 1 > budget) continue;
      splits.emplace_back(a, b);
    }
    for (const auto& [a, b] : splits) {
      if (within(a, budget - 1, depth + 1) && within(b, budget - 1, depth + 1)) return true;
    }
    lower[s] = static_cast<std::uint8_t>(std::max<unsigned>(lower[s], budget + 1));
    return false;
  }

  std::unique_ptr<StrategyNode> build(Mask s) {
    auto node = std::make_unique<StrategyNode>();
    node->candidates = to_set(s);
    if (popcount(s) <= 1) return node;
    const std::size_t qi = best[s];
    node->query = queries[qi];
    node->on_u = build(s & closer_u[qi]);
    node->on_v = build(s & closer_v[qi]);
    return node;
  }
};

ExactSolver::ExactSolver(const Graph& g, QueryKind kind, SolverLimits limits,
                         SolverOptions options)
    : impl_(std::make_unique<Impl>(g, kind, limits, options)) {}

ExactSolver::~ExactSolver() = default;
ExactSolver::ExactSolver(ExactSolver&&) noexcept = default;
ExactSolver& ExactSolver::operator=(ExactSolver&&) noexcept = default;

QueryKind ExactSolver::kind() const noexcept { return impl_->kind; }
const Graph& ExactSolver::graph() const noexcept { return *impl_->graph; }

unsigned ExactSolver::value() { return value(VertexSet::full(impl_->n)); }

unsigned ExactSolver::value(const CandidateSet& start) {
  const Mask s = impl_->to_mask(start);
  impl_->start_clock();
  return impl_->solve(s, 0);
}

bool ExactSolver::decide(unsigned threshold) {
  return decide(threshold, VertexSet::full(impl_->n));
}

bool ExactSolver::decide(unsigned threshold, const CandidateSet& start) {
  const Mask s = impl_->to_mask(start);
  if (impl_->lower.empty()) impl_->lower.assign(impl_->memo.size(), 0);
  impl_->start_clock();
  return impl_->within(s, threshold, 0);
}

Query ExactSolver::best_query(const CandidateSet& s) {
  if (!impl_->options.retain_strategy) {
    throw InvalidArgument("best_query requires a solver with strategy retention");
  }
  const Mask m = impl_->to_mask(s);
  if (std::popcount(m) < 2) throw InvalidArgument("best_query needs at least two candidates");
  impl_->start_clock();
  impl_->solve(m, 0);
  return impl_->queries[impl_->best[m]];
}

StrategyTree ExactSolver::extract_strategy() {
  return extract_strategy(VertexSet::full(impl_->n));
}

StrategyTree ExactSolver::extract_strategy(const CandidateSet& start) {
  if (!impl_->options.retain_strategy) {
    throw InvalidArgument("extract_strategy requires a solver with strategy retention");
  }
  const Mask s = impl_->to_mask(start);
  impl_->start_clock();
  impl_->solve(s, 0);
  return StrategyTree(impl_->build(s));
}

std::size_t ExactSolver::solved_sets() const noexcept { return impl_->solved; }

GameValue game_value(const Graph& g, QueryKind kind, const SolverLimits& limits,
                     const SolverOptions& options) {
  return game_value(g, kind, VertexSet::full(g.order()), limits, options);
}

GameValue game_value(const Graph& g, QueryKind kind, const CandidateSet& start,
                     const SolverLimits& limits, const SolverOptions& options) {
  ExactSolver solver(g, kind, limits, options);
  GameValue out;
  out.value = solver.value(start);
  if (options.retain_strategy && start.size() >= 2) out.first_query = solver.best_query(start);
  return out;
}

bool decide(const Graph& g, QueryKind kind, unsigned threshold, const SolverLimits& limits) {
  if (g.order() <= 1 || threshold + 1 >= g.order()) {
    g.require_connected();
    return true;
  }
  ExactSolver solver(g, kind, limits);
  return solver.decide(threshold);
}

StrategyTree extract_strategy(const Graph& g, QueryKind kind, const SolverLimits& limits) {
  ExactSolver solver(g, kind, limits, SolverOptions{.retain_strategy = true});
  return solver.extract_strategy();
}

unsigned StrategyTree::depth() const {
  std::function<unsigned(const StrategyNode*)> walk = [&](const StrategyNode* node) -> unsigned {
    if (!node || !node->query) return 0;
    return 1 + std::max(walk(node->on_u.get()), walk(node->on_v.get()));
  };
  return walk(root_.get());
}

std::size_t StrategyTree::leaf_count() const {
  std::function<std::size_t(const StrategyNode*)> walk = [&](const StrategyNode* node) -> std::size_t {
    if (!node) return 0;
    if (!node->query) return 1;
    return walk(node->on_u.get()) + walk(node->on_v.get());
  };
  return walk(root_.get());
}

void StrategyTree::print(std::ostream& out, const Graph& g) const {
  auto name = [&](Vertex v) {
    return g.label(v).empty() ? std::to_string(v) : g.label(v);
  };
  std::function<void(const StrategyNode*, std::size_t, const char*)> walk =
      [&](const StrategyNode* node, std::size_t indent, const char* tag) {
        if (!node) return;
        out << std::string(indent * 2, ' ') << tag;
        if (!node->query) {
          out << "target " << (node->candidates.empty() ? std::string("-")
                                                        : name(node->candidates.first()))
              << '\n';
          return;
        }
        out << "query " << name(node->query->u) << ' ' << name(node->query->v) << "  candidates "
            << node->candidates.to_string() << '\n';
        walk(node->on_u.get(), indent + 1, "u: ");
        walk(node->on_v.get(), indent + 1, "v: ");
      };
  walk(root_.get(), 0, "");
}

}  // namespace qsearch
