#include "qsearch/strategies.hpp"

#include <algorithm>
#include <charconv>

#include "qsearch/error.hpp"
#include "qsearch/rng.hpp"
#include "qsearch/solver.hpp"

namespace qsearch {

namespace {

// First edge (x, z) of a shortest x-y path, z the smallest suitable neighbour.
Query first_path_edge(const Graph& g, Vertex x, Vertex y) {
  const auto dy = g.distances_from(y);
  for (Vertex z : g.neighbors(x)) {
    if (dy[z] == dy[x] - 1) return {x, z};
  }
  throw StrategyError("no shortest path between " + std::to_string(x) + " and " +
                      std::to_string(y));
}

Query sp_elim_query(const Position& pos) {
  if (pos.candidates.size() < 2) {
    throw StrategyError("sp-elim: asked to move with fewer than two candidates");
  }
  const Vertex x = pos.candidates.first();
  const Vertex y = pos.candidates.next(x);
  return first_path_edge(pos.graph, x, y);
}

// Larger branch of q on s, or s.size() if q makes no progress.
std::size_t worse_branch(const Graph& g, const std::vector<Vertex>& members, const Query& q) {
  const auto du = g.distances_from(q.u);
  const auto dv = g.distances_from(q.v);
  std::size_t on_u = 0, on_v = 0;
  for (Vertex x : members) {
    if (du[x] <= dv[x]) ++on_u;
    if (dv[x] <= du[x]) ++on_v;
  }
  return std::max(on_u, on_v);
}

bool parse_level_index(std::string_view label, unsigned& level, unsigned& index) {
  if (label.size() < 5 || label.substr(0, 2) != "t:") return false;
  label.remove_prefix(2);
  const auto colon = label.find(':');
  if (colon == std::string_view::npos) return false;
  const auto a = label.substr(0, colon);
  const auto b = label.substr(colon + 1);
  auto r1 = std::from_chars(a.data(), a.data() + a.size(), level);
  auto r2 = std::from_chars(b.data(), b.data() + b.size(), index);
  return r1.ec == std::errc{} && r1.ptr == a.data() + a.size() && r2.ec == std::errc{} &&
         r2.ptr == b.data() + b.size();
}

}  // namespace

// ---------------------------------------------------------------------------

Query ShortestPathElimination::next_query(const Position& pos) { return sp_elim_query(pos); }

std::unique_ptr<Algorithm> ShortestPathElimination::clone() const {
  return std::make_unique<ShortestPathElimination>(*this);
}

// ---------------------------------------------------------------------------

PathBisection::PathBisection(const Graph& g) {
  const std::size_t n = g.order();
  if (n == 0) throw InvalidArgument("path-bisect: empty graph");
  if (n == 1) {
    order_ = {0};
    pos_ = {0};
    return;
  }
  if (g.size() != n - 1 || !g.connected()) {
    throw InvalidArgument("path-bisect: graph is not a path");
  }
  std::optional<Vertex> start;
  for (Vertex v = 0; v < n; ++v) {
    if (g.degree(v) > 2) throw InvalidArgument("path-bisect: graph is not a path");
    if (g.degree(v) == 1 && !start) start = v;
  }
  order_.reserve(n);
  pos_.assign(n, 0);
  Vertex prev = *start, cur = *start;
  order_.push_back(cur);
  while (order_.size() < n) {
    Vertex nxt = cur;
    for (Vertex w : g.neighbors(cur)) {
      if (w != prev) nxt = w;
    }
    prev = cur;
    cur = nxt;
    order_.push_back(cur);
  }
  for (std::size_t i = 0; i < n; ++i) pos_[order_[i]] = i;
}

Query PathBisection::next_query(const Position& pos) {
  std::vector<std::size_t> at;
  pos.candidates.for_each([&](Vertex v) { at.push_back(pos_.at(v)); });
  if (at.size() < 2) throw StrategyError("path-bisect: asked to move with fewer than two candidates");
  std::sort(at.begin(), at.end());
  // Left side keeps ceil(c/2) candidates.
  const std::size_t split = at[(at.size() + 1) / 2 - 1];
  return {order_[split], order_[split + 1]};
}

std::unique_ptr<Algorithm> PathBisection::clone() const {
  return std::make_unique<PathBisection>(*this);
}

// ---------------------------------------------------------------------------

SeparationDescent::SeparationDescent(const Graph& g) {
  if (!g.has_labels()) throw InvalidArgument("gk-descent: graph has no tree labels");
  const std::size_t n = g.order();
  std::vector<int> heap(n, -1);
  for (Vertex v = 0; v < n; ++v) {
    unsigned level = 0, index = 0;
    if (!parse_level_index(g.label(v), level, index) || level >= 31 ||
        index >= (1U << level)) {
      throw InvalidArgument("gk-descent: vertex " + std::to_string(v) +
                            " lacks a t:<level>:<index> label");
    }
    const std::size_t h = (std::size_t{1} << level) - 1 + index;
    if (h >= n || heap[h] != -1) {
      throw InvalidArgument("gk-descent: labels do not describe a full binary tree");
    }
    heap[h] = static_cast<int>(v);
    height_ = std::max(height_, level);
  }
  if (n != (std::size_t{2} << height_) - 1) {
    throw InvalidArgument("gk-descent: labels do not describe a full binary tree");
  }
  nodes_.resize(n);
  for (std::size_t h = n; h-- > 0;) {
    Node& node = nodes_[h];
    node.vertex = static_cast<Vertex>(heap[h]);
    node.subtree = VertexSet(n);
    node.subtree.insert(node.vertex);
    if (2 * h + 2 < n) {
      node.left = static_cast<int>(2 * h + 1);
      node.right = static_cast<int>(2 * h + 2);
      node.subtree |= nodes_[2 * h + 1].subtree;
      node.subtree |= nodes_[2 * h + 2].subtree;
    }
  }
}

Query SeparationDescent::next_query(const Position& pos) {
  std::size_t h = 0;
  while (nodes_[h].left >= 0) {
    const Node& l = nodes_[static_cast<std::size_t>(nodes_[h].left)];
    const Node& r = nodes_[static_cast<std::size_t>(nodes_[h].right)];
    const bool in_l = l.subtree.intersects(pos.candidates);
    const bool in_r = r.subtree.intersects(pos.candidates);
    if (in_l && in_r) return {l.vertex, r.vertex};
    if (in_l) {
      h = static_cast<std::size_t>(nodes_[h].left);
    } else if (in_r) {
      h = static_cast<std::size_t>(nodes_[h].right);
    } else {
      break;
    }
  }
  return sp_elim_query(pos);
}

std::unique_ptr<Algorithm> SeparationDescent::clone() const {
  return std::make_unique<SeparationDescent>(*this);
}

// ---------------------------------------------------------------------------

Query GreedySplit::next_query(const Position& pos) {
  const Graph& g = pos.graph;
  const auto members = pos.candidates.members();
  if (members.size() < 2) throw StrategyError("greedy-split: asked to move with fewer than two candidates");
  std::optional<Query> best;
  std::size_t best_worse = members.size();
  auto consider = [&](Vertex u, Vertex v) {
    const Query q{u, v};
    const std::size_t w = worse_branch(g, members, q);
    if (w < best_worse) {
      best_worse = w;
      best = q;
    }
  };
  for (Vertex u = 0; u < g.order(); ++u) {
    if (pos.kind == QueryKind::Edge) {
      for (Vertex v : g.neighbors(u)) {
        if (u < v) consider(u, v);
      }
    } else {
      for (Vertex v = u + 1; v < g.order(); ++v) consider(u, v);
    }
  }
  return best ? *best : sp_elim_query(pos);
}

std::unique_ptr<Algorithm> GreedySplit::clone() const {
  return std::make_unique<GreedySplit>(*this);
}

// ---------------------------------------------------------------------------

RandomProgress::RandomProgress(std::uint64_t seed) : seed_(seed) {}

Query RandomProgress::next_query(const Position& pos) {
  const Graph& g = pos.graph;
  const auto members = pos.candidates.members();
  if (members.size() < 2) throw StrategyError("random: asked to move with fewer than two candidates");
  Rng rng(derive_seed(seed_, "random", calls_++));
  for (int attempt = 0; attempt < 64; ++attempt) {
    const Vertex u = members[rng.below(members.size())];
    Vertex v;
    if (pos.kind == QueryKind::Edge) {
      const auto nb = g.neighbors(u);
      if (nb.empty()) continue;
      v = nb[rng.below(nb.size())];
    } else {
      v = static_cast<Vertex>(rng.below(g.order() - 1));
      if (v >= u) ++v;
    }
    if (worse_branch(g, members, {u, v}) < members.size()) return {u, v};
  }
  return sp_elim_query(pos);
}

std::unique_ptr<Algorithm> RandomProgress::clone() const {
  return std::make_unique<RandomProgress>(*this);
}

std::string RandomProgress::state_key() const { return std::to_string(calls_); }

// ---------------------------------------------------------------------------

Side HalvingAdversary::reply(const Position&, const Query&, const Partition& part) {
  const std::size_t both = part.equal.size();
  return part.closer_u.size() + both >= part.closer_v.size() + both ? Side::U : Side::V;
}

Side FixedTargetAdversary::reply(const Position& pos, const Query&, const Partition& part) {
  if (!pos.candidates.contains(target_)) {
    throw InvalidArgument("adv-target: planted target " + std::to_string(target_) +
                          " is not a candidate");
  }
  if (part.closer_u.contains(target_)) return Side::U;
  if (part.closer_v.contains(target_)) return Side::V;
  return part.closer_u.size() >= part.closer_v.size() ? Side::U : Side::V;
}

ExhaustiveAdversary::ExhaustiveAdversary(std::shared_ptr<ExactSolver> solver)
    : solver_(std::move(solver)) {
  if (!solver_) throw InvalidArgument("adv-exhaustive: no solver");
}

Side ExhaustiveAdversary::reply(const Position& pos, const Query&, const Partition& part) {
  const CandidateSet a = apply_reply(pos.candidates, part, Side::U);
  const CandidateSet b = apply_reply(pos.candidates, part, Side::V);
  if (a.empty()) return Side::V;
  if (b.empty()) return Side::U;
  const unsigned va = solver_->value(a);
  const unsigned vb = solver_->value(b);
  if (va != vb) return va > vb ? Side::U : Side::V;
  return a.size() >= b.size() ? Side::U : Side::V;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names = {"sp-elim",   "path-bisect", "gk-descent",
                                                 "phase-pair", "phase-edge", "dense-edge",
                                                 "greedy-split", "random"};
  return names;
}

const std::vector<std::string>& adversary_names() {
  static const std::vector<std::string> names = {"adv-halving", "adv-target", "adv-exhaustive"};
  return names;
}

namespace {

double density(const Graph& g, const StrategySpec& spec) {
  if (spec.p) return *spec.p;
  const double n = static_cast<double>(g.order());
  return n < 2 ? 0.0 : 2.0 * static_cast<double>(g.size()) / (n * (n - 1.0));
}

void require_pair(std::string_view name, QueryKind kind) {
  if (kind != QueryKind::Pair) {
    throw InvalidArgument(std::string(name) + " asks pair queries; use --kind pair");
  }
}

}  // namespace

std::unique_ptr<Algorithm> make_algorithm(std::string_view name, const Graph& g, QueryKind kind,
                                          const StrategySpec& spec) {
  const std::size_t n = g.order();
  if (name == "sp-elim") return std::make_unique<ShortestPathElimination>();
  if (name == "path-bisect") return std::make_unique<PathBisection>(g);
  if (name == "gk-descent") {
    require_pair(name, kind);
    return std::make_unique<SeparationDescent>(g);
  }
  if (name == "phase-pair") {
    require_pair(name, kind);
    const double d = density(g, spec) * static_cast<double>(n);
    return std::make_unique<PhasePair>(n, PhaseConfig::make(n, d, spec.b, spec.exponent),
                                       spec.seed);
  }
  if (name == "phase-edge") {
    const double d = density(g, spec) * static_cast<double>(n);
    return std::make_unique<PhaseEdge>(n, PhaseConfig::make(n, d, spec.b, spec.exponent),
                                       spec.seed);
  }
  if (name == "dense-edge") return std::make_unique<DenseEdge>(n, density(g, spec), spec.seed);
  if (name == "greedy-split") return std::make_unique<GreedySplit>();
  if (name == "random") return std::make_unique<RandomProgress>(spec.seed);
  throw InvalidArgument("unknown strategy '" + std::string(name) + "'");
}

std::unique_ptr<Adversary> make_adversary(std::string_view name, const Graph& g, QueryKind kind,
                                          const AdversarySpec& spec) {
  if (name == "adv-halving") return std::make_unique<HalvingAdversary>();
  if (name == "adv-target") {
    if (g.order() == 0) throw InvalidArgument("adv-target: empty graph");
    Vertex target;
    if (spec.target) {
      target = *spec.target;
      if (target >= g.order()) {
        throw InvalidArgument("adv-target: target " + std::to_string(target) +
                              " is not a vertex");
      }
    } else {
      Rng rng(derive_seed(spec.seed, "adv-target"));
      target = static_cast<Vertex>(rng.below(g.order()));
    }
    return std::make_unique<FixedTargetAdversary>(target);
  }
  if (name == "adv-exhaustive") {
    return std::make_unique<ExhaustiveAdversary>(std::make_shared<ExactSolver>(g, kind));
  }
  throw InvalidArgument("unknown adversary '" + std::string(name) + "'");
}

std::size_t default_budget(std::string_view name, const Graph& g, const StrategySpec& spec) {
  const std::size_t n = g.order();
  if (n >= 2 && (name == "phase-pair" || name == "phase-edge")) {
    const double d = density(g, spec) * static_cast<double>(n);
    return PhaseConfig::make(n, d, spec.b, spec.exponent).budget();
  }
  if (n >= 2 && name == "dense-edge") return dense_edge_budget(n, density(g, spec));
  return std::max<std::size_t>(1, n > 0 ? n - 1 : 0);
}

}  // namespace qsearch
