#include "qsearch/graph.hpp"

#include <algorithm>
#include <deque>
#include <mutex>

#include "qsearch/error.hpp"

namespace qsearch {

struct DistanceOracle::Slot {
  std::once_flag once;
  std::vector<Distance> row;
};

struct DistanceOracle::Connectivity {
  std::once_flag once;
  bool connected = true;
  Vertex reached = 0;
  Vertex unreached = 0;
};

DistanceOracle::DistanceOracle(std::size_t n)
    : connectivity_(std::make_unique<Connectivity>()) {
  slots_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) slots_.push_back(std::make_unique<Slot>());
}

DistanceOracle::~DistanceOracle() = default;

bool DistanceOracle::connected(const Graph& g) {
  std::call_once(connectivity_->once, [&] {
    if (g.order() == 0) return;
    auto row = bfs_distances(g, 0);
    auto it = std::find(row.begin(), row.end(), kUnreachable);
    if (it != row.end()) {
      connectivity_->connected = false;
      connectivity_->unreached = static_cast<Vertex>(it - row.begin());
    }
  });
  return connectivity_->connected;
}

std::span<const Distance> DistanceOracle::row(const Graph& g, Vertex source) {
  if (source >= slots_.size()) {
    throw InvalidArgument("source vertex " + std::to_string(source) + " out of range");
  }
  if (!connected(g)) {
    throw DisconnectedGraph(connectivity_->reached, connectivity_->unreached);
  }
  Slot& slot = *slots_[source];
  std::call_once(slot.once, [&] { slot.row = bfs_distances(g, source); });
  return slot.row;
}

std::size_t DistanceOracle::cached_rows() const {
  // Only meaningful when no row is being computed concurrently.
  return static_cast<std::size_t>(std::count_if(
      slots_.begin(), slots_.end(), [](const auto& s) { return !s->row.empty(); }));
}

Graph::Graph() : oracle_(std::make_shared<DistanceOracle>(0)) {}

Graph::Graph(std::size_t n, std::span<const Edge> edges, std::vector<std::string> labels)
    : adjacency_(n), labels_(std::move(labels)), oracle_(std::make_shared<DistanceOracle>(n)) {
  if (!labels_.empty() && labels_.size() != n) {
    throw InvalidArgument("expected " + std::to_string(n) + " labels, got " +
                          std::to_string(labels_.size()));
  }
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw InvalidArgument("edge " + std::to_string(e.u) + "-" + std::to_string(e.v) +
                            " has an endpoint outside 0.." + std::to_string(n == 0 ? 0 : n - 1));
    }
    if (e.u == e.v) {
      throw InvalidArgument("self-loop at vertex " + std::to_string(e.u));
    }
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
  for (auto& nbrs : adjacency_) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    edge_count_ += nbrs.size();
  }
  edge_count_ /= 2;

  bool any = false;
  for (std::size_t v = 0; v < labels_.size(); ++v) {
    if (labels_[v].empty()) continue;
    any = true;
    if (!label_index_.emplace(labels_[v], static_cast<Vertex>(v)).second) {
      throw InvalidArgument("duplicate vertex label '" + labels_[v] + "'");
    }
  }
  if (!any) labels_.clear();
}

bool Graph::adjacent(Vertex u, Vertex v) const {
  if (u >= order() || v >= order()) return false;
  const auto& a = adjacency_[u];
  return std::binary_search(a.begin(), a.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (Vertex u = 0; u < order(); ++u) {
    for (Vertex v : adjacency_[u]) {
      if (u < v) out.push_back({u, v});
    }
  }
  return out;
}

const std::string& Graph::label(Vertex v) const {
  static const std::string kEmpty;
  if (v >= order()) throw InvalidArgument("vertex " + std::to_string(v) + " out of range");
  return labels_.empty() ? kEmpty : labels_[v];
}

std::optional<Vertex> Graph::find_label(std::string_view label) const {
  auto it = label_index_.find(std::string(label));
  if (it == label_index_.end()) return std::nullopt;
  return it->second;
}

Vertex Graph::vertex(std::string_view label) const {
  if (auto v = find_label(label)) return *v;
  throw InvalidArgument("no vertex labelled '" + std::string(label) + "'");
}

bool Graph::connected() const { return oracle_->connected(*this); }

void Graph::require_connected() const {
  if (order() > 0) (void)oracle_->row(*this, 0);
}

std::span<const Distance> Graph::distances_from(Vertex source) const {
  return oracle_->row(*this, source);
}

std::vector<Distance> bfs_distances(const Graph& g, Vertex source) {
  std::vector<Distance> dist(g.order(), kUnreachable);
  std::vector<Vertex> queue;
  queue.reserve(g.order());
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex u = queue[head];
    for (Vertex w : g.neighbors(u)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

Graph build_graph(std::size_t n, std::span<const Edge> edges) { return Graph(n, edges); }

namespace {

Distance diameter_by_bfs(const Graph& g) {
  Distance best = 0;
  for (Vertex s = 0; s < g.order(); ++s) {
    auto row = bfs_distances(g, s);
    for (Vertex v = 0; v < g.order(); ++v) {
      if (row[v] == kUnreachable) throw DisconnectedGraph(s, v);
      best = std::max(best, row[v]);
    }
  }
  return best;
}

// Level-synchronous BFS on adjacency bitsets; cheap on dense graphs because
// a level costs |frontier| word-rows and stops as soon as everything is seen.
Distance diameter_by_bitsets(const Graph& g) {
  const std::size_t n = g.order();
  std::vector<VertexSet> adj;
  adj.reserve(n);
  for (Vertex v = 0; v < n; ++v) adj.emplace_back(n, g.neighbors(v));

  Distance best = 0;
  VertexSet visited(n), frontier(n), next(n);
  for (Vertex s = 0; s < n; ++s) {
    visited.clear();
    frontier.clear();
    visited.insert(s);
    frontier.insert(s);
    std::size_t seen = 1;
    Distance level = 0;
    while (seen < n) {
      next.clear();
      frontier.for_each([&](Vertex u) { next |= adj[u]; });
      next -= visited;
      const std::size_t added = next.size();
      if (added == 0) {
        throw DisconnectedGraph(s, (VertexSet::full(n) - visited).first());
      }
      visited |= next;
      seen += added;
      std::swap(frontier, next);
      ++level;
    }
    best = std::max(best, level);
  }
  return best;
}

}  // namespace

Distance diameter(const Graph& g) {
  if (g.order() <= 1) return 0;
  if (g.order() <= 16384) return diameter_by_bitsets(g);
  return diameter_by_bfs(g);
}

std::vector<Distance> distances_to_set(const Graph& g, const VertexSet& centers, Distance limit) {
  std::vector<Distance> dist(g.order(), limit + 1);
  std::vector<Vertex> queue;
  queue.reserve(g.order());
  centers.for_each([&](Vertex v) {
    dist[v] = 0;
    queue.push_back(v);
  });
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex u = queue[head];
    if (dist[u] >= limit) continue;
    for (Vertex w : g.neighbors(u)) {
      if (dist[w] > dist[u] + 1) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

VertexSet ball(const Graph& g, const VertexSet& centers, Distance radius) {
  g.require_connected();
  VertexSet out(g.order());
  if (radius < 0) return out;
  auto dist = distances_to_set(g, centers, radius);
  for (Vertex v = 0; v < g.order(); ++v) {
    if (dist[v] <= radius) out.insert(v);
  }
  return out;
}

VertexSet sphere(const Graph& g, const VertexSet& centers, Distance radius) {
  g.require_connected();
  VertexSet out(g.order());
  if (radius < 0) return out;
  auto dist = distances_to_set(g, centers, radius);
  for (Vertex v = 0; v < g.order(); ++v) {
    if (dist[v] == radius) out.insert(v);
  }
  return out;
}

}  // namespace qsearch
