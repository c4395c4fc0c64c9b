#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qsearch/rng.hpp"
#include "qsearch/vertex_set.hpp"

namespace qsearch {

using Distance = std::int32_t;
inline constexpr Distance kUnreachable = -1;

struct Edge {
  Vertex u;
  Vertex v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

class DistanceOracle;

// Undirected simple graph on vertices 0..n-1 with sorted adjacency lists and
// optional per-vertex role labels.
//
// Immutable after construction. Shortest-path rows are computed lazily per
// source and cached in a DistanceOracle shared between copies; each row is
// computed exactly once even under concurrent readers.
class Graph {
 public:
  Graph();

  // Deduplicates edges; throws InvalidArgument on self-loops or out-of-range
  // endpoints. `labels` is either empty or has one entry per vertex.
  Graph(std::size_t n, std::span<const Edge> edges,
        std::vector<std::string> labels = {});

  std::size_t order() const noexcept { return adjacency_.size(); }
  std::size_t size() const noexcept { return edge_count_; }

  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_.at(v); }
  std::size_t degree(Vertex v) const { return adjacency_.at(v).size(); }
  bool adjacent(Vertex u, Vertex v) const;

  // All edges with u < v in lexicographic order.
  std::vector<Edge> edges() const;

  bool has_labels() const noexcept { return !labels_.empty(); }
  // Empty string for unlabeled vertices.
  const std::string& label(Vertex v) const;
  std::optional<Vertex> find_label(std::string_view label) const;
  // Throws InvalidArgument if the label is absent.
  Vertex vertex(std::string_view label) const;
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  bool connected() const;
  // Throws DisconnectedGraph naming two mutually unreachable vertices.
  void require_connected() const;

  // BFS row from `source`; throws DisconnectedGraph if some vertex is
  // unreachable.
  std::span<const Distance> distances_from(Vertex source) const;
  Distance distance(Vertex u, Vertex v) const { return distances_from(u)[v]; }

 private:
  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, Vertex> label_index_;
  std::size_t edge_count_ = 0;
  std::shared_ptr<DistanceOracle> oracle_;
};

// Lazily filled per-source BFS distance cache.
class DistanceOracle {
 public:
  explicit DistanceOracle(std::size_t n);
  ~DistanceOracle();

  DistanceOracle(const DistanceOracle&) = delete;
  DistanceOracle& operator=(const DistanceOracle&) = delete;

  std::span<const Distance> row(const Graph& g, Vertex source);
  bool connected(const Graph& g);
  std::size_t cached_rows() const;

 private:
  struct Slot;
  std::vector<std::unique_ptr<Slot>> slots_;
  struct Connectivity;
  std::unique_ptr<Connectivity> connectivity_;
};

// Plain BFS from one source without caching; kUnreachable for other
// components.
std::vector<Distance> bfs_distances(const Graph& g, Vertex source);

// build_graph: n vertices with the given unordered pairs.
Graph build_graph(std::size_t n, std::span<const Edge> edges);
inline Graph build_graph(std::size_t n, std::initializer_list<Edge> edges) {
  return build_graph(n, std::span<const Edge>(edges.begin(), edges.size()));
}

// Largest distance over all pairs. Throws DisconnectedGraph.
Distance diameter(const Graph& g);

// N_<=radius(Z) and N_radius(Z) for a vertex set Z (multi-source BFS).
VertexSet ball(const Graph& g, const VertexSet& centers, Distance radius);
VertexSet sphere(const Graph& g, const VertexSet& centers, Distance radius);

// Distance of every vertex to the nearest member of `centers`, truncated:
// vertices farther than `limit` get limit + 1.
std::vector<Distance> distances_to_set(const Graph& g, const VertexSet& centers,
                                       Distance limit);

// ---------------------------------------------------------------------------
// Constructors

Graph make_path(std::size_t n);
Graph make_star(std::size_t n);
Graph make_complete(std::size_t n);
Graph make_cycle(std::size_t n);

// G_k: vertex set of the full binary tree of height k in heap order
// (root 0, children of v are 2v+1 and 2v+2). The leaves form a clique and
// every internal vertex is adjacent to exactly the leaves of its subtree.
// Vertex labels are "t:<level>:<index>".
Graph make_separation_graph(unsigned height);

struct GnpParams {
  std::size_t n = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
};

// Each of the C(n,2) pairs independently with probability p.
Graph sample_gnp(const GnpParams& params);

// Resamples G(n,p) with derived seeds until connected; throws ResourceLimit
// after `max_attempts`.
Graph sample_connected_gnp(const GnpParams& params, unsigned max_attempts = 1000);

}  // namespace qsearch
