#include <string>
#include <vector>

#include "qsearch/error.hpp"
#include "qsearch/graph.hpp"

namespace qsearch {

namespace {

void require_at_least_two(std::size_t n, const char* what) {
  if (n < 2) {
    throw InvalidArgument(std::string(what) + " needs n >= 2, got " + std::to_string(n));
  }
}

}  // namespace

Graph make_path(std::size_t n) {
  require_at_least_two(n, "make_path");
  std::vector<Edge> edges;
  for (Vertex v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1});
  return Graph(n, edges);
}

Graph make_star(std::size_t n) {
  require_at_least_two(n, "make_star");
  std::vector<Edge> edges;
  for (Vertex v = 1; v < n; ++v) edges.push_back({0, v});
  return Graph(n, edges);
}

Graph make_complete(std::size_t n) {
  require_at_least_two(n, "make_complete");
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v});
  }
  return Graph(n, edges);
}

Graph make_cycle(std::size_t n) {
  if (n < 3) throw InvalidArgument("make_cycle needs n >= 3, got " + std::to_string(n));
  std::vector<Edge> edges;
  for (Vertex v = 0; v < n; ++v) edges.push_back({v, static_cast<Vertex>((v + 1) % n)});
  return Graph(n, edges);
}

Graph make_separation_graph(unsigned height) {
  if (height < 1) throw InvalidArgument("make_separation_graph needs k >= 1");
  if (height > 20) throw InvalidArgument("make_separation_graph: k too large");
  const std::size_t n = (std::size_t{1} << (height + 1)) - 1;
  const Vertex first_leaf = static_cast<Vertex>((std::size_t{1} << height) - 1);

  std::vector<std::string> labels(n);
  for (unsigned level = 0; level <= height; ++level) {
    const std::size_t begin = (std::size_t{1} << level) - 1;
    for (std::size_t idx = 0; idx < (std::size_t{1} << level); ++idx) {
      labels[begin + idx] = "t:" + std::to_string(level) + ":" + std::to_string(idx);
    }
  }

  std::vector<Edge> edges;
  for (Vertex u = first_leaf; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v});
  }
  // Leaves below internal vertex u at level j form the contiguous heap range
  // [(u+1) 2^(k-j) - 1, (u+2) 2^(k-j) - 1).
  for (unsigned level = 0; level < height; ++level) {
    const std::size_t begin = (std::size_t{1} << level) - 1;
    const std::size_t span = std::size_t{1} << (height - level);
    for (std::size_t u = begin; u < begin + (std::size_t{1} << level); ++u) {
      const std::size_t lo = (u + 1) * span - 1;
      for (std::size_t leaf = lo; leaf < lo + span; ++leaf) {
        edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(leaf)});
      }
    }
  }
  return Graph(n, edges, std::move(labels));
}

Graph sample_gnp(const GnpParams& params) {
  if (!(params.p >= 0.0 && params.p <= 1.0)) {
    throw InvalidArgument("edge probability must lie in [0,1], got " + std::to_string(params.p));
  }
  Rng rng(params.seed);
  std::vector<Edge> edges;
  const std::size_t n = params.n;
  edges.reserve(static_cast<std::size_t>(params.p * double(n) * double(n) / 2.0 * 1.1) + 16);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (rng.bernoulli(params.p)) edges.push_back({u, v});
    }
  }
  return Graph(n, edges);
}

Graph sample_connected_gnp(const GnpParams& params, unsigned max_attempts) {
  for (unsigned attempt = 0; attempt < max_attempts; ++attempt) {
    GnpParams trial = params;
    trial.seed = attempt == 0 ? params.seed : derive_seed(params.seed, "gnp-resample", attempt);
    Graph g = sample_gnp(trial);
    if (g.connected()) return g;
  }
  throw ResourceLimit("no connected G(" + std::to_string(params.n) + ", " +
                      std::to_string(params.p) + ") sample within " +
                      std::to_string(max_attempts) + " attempts");
}

}  // namespace qsearch
