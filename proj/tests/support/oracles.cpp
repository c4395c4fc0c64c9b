#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>

#include "qsearch/rng.hpp"

namespace oracle {

Matrix floyd_warshall(const qsearch::Graph& g) {
  const std::size_t n = g.order();
  Matrix d(n, std::vector<int>(n, kInf));
  for (std::size_t u = 0; u < n; ++u) d[u][u] = 0;
  for (const auto& e : g.edges()) d[e.u][e.v] = d[e.v][e.u] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

namespace {

bool connected_mask(unsigned n, const std::vector<std::pair<unsigned, unsigned>>& pairs,
                    std::uint32_t mask) {
  std::vector<unsigned> parent(n);
  std::iota(parent.begin(), parent.end(), 0U);
  auto find = [&](unsigned x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  unsigned comps = n;
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    if (!((mask >> e) & 1U)) continue;
    const unsigned a = find(pairs[e].first), b = find(pairs[e].second);
    if (a != b) {
      parent[a] = b;
      --comps;
    }
  }
  return comps == 1;
}

}  // namespace

std::vector<qsearch::Graph> connected_graphs(unsigned n) {
  std::vector<std::pair<unsigned, unsigned>> pairs;
  std::vector<std::vector<int>> index(n, std::vector<int>(n, -1));
  for (unsigned u = 0; u < n; ++u)
    for (unsigned v = u + 1; v < n; ++v) {
      index[u][v] = index[v][u] = static_cast<int>(pairs.size());
      pairs.emplace_back(u, v);
    }
  std::vector<std::vector<unsigned>> perms;
  std::vector<unsigned> perm(n);
  std::iota(perm.begin(), perm.end(), 0U);
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));

  std::set<std::uint32_t> seen;
  std::vector<qsearch::Graph> out;
  const std::uint32_t total = pairs.empty() ? 1U : (1U << pairs.size());
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    if (!connected_mask(n, pairs, mask)) continue;
    std::uint32_t canon = mask;
    for (const auto& p : perms) {
      std::uint32_t m = 0;
      for (std::size_t e = 0; e < pairs.size(); ++e) {
        if ((mask >> e) & 1U) m |= 1U << index[p[pairs[e].first]][p[pairs[e].second]];
      }
      canon = std::min(canon, m);
    }
    if (!seen.insert(canon).second) continue;
    std::vector<qsearch::Edge> edges;
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      if ((canon >> e) & 1U) edges.push_back({pairs[e].first, pairs[e].second});
    }
    out.push_back(qsearch::build_graph(n, edges));
  }
  return out;
}

GameOracle::GameOracle(const qsearch::Graph& g, bool edge_queries)
    : n_(static_cast<unsigned>(g.order())) {
  const Matrix d = floyd_warshall(g);
  for (unsigned u = 0; u < n_; ++u)
    for (unsigned v = u + 1; v < n_; ++v) {
      if (edge_queries && d[u][v] != 1) continue;
      std::uint32_t cu = 0, cv = 0;
      for (unsigned x = 0; x < n_; ++x) {
        if (d[u][x] <= d[v][x]) cu |= 1U << x;
        if (d[v][x] <= d[u][x]) cv |= 1U << x;
      }
      closer_.push_back(cu);
      closer_.push_back(cv);
    }
}

bool GameOracle::win(std::uint32_t s, unsigned t) const {
  if (std::popcount(s) <= 1) return true;
  if (t == 0) return false;
  for (std::size_t q = 0; q < closer_.size(); q += 2) {
    if (win(s & closer_[q], t - 1) && win(s & closer_[q + 1], t - 1)) return true;
  }
  return false;
}

unsigned GameOracle::value(std::uint32_t s) const {
  unsigned t = 0;
  while (!win(s, t)) ++t;
  return t;
}

qsearch::Graph random_connected(std::uint64_t seed, unsigned min_n, unsigned max_n) {
  qsearch::Rng rng(seed);
  const unsigned n = min_n + static_cast<unsigned>(rng.below(max_n - min_n + 1));
  // Random spanning tree plus random extra edges.
  std::vector<qsearch::Edge> edges;
  for (unsigned v = 1; v < n; ++v) {
    edges.push_back({static_cast<qsearch::Vertex>(rng.below(v)), v});
  }
  const double p = rng.unit() * 0.6;
  for (unsigned u = 0; u < n; ++u)
    for (unsigned v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) edges.push_back({u, v});
  return qsearch::build_graph(n, edges);
}

}  // namespace oracle
