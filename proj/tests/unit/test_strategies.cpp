#include <doctest.h>

#include <cmath>
#include <functional>

#include "oracles.hpp"
#include "qsearch/error.hpp"
#include "qsearch/solver.hpp"
#include "qsearch/strategies.hpp"

using namespace qsearch;

namespace {

// Worst case over all reply sequences by plain recursion on cloned
// strategies, without memoization. nullopt if some line exceeds the budget.
std::optional<std::size_t> brute_worst(const Graph& g, QueryKind kind, const Algorithm& alg,
                                       const CandidateSet& s, std::size_t round,
                                       std::size_t budget) {
  if (s.size() <= 1) return 0;
  if (budget == 0) return std::nullopt;
  auto probe = alg.clone();
  const Query q = probe->next_query(Position{g, kind, s, round});
  const Partition part = partition(g, s, q);
  std::size_t worst = 0;
  for (Side side : {Side::U, Side::V}) {
    const CandidateSet next = apply_reply(s, part, side);
    if (next.empty()) continue;
    auto branch = alg.clone();
    (void)branch->next_query(Position{g, kind, s, round});
    branch->observe(q, side, next);
    const auto sub = brute_worst(g, kind, *branch, next, round + 1, budget - 1);
    if (!sub) return std::nullopt;
    worst = std::max(worst, *sub + 1);
  }
  return worst;
}

// Every candidate set reachable after `rounds` rounds.
void reachable(const Graph& g, QueryKind kind, const Algorithm& alg, const CandidateSet& s,
               std::size_t round, std::size_t rounds, std::vector<CandidateSet>& out) {
  if (round == rounds || s.size() <= 1) {
    out.push_back(s);
    return;
  }
  auto probe = alg.clone();
  const Query q = probe->next_query(Position{g, kind, s, round});
  const Partition part = partition(g, s, q);
  for (Side side : {Side::U, Side::V}) {
    const CandidateSet next = apply_reply(s, part, side);
    if (next.empty()) continue;
    auto branch = alg.clone();
    (void)branch->next_query(Position{g, kind, s, round});
    branch->observe(q, side, next);
    reachable(g, kind, *branch, next, round + 1, rounds, out);
  }
}

bool is_ancestor_chain(const CandidateSet& s) {
  if (s.empty()) return true;
  const auto members = s.members();
  VertexSet chain(s.universe());
  for (Vertex w = members.back();; w = (w - 1) / 2) {
    chain.insert(w);
    if (w == 0) break;
  }
  return s.is_subset_of(chain);
}

Transcript run(const Graph& g, QueryKind kind, const std::string& alg_name, std::uint64_t seed,
               std::size_t budget = 0) {
  StrategySpec spec;
  spec.seed = seed;
  auto alg = make_algorithm(alg_name, g, kind, spec);
  HalvingAdversary adv;
  PlayOptions opt;
  opt.budget = budget;
  return play(g, kind, *alg, adv, opt);
}

}  // namespace

TEST_SUITE("sp-elim") {
  TEST_CASE("complete graphs take n-1 rounds against any adversary") {
    for (std::size_t n = 2; n <= 9; ++n) {
      const Graph k = make_complete(n);
      ShortestPathElimination alg;
      CHECK(run(k, QueryKind::Edge, "sp-elim", 0).rounds.size() == n - 1);
      for (Vertex target = 0; target < n; ++target) {
        ShortestPathElimination a;
        FixedTargetAdversary adv(target);
        CHECK(play(k, QueryKind::Edge, a, adv).rounds.size() == n - 1);
      }
      if (n <= 8) CHECK(certify_upper(k, QueryKind::Edge, alg, n) == n - 1);
    }
  }

  TEST_CASE("small cases") {
    CHECK(run(make_path(2), QueryKind::Edge, "sp-elim", 0).rounds.size() == 1);
    ShortestPathElimination alg;
    const auto c6 = certify_upper(make_cycle(6), QueryKind::Edge, alg, 10);
    REQUIRE(c6);
    CHECK(*c6 <= 5);
    CHECK(certify_upper(make_complete(4), QueryKind::Edge, alg, 10) == 3);
  }

  TEST_CASE("every round eliminates a candidate") {
    for (std::uint64_t s = 0; s < 40; ++s) {
      const Graph g = oracle::random_connected(derive_seed(1, "spelim", s), 2, 25);
      for (Vertex target : {Vertex(0), Vertex(g.order() - 1)}) {
        ShortestPathElimination alg;
        FixedTargetAdversary adv(target);
        const Transcript t = play(g, QueryKind::Edge, alg, adv);
        std::size_t prev = g.order();
        for (const Round& r : t.rounds) {
          CHECK(g.adjacent(r.query.u, r.query.v));
          CHECK(r.candidates_after + 1 <= prev);
          prev = r.candidates_after;
        }
        CHECK(t.final_candidates == VertexSet(g.order(), {target}));
      }
    }
  }
}

TEST_SUITE("path-bisect") {
  TEST_CASE("worst case is ceil(log2 n)") {
    for (std::size_t n = 2; n <= 40; ++n) {
      const Graph p = make_path(n);
      PathBisection alg(p);
      CAPTURE(n);
      CHECK(certify_upper(p, QueryKind::Edge, alg, n) == ceil_log2(n));
      CHECK(brute_worst(p, QueryKind::Edge, alg, VertexSet::full(n), 0, n) == ceil_log2(n));
    }
  }

  TEST_CASE("relabelled paths") {
    const Graph p = build_graph(5, {{3, 0}, {0, 4}, {4, 1}, {1, 2}});
    PathBisection alg(p);
    CHECK(certify_upper(p, QueryKind::Edge, alg, 5) == 3);
  }

  TEST_CASE("non-paths are rejected") {
    CHECK_THROWS_AS(PathBisection(make_star(4)), InvalidArgument);
    CHECK_THROWS_AS(PathBisection(make_cycle(5)), InvalidArgument);
  }
}

TEST_SUITE("gk-descent") {
  TEST_CASE("at most 2k rounds") {
    for (unsigned k = 1; k <= 4; ++k) {
      const Graph g = make_separation_graph(k);
      SeparationDescent alg(g);
      CHECK(alg.height() == k);
      const auto worst = certify_upper(g, QueryKind::Pair, alg, 2 * k);
      REQUIRE(worst);
      CHECK(*worst <= 2 * k);
      CHECK(brute_worst(g, QueryKind::Pair, alg, VertexSet::full(g.order()), 0, 2 * k) == worst);
    }
  }

  TEST_CASE("after k rounds the candidates lie on one ancestor chain") {
    for (unsigned k = 1; k <= 4; ++k) {
      const Graph g = make_separation_graph(k);
      SeparationDescent alg(g);
      std::vector<CandidateSet> sets;
      reachable(g, QueryKind::Pair, alg, VertexSet::full(g.order()), 0, k, sets);
      for (const auto& s : sets) {
        CAPTURE(s.to_string());
        CHECK(s.size() <= k + 1);
        CHECK(is_ancestor_chain(s));
      }
    }
  }

  TEST_CASE("labels are required") {
    CHECK_THROWS_AS(SeparationDescent(make_complete(7)), InvalidArgument);
    CHECK_THROWS_AS(make_algorithm("gk-descent", make_separation_graph(2), QueryKind::Edge),
                    InvalidArgument);
  }

  TEST_CASE("edge queries on G_k remove at most one leaf for some reply") {
    for (unsigned k : {2U, 3U}) {
      const Graph g = make_separation_graph(k);
      const std::size_t first_leaf = (std::size_t{1} << k) - 1;
      VertexSet leaves(g.order());
      for (std::size_t v = first_leaf; v < g.order(); ++v) leaves.insert(Vertex(v));
      for (const Edge& e : g.edges()) {
        const Partition part = partition(g, leaves, {e.u, e.v});
        const std::size_t best = std::max(apply_reply(leaves, part, Side::U).size(),
                                          apply_reply(leaves, part, Side::V).size());
        CHECK(best + 1 >= leaves.size());
      }
      const unsigned restricted = game_value(g, QueryKind::Edge, leaves).value;
      CHECK(restricted == (1U << k) - 1);
    }
  }
}

TEST_SUITE("greedy-split") {
  TEST_CASE("minimizes the worse branch") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Graph g = oracle::random_connected(derive_seed(3, "greedy", s), 3, 12);
      for (QueryKind kind : {QueryKind::Pair, QueryKind::Edge}) {
        GreedySplit alg;
        const CandidateSet all = VertexSet::full(g.order());
        const Query q = alg.next_query(Position{g, kind, all, 0});
        auto worse = [&](const Query& x) {
          const Partition p = partition(g, all, x);
          return std::max(p.u_side().size(), p.v_side().size());
        };
        const std::size_t chosen = worse(q);
        for (Vertex u = 0; u < g.order(); ++u)
          for (Vertex v = u + 1; v < g.order(); ++v)
            if (is_admissible(g, kind, {u, v})) CHECK(chosen <= worse({u, v}));
        CHECK(chosen < g.order());
      }
    }
  }
}

TEST_SUITE("phase strategies") {
  TEST_CASE("budget arithmetic") {
    const PhaseConfig c = PhaseConfig::make(2000, 204.0);
    CHECK(c.exponent == 1);
    CHECK(c.sequence_length == 41);
    CHECK(c.phases == 6);
    CHECK(c.budget() == 240);
    CHECK(c.a() == doctest::Approx(2.0 / 3.0));
    CHECK(PhaseConfig::make(1000, 100.0).sequence_length == 41);
    CHECK(PhaseConfig::make(3000, 16.0).exponent == 2);
    CHECK(PhaseConfig::make(3000, 16.0).sequence_length ==
          static_cast<std::size_t>(std::ceil(4.0 * 3000 / 256.0)) + 1);
    CHECK_THROWS_AS(PhaseConfig::make(100, 10.0, 1.0), InvalidArgument);
    CHECK(dense_edge_budget(100, 0.5) == 222);
    CHECK(dense_edge_budget(2, 0.5) >= 1);
    CHECK(dense_edge_budget(200, 0.5) == static_cast<std::size_t>(std::ceil(48 * std::log(200.0))));
  }

  TEST_CASE("on complete graphs an opening query removes a vertex") {
    const Graph k = make_complete(12);
    for (const std::string name : {"phase-pair", "phase-edge", "random"}) {
      const QueryKind kind = name == "phase-pair" ? QueryKind::Pair : QueryKind::Edge;
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Transcript t = run(k, kind, name, seed, 500);
        REQUIRE_FALSE(t.rounds.empty());
        CHECK(t.rounds[0].candidates_after == 11);
        std::size_t prev = 12;
        for (const Round& r : t.rounds) {
          CHECK(r.query.u != r.query.v);
          CHECK(r.candidates_after <= prev);
          prev = r.candidates_after;
        }
      }
    }
    CHECK_THROWS_AS(make_algorithm("dense-edge", k, QueryKind::Edge), InvalidArgument);
  }

  TEST_CASE("phase-pair carries the previous reply") {
    const Graph g = sample_connected_gnp({300, 0.2, 17});
    const PhaseConfig cfg = PhaseConfig::make(300, 60.0);
    PhasePair alg(300, cfg, 5);
    HalvingAdversary adv;
    PlayOptions opt;
    opt.budget = cfg.budget();
    const Transcript t = play(g, QueryKind::Pair, alg, adv, opt);
    for (std::size_t r = 1; r < t.rounds.size(); ++r) {
      if (r % cfg.rounds_per_phase() == 0) continue;
      const Round& prev = t.rounds[r - 1];
      const Vertex replied = prev.reply == Side::U ? prev.query.u : prev.query.v;
      CHECK(t.rounds[r].query.u == replied);
    }
  }

  TEST_CASE("phase-edge and dense-edge name edges") {
    const Graph g = sample_connected_gnp({200, 0.1, 4});
    for (const std::string name : {"phase-edge", "dense-edge"}) {
      const Transcript t = run(g, QueryKind::Edge, name, 9);
      for (const Round& r : t.rounds) CHECK(g.adjacent(r.query.u, r.query.v));
    }
    CHECK_THROWS_AS(make_algorithm("phase-pair", g, QueryKind::Edge), InvalidArgument);
  }

  TEST_CASE("seeded strategies are reproducible") {
    const Graph g = sample_connected_gnp({150, 0.15, 21});
    for (const std::string name : {"phase-pair", "phase-edge", "dense-edge", "random"}) {
      const QueryKind kind = name == "phase-pair" ? QueryKind::Pair : QueryKind::Edge;
      const Transcript a = run(g, kind, name, 77), b = run(g, kind, name, 77),
                       c = run(g, kind, name, 78);
      REQUIRE(a.rounds.size() == b.rounds.size());
      for (std::size_t r = 0; r < a.rounds.size(); ++r) {
        CHECK(a.rounds[r].query == b.rounds[r].query);
        CHECK(a.rounds[r].reply == b.rounds[r].reply);
      }
      bool differs = a.rounds.size() != c.rounds.size();
      for (std::size_t r = 0; !differs && r < a.rounds.size(); ++r)
        differs = a.rounds[r].query != c.rounds[r].query;
      CHECK(differs);
    }
  }

  TEST_CASE("certification of a fixed tape matches plain recursion") {
    const Graph g = make_complete(6);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      PhasePair alg(6, PhaseConfig::make(6, 3.0), seed);
      const auto memo = certify_upper(g, QueryKind::Pair, alg, 12);
      CHECK(memo == brute_worst(g, QueryKind::Pair, alg, VertexSet::full(6), 0, 12));
      RandomProgress rnd(seed);
      const Graph h = oracle::random_connected(seed, 5, 8);
      CHECK(certify_upper(h, QueryKind::Edge, rnd, 10) ==
            brute_worst(h, QueryKind::Edge, rnd, VertexSet::full(h.order()), 0, 10));
    }
  }
}

TEST_SUITE("adversaries") {
  TEST_CASE("halving") {
    const Graph k5 = make_complete(5);
    HalvingAdversary adv;
    const CandidateSet all = VertexSet::full(5);
    const Partition part = partition(k5, all, {1, 3});
    CHECK(apply_reply(all, part, adv.reply({k5, QueryKind::Pair, all, 0}, {1, 3}, part)).size() == 4);

    for (std::uint64_t s = 0; s < 40; ++s) {
      const Graph g = oracle::random_connected(derive_seed(2, "halving", s), 2, 20);
      for (const std::string name : {"sp-elim", "greedy-split", "random"}) {
        const Transcript t = run(g, QueryKind::Pair, name, s);
        CHECK(t.rounds.size() >= ceil_log2(g.order()));
        std::size_t prev = g.order();
        for (const Round& r : t.rounds) {
          CHECK(2 * r.candidates_after >= prev);
          prev = r.candidates_after;
        }
      }
    }
  }

  TEST_CASE("fixed target") {
    const Graph p4 = make_path(4);
    const CandidateSet all = VertexSet::full(4);
    FixedTargetAdversary adv(3);
    const Partition part = partition(p4, all, {1, 2});
    CHECK(adv.reply({p4, QueryKind::Edge, all, 0}, {1, 2}, part) == Side::V);

    const Graph k4 = make_complete(4);
    FixedTargetAdversary tie(3);
    const Partition eq = partition(k4, all, {0, 1});
    CHECK(tie.reply({k4, QueryKind::Pair, all, 0}, {0, 1}, eq) == Side::U);
    const CandidateSet some(4, {1, 3});
    const Partition lopsided = partition(k4, some, {0, 1});
    CHECK(tie.reply({k4, QueryKind::Pair, some, 0}, {0, 1}, lopsided) == Side::V);

    FixedTargetAdversary outside(2);
    CHECK_THROWS_AS(outside.reply({k4, QueryKind::Pair, some, 0}, {0, 1}, lopsided),
                    InvalidArgument);
  }
}

TEST_SUITE("registry") {
  TEST_CASE("names") {
    for (const auto& name : {"sp-elim", "path-bisect", "gk-descent", "phase-pair", "phase-edge",
                             "dense-edge", "greedy-split"}) {
      const auto& names = algorithm_names();
      CHECK(std::find(names.begin(), names.end(), name) != names.end());
    }
    for (const auto& name : {"adv-halving", "adv-target", "adv-exhaustive"}) {
      const auto& names = adversary_names();
      CHECK(std::find(names.begin(), names.end(), name) != names.end());
    }
    CHECK_THROWS_AS(make_algorithm("bogus", make_path(3), QueryKind::Pair), InvalidArgument);
    CHECK_THROWS_AS(make_adversary("bogus", make_path(3), QueryKind::Pair), InvalidArgument);
    CHECK(make_algorithm("path-bisect", make_path(3), QueryKind::Edge)->name() == "path-bisect");
    AdversarySpec target;
    target.target = 2;
    CHECK(make_adversary("adv-target", make_path(3), QueryKind::Edge, target)->name() ==
          "adv-target");
  }

  TEST_CASE("default budgets") {
    const Graph k = make_complete(10);
    CHECK(default_budget("sp-elim", k, {}) == 9);
    CHECK(default_budget("sp-elim", build_graph(1, {}), {}) == 1);
    StrategySpec dense;
    dense.p = 0.5;
    CHECK(default_budget("dense-edge", make_complete(100), dense) == 222);
    StrategySpec sparse;
    sparse.p = 204.0 / 2000.0;
    const Graph g = sample_gnp({2000, sparse.p.value(), 1});
    CHECK(default_budget("phase-pair", g, sparse) == 240);
    CHECK(default_budget("phase-edge", g, sparse) == 240);
  }
}
