#include <doctest.h>

#include <set>
#include <sstream>

#include "instances.hpp"
#include "qsearch/error.hpp"
#include "qsearch/graph_io.hpp"
#include "qsearch/hardness.hpp"
#include "qsearch/strategies.hpp"

using namespace qsearch;

namespace {

const ThreeXCInstance& planted() {
  static const ThreeXCInstance inst = load_instance(oracle::data_path("planted_n9.txt"));
  return inst;
}

const ThreeXCInstance& nocover() {
  static const ThreeXCInstance inst = load_instance(oracle::data_path("nocover_n9.txt"));
  return inst;
}

std::shared_ptr<const ReductionGraph> gadget(const ThreeXCInstance& inst) {
  return std::make_shared<const ReductionGraph>(build_reduction(inst));
}

// Stars (copy, element) losing at least one vertex between two sets.
std::set<std::pair<unsigned, unsigned>> touched(const ReductionGraph& rg, const CandidateSet& before,
                                                const CandidateSet& after) {
  std::set<std::pair<unsigned, unsigned>> out;
  (before - after).for_each([&](Vertex v) {
    if (auto s = rg.star_of(v)) out.insert(*s);
  });
  return out;
}

// Answers x whenever x is named, otherwise keeps the larger side.
class PreferX final : public Adversary {
 public:
  explicit PreferX(Vertex x) : x_(x) {}
  std::string name() const override { return "prefer-x"; }
  Side reply(const Position& pos, const Query& q, const Partition& part) override {
    if (q.u == x_ && !part.u_side().empty()) return Side::U;
    if (q.v == x_ && !part.v_side().empty()) return Side::V;
    return HalvingAdversary{}.reply(pos, q, part);
  }

 private:
  Vertex x_;
};

}  // namespace

TEST_SUITE("instances") {
  TEST_CASE("parse") {
    const ThreeXCInstance a = parse_instance("n=6 k=2\n1 2 3\n4 5 6\n");
    CHECK(a.m() == 2);
    CHECK(a.sets[1] == std::array<unsigned, 3>{3, 4, 5});
    const ThreeXCInstance b = parse_instance("6 2 3\n1 2 3\n4 5 6\n1 4 5  # comment\n");
    CHECK(b.m() == 3);
    CHECK(parse_instance(format_instance(b)).sets == b.sets);
    CHECK(planted().m() == 8);
  }

  TEST_CASE("parse errors name the violation") {
    auto message = [](const char* text) {
      try {
        (void)parse_instance(text);
      } catch (const ParseError& e) {
        return std::string(e.what());
      }
      return std::string();
    };
    CHECK(message("n=6 k=2\n1 2\n4 5 6\n").find("expected 3") != std::string::npos);
    CHECK(message("n=6 k=2\n1 2 3\n1 4 6\n").find("element 5") != std::string::npos);
    CHECK(message("n=5 k=2\n1 2 3\n").find("divisible") != std::string::npos);
    CHECK(message("n=6 k=2\n1 2 7\n4 5 6\n").find("outside") != std::string::npos);
    CHECK(message("n=6 k=2\n1 1 2\n3 4 5\n4 5 6\n").find("repeats") != std::string::npos);
    CHECK(message("6 2 3\n1 2 3\n4 5 6\n").find("m=3") != std::string::npos);
    CHECK(message("").find("empty") != std::string::npos);
    CHECK_THROWS_AS(load_instance("/nonexistent/instance.txt"), Error);
  }

  TEST_CASE("exact cover by brute force") {
    const auto yes = parse_instance("6 2 3\n1 2 3\n4 5 6\n1 4 5\n");
    CHECK(exact_cover_bruteforce(yes) == std::vector<std::size_t>{0, 1});
    const auto no = parse_instance("6 2 3\n1 2 3\n3 4 5\n2 5 6\n");
    CHECK_FALSE(exact_cover_bruteforce(no).has_value());
    ThreeXCInstance empty;
    CHECK(exact_cover_bruteforce(empty) == std::vector<std::size_t>{});
    CHECK(exact_cover_bruteforce(planted()).has_value());
    CHECK(is_exact_cover(planted(), *exact_cover_bruteforce(planted())));
    CHECK_FALSE(exact_cover_bruteforce(nocover()).has_value());
    CHECK_FALSE(is_exact_cover(yes, {0, 2}));
    const auto big = oracle::random_instance(1, 9, 26, true);
    CHECK_THROWS_AS(exact_cover_bruteforce(big), ResourceLimit);
  }

  TEST_CASE("brute force agrees with exhaustive subset search") {
    for (std::uint64_t s = 0; s < 40; ++s) {
      const auto inst = oracle::random_instance(s, 2 + s % 3, 6 + s % 5, s % 2 == 0);
      bool any = false;
      const std::size_t m = inst.m();
      for (std::uint32_t mask = 0; mask < (1U << m) && !any; ++mask) {
        if (std::popcount(mask) != static_cast<int>(inst.k)) continue;
        std::vector<int> count(inst.n, 0);
        for (std::size_t j = 0; j < m; ++j)
          if ((mask >> j) & 1U)
            for (unsigned e : inst.sets[j]) ++count[e];
        any = std::all_of(count.begin(), count.end(), [](int c) { return c == 1; });
      }
      const auto found = exact_cover_bruteforce(inst);
      CHECK(found.has_value() == any);
      if (found) CHECK(is_exact_cover(inst, *found));
    }
  }
}

TEST_SUITE("reduction graph") {
  TEST_CASE("counts for the minimal instance") {
    const auto rg = gadget(planted());
    CHECK(rg->graph.order() == 1077);
    CHECK(expected_reduction_order(9, 3, 8) == 1077);
    CHECK(rg->leaves_per_star() == 22);
    CHECK(rg->graph.degree(rg->x) == 40);
    CHECK(rg->graph.degree(rg->y) == 45);
    // Element 1 lies in sets 1, 4 and 7.
    CHECK(rg->graph.degree(rg->graph.vertex("a:1:1")) == 1 + 22 + 3);
    // Element 3 lies in sets 1 and 6.
    CHECK(rg->graph.degree(rg->graph.vertex("a:2:3")) == 25);
    CHECK(rg->graph.label(rg->x) == "x");
    CHECK(rg->graph.vertex("L:5:9:22") == rg->leaves[4][8][21]);
    CHECK(rg->star(0, 0).size() == 23);
    CHECK(rg->star_union().size() == 45 * 23);
    CHECK(rg->star_of(rg->leaves[2][3][4]) == std::pair<unsigned, unsigned>{2, 3});
    CHECK_FALSE(rg->star_of(rg->x).has_value());
    CHECK(oracle::reduction_violations(*rg).empty());
    const StructureReport rep = check_structure(*rg, true);
    CHECK(rep.ok());
    CHECK(rep.diameter == 4);
    CHECK(rep.edges == rg->graph.size());
  }

  TEST_CASE("random instances satisfy the structural rules") {
    for (std::uint64_t s = 0; s < 12; ++s) {
      const auto inst = oracle::random_instance(derive_seed(3, "structure", s), 2 + s % 3,
                                                4 + s % 6, s % 2 == 1);
      const auto rg = gadget(inst);
      CAPTURE(format_instance(inst));
      const auto bad = oracle::reduction_violations(*rg);
      CHECK(bad.empty());
      const StructureReport rep = check_structure(*rg, false);
      CHECK(rep.ok());
      CHECK(rep.vertices == expected_reduction_order(inst.n, inst.k, inst.m()));
    }
  }

  TEST_CASE("m must exceed k") {
    const auto inst = parse_instance("6 2 2\n1 2 3\n4 5 6\n");
    CHECK_THROWS_AS(build_reduction(inst), InvalidArgument);
  }

  TEST_CASE("export uses labelled edge lists") {
    const auto rg = gadget(parse_instance("6 2 3\n1 2 3\n4 5 6\n1 4 5\n"));
    std::ostringstream out;
    write_edge_list(out, rg->graph);
    std::istringstream in(out.str());
    const Graph back = read_edge_list(in);
    CHECK(back.edges() == rg->graph.edges());
    CHECK(back.label(1) == "y");
  }
}

TEST_SUITE("reduction strategies") {
  TEST_CASE("the cover strategy stays within 5m") {
    const auto rg = gadget(planted());
    const auto cover = *exact_cover_bruteforce(planted());
    ReductionAlgorithm alg(*rg, cover);
    CHECK(alg.name() == "reduction");
    const auto worst = certify_upper(rg->graph, QueryKind::Edge, alg, 40);
    REQUIRE(worst.has_value());
    CHECK(*worst <= 40);

    ReductionAlgorithm again(*rg, cover);
    PreferX adv(rg->x);
    const Transcript t = play(rg->graph, QueryKind::Edge, again, adv);
    CHECK(t.terminal);
    CHECK(t.rounds.size() <= 5 * 3 + 5 * (8 - 3));
    for (std::size_t r = 0; r < 15; ++r) CHECK((t.rounds[r].query.u == rg->x || t.rounds[r].query.v == rg->x));
  }

  TEST_CASE("a set reply is resolved by its three element queries") {
    const auto rg = gadget(planted());
    const auto cover = *exact_cover_bruteforce(planted());
    ReductionAlgorithm alg(*rg, cover);
    const Vertex set_vertex = rg->set_vertices[0][cover[0]];
    FixedTargetAdversary adv(set_vertex);
    const Transcript t = play(rg->graph, QueryKind::Edge, alg, adv);
    CHECK(t.terminal);
    CHECK(t.final_candidates == VertexSet(rg->graph.order(), {set_vertex}));
    CHECK(t.rounds.size() == 4);
  }

  TEST_CASE("invalid covers are rejected unless unchecked") {
    const auto rg = gadget(planted());
    CHECK_THROWS_AS(ReductionAlgorithm(*rg, {0, 1, 3}), InvalidArgument);
    CHECK(ReductionAlgorithm(*rg, {0, 1, 3}, true).name() == "fake-cover");
  }

  TEST_CASE("case table") {
    const auto rg = gadget(nocover());
    ReductionAdversary adv(rg);
    const Graph& g = rg->graph;
    auto v = [&](const char* label) { return g.vertex(label); };
    CHECK(adv.classify({v("y"), v("a:1:1")}) == 1);
    CHECK(adv.classify({v("S:2:1"), v("y")}) == 2);
    CHECK(adv.classify({v("y"), v("x")}) == 2);
    CHECK(adv.classify({v("L:1:2:3"), v("x")}) == 3);
    CHECK(adv.classify({v("x"), v("S:3:3")}) == 4);
    CHECK(adv.classify({v("S:1:1"), v("S:1:2")}) == 5);
    CHECK(adv.classify({v("S:1:1"), v("a:4:7")}) == 6);
    CHECK(adv.classify({v("a:1:1"), v("a:4:7")}) == 7);
    CHECK(adv.classify({v("L:1:1:1"), v("a:1:1")}) == 7);
    CHECK(adv.classify({v("L:1:1:1"), v("L:2:2:2")}) == 8);
    CHECK(adv.first_stage_rounds() == 5 * 3 + 4);
  }

  TEST_CASE("example replies touch the expected stars") {
    const auto rg = gadget(nocover());
    const Graph& g = rg->graph;
    const CandidateSet start = rg->star_union();
    auto answer = [&](Vertex a, Vertex b) {
      ReductionAdversary adv(rg);
      const Query q{a, b};
      const Partition part = partition(g, start, q);
      const Side side = adv.reply(Position{g, QueryKind::Edge, start, 0}, q, part);
      return std::pair{side, apply_reply(start, part, side)};
    };

    const auto [s1, after1] = answer(g.vertex("y"), g.vertex("a:2:4"));
    CHECK(s1 == Side::U);
    CHECK((start - after1).is_subset_of(rg->star(1, 3)));

    const auto [s4, after4] = answer(g.vertex("x"), g.vertex("S:3:2"));
    CHECK(s4 == Side::U);
    VertexSet three(g.order());
    for (unsigned e : nocover().sets[1]) three |= rg->star(2, e);
    CHECK((start - after4).is_subset_of(three));

    const auto [s8, after8] = answer(g.vertex("L:1:1:1"), g.vertex("L:4:5:6"));
    CHECK(touched(*rg, start, after8).size() <= 1);
  }

  TEST_CASE("suite playouts keep a star alive past 5m") {
    const auto rg = gadget(nocover());
    const CandidateSet start = rg->star_union();
    for (std::uint64_t s = 0; s < 6; ++s) {
      RandomProgress alg(s);
      ReductionAdversary adv(rg);
      PlayOptions opt;
      opt.budget = 40;
      opt.start = start;
      const QueryKind kind = s % 2 == 0 ? QueryKind::Pair : QueryKind::Edge;
      const Transcript t = play(rg->graph, kind, alg, adv, opt);
      CHECK(t.rounds.size() == 40);
      CHECK(t.final_candidates.size() >= 2);
      CHECK(adv.protected_star().has_value());
      const StarAudit audit = audit_stars(*rg, t, start, adv.first_stage_rounds());
      CHECK(audit.max_stars_touched <= 3);
      CHECK(audit.single_copy);
      CHECK(audit.star_intact_after_first_stage);
      // Replay the transcript and recount stars independently.
      CandidateSet cur = start;
      for (std::size_t r = 0; r < adv.first_stage_rounds(); ++r) {
        const Round& round = t.rounds[r];
        const CandidateSet next =
            apply_reply(cur, partition(rg->graph, cur, round.query), round.reply);
        CHECK(touched(*rg, cur, next).size() <= 3);
        cur = next;
      }
      bool intact = false;
      for (unsigned c = 0; c < 5; ++c)
        for (unsigned i = 0; i < 9; ++i) intact = intact || rg->star(c, i).is_subset_of(cur);
      CHECK(intact);
    }
  }

  TEST_CASE("verify_lemma on small reports") {
    LemmaOptions opt;
    opt.random_algorithms = 4;
    opt.measure_diameter = false;
    const auto rep = verify_lemma(parse_instance("6 2 3\n1 2 3\n4 5 6\n1 4 5\n"), opt);
    CHECK_FALSE(rep.iff_applicable);
    CHECK(rep.structure.ok());
    CHECK(rep.passed);
    CHECK(rep.suite.empty());
    std::ostringstream out;
    print_lemma_report(out, rep);
    CHECK(out.str().find("structure-only") != std::string::npos);
  }
}
