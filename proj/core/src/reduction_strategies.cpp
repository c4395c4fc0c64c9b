#include <algorithm>

#include "qsearch/error.hpp"
#include "qsearch/hardness.hpp"

namespace qsearch {

namespace {

Query first_path_edge(const Graph& g, Vertex x, Vertex y) {
  const auto dy = g.distances_from(y);
  for (Vertex z : g.neighbors(x)) {
    if (dy[z] == dy[x] - 1) return {x, z};
  }
  throw StrategyError("no shortest path between " + std::to_string(x) + " and " +
                      std::to_string(y));
}

}  // namespace

ReductionAlgorithm::ReductionAlgorithm(const ReductionGraph& rg, std::vector<std::size_t> cover,
                                       bool unchecked)
    : unchecked_(unchecked) {
  const auto& inst = rg.instance;
  if (!unchecked && !is_exact_cover(inst, cover)) {
    throw InvalidArgument("reduction algorithm needs an exact cover of the instance");
  }
  for (std::size_t j : cover) {
    if (j >= inst.m()) throw InvalidArgument("cover names set " + std::to_string(j + 1) +
                                             " of " + std::to_string(inst.m()));
  }
  for (unsigned t = 0; t < ReductionGraph::kCopies; ++t) {
    for (std::size_t j : cover) {
      cover_queries_.push_back({rg.x, rg.set_vertices[t][j]});
      const auto& s = inst.sets[j];
      element_neighbours_.push_back(
          {rg.elements[t][s[0]], rg.elements[t][s[1]], rg.elements[t][s[2]]});
    }
  }
  if (cover_queries_.empty()) stage_ = Stage::Finish;
}

Query ReductionAlgorithm::next_query(const Position& pos) {
  switch (stage_) {
    case Stage::Cover:
      return cover_queries_[index_];
    case Stage::Elements:
      return {cover_queries_[chosen_].v, element_neighbours_[chosen_][element_]};
    case Stage::Finish:
      break;
  }
  if (pos.candidates.size() < 2) {
    throw StrategyError(name() + ": asked to move with fewer than two candidates");
  }
  const Vertex a = pos.candidates.first();
  return first_path_edge(pos.graph, a, pos.candidates.next(a));
}

void ReductionAlgorithm::observe(const Query&, Side reply, const CandidateSet&) {
  switch (stage_) {
    case Stage::Cover:
      if (reply == Side::V) {
        stage_ = Stage::Elements;
        chosen_ = index_;
        element_ = 0;
      } else if (++index_ == cover_queries_.size()) {
        stage_ = Stage::Finish;
      }
      break;
    case Stage::Elements:
      if (reply == Side::V || ++element_ == 3) stage_ = Stage::Finish;
      break;
    case Stage::Finish:
      break;
  }
}

std::unique_ptr<Algorithm> ReductionAlgorithm::clone() const {
  return std::make_unique<ReductionAlgorithm>(*this);
}

std::string ReductionAlgorithm::state_key() const {
  switch (stage_) {
    case Stage::Cover:
      return "c" + std::to_string(index_);
    case Stage::Elements:
      return "e" + std::to_string(chosen_) + ":" + std::to_string(element_);
    case Stage::Finish:
      break;
  }
  return "f";
}

// ---------------------------------------------------------------------------

ReductionAdversary::ReductionAdversary(std::shared_ptr<const ReductionGraph> rg)
    : rg_(std::move(rg)) {
  if (!rg_) throw InvalidArgument("reduction adversary needs a reduction graph");
}

std::size_t ReductionAdversary::first_stage_rounds() const noexcept {
  return 5 * rg_->instance.k + 4;
}

int ReductionAdversary::classify(const Query& q) const {
  using Role = ReductionGraph::Role;
  if (q.u == q.v) throw StrategyError("reduction adversary: query repeats a vertex");
  Role a = rg_->role(q.u).role;
  Role b = rg_->role(q.v).role;
  auto is = [&](Role r, Role s) { return (a == r && b == s) || (a == s && b == r); };
  auto star_role = [](Role r) { return r == Role::Element || r == Role::Leaf; };
  const bool a_star = star_role(a), b_star = star_role(b);

  int match = 0, count = 0;
  auto hit = [&](bool cond, int c) {
    if (cond) {
      match = c;
      ++count;
    }
  };
  hit(is(Role::Y, Role::Element), 1);
  hit((a == Role::Y && b != Role::Element) || (b == Role::Y && a != Role::Element), 2);
  hit((a == Role::X && b_star) || (b == Role::X && a_star), 3);
  hit(is(Role::X, Role::Set), 4);
  hit(a == Role::Set && b == Role::Set, 5);
  hit((a == Role::Set && b_star) || (b == Role::Set && a_star), 6);
  hit((a == Role::Element && b_star) || (b == Role::Element && a_star), 7);
  hit(a == Role::Leaf && b == Role::Leaf, 8);
  if (count != 1) {
    throw StrategyError("reduction adversary: query (" + rg_->graph.label(q.u) + "," +
                        rg_->graph.label(q.v) + ") matches " + std::to_string(count) +
                        " cases");
  }
  return match;
}

Side ReductionAdversary::table_reply(const Query& q, int c, const Partition& part) const {
  using Role = ReductionGraph::Role;
  auto side_of = [&](Role r) { return rg_->role(q.u).role == r ? Side::U : Side::V; };
  switch (c) {
    case 1:
    case 2:
      return side_of(Role::Y);
    case 3:
    case 4:
      return side_of(Role::X);
    case 5:
      return part.u_side().size() >= part.v_side().size() ? Side::U : Side::V;
    case 6:
      return rg_->role(q.u).role == Role::Set ? Side::V : Side::U;
    case 7:
      return rg_->role(q.u).role == Role::Element ? Side::U : Side::V;
    default:
      return Side::U;
  }
}

Side ReductionAdversary::reply(const Position& pos, const Query& q, const Partition& part) {
  Side side;
  if (pos.round < first_stage_rounds()) {
    const int c = classify(q);
    cases_.push_back(c);
    side = table_reply(q, c, part);
  } else {
    cases_.push_back(0);
    if (!protected_) {
      // Prefer an intact star, then the one with most survivors.
      std::size_t best = 0;
      bool best_intact = false;
      for (unsigned t = 0; t < ReductionGraph::kCopies; ++t) {
        for (unsigned i = 0; i < rg_->instance.n; ++i) {
          const VertexSet s = rg_->star(t, i);
          const std::size_t alive = (s & pos.candidates).size();
          const bool intact = alive == s.size();
          if (!protected_ || (intact && !best_intact) || (intact == best_intact && alive > best)) {
            protected_ = std::pair{t, i};
            best = alive;
            best_intact = intact;
          }
        }
      }
    }
    const Vertex centre = rg_->elements[protected_->first][protected_->second];
    const Graph& g = rg_->graph;
    const Distance du = g.distance(q.u, centre), dv = g.distance(q.v, centre);
    if (du != dv) {
      side = du < dv ? Side::U : Side::V;
    } else {
      const VertexSet s = rg_->star(protected_->first, protected_->second);
      side = (part.u_side() & s).size() >= (part.v_side() & s).size() ? Side::U : Side::V;
    }
  }
  if (part.side(side).empty()) side = opposite(side);
  return side;
}

}  // namespace qsearch
