#include "qsearch/game.hpp"

#include <ostream>

#include "qsearch/csv.hpp"
#include "qsearch/error.hpp"

namespace qsearch {

std::string_view to_string(QueryKind kind) { return kind == QueryKind::Pair ? "pair" : "edge"; }

QueryKind parse_query_kind(std::string_view text) {
  if (text == "pair") return QueryKind::Pair;
  if (text == "edge") return QueryKind::Edge;
  throw InvalidArgument("unknown query kind '" + std::string(text) + "' (expected pair|edge)");
}

std::string_view to_string(Side side) { return side == Side::U ? "u" : "v"; }

bool is_admissible(const Graph& g, QueryKind kind, const Query& q) noexcept {
  if (q.u >= g.order() || q.v >= g.order() || q.u == q.v) return false;
  return kind == QueryKind::Pair || g.adjacent(q.u, q.v);
}

void validate_query(const Graph& g, QueryKind kind, const Query& q) {
  if (q.u >= g.order() || q.v >= g.order()) {
    throw InvalidArgument("query (" + std::to_string(q.u) + "," + std::to_string(q.v) +
                          ") names a vertex outside the graph");
  }
  if (q.u == q.v) {
    throw InvalidArgument("query names the same vertex " + std::to_string(q.u) + " twice");
  }
  if (kind == QueryKind::Edge && !g.adjacent(q.u, q.v)) {
    throw InvalidArgument("edge query (" + std::to_string(q.u) + "," + std::to_string(q.v) +
                          ") is not an edge");
  }
}

VertexSet closer_set(const Graph& g, Vertex u, Vertex v) {
  if (u == v) throw InvalidArgument("closer_set needs two distinct vertices");
  const auto du = g.distances_from(u);
  const auto dv = g.distances_from(v);
  VertexSet out(g.order());
  for (Vertex x = 0; x < g.order(); ++x) {
    if (du[x] <= dv[x]) out.insert(x);
  }
  return out;
}

Partition partition(const Graph& g, const CandidateSet& s, const Query& q) {
  validate_query(g, QueryKind::Pair, q);
  const auto du = g.distances_from(q.u);
  const auto dv = g.distances_from(q.v);
  Partition part{VertexSet(g.order()), VertexSet(g.order()), VertexSet(g.order())};
  s.for_each([&](Vertex x) {
    if (du[x] < dv[x]) {
      part.closer_u.insert(x);
    } else if (dv[x] < du[x]) {
      part.closer_v.insert(x);
    } else {
      part.equal.insert(x);
    }
  });
  return part;
}

CandidateSet apply_reply(const CandidateSet& s, const Partition& part, Side reply) {
  CandidateSet out = part.side(reply);
  out &= s;
  return out;
}

Transcript play(const Graph& g, QueryKind kind, Algorithm& algorithm, Adversary& adversary,
                const PlayOptions& options) {
  Transcript t;
  CandidateSet current = options.start ? *options.start : VertexSet::full(g.order());
  if (current.universe() != g.order()) {
    throw InvalidArgument("start set universe does not match the graph");
  }
  if (current.empty()) throw InvalidArgument("start set is empty");
  if (current.size() > 1) g.require_connected();

  const std::size_t budget = options.budget == 0 ? g.order() : options.budget;
  while (current.size() > 1 && t.rounds.size() < budget) {
    Position pos{g, kind, current, t.rounds.size()};
    const Query q = algorithm.next_query(pos);
    if (!is_admissible(g, kind, q)) {
      try {
        validate_query(g, kind, q);
      } catch (const InvalidArgument& e) {
        throw StrategyError("algorithm '" + algorithm.name() + "' in round " +
                            std::to_string(t.rounds.size() + 1) + ": " + e.what());
      }
    }
    const Partition part = partition(g, current, q);
    const Side reply = adversary.reply(pos, q, part);
    CandidateSet next = apply_reply(current, part, reply);
    if (next.empty()) {
      throw StrategyError("adversary '" + adversary.name() + "' in round " +
                          std::to_string(t.rounds.size() + 1) +
                          " chose a reply compatible with no candidate");
    }
    algorithm.observe(q, reply, next);
    current = std::move(next);
    t.rounds.push_back({q, reply, current.size()});
  }
  t.terminal = current.size() == 1;
  t.final_candidates = std::move(current);
  return t;
}

void write_transcript_csv(std::ostream& out, const Transcript& t) {
  write_csv_header(out, "transcript", {"round", "u", "v", "reply_side", "candidates_after"});
  for (std::size_t r = 0; r < t.rounds.size(); ++r) {
    const Round& round = t.rounds[r];
    out << (r + 1) << ',' << round.query.u << ',' << round.query.v << ','
        << to_string(round.reply) << ',' << round.candidates_after << '\n';
  }
}

}  // namespace qsearch
