#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsearch/graph.hpp"
#include "qsearch/vertex_set.hpp"

namespace qsearch {

enum class QueryKind { Pair, Edge };

std::string_view to_string(QueryKind kind);
// "pair" | "edge"; throws InvalidArgument otherwise.
QueryKind parse_query_kind(std::string_view text);

// One round's question. Admissibility (u != v, adjacency for edge games) is
// checked against the game's QueryKind by validate_query.
struct Query {
  Vertex u;
  Vertex v;
  friend bool operator==(const Query&, const Query&) = default;
  friend auto operator<=>(const Query&, const Query&) = default;
};

// The adversary answers with one endpoint, named by side rather than by id.
enum class Side { U, V };

inline Side opposite(Side s) { return s == Side::U ? Side::V : Side::U; }
std::string_view to_string(Side side);

// Throws InvalidArgument when q is not admissible in g for `kind`.
void validate_query(const Graph& g, QueryKind kind, const Query& q);
bool is_admissible(const Graph& g, QueryKind kind, const Query& q) noexcept;

// C(u,v) = { x : d(u,x) <= d(v,x) }.
VertexSet closer_set(const Graph& g, Vertex u, Vertex v);

struct Partition {
  VertexSet closer_u;  // strictly closer to u
  VertexSet closer_v;  // strictly closer to v
  VertexSet equal;     // equidistant

  VertexSet u_side() const { return closer_u | equal; }
  VertexSet v_side() const { return closer_v | equal; }
  VertexSet side(Side s) const { return s == Side::U ? u_side() : v_side(); }
};

Partition partition(const Graph& g, const CandidateSet& s, const Query& q);

// Candidates surviving `reply`; never larger than s.
CandidateSet apply_reply(const CandidateSet& s, const Partition& part, Side reply);

// Everything a strategy may look at before moving.
struct Position {
  const Graph& graph;
  QueryKind kind;
  const CandidateSet& candidates;
  std::size_t round;  // rounds already played
};

// Query-side strategy. Strategies are stateful per playout: the engine calls
// next_query, then observe with the adversary's reply.
class Algorithm {
 public:
  virtual ~Algorithm() = default;

  virtual std::string name() const = 0;
  virtual Query next_query(const Position& pos) = 0;
  virtual void observe(const Query& /*q*/, Side /*reply*/,
                       const CandidateSet& /*after*/) {}

  virtual std::unique_ptr<Algorithm> clone() const = 0;

  // Serialized internal state. Together with the candidate set it must
  // determine every future query; stateless strategies return "".
  virtual std::string state_key() const { return {}; }
};

class Adversary {
 public:
  virtual ~Adversary() = default;

  virtual std::string name() const = 0;
  // Must choose a side whose survivor set is non-empty.
  virtual Side reply(const Position& pos, const Query& q, const Partition& part) = 0;
};

struct Round {
  Query query;
  Side reply;
  std::size_t candidates_after;
};

struct Transcript {
  std::vector<Round> rounds;
  CandidateSet final_candidates;
  std::optional<std::uint64_t> seed;
  bool terminal = false;  // final candidate set is a singleton
};

struct PlayOptions {
  std::size_t budget = 0;                 // 0 means n (enough for any sane strategy)
  std::optional<CandidateSet> start;      // V_0; default V
};

// Alternates algorithm queries and adversary replies until |V_t| = 1 or the
// budget is exhausted. Invalid queries or empty replies raise StrategyError
// naming the offending strategy.
Transcript play(const Graph& g, QueryKind kind, Algorithm& algorithm,
                Adversary& adversary, const PlayOptions& options = {});

// `round,u,v,reply_side,candidates_after`
void write_transcript_csv(std::ostream& out, const Transcript& t);

}  // namespace qsearch
