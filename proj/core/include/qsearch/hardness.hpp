#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsearch/game.hpp"
#include "qsearch/graph.hpp"

namespace qsearch {

// 3-EXACT SET COVER instance over the universe {0..n-1}; n = 3k.
// Elements are stored 0-indexed; the text format is 1-indexed.
struct ThreeXCInstance {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<std::array<unsigned, 3>> sets;

  std::size_t m() const noexcept { return sets.size(); }
};

// Text format: first line `n k m`, then m lines of three 1-indexed
// elements. A header of the form `n=6 k=2` (m taken from the line count) is
// also accepted. Throws ParseError naming the violation.
ThreeXCInstance parse_instance(std::string_view text);
ThreeXCInstance load_instance(const std::string& path);
std::string format_instance(const ThreeXCInstance& inst);

// Throws ParseError when an invariant (n = 3k, triples of distinct in-range
// elements, union = universe) is violated.
void validate_instance(const ThreeXCInstance& inst);

// Indices of k sets covering the universe, or nullopt. Throws ResourceLimit
// when m exceeds max_sets.
std::optional<std::vector<std::size_t>> exact_cover_bruteforce(const ThreeXCInstance& inst,
                                                               std::size_t max_sets = 25);

bool is_exact_cover(const ThreeXCInstance& inst, const std::vector<std::size_t>& cover);

// The gadget graph. Five copies (t = 0..4) of the universe and of the set
// family; y is the centre of a star over every element vertex, x the centre
// of a star over every set vertex, element a^t_i sees S^t_j iff a_i is in
// S_j, and each element vertex carries 5(m-k)-3 pendant leaves.
//
// Labels: "x", "y", "a:t:i", "S:t:j", "L:t:i:r" with 1-indexed t, i, j, r.
struct ReductionGraph {
  enum class Role { X, Y, Element, Set, Leaf };

  struct RoleInfo {
    Role role = Role::X;
    unsigned copy = 0;    // t (0-based)
    unsigned index = 0;   // element i or set j (0-based)
    unsigned leaf = 0;    // r (0-based)
  };

  Graph graph;
  ThreeXCInstance instance;
  Vertex x = 0;
  Vertex y = 1;
  std::vector<std::vector<Vertex>> elements;             // [t][i]
  std::vector<std::vector<Vertex>> set_vertices;         // [t][j]
  std::vector<std::vector<std::vector<Vertex>>> leaves;  // [t][i][r]
  std::vector<RoleInfo> roles;                           // by vertex

  static constexpr unsigned kCopies = 5;

  std::size_t leaves_per_star() const noexcept;
  const RoleInfo& role(Vertex v) const { return roles.at(v); }

  // Star L^t_i: the element vertex a^t_i and its leaves.
  VertexSet star(unsigned copy, unsigned element) const;
  // (copy, element) of the star containing v, for element and leaf vertices.
  std::optional<std::pair<unsigned, unsigned>> star_of(Vertex v) const;

  // L together with every element vertex: the union of all stars.
  VertexSet star_union() const;
};

// Throws InvalidArgument when 5(m-k)-3 < 0.
ReductionGraph build_reduction(const ThreeXCInstance& inst);

std::size_t expected_reduction_order(std::size_t n, std::size_t k, std::size_t m);

struct StructureReport {
  std::size_t vertices = 0;
  std::size_t expected_vertices = 0;
  std::size_t edges = 0;
  std::size_t leaves = 0;
  std::optional<Distance> diameter;
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }
};

// Checks counts, degrees and adjacency rules from the adjacency lists; the
// diameter is measured when requested.
StructureReport check_structure(const ReductionGraph& rg, bool measure_diameter = true);

// Edge-query algorithm for instances with an exact cover: query the 5k
// edges x-S^t_j over the cover; on a reply S^t_j, query the element edges of
// S^t_j in order until one is answered by its element; then eliminate one
// candidate per round.
class ReductionAlgorithm final : public Algorithm {
 public:
  // Throws InvalidArgument unless `cover` is an exact cover, unless
  // `unchecked` (used to run the strategy with a fake cover).
  ReductionAlgorithm(const ReductionGraph& rg, std::vector<std::size_t> cover,
                     bool unchecked = false);

  std::string name() const override { return unchecked_ ? "fake-cover" : "reduction"; }
  Query next_query(const Position& pos) override;
  void observe(const Query& q, Side reply, const CandidateSet& after) override;
  std::unique_ptr<Algorithm> clone() const override;
  std::string state_key() const override;

 private:
  enum class Stage { Cover, Elements, Finish };

  std::vector<Query> cover_queries_;                      // (x, S^t_j)
  std::vector<std::array<Vertex, 3>> element_neighbours_; // per cover query
  bool unchecked_ = false;

  Stage stage_ = Stage::Cover;
  std::size_t index_ = 0;
  std::size_t element_ = 0;
  std::size_t chosen_ = 0;
};

// Adversary from the no-cover direction. Intended start set is
// rg.star_union(). For the first 5k+4 rounds replies follow the eight-case
// table; afterwards it protects a star that survived intact, replying with
// the endpoint closer to its centre.
class ReductionAdversary final : public Adversary {
 public:
  explicit ReductionAdversary(std::shared_ptr<const ReductionGraph> rg);

  std::string name() const override { return "adv-reduction"; }
  Side reply(const Position& pos, const Query& q, const Partition& part) override;

  // Case number (1-8) used in each round of the first stage; 0 afterwards.
  const std::vector<int>& cases() const noexcept { return cases_; }
  // Star protected in the second stage.
  std::optional<std::pair<unsigned, unsigned>> protected_star() const noexcept {
    return protected_;
  }
  std::size_t first_stage_rounds() const noexcept;

  // Case of the eight-case table describing {u, v}; asserts a unique match.
  int classify(const Query& q) const;

 private:
  Side table_reply(const Query& q, int c, const Partition& part) const;

  std::shared_ptr<const ReductionGraph> rg_;
  std::vector<int> cases_;
  std::optional<std::pair<unsigned, unsigned>> protected_;
};

struct SuitePlayout {
  std::string algorithm;
  QueryKind kind = QueryKind::Edge;
  std::uint64_t seed = 0;
  std::size_t rounds = 0;
  std::size_t final_candidates = 0;
  bool survived = false;          // |V_5m| >= 2
  std::size_t max_stars_touched = 0;
  bool single_copy = true;        // wholly eliminated stars of a round share a copy
  bool star_intact = false;       // some star intact after 5k+4 rounds
};

struct LemmaReport {
  StructureReport structure;
  bool iff_applicable = false;   // n > m > k + 3
  std::optional<bool> has_cover; // nullopt when m exceeds the brute-force cap
  std::optional<std::size_t> certified_rounds;
  std::size_t bound = 0;         // 5m
  std::vector<SuitePlayout> suite;
  bool passed = false;
  std::vector<std::string> notes;
};

struct LemmaOptions {
  std::size_t random_algorithms = 200;
  std::uint64_t seed = 0;
  bool measure_diameter = true;
};

// Positive instances: certify the reduction algorithm within 5m. Negative
// instances: play the reduction adversary against a suite of algorithms and
// require every playout to survive 5m rounds, with the per-round star
// invariants. Other instances get a structure-only report.
LemmaReport verify_lemma(const ThreeXCInstance& inst, const LemmaOptions& options = {});

void print_lemma_report(std::ostream& out, const LemmaReport& report);

// Per-round star bookkeeping on a transcript under the reduction adversary.
struct StarAudit {
  std::size_t max_stars_touched = 0;
  bool single_copy = true;
  bool star_intact_after_first_stage = false;
};
StarAudit audit_stars(const ReductionGraph& rg, const Transcript& t,
                      const CandidateSet& start, std::size_t first_stage_rounds);

}  // namespace qsearch
