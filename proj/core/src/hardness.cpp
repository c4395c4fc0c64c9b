#include "qsearch/hardness.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "qsearch/error.hpp"
#include "qsearch/rng.hpp"
#include "qsearch/strategies.hpp"

namespace qsearch {

namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

unsigned long parse_count(const std::string& tok, std::size_t line, const char* what) {
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    if (tok.empty() || tok[0] == '-' || tok[0] == '+') throw std::invalid_argument(tok);
    v = std::stoul(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || tok.empty()) {
    throw ParseError("line " + std::to_string(line) + ": expected " + what + ", got '" + tok +
                     "'");
  }
  return v;
}

}  // namespace

void validate_instance(const ThreeXCInstance& inst) {
  if (inst.n % 3 != 0) {
    throw ParseError("universe size n=" + std::to_string(inst.n) + " is not divisible by 3");
  }
  if (inst.k * 3 != inst.n) {
    throw ParseError("n=" + std::to_string(inst.n) + " must equal 3k with k=" +
                     std::to_string(inst.k));
  }
  std::vector<bool> covered(inst.n, false);
  for (std::size_t j = 0; j < inst.sets.size(); ++j) {
    const auto& s = inst.sets[j];
    for (unsigned e : s) {
      if (e >= inst.n) {
        throw ParseError("set " + std::to_string(j + 1) + " contains element " +
                         std::to_string(e + 1) + " outside 1.." + std::to_string(inst.n));
      }
      covered[e] = true;
    }
    if (s[0] == s[1] || s[0] == s[2] || s[1] == s[2]) {
      throw ParseError("set " + std::to_string(j + 1) + " repeats an element");
    }
  }
  for (std::size_t e = 0; e < inst.n; ++e) {
    if (!covered[e]) {
      throw ParseError("element " + std::to_string(e + 1) + " is not covered by any set");
    }
  }
}

ThreeXCInstance parse_instance(std::string_view text) {
  ThreeXCInstance inst;
  std::optional<std::size_t> declared_m;
  bool header = false;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (!header) {
      header = true;
      if (toks[0].find('=') != std::string::npos) {
        std::optional<std::size_t> n, k;
        for (const auto& t : toks) {
          const auto eq = t.find('=');
          if (eq == std::string::npos) {
            throw ParseError("line " + std::to_string(line_no) + ": expected key=value, got '" +
                             t + "'");
          }
          const std::string key = t.substr(0, eq);
          const std::size_t value = parse_count(t.substr(eq + 1), line_no, "a count");
          if (key == "n") {
            n = value;
          } else if (key == "k") {
            k = value;
          } else if (key == "m") {
            declared_m = value;
          } else {
            throw ParseError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
          }
        }
        if (!n || !k) throw ParseError("line " + std::to_string(line_no) + ": header needs n and k");
        inst.n = *n;
        inst.k = *k;
      } else {
        if (toks.size() != 3) {
          throw ParseError("line " + std::to_string(line_no) + ": header must be 'n k m'");
        }
        inst.n = parse_count(toks[0], line_no, "n");
        inst.k = parse_count(toks[1], line_no, "k");
        declared_m = parse_count(toks[2], line_no, "m");
      }
      continue;
    }
    if (toks.size() != 3) {
      throw ParseError("line " + std::to_string(line_no) + ": set has " +
                       std::to_string(toks.size()) + " elements, expected 3");
    }
    std::array<unsigned, 3> s{};
    for (std::size_t i = 0; i < 3; ++i) {
      const auto e = parse_count(toks[i], line_no, "an element");
      if (e == 0 || e > inst.n) {
        throw ParseError("line " + std::to_string(line_no) + ": element " + toks[i] +
                         " is outside 1.." + std::to_string(inst.n));
      }
      s[i] = static_cast<unsigned>(e - 1);
    }
    inst.sets.push_back(s);
  }
  if (!header) throw ParseError("empty instance");
  if (declared_m && *declared_m != inst.sets.size()) {
    throw ParseError("header declares m=" + std::to_string(*declared_m) + " but " +
                     std::to_string(inst.sets.size()) + " sets follow");
  }
  validate_instance(inst);
  return inst;
}

ThreeXCInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open instance file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string format_instance(const ThreeXCInstance& inst) {
  std::ostringstream out;
  out << inst.n << ' ' << inst.k << ' ' << inst.m() << '\n';
  for (const auto& s : inst.sets) out << s[0] + 1 << ' ' << s[1] + 1 << ' ' << s[2] + 1 << '\n';
  return out.str();
}

std::optional<std::vector<std::size_t>> exact_cover_bruteforce(const ThreeXCInstance& inst,
                                                               std::size_t max_sets) {
  if (inst.m() > max_sets) {
    throw ResourceLimit("exact cover search is capped at m <= " + std::to_string(max_sets) +
                        ", instance has m = " + std::to_string(inst.m()));
  }
  std::vector<std::vector<std::size_t>> containing(inst.n);
  for (std::size_t j = 0; j < inst.m(); ++j) {
    for (unsigned e : inst.sets[j]) {
      if (e < inst.n) containing[e].push_back(j);
    }
  }
  std::vector<bool> covered(inst.n, false);
  std::vector<std::size_t> chosen;
  std::function<bool(std::size_t)> search = [&](std::size_t from) -> bool {
    while (from < inst.n && covered[from]) ++from;
    if (from == inst.n) return chosen.size() == inst.k;
    if (chosen.size() == inst.k) return false;
    for (std::size_t j : containing[from]) {
      const auto& s = inst.sets[j];
      if (covered[s[0]] || covered[s[1]] || covered[s[2]]) continue;
      for (unsigned e : s) covered[e] = true;
      chosen.push_back(j);
      if (search(from + 1)) return true;
      chosen.pop_back();
      for (unsigned e : s) covered[e] = false;
    }
    return false;
  };
  if (!search(0)) return std::nullopt;
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

bool is_exact_cover(const ThreeXCInstance& inst, const std::vector<std::size_t>& cover) {
  if (cover.size() != inst.k) return false;
  std::vector<bool> covered(inst.n, false);
  std::set<std::size_t> seen;
  for (std::size_t j : cover) {
    if (j >= inst.m() || !seen.insert(j).second) return false;
    for (unsigned e : inst.sets[j]) {
      if (e >= inst.n || covered[e]) return false;
      covered[e] = true;
    }
  }
  return std::all_of(covered.begin(), covered.end(), [](bool b) { return b; });
}

// ---------------------------------------------------------------------------

std::size_t ReductionGraph::leaves_per_star() const noexcept {
  return 5 * (instance.m() - instance.k) - 3;
}

VertexSet ReductionGraph::star(unsigned copy, unsigned element) const {
  VertexSet s(graph.order());
  s.insert(elements.at(copy).at(element));
  for (Vertex l : leaves.at(copy).at(element)) s.insert(l);
  return s;
}

std::optional<std::pair<unsigned, unsigned>> ReductionGraph::star_of(Vertex v) const {
  const RoleInfo& r = roles.at(v);
  if (r.role == Role::Element || r.role == Role::Leaf) return std::pair{r.copy, r.index};
  return std::nullopt;
}

VertexSet ReductionGraph::star_union() const {
  VertexSet s(graph.order());
  for (Vertex v = 0; v < graph.order(); ++v) {
    if (star_of(v)) s.insert(v);
  }
  return s;
}

std::size_t expected_reduction_order(std::size_t n, std::size_t k, std::size_t m) {
  if (m <= k) throw InvalidArgument("reduction needs m > k so that stars have 5(m-k)-3 >= 2 leaves");
  return 2 + 5 * n + 5 * m + 5 * n * (5 * (m - k) - 3);
}

ReductionGraph build_reduction(const ThreeXCInstance& inst) {
  validate_instance(inst);
  const std::size_t n = inst.n, m = inst.m();
  const std::size_t order = expected_reduction_order(n, inst.k, m);
  const std::size_t per = 5 * (m - inst.k) - 3;
  const unsigned copies = ReductionGraph::kCopies;

  ReductionGraph rg;
  rg.instance = inst;
  rg.roles.resize(order);
  std::vector<std::string> labels(order);
  labels[0] = "x";
  labels[1] = "y";
  rg.roles[0].role = ReductionGraph::Role::X;
  rg.roles[1].role = ReductionGraph::Role::Y;

  const std::size_t a_base = 2, s_base = 2 + copies * n, l_base = s_base + copies * m;
  rg.elements.assign(copies, {});
  rg.set_vertices.assign(copies, {});
  rg.leaves.assign(copies, {});
  for (unsigned t = 0; t < copies; ++t) {
    for (unsigned i = 0; i < n; ++i) {
      const auto v = static_cast<Vertex>(a_base + t * n + i);
      rg.elements[t].push_back(v);
      rg.roles[v] = {ReductionGraph::Role::Element, t, i, 0};
      labels[v] = "a:" + std::to_string(t + 1) + ":" + std::to_string(i + 1);
    }
    for (unsigned j = 0; j < m; ++j) {
      const auto v = static_cast<Vertex>(s_base + t * m + j);
      rg.set_vertices[t].push_back(v);
      rg.roles[v] = {ReductionGraph::Role::Set, t, j, 0};
      labels[v] = "S:" + std::to_string(t + 1) + ":" + std::to_string(j + 1);
    }
    rg.leaves[t].assign(n, {});
    for (unsigned i = 0; i < n; ++i) {
      for (unsigned r = 0; r < per; ++r) {
        const auto v = static_cast<Vertex>(l_base + (t * n + i) * per + r);
        rg.leaves[t][i].push_back(v);
        rg.roles[v] = {ReductionGraph::Role::Leaf, t, i, r};
        labels[v] = "L:" + std::to_string(t + 1) + ":" + std::to_string(i + 1) + ":" +
                    std::to_string(r + 1);
      }
    }
  }

  std::vector<Edge> edges;
  for (unsigned t = 0; t < copies; ++t) {
    for (unsigned i = 0; i < n; ++i) {
      edges.push_back({rg.y, rg.elements[t][i]});
      for (Vertex l : rg.leaves[t][i]) edges.push_back({rg.elements[t][i], l});
    }
    for (unsigned j = 0; j < m; ++j) {
      edges.push_back({rg.x, rg.set_vertices[t][j]});
      for (unsigned e : inst.sets[j]) edges.push_back({rg.elements[t][e], rg.set_vertices[t][j]});
    }
  }
  rg.graph = Graph(order, edges, std::move(labels));
  return rg;
}

StructureReport check_structure(const ReductionGraph& rg, bool measure_diameter) {
  StructureReport rep;
  const Graph& g = rg.graph;
  const auto& inst = rg.instance;
  const std::size_t n = inst.n, m = inst.m(), per = rg.leaves_per_star();
  const unsigned copies = ReductionGraph::kCopies;
  rep.vertices = g.order();
  rep.expected_vertices = expected_reduction_order(n, inst.k, m);
  rep.edges = g.size();
  auto fail = [&](std::string msg) {
    if (rep.violations.size() < 50) rep.violations.push_back(std::move(msg));
  };
  auto name = [&](Vertex v) { return g.label(v).empty() ? std::to_string(v) : g.label(v); };
  using Role = ReductionGraph::Role;

  if (rep.vertices != rep.expected_vertices) {
    fail("vertex count " + std::to_string(rep.vertices) + " != " +
         std::to_string(rep.expected_vertices));
  }
  std::size_t leaves = 0;
  for (Vertex v = 0; v < g.order(); ++v) {
    if (rg.role(v).role == Role::Leaf) ++leaves;
  }
  rep.leaves = leaves;
  if (leaves != 5 * n * (5 * (m - inst.k) - 3)) {
    fail("|L| = " + std::to_string(leaves) + " != 5n(5(m-k)-3)");
  }
  const std::size_t expected_edges = 5 * n + 5 * m + 15 * m + leaves;
  if (rep.edges != expected_edges) {
    fail("edge count " + std::to_string(rep.edges) + " != " + std::to_string(expected_edges));
  }

  // Neighbourhoods of the two hubs.
  for (Vertex hub : {rg.x, rg.y}) {
    const Role want = hub == rg.x ? Role::Set : Role::Element;
    const std::size_t want_deg = hub == rg.x ? 5 * m : 5 * n;
    if (g.degree(hub) != want_deg) {
      fail(name(hub) + " has degree " + std::to_string(g.degree(hub)) + ", expected " +
           std::to_string(want_deg));
    }
    for (Vertex w : g.neighbors(hub)) {
      if (rg.role(w).role != want) fail(name(hub) + " is adjacent to " + name(w));
    }
  }

  std::vector<std::size_t> occ(n, 0);
  for (const auto& s : inst.sets) {
    for (unsigned e : s) ++occ[e];
  }
  for (unsigned t = 0; t < copies; ++t) {
    for (unsigned i = 0; i < n; ++i) {
      const Vertex a = rg.elements[t][i];
      if (g.label(a) != "a:" + std::to_string(t + 1) + ":" + std::to_string(i + 1)) {
        fail("element vertex " + std::to_string(a) + " carries label '" + g.label(a) + "'");
      }
      std::size_t leaf_nb = 0;
      for (Vertex w : g.neighbors(a)) {
        const auto& r = rg.role(w);
        if (r.role == Role::Leaf) {
          ++leaf_nb;
          if (r.copy != t || r.index != i) fail(name(a) + " is adjacent to foreign leaf " + name(w));
        } else if (r.role == Role::Set) {
          const auto& s = inst.sets[r.index];
          const bool member = std::find(s.begin(), s.end(), i) != s.end();
          if (r.copy != t || !member) fail(name(a) + " is adjacent to " + name(w));
        } else if (r.role != Role::Y) {
          fail(name(a) + " is adjacent to " + name(w));
        }
      }
      if (leaf_nb != per) {
        fail(name(a) + " has " + std::to_string(leaf_nb) + " leaves, expected " +
             std::to_string(per));
      }
      if (g.degree(a) != 1 + per + occ[i]) {
        fail(name(a) + " has degree " + std::to_string(g.degree(a)) + ", expected " +
             std::to_string(1 + per + occ[i]));
      }
      for (Vertex l : rg.leaves[t][i]) {
        if (g.degree(l) != 1 || g.neighbors(l)[0] != a) fail("leaf " + name(l) + " is not pendant on " + name(a));
      }
    }
    for (unsigned j = 0; j < m; ++j) {
      const Vertex s = rg.set_vertices[t][j];
      if (g.degree(s) != 4) {
        fail(name(s) + " has degree " + std::to_string(g.degree(s)) + ", expected 4");
      }
      for (unsigned e : inst.sets[j]) {
        if (!g.adjacent(s, rg.elements[t][e])) fail(name(s) + " misses " + name(rg.elements[t][e]));
      }
    }
  }
  if (measure_diameter) {
    if (g.connected()) {
      rep.diameter = diameter(g);
    } else {
      fail("graph is disconnected");
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

StarAudit audit_stars(const ReductionGraph& rg, const Transcript& t, const CandidateSet& start,
                      std::size_t first_stage_rounds) {
  StarAudit audit;
  CandidateSet current = start;
  const unsigned copies = ReductionGraph::kCopies;
  const std::size_t n = rg.instance.n;
  auto any_intact = [&](const CandidateSet& s) {
    for (unsigned c = 0; c < copies; ++c) {
      for (unsigned i = 0; i < n; ++i) {
        if (rg.star(c, i).is_subset_of(s)) return true;
      }
    }
    return false;
  };
  std::size_t r = 0;
  for (; r < t.rounds.size() && r < first_stage_rounds; ++r) {
    const Round& round = t.rounds[r];
    const Partition part = partition(rg.graph, current, round.query);
    const CandidateSet after = apply_reply(current, part, round.reply);
    const CandidateSet gone = current - after;
    std::set<std::pair<unsigned, unsigned>> touched;
    gone.for_each([&](Vertex v) {
      if (auto s = rg.star_of(v)) touched.insert(*s);
    });
    audit.max_stars_touched = std::max(audit.max_stars_touched, touched.size());
    std::set<unsigned> wholly;
    for (const auto& [c, i] : touched) {
      if (!rg.star(c, i).intersects(after)) wholly.insert(c);
    }
    if (wholly.size() > 1) audit.single_copy = false;
    current = after;
  }
  audit.star_intact_after_first_stage = r == first_stage_rounds && any_intact(current);
  return audit;
}

LemmaReport verify_lemma(const ThreeXCInstance& inst, const LemmaOptions& options) {
  LemmaReport rep;
  auto rg = std::make_shared<ReductionGraph>(build_reduction(inst));
  rep.structure = check_structure(*rg, options.measure_diameter);
  rep.bound = 5 * inst.m();
  rep.iff_applicable = inst.n > inst.m() && inst.m() > inst.k + 3;
  if (rep.structure.diameter && *rep.structure.diameter > 3) {
    rep.notes.push_back("measured diameter " + std::to_string(*rep.structure.diameter) +
                        " exceeds 3");
  }
  if (inst.m() <= 25) {
    rep.has_cover = exact_cover_bruteforce(inst).has_value();
  } else {
    rep.notes.push_back("m > 25: cover existence not decided, structure-only report");
  }
  if (!rep.iff_applicable) {
    rep.notes.push_back("n > m > k + 3 does not hold: structure-only report");
  }
  rep.passed = rep.structure.ok();
  if (!rep.iff_applicable || !rep.has_cover) return rep;

  const Graph& g = rg->graph;
  if (*rep.has_cover) {
    const auto cover = *exact_cover_bruteforce(inst);
    ReductionAlgorithm alg(*rg, cover);
    rep.certified_rounds = certify_upper(g, QueryKind::Edge, alg, rep.bound);
    rep.passed = rep.passed && rep.certified_rounds.has_value();
    return rep;
  }

  const CandidateSet start = rg->star_union();
  auto run = [&](Algorithm& alg, QueryKind kind, std::uint64_t seed) {
    ReductionAdversary adv(rg);
    PlayOptions opts;
    opts.budget = rep.bound;
    opts.start = start;
    const Transcript t = play(g, kind, alg, adv, opts);
    const StarAudit audit = audit_stars(*rg, t, start, adv.first_stage_rounds());
    SuitePlayout p;
    p.algorithm = alg.name();
    p.kind = kind;
    p.seed = seed;
    p.rounds = t.rounds.size();
    p.final_candidates = t.final_candidates.size();
    p.survived = p.final_candidates >= 2 && p.rounds == rep.bound;
    p.max_stars_touched = audit.max_stars_touched;
    p.single_copy = audit.single_copy;
    p.star_intact = audit.star_intact_after_first_stage;
    rep.suite.push_back(p);
  };

  std::vector<std::size_t> fake(inst.k);
  for (std::size_t j = 0; j < inst.k; ++j) fake[j] = j;
  ReductionAlgorithm fake_cover(*rg, fake, true);
  run(fake_cover, QueryKind::Edge, 0);
  GreedySplit greedy;
  run(greedy, QueryKind::Edge, 0);
  for (std::size_t r = 0; r < options.random_algorithms; ++r) {
    const std::uint64_t seed = derive_seed(options.seed, "lemma-random", r);
    RandomProgress alg(seed);
    run(alg, r % 2 == 0 ? QueryKind::Pair : QueryKind::Edge, seed);
  }
  for (const auto& p : rep.suite) {
    rep.passed = rep.passed && p.survived && p.max_stars_touched <= 3 && p.single_copy &&
                 p.star_intact;
  }
  return rep;
}

void print_lemma_report(std::ostream& out, const LemmaReport& r) {
  out << "vertices        " << r.structure.vertices << " (expected " << r.structure.expected_vertices
      << ")\n";
  out << "edges           " << r.structure.edges << '\n';
  out << "leaves          " << r.structure.leaves << '\n';
  out << "diameter        "
      << (r.structure.diameter ? std::to_string(*r.structure.diameter) : std::string("not measured"))
      << '\n';
  out << "structure       " << (r.structure.ok() ? "ok" : "VIOLATED") << '\n';
  for (const auto& v : r.structure.violations) out << "  - " << v << '\n';
  out << "n > m > k + 3   " << (r.iff_applicable ? "yes" : "no") << '\n';
  out << "exact cover     "
      << (r.has_cover ? (*r.has_cover ? "exists" : "none") : "not decided") << '\n';
  out << "bound 5m        " << r.bound << '\n';
  if (r.has_cover && *r.has_cover && r.iff_applicable) {
    out << "certified       "
        << (r.certified_rounds ? std::to_string(*r.certified_rounds) : std::string("exceeds bound"))
        << '\n';
  }
  if (!r.suite.empty()) {
    std::size_t survived = 0, intact = 0, single = 0, max_touched = 0;
    std::size_t fewest = r.suite.front().final_candidates;
    for (const auto& p : r.suite) {
      survived += p.survived;
      intact += p.star_intact;
      single += p.single_copy;
      max_touched = std::max(max_touched, p.max_stars_touched);
      fewest = std::min(fewest, p.final_candidates);
    }
    out << "suite           " << r.suite.size() << " playouts\n";
    out << "  survived 5m   " << survived << '/' << r.suite.size() << '\n';
    out << "  fewest left   " << fewest << '\n';
    out << "  stars/round   <= " << max_touched << '\n';
    out << "  single copy   " << single << '/' << r.suite.size() << '\n';
    out << "  star intact   " << intact << '/' << r.suite.size() << '\n';
  }
  for (const auto& note : r.notes) out << "note: " << note << '\n';
  out << "result          " << (r.passed ? "PASS" : "FAIL") << '\n';
}

}  // namespace qsearch
