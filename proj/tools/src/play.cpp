#include <algorithm>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "cli.hpp"
#include "qsearch/error.hpp"

namespace qsearch::cli {

namespace {

std::string name_of(const Graph& g, Vertex v) {
  return g.label(v).empty() ? std::to_string(v) : std::to_string(v) + " (" + g.label(v) + ")";
}

std::optional<Vertex> parse_vertex(const Graph& g, const std::string& tok) {
  if (!tok.empty() && std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    try {
      const unsigned long v = std::stoul(tok);
      if (v < g.order()) return static_cast<Vertex>(v);
    } catch (const std::exception&) {
    }
    return std::nullopt;
  }
  return g.find_label(tok);
}

// Next non-blank line, or nullopt at end of input.
std::optional<std::vector<std::string>> next_tokens(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream words(line);
    std::vector<std::string> toks;
    std::string t;
    while (words >> t) toks.push_back(t);
    if (!toks.empty()) return toks;
  }
  return std::nullopt;
}

void show(std::ostream& out, std::size_t round, const CandidateSet& s) {
  out << "round " << round << ": " << s.size() << " candidates " << s.to_string() << '\n';
}

}  // namespace

std::size_t play_interactive(const Graph& g, const PlaySettings& settings, std::istream& in,
                             std::ostream& out) {
  if (g.order() == 0) throw InvalidArgument("cannot play on an empty graph");
  if (g.order() > 1) g.require_connected();
  const std::size_t budget =
      settings.budget > 0 ? settings.budget : std::max<std::size_t>(1, g.order() - 1);
  std::unique_ptr<Algorithm> engine_alg;
  std::unique_ptr<Adversary> engine_adv;
  if (settings.human_is_algorithm) {
    engine_adv = make_adversary(settings.opponent.empty() ? "adv-halving" : settings.opponent, g,
                                settings.kind, settings.adversary);
    out << "you are the algorithm; " << engine_adv->name() << " answers. Enter queries as 'u v'.\n";
  } else {
    engine_alg = make_algorithm(settings.opponent.empty() ? "sp-elim" : settings.opponent, g,
                                settings.kind, settings.strategy);
    out << "you are the adversary against " << engine_alg->name()
        << ". Reply with 'u', 'v' or the vertex.\n";
  }

  CandidateSet current = VertexSet::full(g.order());
  std::size_t rounds = 0;
  while (current.size() > 1 && rounds < budget) {
    show(out, rounds, current);
    const Position pos{g, settings.kind, current, rounds};
    Query q{};
    Side reply = Side::U;
    if (settings.human_is_algorithm) {
      for (;;) {
        out << "query> " << std::flush;
        auto toks = next_tokens(in);
        if (!toks) throw Error("input ended before the game finished");
        if (toks->size() != 2) {
          out << "illegal: expected two vertices\n";
          continue;
        }
        auto u = parse_vertex(g, (*toks)[0]);
        auto v = parse_vertex(g, (*toks)[1]);
        if (!u || !v) {
          out << "illegal: unknown vertex\n";
          continue;
        }
        q = {*u, *v};
        if (!is_admissible(g, settings.kind, q)) {
          out << "illegal: "
              << (q.u == q.v ? "the two vertices must differ" : "not an edge of the graph") << '\n';
          continue;
        }
        break;
      }
      const Partition part = partition(g, current, q);
      reply = engine_adv->reply(pos, q, part);
      current = apply_reply(current, part, reply);
    } else {
      q = engine_alg->next_query(pos);
      validate_query(g, settings.kind, q);
      const Partition part = partition(g, current, q);
      out << "query: " << name_of(g, q.u) << " vs " << name_of(g, q.v) << '\n';
      for (;;) {
        out << "reply> " << std::flush;
        auto toks = next_tokens(in);
        if (!toks) throw Error("input ended before the game finished");
        const std::string& t = (*toks)[0];
        std::optional<Side> side;
        if (toks->size() == 1 && t == "u") {
          side = Side::U;
        } else if (toks->size() == 1 && t == "v") {
          side = Side::V;
        } else if (toks->size() == 1) {
          if (auto w = parse_vertex(g, t)) {
            if (*w == q.u) side = Side::U;
            if (*w == q.v) side = Side::V;
          }
        }
        if (!side) {
          out << "illegal: reply with 'u', 'v', " << q.u << " or " << q.v << '\n';
          continue;
        }
        if (apply_reply(current, part, *side).empty()) {
          out << "illegal: no candidate is consistent with that reply\n";
          continue;
        }
        reply = *side;
        break;
      }
      current = apply_reply(current, part, reply);
      engine_alg->observe(q, reply, current);
    }
    ++rounds;
    out << "reply: " << name_of(g, reply == Side::U ? q.u : q.v) << '\n';
  }
  if (current.size() == 1) {
    out << "target " << name_of(g, current.first()) << " located after " << rounds << " rounds\n";
  } else {
    out << "budget of " << budget << " rounds exhausted with " << current.size()
        << " candidates " << current.to_string() << '\n';
  }
  return rounds;
}

}  // namespace qsearch::cli
