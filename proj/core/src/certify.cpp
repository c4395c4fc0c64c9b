#include <algorithm>
#include <limits>
#include <unordered_map>

#include "qsearch/error.hpp"
#include "qsearch/strategies.hpp"

namespace qsearch {

namespace {

constexpr std::size_t kExceeds = std::numeric_limits<std::size_t>::max();

class Certifier {
 public:
  Certifier(const Graph& g, QueryKind kind, std::size_t budget, const CertifyLimits& limits)
      : g_(g), kind_(kind), budget_(budget), limits_(limits) {}

  // Worst-case rounds to a singleton from (alg, s), or kExceeds when some
  // line of play needs more than `remaining`.
  std::size_t run(Algorithm& alg, const CandidateSet& s, std::size_t remaining) {
    if (s.size() <= 1) return 0;
    if (remaining == 0) return kExceeds;

    std::string key = alg.state_key();
    key.push_back('\x1f');
    key += s.encode();
    if (auto it = memo_.find(key); it != memo_.end()) {
      const Entry& e = it->second;
      if (e.exact) return e.rounds <= remaining ? e.rounds : kExceeds;
      if (e.rounds >= remaining) return kExceeds;  // known to need > e.rounds
    }
    if (memo_.size() >= limits_.max_states) {
      throw ResourceLimit("certify_upper: more than " + std::to_string(limits_.max_states) +
                          " strategy states");
    }

    const Position pos{g_, kind_, s, budget_ - remaining};
    const Query q = alg.next_query(pos);
    if (!is_admissible(g_, kind_, q)) {
      throw StrategyError(alg.name() + " emitted inadmissible query (" + std::to_string(q.u) +
                          "," + std::to_string(q.v) + ")");
    }
    const Partition part = partition(g_, s, q);
    std::size_t worst = 0;
    for (Side side : {Side::U, Side::V}) {
      const CandidateSet after = apply_reply(s, part, side);
      if (after.empty()) continue;
      auto next = alg.clone();
      next->observe(q, side, after);
      const std::size_t r = run(*next, after, remaining - 1);
      if (r == kExceeds) {
        Entry& e = memo_[key];
        if (!e.exact) e.rounds = std::max(e.rounds, remaining);
        return kExceeds;
      }
      worst = std::max(worst, r + 1);
    }
    memo_[key] = Entry{worst, true};
    return worst;
  }

 private:
  struct Entry {
    std::size_t rounds = 0;  // exact value, or a strict lower bound
    bool exact = false;
  };

  const Graph& g_;
  QueryKind kind_;
  std::size_t budget_;
  CertifyLimits limits_;
  std::unordered_map<std::string, Entry> memo_;
};

}  // namespace

std::optional<std::size_t> certify_upper(const Graph& g, QueryKind kind,
                                         const Algorithm& algorithm, std::size_t budget,
                                         std::optional<CandidateSet> start,
                                         const CertifyLimits& limits) {
  const CandidateSet s = start ? *start : VertexSet::full(g.order());
  if (s.universe() != g.order()) throw InvalidArgument("start set universe does not match graph");
  if (s.empty()) throw InvalidArgument("start set is empty");
  if (s.size() > 1) g.require_connected();
  Certifier c(g, kind, budget, limits);
  auto alg = algorithm.clone();
  const std::size_t r = c.run(*alg, s, budget);
  if (r == kExceeds) return std::nullopt;
  return r;
}

}  // namespace qsearch
