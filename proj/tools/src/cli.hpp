#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qsearch/game.hpp"
#include "qsearch/graph.hpp"
#include "qsearch/strategies.hpp"

namespace qsearch::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kResource = 3,
  kVerification = 4,
};

// Runs one `qsearch` invocation; args exclude the program name.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

struct PlaySettings {
  QueryKind kind = QueryKind::Pair;
  bool human_is_algorithm = true;
  std::string opponent;
  StrategySpec strategy;
  AdversarySpec adversary;
  std::size_t budget = 0;  // 0: n - 1 rounds, at least 1
};

// Interactive game on `in`/`out`. Returns the number of rounds played.
std::size_t play_interactive(const Graph& g, const PlaySettings& settings, std::istream& in,
                             std::ostream& out);

}  // namespace qsearch::cli
