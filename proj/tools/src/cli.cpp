#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "qsearch/csv.hpp"
#include "qsearch/error.hpp"
#include "qsearch/expansion.hpp"
#include "qsearch/experiment.hpp"
#include "qsearch/graph_io.hpp"
#include "qsearch/hardness.hpp"
#include "qsearch/solver.hpp"

namespace qsearch::cli {

namespace {

struct GnpSpec {
  std::size_t n = 0;
  double p = 0.0;
};

GnpSpec parse_gnp(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw InvalidArgument("--gnp expects 'n,p', got '" + text + "'");
  GnpSpec s;
  try {
    std::size_t used = 0;
    s.n = std::stoul(text.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument(text);
    const std::string p = text.substr(comma + 1);
    s.p = std::stod(p, &used);
    if (used != p.size()) throw std::invalid_argument(text);
  } catch (const std::logic_error&) {
    throw InvalidArgument("--gnp expects 'n,p', got '" + text + "'");
  }
  if (!(s.p >= 0.0 && s.p <= 1.0)) throw InvalidArgument("--gnp probability must lie in [0,1]");
  return s;
}

// --graph FILE or --gnp n,p (connected sample, optionally with a diameter).
struct GraphOptions {
  std::string path;
  std::string gnp;
  std::optional<int> diameter;

  void add(CLI::App* cmd) {
    auto* g = cmd->add_option("--graph", path, "edge-list file");
    auto* r = cmd->add_option("--gnp", gnp, "sample G(n,p) as 'n,p'");
    g->excludes(r);
    cmd->add_option("--diameter", diameter, "resample G(n,p) until it has this diameter");
  }
  bool given() const { return !path.empty() || !gnp.empty(); }

  Graph load(std::uint64_t seed) const {
    if (!path.empty()) return load_edge_list(path);
    if (gnp.empty()) throw InvalidArgument("one of --graph or --gnp is required");
    const GnpSpec s = parse_gnp(gnp);
    if (diameter) return sample_gnp_with_diameter(s.n, s.p, *diameter, derive_seed(seed, "graph"));
    return sample_connected_gnp({s.n, s.p, derive_seed(seed, "graph")});
  }
};

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw Error("cannot write '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

const std::vector<std::string> kKinds = {"pair", "edge"};

void print_tree_csv(std::ostream& out, const StrategyTree& tree) {
  write_csv_header(out, "strategy", {"node", "parent", "branch", "u", "v", "candidates"});
  std::size_t next_id = 0;
  std::function<void(const StrategyNode*, long, const char*)> walk =
      [&](const StrategyNode* node, long parent, const char* branch) {
        if (!node) return;
        const std::size_t id = next_id++;
        out << id << ',' << parent << ',' << branch << ',';
        if (node->query) {
          out << node->query->u << ',' << node->query->v << ',';
        } else {
          out << ",,";
        }
        std::string members;
        for (Vertex v : node->candidates.members()) {
          if (!members.empty()) members += ' ';
          members += std::to_string(v);
        }
        out << members << '\n';
        walk(node->on_u.get(), static_cast<long>(id), "u");
        walk(node->on_v.get(), static_cast<long>(id), "v");
      };
  walk(tree.root(), -1, "root");
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Vertex search games with pair and edge queries"};
  app.name("qsearch");
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "base seed for every random stream")->capture_default_str();

  int status = kOk;
  std::function<void()> action;

  // compute ------------------------------------------------------------------
  auto* compute = app.add_subcommand("compute", "exact pqn / eqn of a small graph");
  GraphOptions compute_graph;
  compute_graph.add(compute);
  std::string compute_kind = "pair";
  bool tree = false, restrict_candidates = false;
  std::string tree_format = "text";
  std::optional<unsigned> threshold;
  std::size_t max_vertices = SolverLimits{}.max_vertices;
  double time_limit = 600.0;
  std::vector<Vertex> start;
  compute->add_option("--kind", compute_kind)->check(CLI::IsMember(kKinds))->capture_default_str();
  compute->add_flag("--tree", tree, "print an optimal strategy tree");
  compute->add_option("--tree-format", tree_format)->check(CLI::IsMember({"text", "csv"}));
  compute->add_flag("--restrict", restrict_candidates, "only query candidate vertices");
  compute->add_option("--decide", threshold, "print whether the value is at most this");
  compute->add_option("--max-vertices", max_vertices)->capture_default_str();
  compute->add_option("--time-limit", time_limit, "seconds")->capture_default_str();
  compute->add_option("--start", start, "initial candidate set (comma separated)")->delimiter(',');
  compute->callback([&] {
    action = [&] {
      const Graph g = compute_graph.load(seed);
      const QueryKind kind = parse_query_kind(compute_kind);
      SolverLimits limits;
      limits.max_vertices = max_vertices;
      limits.time_budget = std::chrono::milliseconds(static_cast<long long>(time_limit * 1000));
      SolverOptions opts;
      opts.retain_strategy = tree;
      opts.restrict_to_candidates = restrict_candidates;
      CandidateSet s = VertexSet::full(g.order());
      if (!start.empty()) {
        s = VertexSet(g.order());
        for (Vertex v : start) s.insert(v);
      }
      if (g.order() > 1) g.require_connected();
      ExactSolver solver(g, kind, limits, opts);
      if (threshold) {
        out << (solver.decide(*threshold, s) ? "true" : "false") << '\n';
        return;
      }
      const unsigned value = solver.value(s);
      if (tree && tree_format == "csv") {
        // Machine-readable output carries the tree only; its depth is the value.
        print_tree_csv(out, solver.extract_strategy(s));
        return;
      }
      out << value << '\n';
      if (tree) solver.extract_strategy(s).print(out, g);
    };
  });

  // simulate -----------------------------------------------------------------
  auto* simulate_cmd = app.add_subcommand("simulate", "batch of seeded playouts, CSV rows");
  GraphOptions sim_graph;
  sim_graph.add(simulate_cmd);
  std::string sim_kind = "pair", sim_strategy, sim_adversary = "adv-halving", sim_out;
  std::size_t trials = 1;
  std::optional<std::size_t> budget;
  unsigned jobs = 1;
  bool finish_greedy = false;
  double b = 4.0;
  std::optional<unsigned> exponent;
  std::optional<Vertex> target;
  simulate_cmd->add_option("--kind", sim_kind)->check(CLI::IsMember(kKinds))->capture_default_str();
  simulate_cmd->add_option("--strategy", sim_strategy)->required()->check(
      CLI::IsMember(algorithm_names()));
  simulate_cmd->add_option("--adversary", sim_adversary)
      ->check(CLI::IsMember(adversary_names()))
      ->capture_default_str();
  simulate_cmd->add_option("--trials", trials)->check(CLI::PositiveNumber)->capture_default_str();
  simulate_cmd->add_option("--budget", budget, "rounds (default: the strategy's budget)");
  simulate_cmd->add_option("--jobs", jobs)->capture_default_str();
  simulate_cmd->add_option("--out", sim_out, "CSV path (default stdout)");
  simulate_cmd->add_flag("--finish-greedy", finish_greedy,
                         "continue with sp-elim once the budget is spent");
  simulate_cmd->add_option("--b", b, "phase parameter b > 1")->capture_default_str();
  simulate_cmd->add_option("--exponent", exponent, "phase exponent i");
  simulate_cmd->add_option("--target", target, "planted target for adv-target");
  simulate_cmd->callback([&] {
    action = [&] {
      SimulationConfig cfg;
      cfg.seed = seed;
      cfg.trials = trials;
      cfg.jobs = jobs;
      if (!sim_graph.given()) throw InvalidArgument("one of --graph or --gnp is required");
      if (!sim_graph.path.empty()) {
        cfg.source.fixed = load_edge_list(sim_graph.path);
      } else {
        const GnpSpec s = parse_gnp(sim_graph.gnp);
        cfg.source.n = s.n;
        cfg.source.p = s.p;
        if (sim_graph.diameter) cfg.source.diameter = *sim_graph.diameter;
      }
      cfg.trial.algorithm = sim_strategy;
      cfg.trial.adversary = sim_adversary;
      cfg.trial.kind = parse_query_kind(sim_kind);
      cfg.trial.budget = budget;
      cfg.trial.finish_greedy = finish_greedy;
      cfg.trial.strategy.b = b;
      cfg.trial.strategy.exponent = exponent;
      cfg.trial.adversary_spec.target = target;
      const auto rows = simulate(cfg);
      Output o(sim_out, out);
      write_simulation_csv(*o, rows);
      std::size_t ok = 0;
      std::vector<double> rounds;
      for (const auto& r : rows) {
        ok += r.success ? 1 : 0;
        rounds.push_back(static_cast<double>(r.rounds));
      }
      err << "successes " << ok << '/' << rows.size() << ", median rounds "
          << format_double(median(rounds)) << '\n';
    };
  });

  // sweep --------------------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand("sweep", "rounds on G(n, n^xi / n) over a grid");
  SweepConfig sweep_cfg;
  std::string sweep_out;
  bool no_finish = false;
  sweep_cmd->add_option("--xi", sweep_cfg.xis, "comma separated xi values in (0,1)")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--n", sweep_cfg.ns, "comma separated graph orders")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--trials", sweep_cfg.trials)->capture_default_str();
  sweep_cmd->add_option("--strategy", sweep_cfg.algorithm)
      ->check(CLI::IsMember({"phase-pair", "phase-edge"}))
      ->capture_default_str();
  sweep_cmd->add_option("--adversary", sweep_cfg.adversary)
      ->check(CLI::IsMember({"adv-halving", "adv-target"}))
      ->capture_default_str();
  sweep_cmd->add_option("--b", sweep_cfg.b)->capture_default_str();
  sweep_cmd->add_option("--jobs", sweep_cfg.jobs)->capture_default_str();
  sweep_cmd->add_option("--out", sweep_out, "CSV path (default stdout)");
  sweep_cmd->add_flag("--no-finish", no_finish,
                      "stop at the phase budget instead of finishing with sp-elim");
  sweep_cmd->callback([&] {
    action = [&] {
      sweep_cfg.seed = seed;
      sweep_cfg.finish_greedy = !no_finish;
      const auto rows = sweep(sweep_cfg);
      Output o(sweep_out, out);
      write_sweep_csv(*o, rows);
      for (const auto& f : fit_exponents(rows)) {
        err << "xi " << format_double(f.xi) << " i " << f.i << " slope "
            << format_double(f.slope) << " reference " << format_double(f.reference) << '\n';
      }
    };
  });

  // construct ----------------------------------------------------------------
  auto* construct = app.add_subcommand("construct", "write a graph family as an edge list");
  std::string family, construct_out;
  std::size_t cn = 0;
  unsigned ck = 0;
  double cp = 0.0;
  construct->add_option("family", family)
      ->required()
      ->check(CLI::IsMember({"path", "star", "complete", "cycle", "gk", "gnp"}));
  construct->add_option("--n", cn, "order");
  construct->add_option("--k", ck, "height of G_k");
  construct->add_option("--p", cp, "edge probability for gnp");
  construct->add_option("--out", construct_out, "edge-list path (default stdout)");
  construct->callback([&] {
    action = [&] {
      Graph g;
      if (family == "path") {
        g = make_path(cn);
      } else if (family == "star") {
        g = make_star(cn);
      } else if (family == "complete") {
        g = make_complete(cn);
      } else if (family == "cycle") {
        g = make_cycle(cn);
      } else if (family == "gk") {
        g = make_separation_graph(ck);
      } else {
        g = sample_gnp({cn, cp, derive_seed(seed, "graph")});
      }
      Output o(construct_out, out);
      write_edge_list(*o, g);
    };
  });

  // reduce / verify-lemma ----------------------------------------------------
  auto* reduce = app.add_subcommand("reduce", "build the gadget graph of a 3XC instance");
  std::string instance_path, reduce_out;
  bool no_diameter = false;
  reduce->add_option("--instance", instance_path)->required();
  reduce->add_option("--out", reduce_out, "labelled edge-list path");
  reduce->add_flag("--no-diameter", no_diameter, "skip the diameter measurement");
  reduce->callback([&] {
    action = [&] {
      const ReductionGraph rg = build_reduction(load_instance(instance_path));
      if (!reduce_out.empty()) save_edge_list(reduce_out, rg.graph);
      const StructureReport rep = check_structure(rg, !no_diameter);
      out << "vertices " << rep.vertices << " (expected " << rep.expected_vertices << ")\n";
      out << "edges " << rep.edges << '\n';
      out << "leaves " << rep.leaves << '\n';
      if (rep.diameter) out << "diameter " << *rep.diameter << '\n';
      for (const auto& v : rep.violations) out << "violation: " << v << '\n';
      out << "structure " << (rep.ok() ? "ok" : "VIOLATED") << '\n';
      if (!rep.ok()) status = kVerification;
    };
  });

  auto* verify = app.add_subcommand("verify-lemma", "check the reduction lemma on an instance");
  LemmaOptions lemma;
  verify->add_option("--instance", instance_path)->required();
  verify->add_option("--random-algorithms", lemma.random_algorithms)->capture_default_str();
  verify->add_flag("--no-diameter", no_diameter, "skip the diameter measurement");
  verify->callback([&] {
    action = [&] {
      lemma.seed = seed;
      lemma.measure_diameter = !no_diameter;
      const LemmaReport rep = verify_lemma(load_instance(instance_path), lemma);
      print_lemma_report(out, rep);
      if (!rep.passed) status = kVerification;
    };
  });

  // play ---------------------------------------------------------------------
  auto* play_cmd = app.add_subcommand("play", "play one side of the game in the terminal");
  GraphOptions play_graph;
  play_graph.add(play_cmd);
  std::string play_kind = "pair", side = "algorithm", opponent;
  std::size_t play_budget = 0;
  play_cmd->add_option("--kind", play_kind)->check(CLI::IsMember(kKinds))->capture_default_str();
  play_cmd->add_option("--side", side, "which side you play")
      ->check(CLI::IsMember({"algorithm", "adversary"}))
      ->capture_default_str();
  play_cmd->add_option("--opponent", opponent, "engine strategy or adversary name");
  play_cmd->add_option("--budget", play_budget, "round limit (default n-1)");
  play_cmd->add_option("--target", target, "planted target for adv-target");
  play_cmd->callback([&] {
    action = [&] {
      const Graph g = play_graph.load(seed);
      PlaySettings s;
      s.kind = parse_query_kind(play_kind);
      s.human_is_algorithm = side == "algorithm";
      s.opponent = opponent;
      s.strategy.seed = derive_seed(seed, "strategy");
      s.adversary.seed = derive_seed(seed, "adversary");
      s.adversary.target = target;
      s.budget = play_budget;
      play_interactive(g, s, in, out);
    };
  });

  // expand -------------------------------------------------------------------
  auto* expand = app.add_subcommand("expand", "expansion checks on G(n,p), CSV rows");
  GraphOptions expand_graph;
  expand_graph.add(expand);
  ExpansionChecks checks;
  std::optional<double> expand_p;
  std::string expand_out;
  expand->add_option("--p", expand_p, "density of a --graph input (default from edges)");
  expand->add_option("--samples", checks.samples)->capture_default_str();
  expand->add_option("--growth-tolerance", checks.growth_tolerance)->capture_default_str();
  expand->add_option("--partition-tolerance", checks.partition_tolerance)->capture_default_str();
  expand->add_option("--nice-tolerance", checks.nice_tolerance)->capture_default_str();
  expand->add_option("--rate", checks.required_rate, "required pass fraction")
      ->capture_default_str();
  expand->add_option("--out", expand_out, "CSV path (default stdout)");
  expand->callback([&] {
    action = [&] {
      const Graph g = expand_graph.load(seed);
      const double n = static_cast<double>(g.order());
      double p = 0.0;
      if (expand_p) {
        p = *expand_p;
      } else if (!expand_graph.gnp.empty()) {
        p = parse_gnp(expand_graph.gnp).p;
      } else {
        p = 2.0 * static_cast<double>(g.size()) / (n * (n - 1.0));
      }
      checks.d = p * n;
      checks.i = effective_exponent(g.order(), checks.d);
      checks.seed = derive_seed(seed, "expand");
      const auto rows = run_expansion_checks(g, checks);
      Output o(expand_out, out);
      write_check_rows(*o, rows);
      for (const auto& r : rows) {
        if (!r.pass) status = kVerification;
      }
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "qsearch: " << e.what() << '\n';
    for (auto* sub : app.get_subcommands()) err << sub->help();
    if (app.get_subcommands().empty()) err << app.help();
    return kUsage;
  }

  try {
    if (action) action();
    return status;
  } catch (const InvalidArgument& e) {
    err << "qsearch: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "qsearch: " << e.what() << '\n';
    return kUsage;
  } catch (const ResourceLimit& e) {
    err << "qsearch: resource limit: " << e.what() << '\n';
    return kResource;
  } catch (const std::exception& e) {
    err << "qsearch: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace qsearch::cli
