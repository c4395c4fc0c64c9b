#include "qsearch/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "qsearch/csv.hpp"
#include "qsearch/error.hpp"
#include "qsearch/expansion.hpp"
#include "qsearch/rng.hpp"

namespace qsearch {

StrategyOutcome run_trial(const Graph& g, const TrialSpec& spec) {
  auto alg = make_algorithm(spec.algorithm, g, spec.kind, spec.strategy);
  auto adv = make_adversary(spec.adversary, g, spec.kind, spec.adversary_spec);
  StrategyOutcome out;
  out.seed = spec.strategy.seed;
  out.budget = spec.budget ? *spec.budget : default_budget(spec.algorithm, g, spec.strategy);

  PlayOptions opts;
  opts.budget = out.budget;
  Transcript t = play(g, spec.kind, *alg, *adv, opts);
  out.success = t.terminal;
  for (const auto& r : t.rounds) out.candidate_sizes.push_back(r.candidates_after);
  out.rounds = t.rounds.size();

  if (!t.terminal && spec.finish_greedy) {
    ShortestPathElimination finish;
    PlayOptions more;
    more.budget = std::max<std::size_t>(1, t.final_candidates.size() - 1);
    more.start = t.final_candidates;
    const Transcript rest = play(g, spec.kind, finish, *adv, more);
    for (const auto& r : rest.rounds) out.candidate_sizes.push_back(r.candidates_after);
    out.rounds += rest.rounds.size();
  }
  return out;
}

void parallel_for(std::size_t count, unsigned jobs,
                  const std::function<void(std::size_t)>& body) {
  if (jobs == 0) jobs = std::max(1U, std::thread::hardware_concurrency());
  if (jobs == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t threads = std::min<std::size_t>(jobs, count);
  for (std::size_t j = 0; j < threads; ++j) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

Graph sample_gnp_with_diameter(std::size_t n, double p, Distance diam, std::uint64_t seed,
                               unsigned max_attempts) {
  for (unsigned a = 0; a < max_attempts; ++a) {
    Graph g = sample_gnp({n, p, derive_seed(seed, "diameter-resample", a)});
    if (g.connected() && diameter(g) == diam) return g;
  }
  throw ResourceLimit("no G(" + std::to_string(n) + ", " + format_double(p) + ") sample with diameter " +
                      std::to_string(diam) + " in " + std::to_string(max_attempts) + " attempts");
}

namespace {

Graph trial_graph(const GraphSource& src, std::uint64_t seed) {
  if (src.fixed) return *src.fixed;
  if (src.diameter) return sample_gnp_with_diameter(src.n, src.p, *src.diameter, seed);
  return sample_connected_gnp({src.n, src.p, seed});
}

}  // namespace

std::vector<SimulationRow> simulate(const SimulationConfig& config) {
  if (config.trials == 0) throw InvalidArgument("simulation needs at least one trial");
  std::vector<SimulationRow> rows(config.trials);
  parallel_for(config.trials, config.jobs, [&](std::size_t t) {
    const std::uint64_t seed = derive_seed(config.seed, "trial", t);
    const Graph g = trial_graph(config.source, derive_seed(seed, "graph"));
    TrialSpec spec = config.trial;
    spec.strategy.seed = derive_seed(seed, "strategy");
    if (!spec.strategy.p && !config.source.fixed) spec.strategy.p = config.source.p;
    spec.adversary_spec.seed = derive_seed(seed, "adversary");
    const StrategyOutcome o = run_trial(g, spec);
    SimulationRow& row = rows[t];
    row.trial = t;
    row.seed = seed;
    row.algorithm = spec.algorithm;
    row.adversary = spec.adversary;
    row.kind = spec.kind;
    row.n = g.order();
    row.budget = o.budget;
    row.rounds = o.rounds;
    row.success = o.success;
    row.final_candidates = o.candidate_sizes.empty() ? g.order() : o.candidate_sizes.back();
  });
  return rows;
}

void write_simulation_csv(std::ostream& out, const std::vector<SimulationRow>& rows) {
  write_csv_header(out, "simulation",
                   {"trial", "seed", "algorithm", "adversary", "kind", "n", "budget", "rounds",
                    "success", "final_candidates"});
  for (const auto& r : rows) {
    out << r.trial << ',' << r.seed << ',' << r.algorithm << ',' << r.adversary << ','
        << to_string(r.kind) << ',' << r.n << ',' << r.budget << ',' << r.rounds << ','
        << (r.success ? 1 : 0) << ',' << r.final_candidates << '\n';
  }
}

// ---------------------------------------------------------------------------

void validate_sweep(const SweepConfig& config) {
  if (config.xis.empty()) throw InvalidArgument("sweep needs at least one xi value");
  if (config.ns.empty()) throw InvalidArgument("sweep needs at least one n value");
  if (config.trials == 0) throw InvalidArgument("sweep needs at least one trial per cell");
  for (double xi : config.xis) {
    if (!(xi > 0.0 && xi < 1.0)) {
      throw InvalidArgument("xi must lie in (0,1), got " + format_double(xi));
    }
  }
  for (std::size_t n : config.ns) {
    if (n < 4) throw InvalidArgument("sweep needs n >= 4, got " + std::to_string(n));
  }
}

std::vector<SweepRow> sweep(const SweepConfig& config) {
  validate_sweep(config);
  struct Job {
    std::size_t cell;
    double xi;
    std::size_t n;
    std::size_t trial;
  };
  std::vector<Job> jobs;
  std::size_t cell = 0;
  for (double xi : config.xis) {
    for (std::size_t n : config.ns) {
      for (std::size_t t = 0; t < config.trials; ++t) jobs.push_back({cell, xi, n, t});
      ++cell;
    }
  }
  std::vector<SweepRow> rows(jobs.size());
  parallel_for(jobs.size(), config.jobs, [&](std::size_t j) {
    const Job& job = jobs[j];
    const double nn = static_cast<double>(job.n);
    const double d = std::pow(nn, job.xi);
    const double p = d / nn;
    const unsigned i = effective_exponent(job.n, d);
    const std::uint64_t seed = derive_seed(derive_seed(config.seed, "sweep-cell", job.cell),
                                           "trial", job.trial);
    const Graph g = sample_connected_gnp({job.n, p, derive_seed(seed, "graph")});
    TrialSpec spec;
    spec.algorithm = config.algorithm;
    spec.adversary = config.adversary;
    spec.kind = config.algorithm == "phase-pair" ? QueryKind::Pair : QueryKind::Edge;
    spec.strategy.seed = derive_seed(seed, "strategy");
    spec.strategy.b = config.b;
    spec.strategy.p = p;
    spec.strategy.exponent = i;
    spec.adversary_spec.seed = derive_seed(seed, "adversary");
    spec.finish_greedy = config.finish_greedy;
    const StrategyOutcome o = run_trial(g, spec);
    rows[j] = SweepRow{job.xi, job.n, d, i, job.trial, seed, o.budget, o.rounds, o.success};
  });
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.xi, a.n, a.trial) < std::tie(b.xi, b.n, b.trial);
  });
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  write_csv_header(out, "sweep",
                   {"xi", "n", "d", "i", "budget", "rounds", "success", "trial", "seed"});
  for (const auto& r : rows) {
    out << format_double(r.xi) << ',' << r.n << ',' << format_double(r.d) << ',' << r.i << ','
        << r.budget << ',' << r.rounds << ',' << (r.success ? 1 : 0) << ',' << r.trial << ','
        << r.seed << '\n';
  }
}

double median(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<ExponentFit> fit_exponents(const std::vector<SweepRow>& rows) {
  std::map<double, std::map<std::size_t, std::vector<double>>> grouped;
  std::map<double, unsigned> exponent;
  for (const auto& r : rows) {
    grouped[r.xi][r.n].push_back(static_cast<double>(r.rounds));
    exponent[r.xi] = std::max(exponent[r.xi], r.i);
  }
  std::vector<ExponentFit> fits;
  for (const auto& [xi, by_n] : grouped) {
    ExponentFit f;
    f.xi = xi;
    f.i = exponent[xi];
    f.reference = 1.0 - f.i * xi;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [n, rounds] : by_n) {
      const double med = median(rounds);
      f.medians.emplace_back(n, med);
      const double lx = std::log(static_cast<double>(n));
      const double ly = std::log(std::max(med, 1.0));
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    const double k = static_cast<double>(by_n.size());
    const double denom = k * sxx - sx * sx;
    f.slope = (k < 2 || denom == 0.0) ? 0.0 : (k * sxy - sx * sy) / denom;
    fits.push_back(std::move(f));
  }
  return fits;
}

}  // namespace qsearch
