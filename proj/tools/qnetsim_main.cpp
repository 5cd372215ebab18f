// Experiment runner. Every command writes RFC-4180 style CSV (or the table
// text format) with a '#' header embedding the version, the full parameter
// set and the seed; re-running with the same parameters reproduces the
// output byte for byte.
//
// Exit codes: 0 success, 2 usage error, 3 numerical-invariant violation.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "qnetsim/repeater.hpp"
#include "qnetsim/stabtool.hpp"
#include "qnetsim/toric.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

// start:stop:step, inclusive of start, exclusive of stop + step/2.
std::vector<double> parse_range(const std::string& text) {
  std::vector<double> out;
  const auto c1 = text.find(':');
  if (c1 == std::string::npos) {
    // comma separated list
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    if (out.empty()) throw CLI::ValidationError("range", "empty value list");
    return out;
  }
  const auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos) throw CLI::ValidationError("range", "expected start:stop:step");
  const double start = std::stod(text.substr(0, c1));
  const double stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  const double step = std::stod(text.substr(c2 + 1));
  if (step <= 0.0) throw CLI::ValidationError("range", "step must be positive");
  for (double v = start; v < stop + step / 2.0; v += step) out.push_back(v);
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  if (out.empty()) throw CLI::ValidationError("list", "empty value list");
  return out;
}

struct Output {
  std::ofstream file;
  std::ostream* os = &std::cout;

  void open(const std::string& path) {
    if (path.empty()) return;
    file.open(path, std::ios::binary);
    if (!file) throw CLI::ValidationError("--output", "cannot open " + path);
    os = &file;
  }
  std::ostream& out() { return *os; }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void header(std::ostream& os, const std::string& command_line) {
  os << "# qnetsim " << kVersion << "\n";
  os << "# " << command_line << "\n";
}

struct NoiseFlags {
  double p1 = 1e-6;
  double p2 = 1e-3;
  double pm = 5e-4;

  void attach(CLI::App* cmd) {
    cmd->add_option("--p1", p1, "single-qubit gate error rate");
    cmd->add_option("--p2", p2, "two-qubit gate error rate");
    cmd->add_option("--pm", pm, "measurement error rate");
  }
  std::string describe() const {
    return "--p1=" + num(p1) + " --p2=" + num(p2) + " --pm=" + num(pm);
  }
};

int default_workers() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : int(n);
}

// ---------------------------------------------------------------------------

int cmd_purify_sweep(const std::string& levels_text, const std::string& eps_text,
                     const NoiseFlags& noise, long trials, std::uint64_t seed, int workers,
                     const std::string& output) {
  const std::vector<int> levels = parse_int_list(levels_text);
  const std::vector<double> eps = parse_range(eps_text);
  Output sink;
  sink.open(output);
  std::ostream& os = sink.out();
  header(os, "purify-sweep --levels=" + levels_text + " --eps=" + eps_text + " " +
                 noise.describe() + " --trials=" + std::to_string(trials) +
                 " --seed=" + std::to_string(seed));
  os << "epsilon,level,infidelity,mean_raw_pairs,mean_time_T0,stderr\n";
  std::size_t point = 0;
  for (double e : eps) {
    for (int level : levels) {
      const qnet::NoiseModel model{e, noise.p1, noise.p2, noise.pm};
      const double infid = qnet::run_level(level, model).infidelity;
      const qnet::MarkovStats stats = qnet::markov_cost_parallel(
          level, model, trials, seed + 1000003ull * point, workers);
      os << num(e) << "," << level << "," << num(infid) << "," << num(stats.mean_raw_pairs)
         << "," << num(stats.mean_time_t0) << "," << num(stats.stderr_raw_pairs) << "\n";
      ++point;
    }
  }
  return 0;
}

int cmd_repeater(double eps, const NoiseFlags& noise, bool include_pm, int chain, int chain2,
                 double spacing_km, const std::string& output) {
  qnet::PipelineConfig cfg;
  cfg.chain_m = chain;
  cfg.chain_p = chain2 > 0 ? chain2 : chain;
  cfg.include_pm = include_pm;
  const qnet::NoiseModel model{eps, noise.p1, noise.p2, noise.pm};
  const auto stages = qnet::pipeline(cfg, model);

  Output sink;
  sink.open(output);
  std::ostream& os = sink.out();
  header(os, "repeater --eps=" + num(eps) + " " + noise.describe() +
                 " --include-pm=" + std::to_string(int(include_pm)) +
                 " --chain=" + std::to_string(chain) + " --chain2=" + std::to_string(cfg.chain_p) +
                 " --spacing-km=" + num(spacing_km));
  os << "stage,fidelity,channel1,channel2,channel3,cost_factor\n";
  for (const auto& s : stages) {
    os << s.stage << "," << num(s.fidelity) << "," << num(s.channels[0]) << ","
       << num(s.channels[1]) << "," << num(s.channels[2]) << ","
       << (s.cost_factor ? num(*s.cost_factor) : "") << "\n";
  }
  os << "# total_cost_factor," << num(qnet::pipeline_total_cost(stages)) << "\n";

  qnet::LinkBudget link;
  link.spacing_km = spacing_km;
  const qnet::RateBudget budget = qnet::rate_budget(link);
  os << "# budget,loss_db=" << num(budget.loss_db)
     << ",success_scaling=" << num(budget.success_scaling)
     << ",max_cycle_rate_hz=" << num(budget.max_cycle_rate_hz)
     << ",advised_spacing_km=" << num(budget.advised_spacing_km) << "\n";
  return 0;
}

int cmd_threshold(const std::string& method, int level, const std::string& l_text,
                  const std::string& eps_text, const NoiseFlags& noise, long trials,
                  std::uint64_t seed, int workers, const std::string& output) {
  qnet::ThresholdConfig cfg;
  cfg.method = (method == "b" || method == "ghz") ? qnet::StabMethod::Ghz
                                                  : qnet::StabMethod::Ancilla;
  cfg.level = level;
  cfg.lattice_sizes = parse_int_list(l_text);
  cfg.epsilons = parse_range(eps_text);
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.p1 = noise.p1;
  cfg.p2 = noise.p2;
  cfg.pm = noise.pm;
  cfg.workers = workers;
  const qnet::ThresholdResult res = qnet::threshold_scan(cfg);

  Output sink;
  sink.open(output);
  std::ostream& os = sink.out();
  header(os, "threshold --method=" + method + " --level=" + std::to_string(level) +
                 " --L=" + l_text + " --eps=" + eps_text + " " + noise.describe() +
                 " --trials=" + std::to_string(trials) + " --seed=" + std::to_string(seed));
  os << "epsilon,L,trials,failures,rate,stderr\n";
  for (const auto& p : res.points) {
    os << num(p.epsilon) << "," << p.lattice << "," << p.trials << "," << p.failures << ","
       << num(p.failure_rate()) << "," << num(p.failure_stderr()) << "\n";
  }
  if (std::isfinite(res.crossing.epsilon)) {
    os << "# crossing," << num(res.crossing.epsilon) << "," << num(res.crossing.ci_low) << ","
       << num(res.crossing.ci_high) << "\n";
  } else {
    os << "# crossing,unbracketed,,\n";
  }
  return 0;
}

int cmd_table_dump(const std::string& method, int level, double eps, const NoiseFlags& noise,
                   const std::string& basis_text, const std::string& output) {
  const qnet::StabMethod m = (method == "b" || method == "ghz") ? qnet::StabMethod::Ghz
                                                                : qnet::StabMethod::Ancilla;
  const qnet::Basis basis = (basis_text == "X") ? qnet::Basis::X : qnet::Basis::Z;
  const qnet::NoiseModel model{eps, noise.p1, noise.p2, noise.pm};
  const qnet::ParityErrorTable table = qnet::build_parity_table(m, level, model, basis);

  Output sink;
  sink.open(output);
  std::ostream& os = sink.out();
  header(os, "table-dump --method=" + method + " --level=" + std::to_string(level) +
                 " --eps=" + num(eps) + " " + noise.describe() + " --basis=" + basis_text);
  table.serialize(os);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entanglement purification / repeater / toric threshold experiment runner"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read defaults from a TOML/INI config file");

  std::uint64_t seed = 1;
  int workers = default_workers();
  std::string output;
  app.add_option("--seed", seed, "master RNG seed")->envname("QNETSIM_SEED");
  app.add_option("--workers", workers, "trial worker threads (results are worker-independent)");
  app.add_option("--output", output, "output file (default stdout)");

  // purify-sweep
  auto* sweep = app.add_subcommand("purify-sweep", "infidelity and cost per level over a grid");
  std::string levels = "1,2,3";
  std::string sweep_eps = "0.01:0.15:0.01";
  long sweep_trials = 100000;
  NoiseFlags sweep_noise;
  sweep->add_option("--levels", levels, "comma separated purification levels");
  sweep->add_option("--eps", sweep_eps, "raw infidelity grid, start:stop:step or list");
  sweep->add_option("--trials", sweep_trials, "Monte Carlo trials per point");
  sweep_noise.attach(sweep);

  // repeater
  auto* rep = app.add_subcommand("repeater", "long-range chain stage table and link budget");
  double rep_eps = 0.1;
  int chain = 12, chain2 = 0;
  bool rep_pm = true;
  double spacing = 17.0;
  NoiseFlags rep_noise;
  rep_noise.p1 = 0.0;
  rep->add_option("--eps", rep_eps, "raw infidelity");
  rep->add_option("--chain", chain, "pairs fused at the first fusion stage");
  rep->add_option("--chain2", chain2, "pairs fused at the second fusion stage (default --chain)");
  rep->add_flag("--include-pm,!--no-include-pm", rep_pm, "measurement lies in purification");
  rep->add_option("--spacing-km", spacing, "module spacing for the link budget");
  rep_noise.attach(rep);

  // threshold
  auto* thr = app.add_subcommand("threshold", "toric-code logical error scan and crossing");
  std::string method = "a";
  int level = 3;
  std::string l_list = "4,6,8";
  std::string thr_eps = "0.13:0.20:0.01";
  long thr_trials = 4000;
  NoiseFlags thr_noise;
  thr->add_option("--method", method, "stabilizer method: a (ancilla) or b (ghz)");
  thr->add_option("--level", level, "purification level feeding the tables");
  thr->add_option("--L", l_list, "comma separated lattice sizes");
  thr->add_option("--eps", thr_eps, "raw infidelity grid");
  thr->add_option("--trials", thr_trials, "decoding trials per (L, epsilon) point");

  thr_noise.attach(thr);

  // table-dump
  auto* dump = app.add_subcommand("table-dump", "serialized stabilizer error table");
  std::string dump_method = "a";
  int dump_level = 3;
  double dump_eps = 0.1;
  std::string basis = "Z";
  NoiseFlags dump_noise;
  dump->add_option("--method", dump_method, "a (ancilla) or b (ghz)");
  dump->add_option("--level", dump_level, "purification level");
  dump->add_option("--eps", dump_eps, "raw infidelity");
  dump->add_option("--basis", basis, "parity basis, Z or X");
  dump_noise.attach(dump);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sweep->parsed()) {
      return cmd_purify_sweep(levels, sweep_eps, sweep_noise, sweep_trials, seed, workers, output);
    }
    if (rep->parsed()) {
      return cmd_repeater(rep_eps, rep_noise, rep_pm, chain, chain2, spacing, output);
    }
    if (thr->parsed()) {
      return cmd_threshold(method, level, l_list, thr_eps, thr_noise, thr_trials, seed, workers,
                           output);
    }
    if (dump->parsed()) {
      return cmd_table_dump(dump_method, dump_level, dump_eps, dump_noise, basis, output);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
