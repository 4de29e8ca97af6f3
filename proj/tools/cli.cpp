#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>

#include "lrmc/data_io.hpp"
#include "lrmc/metrics.hpp"
#include "lrmc/solvers.hpp"

namespace lrmc::cli {

namespace {

const std::vector<std::string> kAlgorithmNames = {"soft_impute", "apg", "discrete_apg", "niapg",
                                                  "discrete_niapg"};

std::string trim(const std::string& s) {
  const auto from = s.find_first_not_of(" \t\r");
  if (from == std::string::npos) return "";
  const auto to = s.find_last_not_of(" \t\r");
  return s.substr(from, to - from + 1);
}

/// Read a `key = value` config file (# starts a comment) and return the
/// entries in file order.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--config: cannot open '" + path + "'");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("--config: line " + std::to_string(line_no) + " is not 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw UsageError("--config: line " + std::to_string(line_no) + " has an empty key");
    entries.emplace_back(key, value);
  }
  return entries;
}

/// Expand --config entries into --key=value tokens, skipping keys already
/// present on the command line so explicit flags win.
std::vector<std::string> merge_config_file(const std::vector<std::string>& args) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      config_path = args[i + 1];
    else if (args[i].starts_with("--config="))
      config_path = args[i].substr(9);
  }
  std::vector<std::string> merged = args;
  if (config_path.empty()) return merged;

  for (const auto& [key, value] : read_config_file(config_path)) {
    const std::string flag = "--" + key;
    const bool overridden =
        std::any_of(args.begin(), args.end(), [&](const std::string& a) {
          return a == flag || a.starts_with(flag + "=");
        });
    if (!overridden) merged.push_back(flag + "=" + value);
  }
  return merged;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void add_common_solver_flags(CLI::App* sub, CliConfig& cfg) {
  sub->add_option("--lambda", cfg.lambda,
                  "Low-rank weight; negative selects auto (sigma_max of the observed data / 50)")
      ->capture_default_str();
  sub->add_option("--xi", cfg.xi, "Discrete-awareness weight")->capture_default_str();
  sub->add_option("--theta", cfg.theta, "Log-sum penalty shape (lsp algorithms)")
      ->capture_default_str();
  sub->add_option("--max-iter", cfg.max_iter, "Iteration cap")->capture_default_str();
  sub->add_option("--rel-tol", cfg.rel_tol, "Relative objective-change stopping tolerance")
      ->capture_default_str();
  sub->add_option("--alphabet", cfg.alphabet, "Comma-separated admissible entry values")
      ->delimiter(',')
      ->capture_default_str();
}

void validate_common(const CliConfig& cfg) {
  if (!(cfg.xi >= 0.0)) throw UsageError("--xi must be >= 0");
  if (!(cfg.theta > 0.0)) throw UsageError("--theta must be > 0");
  if (cfg.max_iter < 1) throw UsageError("--max-iter must be >= 1");
  if (!(cfg.rel_tol > 0.0)) throw UsageError("--rel-tol must be > 0");
  if (cfg.alphabet.empty()) throw UsageError("--alphabet must not be empty");
  try {
    Alphabet probe(cfg.alphabet);
  } catch (const Error& e) {
    throw UsageError(std::string("--alphabet: ") + e.what());
  }
}

SolverConfig make_solver_config(const CliConfig& cfg, const std::string& algo_name) {
  const auto algo = parse_algorithm(algo_name);
  if (!algo) throw UsageError("unknown algorithm '" + algo_name + "'");

  RegularizerSpec reg;
  switch (*algo) {
    case Algorithm::soft_impute:
    case Algorithm::apg:
      reg.kind = RegKind::nuclear;
      break;
    case Algorithm::discrete_apg:
      reg.kind = RegKind::discrete;
      reg.alphabet = Alphabet(cfg.alphabet);
      reg.xi = cfg.xi;
      break;
    case Algorithm::niapg:
      reg.kind = RegKind::lsp;
      reg.theta = cfg.theta;
      break;
    case Algorithm::discrete_niapg:
      reg.kind = RegKind::lsp;
      reg.theta = cfg.theta;
      reg.alphabet = Alphabet(cfg.alphabet);
      reg.xi = cfg.xi;
      break;
  }
  if (cfg.lambda >= 0.0) reg.lambda = cfg.lambda;

  SolverConfig sc;
  sc.algorithm = *algo;
  sc.reg = std::move(reg);
  sc.max_iter = cfg.max_iter;
  sc.rel_tol = cfg.rel_tol;
  sc.seed = cfg.seed;
  return sc;
}

std::pair<int, int> rating_bounds(const CliConfig& cfg) {
  const auto [lo, hi] = std::minmax_element(cfg.alphabet.begin(), cfg.alphabet.end());
  return {static_cast<int>(std::floor(*lo)), static_cast<int>(std::ceil(*hi))};
}

int do_solve(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto [lo, hi] = rating_bounds(cfg);
  const RatingsDataset ds = load_movielens(cfg.data, lo, hi);
  const auto [train, test] = split(ds, SplitSpec{cfg.ratio, cfg.seed});

  SolverConfig sc = make_solver_config(cfg, cfg.algo);
  IterationCallback cb;
  if (cfg.verbosity >= 1) {
    cb = [&err](const TraceRecord& r) {
      err << "iter=" << r.iter << " obj=" << r.objective << " f=" << r.train_f
          << " nmse=" << r.nmse << " rank=" << r.rank << " t=" << r.seconds << "s\n";
    };
  }
  const SolveResult res = run(sc, train, &test, cb);

  if (!cfg.output.empty()) {
    const TraceFormat fmt = cfg.format == "json" ? TraceFormat::json : TraceFormat::csv;
    export_trace(res.trace, fmt, cfg.output);
  }

  const double final_nmse = test.size() > 0
                                ? nmse(res.x, test)
                                : std::numeric_limits<double>::quiet_NaN();
  out << "nmse=" << fmt17(final_nmse) << " iters=" << res.trace.records.size() << "\n";
  return 0;
}

int do_bench(const CliConfig& cfg, std::ostream& out, std::ostream&) {
  const auto [lo, hi] = rating_bounds(cfg);
  ExperimentGrid grid;
  grid.dataset = load_movielens(cfg.data, lo, hi);
  for (const std::string& name : cfg.algos) grid.algorithms.push_back(make_solver_config(cfg, name));
  grid.observed_ratios = cfg.ratios;
  grid.seeds = cfg.seeds;

  const std::vector<ResultRow> rows = run_grid(grid, cfg.jobs);
  if (!cfg.output.empty()) {
    std::ofstream f(cfg.output);
    if (!f) throw IoError("cannot open for writing: " + cfg.output.string());
    write_results_csv(rows, f);
  } else {
    write_results_csv(rows, out);
  }
  return 0;
}

int do_synth(const CliConfig& cfg, std::ostream&, std::ostream&) {
  SyntheticSpec spec;
  spec.m = cfg.m;
  spec.n = cfg.n;
  spec.rank = cfg.rank;
  spec.alphabet = Alphabet(cfg.alphabet);
  spec.seed = cfg.seed;
  const auto [truth, ds] = synth_discrete_lowrank(spec);
  export_udata(ds, cfg.output);
  return 0;
}

}  // namespace

CliConfig parse_args(const std::vector<std::string>& args) {
  CliConfig cfg;
  CLI::App app{"Low-rank matrix completion with a discrete-alphabet regularizer"};
  app.require_subcommand(1);

  std::string config_path;
  CLI::App* solve = app.add_subcommand("solve", "Split a ratings file and run one solver");
  solve->add_option("--config", config_path, "Read flags from a key = value file");
  solve->add_option("--data", cfg.data, "Ratings file in u.data format")->required();
  solve->add_option("--algo", cfg.algo, "Solver")
      ->transform(CLI::IsMember(kAlgorithmNames))
      ->capture_default_str();
  solve->add_option("--ratio", cfg.ratio, "Observed (training) fraction of the known ratings")
      ->capture_default_str();
  solve->add_option("--seed", cfg.seed, "Split seed")->capture_default_str();
  solve->add_option("--output", cfg.output, "Write the per-iteration trace here");
  solve->add_option("--format", cfg.format, "Trace format")
      ->transform(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  add_common_solver_flags(solve, cfg);

  CLI::App* bench = app.add_subcommand("bench", "Run an algorithm x ratio x seed grid");
  bench->add_option("--config", config_path, "Read flags from a key = value file");
  bench->add_option("--data", cfg.data, "Ratings file in u.data format")->required();
  bench->add_option("--algos", cfg.algos, "Comma-separated solver list")
      ->delimiter(',')
      ->default_val(kAlgorithmNames)
      ->transform(CLI::IsMember(kAlgorithmNames));
  bench->add_option("--ratios", cfg.ratios, "Comma-separated observed ratios, each in (0,1)")
      ->delimiter(',')
      ->default_val(std::vector<double>{0.2, 0.3, 0.4, 0.5, 0.6});
  bench->add_option("--seeds", cfg.seeds, "Comma-separated split seeds")
      ->delimiter(',')
      ->default_val(std::vector<std::uint64_t>{0, 1, 2});
  bench->add_option("--jobs", cfg.jobs, "Grid cells run on this many threads")
      ->capture_default_str();
  bench->add_option("--output", cfg.output, "Write the result CSV here (default: stdout)");
  add_common_solver_flags(bench, cfg);

  CLI::App* synth = app.add_subcommand("synth", "Generate a quantized low-rank ratings file");
  synth->add_option("--config", config_path, "Read flags from a key = value file");
  synth->add_option("--m", cfg.m, "Rows (users)")->capture_default_str();
  synth->add_option("--n", cfg.n, "Columns (items)")->capture_default_str();
  synth->add_option("--rank", cfg.rank, "Rank of the pre-quantization factor product")
      ->capture_default_str();
  synth->add_option("--alphabet", cfg.alphabet, "Comma-separated admissible entry values")
      ->delimiter(',')
      ->capture_default_str();
  synth->add_option("--seed", cfg.seed, "Generator seed")->capture_default_str();
  synth->add_option("--output", cfg.output, "Output u.data file")->required();

  app.add_flag("-v,--verbose", cfg.verbosity, "Per-iteration log line on stderr");

  const std::vector<std::string> merged = merge_config_file(args);
  std::vector<const char*> argv;
  argv.reserve(merged.size() + 1);
  argv.push_back("lrmc");
  for (const std::string& a : merged) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    for (CLI::App* sub : app.get_subcommands())
      throw HelpRequested(sub->help());
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (solve->parsed()) cfg.command = CliConfig::Command::solve;
  if (bench->parsed()) cfg.command = CliConfig::Command::bench;
  if (synth->parsed()) cfg.command = CliConfig::Command::synth;

  switch (cfg.command) {
    case CliConfig::Command::solve:
      if (!(cfg.ratio > 0.0) || !(cfg.ratio <= 1.0))
        throw UsageError("--ratio must lie in (0, 1]");
      validate_common(cfg);
      break;
    case CliConfig::Command::bench:
      if (cfg.ratios.empty()) throw UsageError("--ratios must not be empty");
      for (double r : cfg.ratios)
        if (!(r > 0.0) || !(r < 1.0)) throw UsageError("--ratios entries must lie in (0, 1)");
      if (cfg.seeds.empty()) throw UsageError("--seeds must not be empty");
      if (cfg.algos.empty()) throw UsageError("--algos must not be empty");
      if (cfg.jobs < 1) throw UsageError("--jobs must be >= 1");
      validate_common(cfg);
      break;
    case CliConfig::Command::synth:
      if (cfg.m < 1 || cfg.n < 1) throw UsageError("--m and --n must be >= 1");
      if (cfg.rank < 1 || cfg.rank > std::min(cfg.m, cfg.n))
        throw UsageError("--rank must lie in [1, min(m, n)]");
      if (cfg.alphabet.empty()) throw UsageError("--alphabet must not be empty");
      try {
        Alphabet probe(cfg.alphabet);
      } catch (const Error& e) {
        throw UsageError(std::string("--alphabet: ") + e.what());
      }
      break;
  }
  return cfg;
}

int run_cli(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cfg.command) {
      case CliConfig::Command::solve: return do_solve(cfg, out, err);
      case CliConfig::Command::bench: return do_bench(cfg, out, err);
      case CliConfig::Command::synth: return do_synth(cfg, out, err);
    }
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);

  CliConfig cfg;
  try {
    cfg = parse_args(args);
  } catch (const HelpRequested& h) {
    out << h.text();
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  }
  return run_cli(cfg, out, err);
}

}  // namespace lrmc::cli
