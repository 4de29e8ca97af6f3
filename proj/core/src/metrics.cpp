#include "lrmc/metrics.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace lrmc {

namespace {

constexpr const char* kTraceHeader = "iter,objective,train_f,nmse,rank,seconds";

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, std::size_t line_no) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty())
    throw ParseError("bad numeric field '" + s + "'", line_no);
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

ResultRow run_cell(const RatingsDataset& dataset, const SolverConfig& base, double ratio,
                   std::uint64_t seed) {
  ResultRow row;
  row.algorithm = algorithm_name(base.algorithm);
  row.observed_ratio = ratio;
  row.seed = seed;
  try {
    auto [train, test] = split(dataset, SplitSpec{ratio, seed});
    SolverConfig cfg = base;
    cfg.seed = seed;
    cfg.trace_nmse = false;  // final NMSE is evaluated once below
    const SolveResult res = run(cfg, train);
    row.nmse = nmse(res.x, test);
    row.iterations = static_cast<long>(res.trace.records.size());
    row.seconds = res.trace.records.empty() ? 0.0 : res.trace.records.back().seconds;
  } catch (const SolveError& e) {
    row.ok = false;
    row.note = e.what();
    row.nmse = std::numeric_limits<double>::quiet_NaN();
    row.iterations = std::max<long>(1, static_cast<long>(e.partial_trace().records.size()));
  } catch (const Error& e) {
    row.ok = false;
    row.note = e.what();
    row.nmse = std::numeric_limits<double>::quiet_NaN();
  }
  return row;
}

}  // namespace

double nmse(const Matrix& x, const ObservedMatrix& eval_set) {
  if (x.rows() != eval_set.rows() || x.cols() != eval_set.cols())
    throw DimensionError("nmse: shape mismatch");
  if (eval_set.size() == 0) throw ParameterError("nmse: empty evaluation set");
  double num = 0.0;
  double den = 0.0;
  for (const Triplet& t : eval_set.triplets()) {
    const double d = x(t.row, t.col) - t.value;
    num += d * d;
    den += t.value * t.value;
  }
  if (den == 0.0) throw ParameterError("nmse: evaluation entries are all zero");
  return num / den;
}

void ExperimentGrid::validate() const {
  if (algorithms.empty() || observed_ratios.empty() || seeds.empty())
    throw ParameterError("experiment grid requires non-empty algorithm, ratio and seed lists");
  for (double r : observed_ratios)
    if (!(r > 0.0) || !(r < 1.0))
      throw ParameterError("grid observed ratios must lie in (0, 1)");
}

std::vector<ResultRow> run_grid(const ExperimentGrid& grid, int jobs) {
  grid.validate();
  struct Cell {
    const SolverConfig* cfg;
    double ratio;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  cells.reserve(grid.algorithms.size() * grid.observed_ratios.size() * grid.seeds.size());
  for (const SolverConfig& cfg : grid.algorithms)
    for (double ratio : grid.observed_ratios)
      for (std::uint64_t seed : grid.seeds) cells.push_back(Cell{&cfg, ratio, seed});

  std::vector<ResultRow> rows(cells.size());
  const auto work_one = [&](std::size_t i) {
    rows[i] = run_cell(grid.dataset, *cells[i].cfg, cells[i].ratio, cells[i].seed);
  };

  if (jobs <= 1 || cells.size() <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) work_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(jobs), cells.size());
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t w = 0; w < n_threads; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) work_one(i);
      });
    for (auto& th : pool) th.join();
  }
  return rows;
}

void write_results_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << "algorithm,observed_ratio,seed,nmse,iterations,seconds,status,note\n";
  for (const ResultRow& r : rows) {
    out << r.algorithm << ',' << fmt17(r.observed_ratio) << ',' << r.seed << ',' << fmt17(r.nmse)
        << ',' << r.iterations << ',' << fmt17(r.seconds) << ',' << (r.ok ? "ok" : "failed") << ','
        << csv_quote(r.note) << '\n';
  }
}

void write_trace(const ConvergenceTrace& trace, TraceFormat format, std::ostream& out) {
  if (format == TraceFormat::csv) {
    out << kTraceHeader << '\n';
    for (const TraceRecord& r : trace.records) {
      out << r.iter << ',' << fmt17(r.objective) << ',' << fmt17(r.train_f) << ','
          << fmt17(r.nmse) << ',' << r.rank << ',' << fmt17(r.seconds) << '\n';
    }
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const TraceRecord& r : trace.records) {
      arr.push_back({{"iter", r.iter},
                     {"objective", r.objective},
                     {"train_f", r.train_f},
                     {"nmse", r.nmse},
                     {"rank", r.rank},
                     {"seconds", r.seconds}});
    }
    out << arr.dump(2) << '\n';
  }
}

void export_trace(const ConvergenceTrace& trace, TraceFormat format,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  write_trace(trace, format, out);
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

ConvergenceTrace read_trace(TraceFormat format, std::istream& in) {
  ConvergenceTrace trace;
  if (format == TraceFormat::csv) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("missing trace header", 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kTraceHeader)
      throw ParseError("unexpected trace header '" + line + "'", 1);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto fields = split_csv_line(line);
      if (fields.size() != 6) throw ParseError("expected 6 comma-separated fields", line_no);
      TraceRecord r;
      r.iter = static_cast<long>(parse_double(fields[0], line_no));
      r.objective = parse_double(fields[1], line_no);
      r.train_f = parse_double(fields[2], line_no);
      r.nmse = parse_double(fields[3], line_no);
      r.rank = static_cast<Index>(parse_double(fields[4], line_no));
      r.seconds = parse_double(fields[5], line_no);
      trace.records.push_back(r);
    }
  } else {
    nlohmann::json arr;
    try {
      in >> arr;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad trace JSON: ") + e.what());
    }
    if (!arr.is_array()) throw ParseError("trace JSON must be an array");
    const auto as_double = [](const nlohmann::json& v) {
      return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
    };
    for (const auto& obj : arr) {
      TraceRecord r;
      r.iter = obj.at("iter").get<long>();
      r.objective = as_double(obj.at("objective"));
      r.train_f = as_double(obj.at("train_f"));
      r.nmse = as_double(obj.at("nmse"));
      r.rank = obj.at("rank").get<Index>();
      r.seconds = as_double(obj.at("seconds"));
      trace.records.push_back(r);
    }
  }
  return trace;
}

}  // namespace lrmc
