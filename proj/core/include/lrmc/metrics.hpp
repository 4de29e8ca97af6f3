#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lrmc/data_io.hpp"
#include "lrmc/solvers.hpp"
#include "lrmc/types.hpp"

namespace lrmc {

/// Normalized mean squared error over a held-out set:
/// sum of (X_ij - o_ij)^2 over the evaluation entries, divided by the sum
/// of o_ij^2 over the same entries.
double nmse(const Matrix& x, const ObservedMatrix& eval_set);

struct ExperimentGrid {
  std::vector<SolverConfig> algorithms;
  std::vector<double> observed_ratios;  // each in (0, 1)
  std::vector<std::uint64_t> seeds;
  RatingsDataset dataset;

  void validate() const;
};

struct ResultRow {
  std::string algorithm;
  double observed_ratio = 0.0;
  std::uint64_t seed = 0;
  double nmse = 0.0;  // NaN for failed cells
  long iterations = 1;
  double seconds = 0.0;
  bool ok = true;
  std::string note;
};

/// Execute every (algorithm, ratio, seed) cell: split, solve on the train
/// half, evaluate NMSE on the held-out half. Cells are independent and may
/// run on `jobs` threads; rows always come back in the canonical
/// algorithm-major, then ratio, then seed order. A failing cell yields a
/// sentinel row and the grid continues.
std::vector<ResultRow> run_grid(const ExperimentGrid& grid, int jobs = 1);

void write_results_csv(const std::vector<ResultRow>& rows, std::ostream& out);

enum class TraceFormat { csv, json };

/// Serialize one record per iteration. The CSV header is fixed:
/// iter,objective,train_f,nmse,rank,seconds. JSON is an array of objects
/// with the same keys. Floating-point values are printed with 17
/// significant digits so parsing them back is exact.
void write_trace(const ConvergenceTrace& trace, TraceFormat format, std::ostream& out);
void export_trace(const ConvergenceTrace& trace, TraceFormat format,
                  const std::filesystem::path& path);
ConvergenceTrace read_trace(TraceFormat format, std::istream& in);

}  // namespace lrmc
