#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "lrmc/types.hpp"

namespace lrmc {

struct RatingsDataset {
  Index n_users = 0;
  Index n_items = 0;
  std::vector<Triplet> ratings;  // 0-based (user, item, rating), input order preserved
  std::string source;
};

struct SplitSpec {
  double observed_ratio = 0.2;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticSpec {
  Index m = 0;
  Index n = 0;
  Index rank = 1;
  Alphabet alphabet = Alphabet::integer_range(1, 5);
  std::uint64_t seed = 0;

  void validate() const;
};

/// Read a u.data-format ratings file: one record per line with four
/// tab-separated integer fields (user id, item id, rating, timestamp),
/// ids 1-based. Timestamps are discarded, ids converted to 0-based,
/// LF and CRLF both accepted. Ratings outside [min_rating, max_rating]
/// and duplicate (user, item) pairs are rejected.
RatingsDataset load_movielens(const std::filesystem::path& path, int min_rating = 1,
                              int max_rating = 5);

/// Stream variant of load_movielens; `source_name` is recorded and used in
/// error messages.
RatingsDataset read_udata(std::istream& in, const std::string& source_name, int min_rating = 1,
                          int max_rating = 5);

/// Seeded uniform split of the known ratings: floor(observed_ratio * N)
/// of them become the observed (training) matrix, the rest the held-out
/// evaluation matrix. The two index sets are disjoint and cover the
/// dataset's support.
std::pair<ObservedMatrix, ObservedMatrix> split(const RatingsDataset& ds, const SplitSpec& spec);

/// The factor pair (A, B) behind synth_discrete_lowrank: independent
/// standard normal entries, A is m-by-rank and B is n-by-rank.
std::pair<Matrix, Matrix> synth_factors(const SyntheticSpec& spec);

/// Generate a quantized low-rank ground truth: draw A, B, rescale A*B^T
/// affinely onto the alphabet's range, and round every entry to the
/// nearest alphabet value (ties toward the larger value). Returns the
/// quantized matrix together with its full rating list.
std::pair<Matrix, RatingsDataset> synth_discrete_lowrank(const SyntheticSpec& spec);

/// Write a dataset in u.data format (timestamp column written as 0).
/// Ratings must be integer-valued.
void export_udata(const RatingsDataset& ds, std::ostream& out);
void export_udata(const RatingsDataset& ds, const std::filesystem::path& path);

}  // namespace lrmc
