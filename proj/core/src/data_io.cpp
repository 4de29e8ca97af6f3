#include "lrmc/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

#include "rng.hpp"

namespace lrmc {

namespace {

long long parse_int_field(std::string_view field, std::size_t line_no, const char* what) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw ParseError(std::string(what) + " is not an integer: '" + std::string(field) + "'",
                     line_no);
  return value;
}

}  // namespace

void SplitSpec::validate() const {
  if (!(observed_ratio > 0.0) || !(observed_ratio <= 1.0))
    throw ParameterError("observed_ratio must lie in (0, 1]");
}

void SyntheticSpec::validate() const {
  if (m < 1 || n < 1) throw ParameterError("synthetic shape must be at least 1x1");
  if (rank < 1 || rank > std::min(m, n))
    throw ParameterError("synthetic rank out of range [1, min(m, n)]");
}

RatingsDataset load_movielens(const std::filesystem::path& path, int min_rating, int max_rating) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open ratings file: " + path.string());
  return read_udata(in, path.string(), min_rating, max_rating);
}

RatingsDataset read_udata(std::istream& in, const std::string& source_name, int min_rating,
                          int max_rating) {
  RatingsDataset ds;
  ds.source = source_name;
  std::unordered_set<std::uint64_t> seen;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::string_view rest(line);
    std::string_view fields[4];
    for (int f = 0; f < 4; ++f) {
      const std::size_t tab = rest.find('\t');
      if (f < 3) {
        if (tab == std::string_view::npos)
          throw ParseError("expected 4 tab-separated fields", line_no);
        fields[f] = rest.substr(0, tab);
        rest.remove_prefix(tab + 1);
      } else {
        if (tab != std::string_view::npos)
          throw ParseError("expected 4 tab-separated fields", line_no);
        fields[f] = rest;
      }
    }

    const long long user = parse_int_field(fields[0], line_no, "user id");
    const long long item = parse_int_field(fields[1], line_no, "item id");
    const long long rating = parse_int_field(fields[2], line_no, "rating");
    parse_int_field(fields[3], line_no, "timestamp");  // validated, then discarded

    if (user < 1 || item < 1)
      throw DataError("line " + std::to_string(line_no) + ": ids must be 1-based positive");
    if (rating < min_rating || rating > max_rating)
      throw DataError("line " + std::to_string(line_no) + ": rating " + std::to_string(rating) +
                      " outside [" + std::to_string(min_rating) + ", " +
                      std::to_string(max_rating) + "]");

    const std::uint64_t key =
        (static_cast<std::uint64_t>(user) << 32) | static_cast<std::uint64_t>(item);
    if (!seen.insert(key).second)
      throw DataError("line " + std::to_string(line_no) + ": duplicate (user, item) pair (" +
                      std::to_string(user) + ", " + std::to_string(item) + ")");

    ds.ratings.push_back(Triplet{static_cast<Index>(user - 1), static_cast<Index>(item - 1),
                                 static_cast<double>(rating)});
    ds.n_users = std::max(ds.n_users, static_cast<Index>(user));
    ds.n_items = std::max(ds.n_items, static_cast<Index>(item));
  }
  return ds;
}

std::pair<ObservedMatrix, ObservedMatrix> split(const RatingsDataset& ds, const SplitSpec& spec) {
  spec.validate();
  const std::size_t n = ds.ratings.size();
  // +1e-9 absorbs representation dust in ratio * n (e.g. 0.3 * 10) so the
  // floor is taken of the intended rational value.
  const auto n_train =
      std::min(n, static_cast<std::size_t>(std::floor(spec.observed_ratio * static_cast<double>(n) + 1e-9)));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 gen(spec.seed);
  for (std::size_t i = 0; i < n_train; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(detail::bounded(gen, n - i));
    std::swap(order[i], order[j]);
  }

  std::vector<Triplet> train, test;
  train.reserve(n_train);
  test.reserve(n - n_train);
  for (std::size_t k = 0; k < n; ++k)
    (k < n_train ? train : test).push_back(ds.ratings[order[k]]);

  return {ObservedMatrix(ds.n_users, ds.n_items, std::move(train)),
          ObservedMatrix(ds.n_users, ds.n_items, std::move(test))};
}

std::pair<Matrix, Matrix> synth_factors(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 gen(spec.seed);
  Matrix a(spec.m, spec.rank);
  for (Index j = 0; j < spec.rank; ++j)
    for (Index i = 0; i < spec.m; ++i) a(i, j) = detail::standard_normal(gen);
  Matrix b(spec.n, spec.rank);
  for (Index j = 0; j < spec.rank; ++j)
    for (Index i = 0; i < spec.n; ++i) b(i, j) = detail::standard_normal(gen);
  return {std::move(a), std::move(b)};
}

std::pair<Matrix, RatingsDataset> synth_discrete_lowrank(const SyntheticSpec& spec) {
  const auto [a, b] = synth_factors(spec);
  Matrix truth = a * b.transpose();

  const double lo = truth.minCoeff();
  const double hi = truth.maxCoeff();
  const double a1 = spec.alphabet.min();
  const double ak = spec.alphabet.max();
  if (hi > lo) {
    const double scale = (ak - a1) / (hi - lo);
    truth = ((truth.array() - lo) * scale + a1).matrix();
  } else {
    truth.setConstant(a1);
  }
  for (Index j = 0; j < truth.cols(); ++j)
    for (Index i = 0; i < truth.rows(); ++i) truth(i, j) = spec.alphabet.quantize(truth(i, j));

  RatingsDataset ds;
  ds.n_users = spec.m;
  ds.n_items = spec.n;
  ds.source = "synthetic:seed=" + std::to_string(spec.seed);
  ds.ratings.reserve(static_cast<std::size_t>(spec.m) * static_cast<std::size_t>(spec.n));
  for (Index i = 0; i < spec.m; ++i)
    for (Index j = 0; j < spec.n; ++j) ds.ratings.push_back(Triplet{i, j, truth(i, j)});

  return {std::move(truth), std::move(ds)};
}

void export_udata(const RatingsDataset& ds, std::ostream& out) {
  for (const Triplet& t : ds.ratings) {
    const double r = t.value;
    if (!(std::nearbyint(r) == r))
      throw DataError("u.data export requires integer ratings, got " + std::to_string(r));
    out << (t.row + 1) << '\t' << (t.col + 1) << '\t' << static_cast<long long>(r) << "\t0\n";
  }
}

void export_udata(const RatingsDataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  export_udata(ds, out);
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace lrmc
