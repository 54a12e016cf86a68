#ifndef MEMIX_CALIBRATION_HPP
#define MEMIX_CALIBRATION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "memix/context.hpp"
#include "memix/errors.hpp"
#include "memix/me_distribution.hpp"
#include "memix/mmeam.hpp"

namespace memix {
namespace calib {

// Complete multivariate loss observations: one row per claim vector.
class Dataset {
 public:
  explicit Dataset(Eigen::MatrixXd values) : values_(std::move(values)) {
    require_input(values_.rows() >= 1 && values_.cols() >= 1,
                  "Dataset: need at least one row and one column");
    for (Eigen::Index r = 0; r < values_.rows(); ++r)
      for (Eigen::Index c = 0; c < values_.cols(); ++c) {
        const double v = values_(r, c);
        require_input(std::isfinite(v) && v >= 0.0,
                      "Dataset: losses must be finite and nonnegative (row " +
                          std::to_string(r + 1) + ", column " +
                          std::to_string(c + 1) + ")");
      }
  }

  int n() const { return static_cast<int>(values_.rows()); }
  int dim() const { return static_cast<int>(values_.cols()); }
  const Eigen::MatrixXd& values() const { return values_; }

 private:
  Eigen::MatrixXd values_;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cell);
      cell.clear();
    } else {
      cell.push_back(ch);
    }
  }
  out.push_back(cell);
  return out;
}

inline double parse_cell(const std::string& cell, int row, int col) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &pos);
  } catch (const std::exception&) {
    throw InputError("csv row " + std::to_string(row) + ", column " +
                     std::to_string(col) + ": not a number");
  }
  while (pos < cell.size() &&
         (cell[pos] == ' ' || cell[pos] == '\t'))
    ++pos;
  if (pos != cell.size())
    throw InputError("csv row " + std::to_string(row) + ", column " +
                     std::to_string(col) + ": not a number");
  if (!std::isfinite(v) || v < 0.0)
    throw InputError("csv row " + std::to_string(row) + ", column " +
                     std::to_string(col) + ": negative or non-finite value");
  return v;
}

}  // namespace detail

// Comma-separated input with a mandatory header row; every data row must
// carry one numeric cell per header column.  Lines starting with '#' are
// comments (sample files echo their seed that way) and are skipped.  Row
// numbers in errors are 1-based file lines (the header is line 1).
inline Dataset ingest_csv(std::istream& in) {
  std::string line;
  int lineno = 0;
  for (;;) {
    if (!std::getline(in, line)) throw InputError("csv: empty input");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] != '#') break;
  }
  const int m = static_cast<int>(detail::split_csv_line(line).size());
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] == '#') continue;
    if (line.empty()) {
      // Only a trailing newline may leave an empty line.
      if (in.peek() != std::char_traits<char>::eof())
        throw InputError("csv row " + std::to_string(lineno) + ": empty row");
      break;
    }
    const std::vector<std::string> cells = detail::split_csv_line(line);
    if (static_cast<int>(cells.size()) != m)
      throw InputError("csv row " + std::to_string(lineno) + ": expected " +
                       std::to_string(m) + " fields, got " +
                       std::to_string(cells.size()));
    std::vector<double> row(m);
    for (int c = 0; c < m; ++c)
      row[c] = detail::parse_cell(cells[c], lineno, c + 1);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("csv: no data rows after the header");
  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), m);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < m; ++c)
      values(static_cast<Eigen::Index>(r), c) = rows[r][c];
  return Dataset(std::move(values));
}

inline Dataset ingest_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("csv: cannot open " + path);
  return ingest_csv(in);
}

// Empirical grid CDF of the per-coordinate marginal-CDF levels: counts of
// observations whose transformed coordinates all fall at or below h_j/A,
// kept as exact integers so downstream differencing stays exact.
class BernsteinWeights {
 public:
  BernsteinWeights(int order, int dim, std::vector<std::int64_t> counts,
                   std::int64_t total)
      : order_(order), dim_(dim), counts_(std::move(counts)), total_(total) {}

  int order() const { return order_; }
  int dim() const { return dim_; }
  std::int64_t total() const { return total_; }
  const std::vector<std::int64_t>& counts() const { return counts_; }

  // Count at grid index (h_1..h_M), each in {0..A}.
  std::int64_t count_at(const std::vector<int>& h) const {
    require_input(static_cast<int>(h.size()) == dim_,
                  "BernsteinWeights: index arity mismatch");
    std::size_t flat = 0;
    for (int j = 0; j < dim_; ++j) {
      require_input(h[j] >= 0 && h[j] <= order_,
                    "BernsteinWeights: index out of range");
      flat = flat * (order_ + 1) + static_cast<std::size_t>(h[j]);
    }
    return counts_[flat];
  }

  double zeta(const std::vector<int>& h) const {
    return static_cast<double>(count_at(h)) / static_cast<double>(total_);
  }

 private:
  int order_;
  int dim_;
  std::vector<std::int64_t> counts_;  // row-major over {0..A}^M, last fastest
  std::int64_t total_;
};

// Empirical mixing weights of a grid copula of the given order: each
// observation is mapped to the cell of its componentwise marginal-CDF
// levels, and the cell histogram is cumulated along every axis.
inline BernsteinWeights empirical_zeta(const Dataset& d,
                                       const std::vector<MeTriple>& marginals,
                                       int order) {
  require_input(order >= 1, "empirical_zeta: order must be >= 1");
  require_input(static_cast<int>(marginals.size()) == d.dim(),
                "empirical_zeta: need one marginal per coordinate");
  const int m = d.dim();
  const int a1 = order + 1;
  std::int64_t cells = 1;
  for (int j = 0; j < m; ++j) {
    cells *= a1;
    require_input(cells <= (std::int64_t{1} << 24),
                  "empirical_zeta: grid too large");
  }
  std::vector<std::int64_t> hist(static_cast<std::size_t>(cells), 0);
  for (int k = 0; k < d.n(); ++k) {
    std::size_t flat = 0;
    for (int j = 0; j < m; ++j) {
      const double f = 1.0 - marginals[j].sf_fast(d.values()(k, j));
      // Smallest level h with F <= h/A, clamped against rounding at 0 and 1.
      int g = static_cast<int>(std::ceil(f * order));
      g = std::clamp(g, 0, order);
      flat = flat * a1 + static_cast<std::size_t>(g);
    }
    ++hist[flat];
  }
  // Cumulative sums along each axis turn the histogram into the grid CDF.
  for (int j = m - 1; j >= 0; --j) {
    std::size_t stride = 1;
    for (int r = j + 1; r < m; ++r) stride *= a1;
    for (std::size_t base = 0; base < hist.size();
         base += stride * a1)
      for (std::size_t off = 0; off < stride; ++off)
        for (int h = 1; h < a1; ++h)
          hist[base + off + stride * h] += hist[base + off + stride * (h - 1)];
  }
  return BernsteinWeights(order, m, std::move(hist), d.n());
}

// Cell masses of the grid copula over {0..A-1}^M, stored row-major with the
// last coordinate fastest; entries are exact observation fractions.
struct BernsteinPhi {
  int order;
  int dim;
  std::vector<double> values;
};

// Inclusion-exclusion differencing of the grid CDF.  The alternating sum
// collapses to an integer cell count, so nonnegativity and a unit total are
// exact for empirical weights on strictly positive data.
inline BernsteinPhi bernstein_phi(const BernsteinWeights& w) {
  const int m = w.dim();
  const int a = w.order();
  std::int64_t cells = 1;
  for (int j = 0; j < m; ++j) cells *= a;
  BernsteinPhi phi{a, m, std::vector<double>(static_cast<std::size_t>(cells))};
  std::vector<int> h(m, 0);
  for (std::int64_t c = 0; c < cells; ++c) {
    std::int64_t acc = 0;
    std::vector<int> corner(m);
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      int ones = 0;
      for (int j = 0; j < m; ++j) {
        const int bit = (mask >> j) & 1;
        corner[j] = h[j] + bit;
        ones += bit;
      }
      const std::int64_t sign = ((m + ones) % 2 == 0) ? 1 : -1;
      acc += sign * w.count_at(corner);
    }
    if (acc < 0)
      throw NumericError("bernstein_phi: negative cell mass from an "
                         "inconsistent weight grid");
    phi.values[static_cast<std::size_t>(c)] =
        static_cast<double>(acc) / static_cast<double>(w.total());
    for (int j = m - 1; j >= 0; --j) {
      if (++h[j] < a) break;
      h[j] = 0;
    }
  }
  return phi;
}

// Joint model from fitted marginals and grid-copula cell masses: coordinate
// j draws from the A order-statistic laws of A independent copies of its
// marginal, and the cell masses become the mixing weights.
inline MmeamModel assemble_mmeam(const std::vector<MeTriple>& marginals,
                                 const BernsteinPhi& phi,
                                 const NumericContext& ctx = default_context()) {
  require_input(static_cast<int>(marginals.size()) == phi.dim,
                "assemble_mmeam: marginal count mismatch");
  require_input(phi.order >= 1, "assemble_mmeam: order must be >= 1");
  const int m = phi.dim;
  const int a = phi.order;
  std::vector<std::vector<MeTriple>> pools(m);
  for (int j = 0; j < m; ++j) {
    const std::vector<MeTriple> copies(static_cast<std::size_t>(a),
                                       marginals[j]);
    for (int h = 1; h <= a; ++h)
      pools[j].push_back(
          mixture_to_triple(order_stat_indep(copies, h, ctx), ctx));
  }
  return MmeamModel(std::move(pools),
                    WeightTensor::dense(std::vector<int>(m, a), phi.values,
                                        ctx),
                    ctx);
}

// Full pipeline: empirical weights, differencing, assembly.
inline MmeamModel calibrate(const Dataset& d,
                            const std::vector<MeTriple>& marginals, int order,
                            const NumericContext& ctx = default_context()) {
  return assemble_mmeam(marginals,
                        bernstein_phi(empirical_zeta(d, marginals, order)),
                        ctx);
}

// Convenience moment-matched Erlang marginal: shape from the squared
// coefficient of variation (rounded, floored at 1), rate from the mean.
inline MeTriple erlang_moment_fit(double mean, double variance,
                                  const NumericContext& ctx = default_context()) {
  require_input(std::isfinite(mean) && mean > 0.0,
                "erlang_moment_fit: mean must be positive");
  require_input(std::isfinite(variance) && variance > 0.0,
                "erlang_moment_fit: variance must be positive");
  const int shape =
      std::max(1, static_cast<int>(std::lround(mean * mean / variance)));
  const double rate = shape / mean;
  RowVectorXd alpha = RowVectorXd::Zero(shape);
  alpha[0] = 1.0;
  MatrixXd t = MatrixXd::Zero(shape, shape);
  for (int i = 0; i < shape; ++i) {
    t(i, i) = -rate;
    if (i + 1 < shape) t(i, i + 1) = rate;
  }
  VectorXd exit = VectorXd::Zero(shape);
  exit[shape - 1] = rate;
  return MeTriple(std::move(alpha), std::move(t), std::move(exit), ctx);
}

// Column-wise Erlang fits for every coordinate of a dataset.
inline std::vector<MeTriple> fit_marginal_erlangs(
    const Dataset& d, const NumericContext& ctx = default_context()) {
  std::vector<MeTriple> out;
  for (int j = 0; j < d.dim(); ++j) {
    const auto col = d.values().col(j);
    const double mean = col.mean();
    const double var =
        (col.array() - mean).square().sum() / std::max(1, d.n() - 1);
    out.push_back(erlang_moment_fit(mean, var, ctx));
  }
  return out;
}

}  // namespace calib
}  // namespace memix

#endif  // MEMIX_CALIBRATION_HPP
