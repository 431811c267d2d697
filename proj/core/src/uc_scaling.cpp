#include <cmath>
#include <vector>

#include "mixinv/errors.hpp"
#include "mixinv/kernels.hpp"

namespace mixinv {

namespace {

struct LogSupport {
  Index rows = 0;
  Index cols = 0;
  // Nonzero entries as (row, col, log|m|), grouped by row.
  std::vector<Index> row_of, col_of;
  std::vector<double> log_mag;
  std::vector<Index> row_count, col_count;
};

LogSupport log_support(const Matrix& M) {
  LogSupport s;
  s.rows = M.rows();
  s.cols = M.cols();
  s.row_count.assign(static_cast<std::size_t>(s.rows), 0);
  s.col_count.assign(static_cast<std::size_t>(s.cols), 0);
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      if (M(i, j) == 0.0) continue;
      s.row_of.push_back(i);
      s.col_of.push_back(j);
      s.log_mag.push_back(std::log(std::abs(M(i, j))));
      ++s.row_count[static_cast<std::size_t>(i)];
      ++s.col_count[static_cast<std::size_t>(j)];
    }
  }
  return s;
}

// Mean of log|d_i m_ij e_j| over the nonzeros of each row and column.
void line_means(const LogSupport& s, const Vector& d, const Vector& e,
                Vector& row_mean, Vector& col_mean) {
  row_mean.setZero(s.rows);
  col_mean.setZero(s.cols);
  for (std::size_t k = 0; k < s.log_mag.size(); ++k) {
    const double v = s.log_mag[k] + d(s.row_of[k]) + e(s.col_of[k]);
    row_mean(s.row_of[k]) += v;
    col_mean(s.col_of[k]) += v;
  }
  for (Index i = 0; i < s.rows; ++i) {
    if (const auto c = s.row_count[static_cast<std::size_t>(i)]) row_mean(i) /= static_cast<double>(c);
  }
  for (Index j = 0; j < s.cols; ++j) {
    if (const auto c = s.col_count[static_cast<std::size_t>(j)]) col_mean(j) /= static_cast<double>(c);
  }
}

double residual_of(const LogSupport& s, const Vector& d, const Vector& e) {
  Vector rm, cm;
  line_means(s, d, e, rm, cm);
  const double r = rm.size() ? rm.cwiseAbs().maxCoeff() : 0.0;
  const double c = cm.size() ? cm.cwiseAbs().maxCoeff() : 0.0;
  return std::max(r, c);
}

// Connected components of the bipartite row/column support graph. Rows get
// ids [0, rows), columns [rows, rows + cols). Isolated lines get -1.
std::vector<int> components(const LogSupport& s) {
  const Index n = s.rows + s.cols;
  std::vector<int> parent(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = static_cast<int>(i);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (std::size_t k = 0; k < s.log_mag.size(); ++k) {
    const int a = find(static_cast<int>(s.row_of[k]));
    const int b = find(static_cast<int>(s.rows + s.col_of[k]));
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  for (Index i = 0; i < n; ++i) {
    const bool active = i < s.rows ? s.row_count[static_cast<std::size_t>(i)] > 0
                                   : s.col_count[static_cast<std::size_t>(i - s.rows)] > 0;
    if (active) comp[static_cast<std::size_t>(i)] = find(static_cast<int>(i));
  }
  return comp;
}

}  // namespace

ScalingDecomposition uc_scale(const Matrix& M, double tol, std::size_t max_sweeps) {
  require_finite(M, "uc_scale argument");
  const LogSupport s = log_support(M);
  Vector d = Vector::Zero(s.rows);  // log of the left scale
  Vector e = Vector::Zero(s.cols);  // log of the right scale

  std::size_t sweeps = 0;
  double residual = residual_of(s, d, e);
  Vector rm, cm;
  while (residual > tol) {
    if (sweeps == max_sweeps) throw ScalingError(residual, sweeps);
    line_means(s, d, e, rm, cm);
    d -= rm;
    line_means(s, d, e, rm, cm);
    e -= cm;
    ++sweeps;
    residual = residual_of(s, d, e);
  }

  // Gauge: within each component shift d up and e down by the same amount
  // so the two sets of log-scales have equal means.
  const auto comp = components(s);
  const Index lines = s.rows + s.cols;
  std::vector<double> sum_d(static_cast<std::size_t>(lines), 0.0), sum_e(static_cast<std::size_t>(lines), 0.0);
  std::vector<int> cnt_d(static_cast<std::size_t>(lines), 0), cnt_e(static_cast<std::size_t>(lines), 0);
  for (Index i = 0; i < s.rows; ++i) {
    const int c = comp[static_cast<std::size_t>(i)];
    if (c < 0) continue;
    sum_d[static_cast<std::size_t>(c)] += d(i);
    ++cnt_d[static_cast<std::size_t>(c)];
  }
  for (Index j = 0; j < s.cols; ++j) {
    const int c = comp[static_cast<std::size_t>(s.rows + j)];
    if (c < 0) continue;
    sum_e[static_cast<std::size_t>(c)] += e(j);
    ++cnt_e[static_cast<std::size_t>(c)];
  }
  auto shift = [&](int c) {
    const auto k = static_cast<std::size_t>(c);
    return 0.5 * (sum_e[k] / cnt_e[k] - sum_d[k] / cnt_d[k]);
  };
  for (Index i = 0; i < s.rows; ++i) {
    const int c = comp[static_cast<std::size_t>(i)];
    d(i) = c < 0 ? 0.0 : d(i) + shift(c);
  }
  for (Index j = 0; j < s.cols; ++j) {
    const int c = comp[static_cast<std::size_t>(s.rows + j)];
    e(j) = c < 0 ? 0.0 : e(j) - shift(c);
  }

  ScalingDecomposition out;
  out.D = d.array().exp();
  out.E = e.array().exp();
  out.scaled = out.D.asDiagonal() * M * out.E.asDiagonal();
  out.sweeps = sweeps;
  out.residual = residual;
  return out;
}

Matrix uc_inverse(const Matrix& M) {
  const ScalingDecomposition s = uc_scale(M);
  return s.E.asDiagonal() * mp_inverse(s.scaled) * s.D.asDiagonal();
}

}  // namespace mixinv
