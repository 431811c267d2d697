#include "mixinv/matrix.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>
#include <numeric>
#include <string>

#include "mixinv/errors.hpp"

namespace mixinv {

namespace {

constexpr std::array<std::pair<GinvKind, std::string_view>, 5> kKindNames{{
    {GinvKind::Exact, "exact"},
    {GinvKind::MoorePenrose, "mp"},
    {GinvKind::UnitConsistent, "uc"},
    {GinvKind::SimilarityConsistent, "sc"},
    {GinvKind::Drazin, "drazin"},
}};

std::string shape(const Matrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

void require_shape(const Matrix& a, Index rows, Index cols, const char* name) {
  if (a.rows() != rows || a.cols() != cols) {
    throw InputError(std::string("block ") + name + " is " + shape(a) +
                     ", expected " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
}

}  // namespace

std::string_view kind_name(GinvKind kind) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<GinvKind> parse_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  for (const auto& [k, n] : kKindNames) {
    if (n == lower) return k;
  }
  return std::nullopt;
}

BlockSpec::BlockSpec(std::vector<BlockEntry> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw InputError("block spec needs at least one block");
  for (const auto& b : blocks_) {
    if (b.size < 1) {
      throw InputError("block sizes must be positive, got " +
                       std::to_string(b.size));
    }
  }
}

Index BlockSpec::dimension() const noexcept {
  Index total = 0;
  for (const auto& b : blocks_) total += b.size;
  return total;
}

std::vector<Index> BlockSpec::sizes() const {
  std::vector<Index> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back(b.size);
  return out;
}

std::vector<GinvKind> BlockSpec::kinds() const {
  std::vector<GinvKind> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back(b.kind);
  return out;
}

void BlockSpec::require_dimension(Index dim) const {
  if (blocks_.empty()) throw InputError("block spec is empty");
  if (dimension() != dim) {
    throw InputError("block sizes sum to " + std::to_string(dimension()) +
                     " but the matrix dimension is " + std::to_string(dim));
  }
}

void require_finite(const Matrix& a, std::string_view what) {
  if (!a.allFinite()) {
    throw InputError(std::string(what) + " contains NaN or infinite entries");
  }
}

void require_square(const Matrix& a, std::string_view what) {
  if (a.rows() != a.cols()) {
    throw InputError(std::string(what) + " must be square, got " + shape(a));
  }
}

Block2 split2(const Matrix& M, Index m, Index n) {
  require_square(M, "matrix");
  if (m < 1 || n < 1 || m + n != M.rows()) {
    throw InputError("split sizes (" + std::to_string(m) + ", " +
                     std::to_string(n) + ") do not partition a " + shape(M) +
                     " matrix");
  }
  return Block2{M.topLeftCorner(m, m),    M.topRightCorner(m, n),
                M.bottomLeftCorner(n, m), M.bottomRightCorner(n, n),
                m,                        n};
}

Block3 split3(const Matrix& M, Index m, Index n, Index p) {
  require_square(M, "matrix");
  if (m < 1 || n < 1 || p < 1 || m + n + p != M.rows()) {
    throw InputError("split sizes (" + std::to_string(m) + ", " +
                     std::to_string(n) + ", " + std::to_string(p) +
                     ") do not partition a " + shape(M) + " matrix");
  }
  const Index o1 = m;
  const Index o2 = m + n;
  Block3 b;
  b.R = M.block(0, 0, m, m);
  b.S = M.block(0, o1, m, n);
  b.T = M.block(0, o2, m, p);
  b.U = M.block(o1, 0, n, m);
  b.V = M.block(o1, o1, n, n);
  b.W = M.block(o1, o2, n, p);
  b.X = M.block(o2, 0, p, m);
  b.Y = M.block(o2, o1, p, n);
  b.Z = M.block(o2, o2, p, p);
  b.m = m;
  b.n = n;
  b.p = p;
  return b;
}

Matrix assemble2(const Block2& b) {
  const Index m = b.m;
  const Index n = b.n;
  if (m < 1 || n < 1) throw InputError("block sizes must be positive");
  require_shape(b.W, m, m, "W");
  require_shape(b.X, m, n, "X");
  require_shape(b.Y, n, m, "Y");
  require_shape(b.Z, n, n, "Z");
  Matrix M(m + n, m + n);
  M << b.W, b.X, b.Y, b.Z;
  return M;
}

Matrix assemble3(const Block3& b) {
  const Index m = b.m;
  const Index n = b.n;
  const Index p = b.p;
  if (m < 1 || n < 1 || p < 1) throw InputError("block sizes must be positive");
  require_shape(b.R, m, m, "R");
  require_shape(b.S, m, n, "S");
  require_shape(b.T, m, p, "T");
  require_shape(b.U, n, m, "U");
  require_shape(b.V, n, n, "V");
  require_shape(b.W, n, p, "W");
  require_shape(b.X, p, m, "X");
  require_shape(b.Y, p, n, "Y");
  require_shape(b.Z, p, p, "Z");
  Matrix M(m + n + p, m + n + p);
  M << b.R, b.S, b.T, b.U, b.V, b.W, b.X, b.Y, b.Z;
  return M;
}

Matrix block_diag(std::span<const Matrix> blocks) {
  Index rows = 0;
  Index cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  Matrix out = Matrix::Zero(rows, cols);
  Index r = 0;
  Index c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

double rel_err(const Matrix& A, const Matrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) {
    throw InputError("rel_err shape mismatch: " + shape(A) + " vs " + shape(B));
  }
  return (A - B).norm() / std::max(1.0, B.norm());
}

Index numerical_rank(const Matrix& a, double rel_cutoff) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& s = svd.singularValues();
  const double cutoff = rel_cutoff * s(0);
  return static_cast<Index>((s.array() > cutoff).count());
}

double condition_number(const Matrix& a) {
  if (a.size() == 0) return std::numeric_limits<double>::infinity();
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

}  // namespace mixinv
