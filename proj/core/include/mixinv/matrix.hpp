#pragma once

#include <Eigen/Dense>

#include <span>
#include <string_view>
#include <vector>

#include "mixinv/kind.hpp"

namespace mixinv {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Two-way partition of a square matrix:
///
///     [ W  X ]  } m
///     [ Y  Z ]  } n
struct Block2 {
  Matrix W, X, Y, Z;
  Index m = 0;
  Index n = 0;
};

/// Three-way partition of a square matrix:
///
///     [ R  S  T ]  } m
///     [ U  V  W ]  } n
///     [ X  Y  Z ]  } p
struct Block3 {
  Matrix R, S, T, U, V, W, X, Y, Z;
  Index m = 0;
  Index n = 0;
  Index p = 0;
};

struct BlockEntry {
  Index size = 0;
  GinvKind kind = GinvKind::MoorePenrose;

  friend bool operator==(const BlockEntry&, const BlockEntry&) = default;
};

/// Ordered block sizes with the inverse kind each block requires.
class BlockSpec {
 public:
  BlockSpec() = default;
  /// Throws InputError on an empty list or a non-positive size.
  explicit BlockSpec(std::vector<BlockEntry> blocks);

  const std::vector<BlockEntry>& blocks() const noexcept { return blocks_; }
  std::size_t count() const noexcept { return blocks_.size(); }
  const BlockEntry& operator[](std::size_t i) const { return blocks_[i]; }
  Index dimension() const noexcept;

  std::vector<Index> sizes() const;
  std::vector<GinvKind> kinds() const;

  /// Throws InputError unless the sizes sum to `dim`.
  void require_dimension(Index dim) const;

  friend bool operator==(const BlockSpec&, const BlockSpec&) = default;

 private:
  std::vector<BlockEntry> blocks_;
};

/// Throws InputError if any entry is NaN or infinite.
void require_finite(const Matrix& a, std::string_view what);

/// Throws InputError if `a` is not square.
void require_square(const Matrix& a, std::string_view what);

Block2 split2(const Matrix& M, Index m, Index n);
Block3 split3(const Matrix& M, Index m, Index n, Index p);
Matrix assemble2(const Block2& b);
Matrix assemble3(const Block3& b);

/// Block-diagonal matrix from square or rectangular pieces.
Matrix block_diag(std::span<const Matrix> blocks);

/// ||A - B||_F / max(1, ||B||_F).
double rel_err(const Matrix& A, const Matrix& B);

/// Number of singular values above `rel_cutoff * sigma_max`.
Index numerical_rank(const Matrix& a, double rel_cutoff);

/// sigma_max / sigma_min; infinity for singular or empty input.
double condition_number(const Matrix& a);

}  // namespace mixinv
