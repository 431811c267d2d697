#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mixinv/matrix.hpp"

namespace mixinv {

/// Seeded generator with platform-independent uniform and normal draws.
/// Only the raw std::mt19937_64 stream is used; the distribution adaptors of
/// the standard library differ between implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer on [lo, hi].
  Index integer(Index lo, Index hi);
  /// Standard normal (Box-Muller).
  double normal();

  Matrix gaussian(Index rows, Index cols);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Haar-like orthogonal matrix: QR of a Gaussian matrix with the signs of
/// diag(R) folded into Q so the result is unique for a given draw.
Matrix random_orthogonal(Rng& rng, Index n);

/// U * diag(sigma) * V^T with random orthogonal U, V and `rank` nonzero
/// singular values spaced log-uniformly from 1 down to 10^-log10_cond.
/// Throws InputError if rank > dim.
Matrix gen_matrix(std::uint64_t seed, Index dim, Index rank, double log10_cond);

/// Nonsingular matrix whose every contiguous group of blocks, and every
/// Schur complement formed inside such a group, has condition <= max_cond.
/// Built as a well-conditioned block diagonal plus a small dense coupling and
/// redrawn deterministically until the bound holds.
Matrix gen_block_well_conditioned(std::uint64_t seed,
                                  std::span<const Index> sizes,
                                  double max_cond = 1e3);

/// Rank dim - deficiency matrix (nonzero spectrum as in gen_matrix) whose
/// proper block groups and the Schur complements inside them have condition
/// <= max_cond, and whose complements against the whole matrix each show a
/// clean gap: `deficiency` singular values at round-off level, the rest
/// within max_cond of the largest. Every block must exceed `deficiency`.
Matrix gen_block_rank_deficient(std::uint64_t seed, std::span<const Index> sizes,
                                Index deficiency = 2, double log10_cond = 2.0,
                                double max_cond = 1e3);

/// Per-block transform family.
enum class TransformClass {
  Orthogonal,  ///< independent Q_left, Q_right
  Diagonal,    ///< independent positive D_left, D_right
  Similarity,  ///< tied pair: left = S, right = S^-1
  General,     ///< independent nonsingular left and right factors
};

/// The transform class under which `kind` is consistent.
TransformClass consistency_class(GinvKind kind) noexcept;

struct BlockTransform {
  TransformClass cls = TransformClass::Orthogonal;
  Matrix left, left_inv;
  Matrix right, right_inv;
};

/// Block-diagonal left/right transforms G_l, G_r and their inverses.
struct TransformSet {
  std::vector<BlockTransform> blocks;

  Matrix left() const;
  Matrix left_inv() const;
  Matrix right() const;
  Matrix right_inv() const;
};

/// Transforms matching each block's consistency class: orthogonal factors
/// for MP, positive diagonals log-uniform in [1e-3, 1e3] for UC, a tied
/// similarity pair with condition <= 100 for SC and Drazin, independent
/// nonsingular factors for Exact.
TransformSet gen_transforms(std::uint64_t seed, const BlockSpec& spec);

/// Same generator, but with the transform class chosen per block directly.
TransformSet gen_transforms(std::uint64_t seed, std::span<const Index> sizes,
                            std::span<const TransformClass> classes);

}  // namespace mixinv
