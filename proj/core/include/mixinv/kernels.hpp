#pragma once

#include <cstddef>
#include <vector>

#include "mixinv/matrix.hpp"

namespace mixinv {

/// Moore-Penrose pseudoinverse via SVD. Singular values at or below
/// rtol * sigma_max * max(rows, cols) are treated as zero. The zero matrix
/// maps to the zero matrix of transposed shape.
Matrix mp_inverse(const Matrix& M, double rtol = 1e-12);

/// Result of diagonal balancing: D * M * E == scaled.
struct ScalingDecomposition {
  Vector D;  ///< left scale, strictly positive
  Vector E;  ///< right scale, strictly positive
  Matrix scaled;
  std::size_t sweeps = 0;
  /// Largest |mean log-magnitude| over rows and columns with nonzeros.
  double residual = 0.0;
};

/// Balances M so every row and column with nonzeros has unit geometric mean
/// of nonzero magnitudes. Works in the log domain on nonzero entries, one
/// connected component of the row/column support graph at a time; within a
/// component the left and right scales are shifted so their geometric means
/// agree. Zero rows and columns get unit scale. Throws ScalingError if the
/// residual is still above `tol` after `max_sweeps` sweeps.
ScalingDecomposition uc_scale(const Matrix& M, double tol = 1e-13,
                              std::size_t max_sweeps = 1000);

/// Unit-consistent generalized inverse E * mp_inverse(D M E) * D.
Matrix uc_inverse(const Matrix& M);

/// M = F * C * F_inv with C block diagonal in companion blocks.
struct FcfDecomposition {
  Matrix F;
  Matrix F_inv;
  Matrix C;
  std::vector<Index> degrees;
};

/// Frobenius (rational) canonical form by Krylov deflation.
///
/// Each step picks a cyclic vector of maximal Krylov degree d from the
/// candidates e_1, ..., e_r, the normalized all-ones vector and a few fixed
/// pseudo-random vectors (lowest index wins ties), records the companion
/// block of its dependence relation, and deflates onto an invariant
/// complement cut out by a matching left Krylov sequence. Blocks therefore
/// come out with the minimal polynomial first. Companion blocks carry ones
/// on the subdiagonal and their coefficients in the last column.
///
/// A chain is considered dependent when the orthogonalized next vector is
/// below dep_tol * ||M||_F. Throws DecompositionError if F is too badly
/// conditioned (estimate above 1e12) or the reconstruction is off by more
/// than 1e-8.
FcfDecomposition fcf(const Matrix& M, double dep_tol = 1e-10);

/// Similarity-consistent inverse F * mp_inverse(C) * F_inv.
Matrix sc_inverse(const Matrix& M);

/// Smallest k with rank(M^k) == rank(M^(k+1)).
Index drazin_index(const Matrix& M);

/// Drazin inverse M^k * mp_inverse(M^(2k+1)) * M^k with k the index.
Matrix drazin_inverse(const Matrix& M);

/// The four Penrose conditions, each as a relative Frobenius residual.
struct PenroseResiduals {
  double r1 = 0.0;  ///< M G M  vs M
  double r2 = 0.0;  ///< G M G  vs G
  double r3 = 0.0;  ///< (M G)^T vs M G
  double r4 = 0.0;  ///< (G M)^T vs G M

  double max() const noexcept;
};

PenroseResiduals penrose_residuals(const Matrix& M, const Matrix& G);

/// Condition number above which Exact refuses to invert.
inline constexpr double kExactConditionLimit = 1e12;

/// Dispatches to the kernel for `kind`. Exact throws SingularityError when
/// the condition estimate exceeds kExactConditionLimit.
Matrix apply_kind(GinvKind kind, const Matrix& M);

}  // namespace mixinv
