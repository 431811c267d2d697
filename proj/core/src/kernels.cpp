#include <algorithm>
#include <cmath>

#include "mixinv/errors.hpp"
#include "mixinv/kernels.hpp"

namespace mixinv {

namespace {

constexpr double kDrazinRankCutoff = 1e-10;

Matrix power(const Matrix& M, Index k) {
  Matrix out = Matrix::Identity(M.rows(), M.cols());
  for (Index i = 0; i < k; ++i) out = out * M;
  return out;
}

// Rank of M^k judged against ||M||_2^k, so round-off in a power that should
// vanish is not mistaken for rank.
Index power_rank(const Matrix& Mk, double scale) {
  if (Mk.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(Mk);
  const Vector& s = svd.singularValues();
  const double cutoff = kDrazinRankCutoff * std::max(s(0), scale);
  return static_cast<Index>((s.array() > cutoff).count());
}

}  // namespace

Index drazin_index(const Matrix& M) {
  require_square(M, "drazin argument");
  require_finite(M, "drazin argument");
  const Index n = M.rows();
  Eigen::JacobiSVD<Matrix> svd(M);
  const double norm2 = n > 0 ? svd.singularValues()(0) : 0.0;

  Matrix Mk = Matrix::Identity(n, n);
  Index rank_k = n;
  for (Index k = 0; k <= n; ++k) {
    const Matrix next = Mk * M;
    const Index rank_next = power_rank(next, std::pow(norm2, static_cast<double>(k + 1)));
    if (rank_next == rank_k) return k;
    Mk = next;
    rank_k = rank_next;
  }
  return n;
}

Matrix drazin_inverse(const Matrix& M) {
  const Index k = drazin_index(M);
  const Matrix Mk = power(M, k);
  return Mk * mp_inverse(power(M, 2 * k + 1)) * Mk;
}

double PenroseResiduals::max() const noexcept {
  return std::max({r1, r2, r3, r4});
}

PenroseResiduals penrose_residuals(const Matrix& M, const Matrix& G) {
  if (G.rows() != M.cols() || G.cols() != M.rows()) {
    throw InputError("penrose_residuals: G must have the transposed shape of M");
  }
  const Matrix MG = M * G;
  const Matrix GM = G * M;
  PenroseResiduals r;
  r.r1 = rel_err(MG * M, M);
  r.r2 = rel_err(GM * G, G);
  r.r3 = rel_err(MG.transpose(), MG);
  r.r4 = rel_err(GM.transpose(), GM);
  return r;
}

Matrix apply_kind(GinvKind kind, const Matrix& M) {
  switch (kind) {
    case GinvKind::Exact: {
      require_square(M, "exact inverse argument");
      require_finite(M, "exact inverse argument");
      const double cond = condition_number(M);
      if (!(cond <= kExactConditionLimit)) throw SingularityError(cond);
      return M.partialPivLu().inverse();
    }
    case GinvKind::MoorePenrose:
      return mp_inverse(M);
    case GinvKind::UnitConsistent:
      return uc_inverse(M);
    case GinvKind::SimilarityConsistent:
      return sc_inverse(M);
    case GinvKind::Drazin:
      return drazin_inverse(M);
  }
  throw InputError("unknown generalized inverse kind");
}

}  // namespace mixinv
