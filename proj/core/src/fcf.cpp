#include <cmath>
#include <limits>
#include <string>

#include "mixinv/errors.hpp"
#include "mixinv/kernels.hpp"
#include "mixinv/random.hpp"

namespace mixinv {

namespace {

constexpr int kRandomCandidates = 4;
constexpr std::uint64_t kCandidateSeed = 0x9e3779b97f4a7c15ULL;
constexpr double kConditionLimit = 1e12;
constexpr double kReconstructionTol = 1e-8;

// Starting vectors in the order they are tried: e_1 .. e_r, the normalized
// all-ones vector, then fixed pseudo-random unit vectors.
std::vector<Vector> candidates(Index r) {
  std::vector<Vector> out;
  for (Index i = 0; i < r; ++i) out.push_back(Vector::Unit(r, i));
  out.push_back(Vector::Ones(r) / std::sqrt(static_cast<double>(r)));
  Rng rng(kCandidateSeed);
  for (int k = 0; k < kRandomCandidates; ++k) {
    Vector g = rng.gaussian(r, 1);
    out.push_back(g / g.norm());
  }
  return out;
}

// Dimension of the Krylov space of v under A, measured with a twice
// orthogonalized Arnoldi sweep.
Index krylov_degree(const Matrix& A, const Vector& v, double breakdown) {
  const Index r = A.rows();
  Matrix Q(r, r);
  Q.col(0) = v / v.norm();
  for (Index k = 1; k < r; ++k) {
    Vector w = A * Q.col(k - 1);
    for (int pass = 0; pass < 2; ++pass) {
      w -= Q.leftCols(k) * (Q.leftCols(k).transpose() * w);
    }
    const double h = w.norm();
    if (h <= breakdown) return k;
    Q.col(k) = w / h;
  }
  return r;
}

Matrix krylov_chain(const Matrix& A, const Vector& v, Index d) {
  Matrix K(A.rows(), d);
  K.col(0) = v;
  for (Index i = 1; i < d; ++i) K.col(i) = A * K.col(i - 1);
  return K;
}

Matrix orthonormal_basis(const Matrix& cols) {
  Eigen::HouseholderQR<Matrix> qr(cols);
  return qr.householderQ() * Matrix::Identity(cols.rows(), cols.cols());
}

double smallest_singular_value(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

Matrix companion(const Vector& coeffs) {
  const Index d = coeffs.size();
  Matrix C = Matrix::Zero(d, d);
  for (Index i = 1; i < d; ++i) C(i, i - 1) = 1.0;
  C.col(d - 1) = coeffs;
  return C;
}

// Columns are only defined up to sign; make the largest entry positive.
void canonicalize_signs(Matrix& N) {
  for (Index j = 0; j < N.cols(); ++j) {
    Index arg = 0;
    N.col(j).cwiseAbs().maxCoeff(&arg);
    if (N(arg, j) < 0.0) N.col(j) = -N.col(j);
  }
}

}  // namespace

FcfDecomposition fcf(const Matrix& M, double dep_tol) {
  require_square(M, "fcf argument");
  require_finite(M, "fcf argument");
  const Index n = M.rows();
  if (n == 0) throw InputError("fcf argument is empty");
  const double breakdown = dep_tol * M.norm();

  FcfDecomposition out;
  out.F.resize(n, n);
  out.C = Matrix::Zero(n, n);

  Matrix A = M;                           // M restricted to the remaining space
  Matrix basis = Matrix::Identity(n, n);  // that space in original coordinates
  Index filled = 0;
  while (filled < n) {
    const Index r = A.rows();
    const auto starts = candidates(r);

    // Cyclic vector: maximal Krylov degree, best-conditioned chain, lowest
    // index on ties.
    Index degree = 0;
    Index best = -1;
    double best_cond = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < starts.size(); ++c) {
      const Index d = krylov_degree(A, starts[c], breakdown);
      if (d < degree) continue;
      const double cond = condition_number(krylov_chain(A, starts[c], d));
      if (d > degree || cond < best_cond) {
        degree = d;
        best = static_cast<Index>(c);
        best_cond = cond;
      }
    }
    const Vector& v = starts[static_cast<std::size_t>(best)];
    const Matrix K = krylov_chain(A, v, degree);
    const Vector next = A * K.col(degree - 1);
    const Vector coeffs = K.colPivHouseholderQr().solve(next);

    out.F.middleCols(filled, degree) = basis * K;
    out.C.block(filled, filled, degree, degree) = companion(coeffs);
    out.degrees.push_back(degree);
    filled += degree;
    if (degree == r) break;

    // Invariant complement: the null space of u, uA, ..., uA^(d-1) for the
    // left start u whose row space pairs best with the chain.
    const Matrix K_orth = orthonormal_basis(K);
    Matrix L_best;
    double best_pairing = -1.0;
    for (const auto& u : starts) {
      Matrix L(degree, r);
      L.row(0) = u.transpose();
      for (Index i = 1; i < degree; ++i) L.row(i) = L.row(i - 1) * A;
      const double pairing =
          smallest_singular_value(orthonormal_basis(L.transpose()).transpose() * K_orth);
      if (pairing > best_pairing) {
        best_pairing = pairing;
        L_best = std::move(L);
      }
    }
    Eigen::HouseholderQR<Matrix> qr(L_best.transpose());
    Matrix full_q = qr.householderQ() * Matrix::Identity(r, r);
    Matrix N = full_q.rightCols(r - degree);
    canonicalize_signs(N);
    A = N.transpose() * A * N;
    basis = basis * N;
  }

  const double cond_f = condition_number(out.F);
  if (!(cond_f <= kConditionLimit)) {
    throw DecompositionError("Frobenius form transform is ill-conditioned (condition " +
                             std::to_string(cond_f) + ")");
  }
  out.F_inv = out.F.fullPivLu().inverse();
  const double recon = rel_err(out.F * out.C * out.F_inv, M);
  const double inv_res = (out.F * out.F_inv - Matrix::Identity(n, n)).norm();
  if (!(recon <= kReconstructionTol) || !(inv_res <= kReconstructionTol)) {
    throw DecompositionError("Frobenius form reconstruction failed (residual " +
                             std::to_string(std::max(recon, inv_res)) + ")");
  }
  return out;
}

Matrix sc_inverse(const Matrix& M) {
  const FcfDecomposition d = fcf(M);
  return d.F * mp_inverse(d.C) * d.F_inv;
}

}  // namespace mixinv
