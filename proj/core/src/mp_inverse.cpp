#include <algorithm>

#include "mixinv/kernels.hpp"

namespace mixinv {

Matrix mp_inverse(const Matrix& M, double rtol) {
  require_finite(M, "mp_inverse argument");
  Matrix out = Matrix::Zero(M.cols(), M.rows());
  if (M.size() == 0) return out;

  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double cutoff =
      rtol * s(0) * static_cast<double>(std::max(M.rows(), M.cols()));
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) <= cutoff) break;  // singular values are sorted descending
    out.noalias() += (svd.matrixV().col(i) / s(i)) * svd.matrixU().col(i).transpose();
  }
  return out;
}

}  // namespace mixinv
