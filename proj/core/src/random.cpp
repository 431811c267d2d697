#include "mixinv/random.hpp"

#include <cmath>
#include <numbers>

#include "mixinv/errors.hpp"

namespace mixinv {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

Index Rng::integer(Index lo, Index hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<Index>(engine_() % span);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Matrix Rng::gaussian(Index rows, Index cols) {
  Matrix out(rows, cols);
  // Column-major fill order is part of the determinism contract.
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) out(i, j) = normal();
  }
  return out;
}

Matrix random_orthogonal(Rng& rng, Index n) {
  const Matrix g = rng.gaussian(n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

Matrix gen_matrix(std::uint64_t seed, Index dim, Index rank, double log10_cond) {
  if (dim < 1) throw InputError("gen_matrix: dimension must be positive");
  if (rank < 0 || rank > dim) {
    throw InputError("gen_matrix: rank " + std::to_string(rank) +
                     " is outside [0, " + std::to_string(dim) + "]");
  }
  Rng rng(seed);
  const Matrix u = random_orthogonal(rng, dim);
  const Matrix v = random_orthogonal(rng, dim);
  Vector sigma = Vector::Zero(dim);
  for (Index i = 0; i < rank; ++i) {
    const double t = rank > 1 ? static_cast<double>(i) / static_cast<double>(rank - 1) : 0.0;
    sigma(i) = std::pow(10.0, -log10_cond * t);
  }
  return u * sigma.asDiagonal() * v.transpose();
}

namespace {

Matrix spectral_matrix(Rng& rng, Index dim, Index rank, double log10_cond) {
  const Matrix u = random_orthogonal(rng, dim);
  const Matrix v = random_orthogonal(rng, dim);
  Vector sigma = Vector::Zero(dim);
  for (Index i = 0; i < rank; ++i) {
    const double t = rank > 1 ? static_cast<double>(i) / static_cast<double>(rank - 1) : 0.0;
    sigma(i) = std::pow(10.0, -log10_cond * t);
  }
  return u * sigma.asDiagonal() * v.transpose();
}

Matrix gather(const Matrix& a, const std::vector<Index>& rows,
              const std::vector<Index>& cols) {
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out(static_cast<Index>(i), static_cast<Index>(j)) = a(rows[i], cols[j]);
    }
  }
  return out;
}

class BlockIndex {
 public:
  explicit BlockIndex(std::span<const Index> sizes) : sizes_(sizes.begin(), sizes.end()) {
    offsets_.assign(sizes_.size(), 0);
    for (std::size_t i = 1; i < sizes_.size(); ++i) {
      offsets_[i] = offsets_[i - 1] + sizes_[i - 1];
    }
  }

  unsigned full() const { return (1u << sizes_.size()) - 1; }

  std::vector<Index> indices(unsigned mask) const {
    std::vector<Index> idx;
    for (std::size_t b = 0; b < sizes_.size(); ++b) {
      if (mask & (1u << b)) {
        for (Index t = 0; t < sizes_[b]; ++t) idx.push_back(offsets_[b] + t);
      }
    }
    return idx;
  }

  // Positions of the blocks in `keep` inside the submatrix of `group`.
  std::vector<Index> local(unsigned group, unsigned keep) const {
    std::vector<Index> out;
    Index pos = 0;
    for (std::size_t b = 0; b < sizes_.size(); ++b) {
      if (!(group & (1u << b))) continue;
      for (Index t = 0; t < sizes_[b]; ++t, ++pos) {
        if (keep & (1u << b)) out.push_back(pos);
      }
    }
    return out;
  }

 private:
  std::vector<Index> sizes_;
  std::vector<Index> offsets_;
};

// Largest condition number over every principal block submatrix and every
// Schur complement that can be formed inside one. The whole matrix is
// skipped when `proper_only` is set.
double worst_block_condition(const Matrix& M, const BlockIndex& blocks, bool proper_only) {
  double worst = 1.0;
  const unsigned full = blocks.full();
  for (unsigned group = 1; group <= full; ++group) {
    if (proper_only && group == full) continue;
    const auto gidx = blocks.indices(group);
    const Matrix sub = gather(M, gidx, gidx);
    const double cond = condition_number(sub);
    if (!std::isfinite(cond)) return cond;
    worst = std::max(worst, cond);
    const Matrix sub_inv = sub.inverse();
    // The Schur complement that keeps `keep` is the inverse of that block
    // of sub^-1, so their conditions coincide.
    for (unsigned keep = (group - 1) & group; keep > 0; keep = (keep - 1) & group) {
      const auto idx = blocks.local(group, keep);
      worst = std::max(worst, condition_number(gather(sub_inv, idx, idx)));
    }
  }
  return worst;
}

// Every complement against the whole matrix must have exactly `deficiency`
// singular values at round-off level and the rest within max_cond of the top.
bool clean_rank_gap(const Matrix& M, const BlockIndex& blocks, Index deficiency,
                    double max_cond) {
  const unsigned full = blocks.full();
  for (unsigned keep = 1; keep < full; ++keep) {
    const unsigned rest = full & ~keep;
    const auto k = blocks.indices(keep);
    const auto r = blocks.indices(rest);
    const Matrix comp = gather(M, k, k) - gather(M, k, r) *
                                              gather(M, r, r).partialPivLu().solve(gather(M, r, k));
    Eigen::JacobiSVD<Matrix> svd(comp);
    const Vector& s = svd.singularValues();
    const Index rank = s.size() - deficiency;
    if (rank < 1) return false;
    if (s(rank - 1) < s(0) / max_cond) return false;
    if (s(rank) > 1e-13 * s(0)) return false;
  }
  return true;
}

Index checked_total(std::span<const Index> sizes, const char* who) {
  if (sizes.empty() || sizes.size() > 8) {
    throw InputError(std::string(who) + ": between 1 and 8 blocks");
  }
  Index dim = 0;
  for (Index s : sizes) {
    if (s < 1) throw InputError(std::string(who) + ": sizes must be positive");
    dim += s;
  }
  return dim;
}

}  // namespace

Matrix gen_block_well_conditioned(std::uint64_t seed, std::span<const Index> sizes,
                                  double max_cond) {
  const Index dim = checked_total(sizes, "gen_block_well_conditioned");
  const BlockIndex blocks(sizes);
  Rng rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Matrix> diag;
    for (Index s : sizes) {
      const Matrix q1 = random_orthogonal(rng, s);
      const Matrix q2 = random_orthogonal(rng, s);
      Vector sigma(s);
      for (Index i = 0; i < s; ++i) sigma(i) = rng.uniform(1.0, 3.0);
      diag.push_back(q1 * sigma.asDiagonal() * q2.transpose());
    }
    Matrix M = block_diag(diag);
    M += (0.3 / std::sqrt(static_cast<double>(dim))) * rng.gaussian(dim, dim);
    if (worst_block_condition(M, blocks, false) <= max_cond) return M;
  }
  throw Error("gen_block_well_conditioned: no admissible draw in 1000 attempts");
}

Matrix gen_block_rank_deficient(std::uint64_t seed, std::span<const Index> sizes,
                                Index deficiency, double log10_cond, double max_cond) {
  const Index dim = checked_total(sizes, "gen_block_rank_deficient");
  if (sizes.size() < 2) throw InputError("gen_block_rank_deficient: at least 2 blocks");
  for (Index s : sizes) {
    if (s <= deficiency) {
      throw InputError("gen_block_rank_deficient: every block must be larger than the "
                       "rank deficiency");
    }
  }
  const BlockIndex blocks(sizes);
  Rng rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Matrix M = spectral_matrix(rng, dim, dim - deficiency, log10_cond);
    if (worst_block_condition(M, blocks, true) <= max_cond &&
        clean_rank_gap(M, blocks, deficiency, max_cond)) {
      return M;
    }
  }
  throw Error("gen_block_rank_deficient: no admissible draw in 1000 attempts");
}

TransformClass consistency_class(GinvKind kind) noexcept {
  switch (kind) {
    case GinvKind::MoorePenrose:
      return TransformClass::Orthogonal;
    case GinvKind::UnitConsistent:
      return TransformClass::Diagonal;
    case GinvKind::SimilarityConsistent:
    case GinvKind::Drazin:
      return TransformClass::Similarity;
    case GinvKind::Exact:
      return TransformClass::General;
  }
  return TransformClass::General;
}

namespace {

// Nonsingular factor with singular values log-uniform in [1, 100], returned
// together with its inverse assembled from the same SVD factors.
std::pair<Matrix, Matrix> random_nonsingular(Rng& rng, Index n) {
  const Matrix q1 = random_orthogonal(rng, n);
  const Matrix q2 = random_orthogonal(rng, n);
  Vector sigma(n);
  for (Index i = 0; i < n; ++i) sigma(i) = std::pow(10.0, rng.uniform(0.0, 2.0));
  Matrix s = q1 * sigma.asDiagonal() * q2.transpose();
  Matrix s_inv = q2 * sigma.cwiseInverse().asDiagonal() * q1.transpose();
  return {std::move(s), std::move(s_inv)};
}

Vector log_uniform_diagonal(Rng& rng, Index n) {
  Vector d(n);
  for (Index i = 0; i < n; ++i) d(i) = std::pow(10.0, rng.uniform(-3.0, 3.0));
  return d;
}

Matrix stack(const std::vector<BlockTransform>& blocks,
             Matrix BlockTransform::*member) {
  std::vector<Matrix> pieces;
  pieces.reserve(blocks.size());
  for (const auto& b : blocks) pieces.push_back(b.*member);
  return block_diag(pieces);
}

}  // namespace

Matrix TransformSet::left() const { return stack(blocks, &BlockTransform::left); }
Matrix TransformSet::left_inv() const { return stack(blocks, &BlockTransform::left_inv); }
Matrix TransformSet::right() const { return stack(blocks, &BlockTransform::right); }
Matrix TransformSet::right_inv() const { return stack(blocks, &BlockTransform::right_inv); }

TransformSet gen_transforms(std::uint64_t seed, std::span<const Index> sizes,
                            std::span<const TransformClass> classes) {
  if (sizes.size() != classes.size() || sizes.empty()) {
    throw InputError("gen_transforms: one transform class per block required");
  }
  Rng rng(seed);
  TransformSet set;
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    const Index n = sizes[b];
    if (n < 1) throw InputError("gen_transforms: block sizes must be positive");
    BlockTransform t;
    t.cls = classes[b];
    switch (t.cls) {
      case TransformClass::Orthogonal:
        t.left = random_orthogonal(rng, n);
        t.right = random_orthogonal(rng, n);
        t.left_inv = t.left.transpose();
        t.right_inv = t.right.transpose();
        break;
      case TransformClass::Diagonal: {
        const Vector dl = log_uniform_diagonal(rng, n);
        const Vector dr = log_uniform_diagonal(rng, n);
        t.left = dl.asDiagonal();
        t.right = dr.asDiagonal();
        t.left_inv = dl.cwiseInverse().asDiagonal();
        t.right_inv = dr.cwiseInverse().asDiagonal();
        break;
      }
      case TransformClass::Similarity: {
        auto [s, s_inv] = random_nonsingular(rng, n);
        t.left = s;
        t.left_inv = s_inv;
        t.right = s_inv;
        t.right_inv = s;
        break;
      }
      case TransformClass::General: {
        auto [l, l_inv] = random_nonsingular(rng, n);
        auto [r, r_inv] = random_nonsingular(rng, n);
        t.left = std::move(l);
        t.left_inv = std::move(l_inv);
        t.right = std::move(r);
        t.right_inv = std::move(r_inv);
        break;
      }
    }
    set.blocks.push_back(std::move(t));
  }
  return set;
}

TransformSet gen_transforms(std::uint64_t seed, const BlockSpec& spec) {
  std::vector<TransformClass> classes;
  for (const auto& b : spec.blocks()) classes.push_back(consistency_class(b.kind));
  const auto sizes = spec.sizes();
  return gen_transforms(seed, sizes, classes);
}

}  // namespace mixinv
