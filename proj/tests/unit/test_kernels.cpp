#include <gtest/gtest.h>

#include "mixinv/errors.hpp"
#include "mixinv/kernels.hpp"
#include "mixinv/random.hpp"
#include "oracles.hpp"

using namespace mixinv;

namespace {

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix a(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (double v : r) a(i, j++) = v;
    ++i;
  }
  return a;
}

Matrix positive_diagonal(Rng& rng, Index n) {
  Vector d(n);
  for (Index i = 0; i < n; ++i) d(i) = std::pow(10.0, rng.uniform(-3.0, 3.0));
  return d.asDiagonal();
}

}  // namespace

// ---- Moore-Penrose

TEST(Mp, RankOneFixture) {
  // [[1,0],[1,0]] = u v^T with u = (1,1), v = e1; pinv = v u^T / (|u|^2 |v|^2).
  const Matrix g = mp_inverse(mat({{1, 0}, {1, 0}}));
  EXPECT_LE(rel_err(g, mat({{0.5, 0.5}, {0, 0}})), 1e-15);
}

TEST(Mp, ZeroAndRectangular) {
  const Matrix z = mp_inverse(Matrix::Zero(2, 3));
  EXPECT_EQ(z.rows(), 3);
  EXPECT_EQ(z.norm(), 0.0);
  const Matrix a = mat({{1, 2, 3}, {4, 5, 6}});
  EXPECT_LE(rel_err(mp_inverse(a), oracle::pinv(a)), 1e-12);
}

TEST(Mp, MatchesOracleAcrossRanks) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const Index dim = 1 + static_cast<Index>(seed % 12);
    const Index rank = 1 + static_cast<Index>((seed * 7) % static_cast<std::uint64_t>(dim));
    const Matrix a = gen_matrix(seed, dim, rank, 3.0);
    const Matrix g = mp_inverse(a);
    EXPECT_LE(rel_err(g, oracle::pinv(a)), 1e-8) << seed;
    EXPECT_LE(penrose_residuals(a, g).max(), 1e-10) << seed;
  }
}

TEST(Mp, OrthogonalConsistency) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = gen_matrix(100 + trial, 5, 3, 1.0);
    const Matrix u = random_orthogonal(rng, 5);
    const Matrix v = random_orthogonal(rng, 5);
    EXPECT_LE(rel_err(mp_inverse(u * a * v), v.transpose() * mp_inverse(a) * u.transpose()),
              1e-10);
  }
}

TEST(Penrose, DetectsWrongInverse) {
  const Matrix a = mat({{1, 0}, {1, 0}});
  EXPECT_LE(penrose_residuals(a, mp_inverse(a)).max(), 1e-15);
  const PenroseResiduals r = penrose_residuals(a, mat({{1, 0}, {0, 0}}));
  EXPECT_LE(r.r1, 1e-15);
  EXPECT_GT(r.r3, 0.1);
}

// ---- Unit-consistent

TEST(Uc, FixtureMatchesLogBalanceOracle) {
  const Matrix a = mat({{1, 2}, {2, 4}});
  const auto ref = oracle::log_balance(a);
  EXPECT_LE((ref.d - Vector{{1.0, 0.5}}).norm(), 1e-14);
  const ScalingDecomposition s = uc_scale(a);
  EXPECT_LE((s.D - ref.d).norm(), 1e-12);
  EXPECT_LE((s.E - ref.e).norm(), 1e-12);
  EXPECT_LE(rel_err(s.scaled, Matrix::Ones(2, 2)), 1e-12);
  EXPECT_LE(rel_err(uc_inverse(a), mat({{0.25, 0.125}, {0.125, 0.0625}})), 1e-12);
}

TEST(Uc, ScalesMatchOracleOnDenseInput) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Matrix a = gen_matrix(seed, 4, 4, 1.0);
    const auto ref = oracle::log_balance(a);
    const ScalingDecomposition s = uc_scale(a);
    EXPECT_LE(rel_err(s.D, ref.d), 1e-9) << seed;
    EXPECT_LE(rel_err(s.E, ref.e), 1e-9) << seed;
    EXPECT_LE(s.residual, 1e-13);
  }
}

TEST(Uc, ZeroRowsAndBlocks) {
  const Matrix a = mat({{2, 0, 0}, {0, 0, 0}, {0, 0, 8}});
  const ScalingDecomposition s = uc_scale(a);
  EXPECT_EQ(s.D(1), 1.0);
  EXPECT_EQ(s.E(1), 1.0);
  EXPECT_LE(rel_err(uc_inverse(a), mat({{0.5, 0, 0}, {0, 0, 0}, {0, 0, 0.125}})), 1e-14);
}

TEST(Uc, DiagonalConsistency) {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 2 + trial % 5;
    const Matrix a = gen_matrix(200 + trial, n, trial % 2 ? n : n - 1, 1.0);
    const Matrix d1 = positive_diagonal(rng, n);
    const Matrix d2 = positive_diagonal(rng, n);
    const Matrix lhs = uc_inverse(d1 * a * d2);
    const Matrix rhs = d2.inverse() * uc_inverse(a) * d1.inverse();
    EXPECT_LE(rel_err(lhs, rhs), 1e-8) << trial;
  }
}

TEST(Uc, ScalingErrorWhenSweepsRunOut) {
  // Full support balances in a single sweep; a band needs many.
  Matrix a = Matrix::Zero(6, 6);
  for (Index i = 0; i < 6; ++i) {
    a(i, i) = std::pow(10.0, static_cast<double>(i));
    if (i + 1 < 6) a(i, i + 1) = 3.0;
  }
  EXPECT_THROW(uc_scale(a, 1e-13, 1), ScalingError);
  EXPECT_LE(uc_scale(a).residual, 1e-13);
}

// ---- Frobenius canonical form

TEST(Fcf, CompanionIsFixedPoint) {
  const Matrix c = oracle::companion(Vector{{-6.0, 11.0, -6.0}});
  const FcfDecomposition f = fcf(c);
  EXPECT_LE(rel_err(f.F, Matrix::Identity(3, 3)), 1e-14);
  EXPECT_LE(rel_err(f.C, c), 1e-14);
  EXPECT_EQ(f.degrees, std::vector<Index>{3});
}

TEST(Fcf, DistinctEigenvaluesGiveOneBlock) {
  const Matrix a = mat({{1, 0}, {0, 2}});
  const FcfDecomposition f = fcf(a);
  EXPECT_EQ(f.degrees, std::vector<Index>{2});
  EXPECT_LE(rel_err(f.C, oracle::companion(oracle::charpoly(a))), 1e-12);
  EXPECT_LE(rel_err(f.C, mat({{0, -2}, {1, 3}})), 1e-12);
  EXPECT_LE(rel_err(f.F * f.C * f.F_inv, a), 1e-12);
}

TEST(Fcf, NilpotentAndIdentity) {
  const FcfDecomposition n = fcf(mat({{0, 1}, {0, 0}}));
  EXPECT_EQ(n.degrees, std::vector<Index>{2});
  EXPECT_LE(rel_err(n.C, mat({{0, 0}, {1, 0}})), 1e-14);

  const FcfDecomposition i = fcf(Matrix::Identity(2, 2));
  EXPECT_EQ(i.degrees, (std::vector<Index>{1, 1}));
  EXPECT_LE(rel_err(i.C, Matrix::Identity(2, 2)), 1e-14);
}

TEST(Fcf, GenericMatrixMatchesCharpoly) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Index n = 2 + static_cast<Index>(seed % 4);
    const Matrix a = gen_matrix(seed, n, n, 1.0);
    const FcfDecomposition f = fcf(a);
    ASSERT_EQ(f.degrees, std::vector<Index>{n}) << seed;
    EXPECT_LE(rel_err(f.C, oracle::companion(oracle::charpoly(a))), 1e-8) << seed;
    EXPECT_LE(rel_err(f.F * f.C * f.F_inv, a), 1e-8) << seed;
  }
}

TEST(Fcf, InvariantFactorsOfDerogatoryMatrix) {
  // diag(2, 2, 3): invariant factors (t-2)(t-3) then (t-2).
  Rng rng(4);
  const Matrix s = random_orthogonal(rng, 3) * Vector{{1.0, 2.0, 4.0}}.asDiagonal() *
                   random_orthogonal(rng, 3);
  const Matrix a = s * Vector{{2.0, 2.0, 3.0}}.asDiagonal() * s.inverse();
  const FcfDecomposition f = fcf(a);
  ASSERT_EQ(f.degrees, (std::vector<Index>{2, 1}));
  EXPECT_LE(rel_err(f.C.topLeftCorner(2, 2), mat({{0, -6}, {1, 5}})), 1e-8);
  EXPECT_NEAR(f.C(2, 2), 2.0, 1e-8);
}

// ---- Similarity-consistent

TEST(Sc, Fixtures) {
  EXPECT_LE(rel_err(sc_inverse(mat({{0, 1}, {0, 0}})), mat({{0, 0}, {1, 0}})), 1e-14);
  EXPECT_LE(rel_err(sc_inverse(mat({{2, 0}, {0, 4}})), mat({{0.5, 0}, {0, 0.25}})), 1e-12);
}

TEST(Sc, ExactOnNonsingular) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Index n = 1 + static_cast<Index>(seed % 6);
    const Matrix a = gen_matrix(seed, n, n, 2.0);
    EXPECT_LE(rel_err(sc_inverse(a) * a, Matrix::Identity(n, n)), 1e-7) << seed;
  }
}

TEST(Sc, SimilarityConsistentOnNonsingular) {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = gen_matrix(50 + trial, 3, 3, 1.0);
    const Matrix s = random_orthogonal(rng, 3) * Vector{{1.0, 3.0, 9.0}}.asDiagonal() *
                     random_orthogonal(rng, 3);
    const Matrix si = s.inverse();
    EXPECT_LE(rel_err(sc_inverse(s * a * si), s * sc_inverse(a) * si), 1e-7);
  }
}

// ---- Drazin

TEST(Drazin, IndexAndFixtures) {
  EXPECT_EQ(drazin_index(Matrix::Identity(2, 2)), 0);
  EXPECT_EQ(drazin_index(mat({{0, 1}, {0, 0}})), 2);
  EXPECT_EQ(drazin_index(mat({{1, 0}, {0, 0}})), 1);
  EXPECT_LE(drazin_inverse(mat({{0, 1}, {0, 0}})).norm(), 1e-15);
  EXPECT_LE(rel_err(drazin_inverse(mat({{2, 0}, {0, 0}})), mat({{0.5, 0}, {0, 0}})), 1e-14);
}

TEST(Drazin, CoreNilpotentOracle) {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix block = Matrix::Zero(5, 5);
    block(0, 1) = 1.0;
    block(1, 2) = 1.0;
    const Matrix core = gen_matrix(300 + trial, 2, 2, 0.5) + 2.0 * Matrix::Identity(2, 2);
    block.bottomRightCorner(2, 2) = core;
    Matrix ref = Matrix::Zero(5, 5);
    ref.bottomRightCorner(2, 2) = core.inverse();
    const Matrix p = random_orthogonal(rng, 5) + 0.5 * Matrix::Identity(5, 5);
    const Matrix pi = p.inverse();
    const Matrix m = p * block * pi;
    EXPECT_EQ(drazin_index(m), 3);
    EXPECT_LE(rel_err(drazin_inverse(m), p * ref * pi), 1e-8) << trial;
  }
}

TEST(Drazin, Identities) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Index n = 2 + static_cast<Index>(seed % 5);
    const Matrix m = gen_matrix(seed, n, n - 1, 1.0);
    const Matrix d = drazin_inverse(m);
    const Index k = drazin_index(m);
    Matrix mk = Matrix::Identity(n, n);
    for (Index i = 0; i < k; ++i) mk = mk * m;
    EXPECT_LE(rel_err(d * m * d, d), 1e-8);
    EXPECT_LE(rel_err(m * d, d * m), 1e-8);
    EXPECT_LE(rel_err(mk * m * d, mk), 1e-8);
  }
}

// ---- dispatch

TEST(ApplyKind, ExactAndSingular) {
  const Matrix a = mat({{4, 7}, {2, 6}});
  EXPECT_LE(rel_err(apply_kind(GinvKind::Exact, a), mat({{0.6, -0.7}, {-0.2, 0.4}})), 1e-15);
  EXPECT_THROW(apply_kind(GinvKind::Exact, mat({{1, 2}, {2, 4}})), SingularityError);
  EXPECT_LE(rel_err(apply_kind(GinvKind::UnitConsistent, mat({{1, 2}, {2, 4}})),
                    mat({{0.25, 0.125}, {0.125, 0.0625}})),
            1e-12);
}

TEST(ApplyKind, AllAgreeOnNonsingular) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Matrix a = gen_matrix(seed, 4, 4, 1.0);
    const Matrix inv = a.inverse();
    for (GinvKind k : {GinvKind::Exact, GinvKind::MoorePenrose, GinvKind::UnitConsistent,
                       GinvKind::SimilarityConsistent, GinvKind::Drazin}) {
      EXPECT_LE(rel_err(apply_kind(k, a), inv), 1e-8) << kind_name(k);
    }
  }
}

TEST(Kernels, RejectNonFinite) {
  Matrix a = Matrix::Identity(2, 2);
  a(0, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(mp_inverse(a), InputError);
  EXPECT_THROW(uc_inverse(a), InputError);
  EXPECT_THROW(sc_inverse(Matrix::Zero(2, 3)), InputError);
}
