#include <gtest/gtest.h>

#include <array>

#include "mixinv/errors.hpp"
#include "mixinv/kernels.hpp"
#include "mixinv/mixed_block.hpp"
#include "mixinv/random.hpp"
#include "oracles.hpp"

using namespace mixinv;

namespace {

constexpr auto E = GinvKind::Exact;
constexpr auto MP = GinvKind::MoorePenrose;
constexpr auto UC = GinvKind::UnitConsistent;
constexpr auto SC = GinvKind::SimilarityConsistent;

BlockSpec spec(std::initializer_list<std::pair<Index, GinvKind>> blocks) {
  std::vector<BlockEntry> e;
  for (auto [s, k] : blocks) e.push_back({s, k});
  return BlockSpec(e);
}

}  // namespace

TEST(Dual, ScalarClosedForm) {
  // [[a, b], [c, d]]^-1 = [[d, -b], [-c, a]] / (ad - bc)
  Matrix m(2, 2);
  m << 4, 7, 2, 6;
  Matrix ref(2, 2);
  ref << 6, -7, -2, 4;
  ref /= 10.0;
  EXPECT_LE(rel_err(dual_block_inverse(split2(m, 1, 1), E, E).value, ref), 1e-15);
}

TEST(Dual, BlockDiagonalCollapsesToKernels) {
  const Matrix a = gen_matrix(1, 3, 2, 1.0);
  const Matrix b = gen_matrix(2, 2, 1, 1.0);
  const std::array<Matrix, 2> parts{a, b};
  const Matrix m = block_diag(parts);
  const Matrix j = dual_block_inverse(split2(m, 3, 2), UC, MP).value;
  const std::array<Matrix, 2> ref{uc_inverse(a), oracle::pinv(b)};
  EXPECT_LE(rel_err(j, block_diag(ref)), 1e-10);
}

TEST(Dual, NonsingularEqualsInverse) {
  const std::array<Index, 2> sizes{3, 3};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Matrix m = gen_block_well_conditioned(seed, sizes);
    const Matrix inv = m.partialPivLu().inverse();
    for (auto [ka, kb] : {std::pair{UC, MP}, std::pair{E, E}, std::pair{SC, UC}}) {
      EXPECT_LE(rel_err(dual_block_inverse(split2(m, 3, 3), ka, kb).value, inv), 1e-8);
    }
  }
}

TEST(Triple, DiagonalScalars) {
  const Matrix m = Vector{{2.0, 3.0, 4.0}}.asDiagonal();
  const Block3 b = split3(m, 1, 1, 1);
  const Matrix ref = Vector{{0.5, 1.0 / 3.0, 0.25}}.asDiagonal();
  EXPECT_LE(rel_err(triple_block_explicit(b, MP, UC, MP).value, ref), 1e-15);
  EXPECT_LE(rel_err(triple_block_recursive(b, MP, UC, MP).value, ref), 1e-15);
}

TEST(Triple, BlockDiagonalCollapsesToKernels) {
  const std::array<Matrix, 3> parts{gen_matrix(3, 2, 1, 0.5), gen_matrix(4, 3, 2, 0.5),
                                    gen_matrix(5, 2, 2, 0.5)};
  const Matrix m = block_diag(parts);
  const std::array<Matrix, 3> ref{oracle::pinv(parts[0]), uc_inverse(parts[1]),
                                  oracle::pinv(parts[2])};
  const Block3 b = split3(m, 2, 3, 2);
  EXPECT_LE(rel_err(triple_block_explicit(b, MP, UC, MP).value, block_diag(ref)), 1e-10);
  EXPECT_LE(rel_err(triple_block_recursive(b, MP, UC, MP).value, block_diag(ref)), 1e-10);
}

TEST(Triple, NonsingularEqualsInverse) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::array<Index, 3> sizes{1 + static_cast<Index>(seed % 3), 2,
                                     1 + static_cast<Index>(seed % 4)};
    const Matrix m = gen_block_well_conditioned(seed, sizes);
    const Matrix inv = m.partialPivLu().inverse();
    const Block3 b = split3(m, sizes[0], sizes[1], sizes[2]);
    EXPECT_LE(rel_err(triple_block_explicit(b, MP, UC, MP).value, inv), 1e-8) << seed;
    EXPECT_LE(rel_err(triple_block_recursive(b, MP, UC, MP).value, inv), 1e-8) << seed;
  }
}

TEST(Triple, ExplicitMatchesRecursive) {
  const std::array<std::array<GinvKind, 3>, 3> kinds{
      std::array{E, E, E}, std::array{MP, UC, MP}, std::array{MP, UC, UC}};
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const std::array<Index, 3> sizes{2, 1 + static_cast<Index>(seed % 3), 3};
    const Matrix m = gen_block_well_conditioned(100 + seed, sizes);
    const Block3 b = split3(m, sizes[0], sizes[1], sizes[2]);
    for (const auto& k : kinds) {
      const Matrix x = triple_block_explicit(b, k[0], k[1], k[2]).value;
      const Matrix r = triple_block_recursive(b, k[0], k[1], k[2]).value;
      EXPECT_LE(rel_err(x, r), 1e-8) << seed;
    }
  }
}

TEST(Listing, AgreesWhenEveryKindIsTheSame) {
  const std::array<Index, 3> sizes{2, 2, 2};
  const Matrix m = gen_block_well_conditioned(9, sizes);
  const Block3 b = split3(m, 2, 2, 2);
  EXPECT_LE(rel_err(triple_block_listing(b, MP, MP, MP, MP),
                    triple_block_explicit(b, MP, MP, MP).value),
            1e-10);
}

TEST(Fold, SingleBlockIsKernelBitwise) {
  const Matrix m = gen_matrix(6, 4, 3, 1.0);
  EXPECT_EQ(k_block_inverse(m, spec({{4, UC}})).value, uc_inverse(m));
  EXPECT_EQ(k_block_inverse(m, spec({{4, MP}})).value, mp_inverse(m));
}

TEST(Fold, TwoBlocksIsDualBitwise) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Matrix m = gen_matrix(seed, 5, 4, 1.0);
    const Matrix f = k_block_inverse(m, spec({{2, UC}, {3, MP}})).value;
    EXPECT_EQ(f, dual_block_inverse(split2(m, 2, 3), UC, MP).value);
  }
}

TEST(Fold, ThreeBlocksIsRecursiveOnWellConditioned) {
  const std::array<Index, 3> sizes{2, 3, 2};
  const Matrix m = gen_block_well_conditioned(3, sizes);
  const Matrix f = k_block_inverse(m, spec({{2, MP}, {3, UC}, {2, MP}})).value;
  const Matrix r = triple_block_recursive(split3(m, 2, 3, 2), MP, UC, MP).value;
  EXPECT_LE(rel_err(f, r), 1e-8);
}

TEST(Fold, FourBlocksOfNonsingularInput) {
  const std::array<Index, 4> sizes{1, 2, 2, 1};
  const Matrix m = gen_block_well_conditioned(12, sizes);
  const Matrix f = k_block_inverse(m, spec({{1, E}, {2, MP}, {2, UC}, {1, SC}})).value;
  EXPECT_LE(rel_err(f * m, Matrix::Identity(6, 6)), 1e-8);
}

TEST(Mixed, DispatchChecksBlockCount) {
  const Matrix m = Matrix::Identity(4, 4);
  EXPECT_THROW(mixed_inverse(m, spec({{2, MP}, {2, MP}}), MixedMethod::TripleExplicit),
               InputError);
  EXPECT_THROW(mixed_inverse(m, spec({{1, MP}, {1, MP}, {2, MP}}), MixedMethod::Dual),
               InputError);
  EXPECT_THROW(mixed_inverse(m, spec({{3, MP}, {2, MP}}), MixedMethod::Dual), InputError);
  EXPECT_EQ(mixed_inverse(m, spec({{1, MP}, {1, UC}, {2, MP}}), MixedMethod::KFold).value, m);
}

TEST(Mixed, KernelErrorNamesSubexpression) {
  Matrix m = Matrix::Identity(4, 4);
  m(0, 0) = 0.0;
  try {
    dual_block_inverse(split2(m, 2, 2), E, E);
    FAIL() << "expected KernelError";
  } catch (const KernelError& e) {
    EXPECT_EQ(e.subexpression(), "W");
    EXPECT_FALSE(e.cause().empty());
  }
  Matrix t = Matrix::Identity(3, 3);
  t(2, 2) = 0.0;
  try {
    triple_block_recursive(split3(t, 1, 1, 1), E, E, E);
    FAIL() << "expected KernelError";
  } catch (const KernelError& e) {
    EXPECT_EQ(e.subexpression().rfind("[V W; Y Z] / ", 0), 0u) << e.subexpression();
  }
}
