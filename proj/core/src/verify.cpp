#include "mixinv/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

#include "mixinv/errors.hpp"
#include "mixinv/kernels.hpp"

#ifndef MIXINV_VERSION
#define MIXINV_VERSION "0.0.0"
#endif

namespace mixinv {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const Erratum kErrata[] = {
    {"Mi11, first parenthesis, second summand, leading factor",
     "Inverse[-U*InvA[R]*S+V]", "InvB[-U*InvA[R]*S+V]"},
    {"Mi11, first parenthesis, second summand, nested complement",
     "Inverse[-(-X*InvA[R]*S+Y)*InvB[-U*InvA[R]*S+V]*(-U*InvA[R]*T+W)-X*InvA[R]*T+Z]",
     "InvC[-(-X*InvA[R]*S+Y)*InvB[-U*InvA[R]*S+V]*(-U*InvA[R]*T+W)-X*InvA[R]*T+Z]"},
    {"Mi11, term multiplied by X, first summand",
     "Inverse[-(-X*InvA[R]*S+Y)*InvB[-U*InvA[R]*S+V]*(-U*InvA[R]*T+W)-X*InvA[R]*T+Z]",
     "InvC[-(-X*InvA[R]*S+Y)*InvB[-U*InvA[R]*S+V]*(-U*InvA[R]*T+W)-X*InvA[R]*T+Z]"},
    {"Mi13, first summand",
     "Inverse[-(-X*InvA[R]*S+Y)*InvB[-U*InvA[R]*S+V]*(-U*InvA[R]*T+W)-X*InvA[R]*T+Z]",
     "InvC[-(-X*InvA[R]*S+Y)*InvB[-U*InvA[R]*S+V]*(-U*InvA[R]*T+W)-X*InvA[R]*T+Z]"},
    {"Mi13, second summand",
     "Inverse[-(-X*InvA[R]*S+Y)*InvB[-U*InvA[R]*S+V]*(-U*InvA[R]*T+W)-X*InvA[R]*T+Z]",
     "InvC[-(-X*InvA[R]*S+Y)*InvB[-U*InvA[R]*S+V]*(-U*InvA[R]*T+W)-X*InvA[R]*T+Z]"},
    {"Mi21, factor multiplied by U, first summand",
     "Inverse[-U*InvA[R]*S+V]", "InvB[-U*InvA[R]*S+V]"},
    {"Mi23, inside the argument of InvC",
     "Inverse[-U*InvA[R]*S+V]", "InvB[-U*InvA[R]*S+V]"},
    {"Mi31, term multiplied by U",
     "InvC[-U*InvA[R]*S+V]", "InvB[-U*InvA[R]*S+V]"},
    {"Mi31, term multiplied by X",
     "Inverse[-(-X*InvA[R]*S+Y)*InvB[-U*InvA[R]*S+V]*(-U*InvA[R]*T+W)-X*InvA[R]*T+Z]",
     "InvC[-(-X*InvA[R]*S+Y)*InvB[-U*InvA[R]*S+V]*(-U*InvA[R]*T+W)-X*InvA[R]*T+Z]"},
    {"Mi32, leading factor",
     "Inverse[-(-X*InvA[R]*S+Y)*InvB[-U*InvA[R]*S+V]*(-U*InvA[R]*T+W)-X*InvA[R]*T+Z]",
     "InvC[-(-X*InvA[R]*S+Y)*InvB[-U*InvA[R]*S+V]*(-U*InvA[R]*T+W)-X*InvA[R]*T+Z]"},
    {"Mi33, whole block",
     "Inverse[-(-X*InvA[R]*S+Y)*InvB[-U*InvA[R]*S+V]*(-U*InvA[R]*T+W)-X*InvA[R]*T+Z]",
     "InvC[-(-X*InvA[R]*S+Y)*InvB[-U*InvA[R]*S+V]*(-U*InvA[R]*T+W)-X*InvA[R]*T+Z]"},
};

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent sub-stream of a case seed.
std::uint64_t derive(std::uint64_t seed, std::uint64_t salt) {
  return splitmix(seed ^ splitmix(salt));
}

BlockSpec make_spec(std::span<const Index> sizes, std::span<const GinvKind> kinds) {
  std::vector<BlockEntry> entries;
  for (std::size_t i = 0; i < sizes.size(); ++i) entries.push_back({sizes[i], kinds[i]});
  return BlockSpec(std::move(entries));
}

Index total(std::span<const Index> sizes) {
  Index t = 0;
  for (Index s : sizes) t += s;
  return t;
}

template <class F>
void guarded(VerificationCase& c, F&& body) {
  try {
    body();
  } catch (const Error& e) {
    c.residual = kNaN;
    c.error = e.what();
  }
}

constexpr GinvKind MP = GinvKind::MoorePenrose;
constexpr GinvKind UC = GinvKind::UnitConsistent;
constexpr GinvKind SC = GinvKind::SimilarityConsistent;
constexpr GinvKind EX = GinvKind::Exact;
constexpr GinvKind DZ = GinvKind::Drazin;

struct Context {
  const SuiteConfig& config;
  std::vector<VerificationCase>& cases;

  std::uint64_t next_seed() const { return config.base_seed + cases.size(); }
  const Thresholds& th() const { return config.thresholds; }
};

VerificationCase start(const std::string& family, std::size_t i, std::uint64_t seed,
                       CheckTag check) {
  VerificationCase c;
  c.family = family;
  c.case_id = family + "/" + std::to_string(i);
  c.seed = seed;
  c.check = check;
  return c;
}

void finish(Context& ctx, VerificationCase c, const std::string& family, std::size_t i,
            std::uint64_t seed) {
  c.family = family;
  c.case_id = family + "/" + std::to_string(i);
  c.seed = seed;
  ctx.cases.push_back(std::move(c));
}

std::array<Index, 3> triple_sizes(Rng& rng) {
  return {rng.integer(1, 4), rng.integer(1, 3), rng.integer(1, 5)};
}

// Blocks of at least 3 keep every Schur complement of a rank dim-2 matrix
// away from the identically-zero case.
std::array<Index, 3> triple_sizes_rank_deficient(Rng& rng) {
  return {rng.integer(3, 4), rng.integer(3, 4), rng.integer(3, 4)};
}

// ---------------------------------------------------------------- kernels

void fam_mp_penrose(Context& ctx, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    const auto seed = ctx.next_seed();
    auto c = start("mp_penrose", i, seed, CheckTag::Penrose);
    Rng rng(seed);
    const Index dim = rng.integer(1, 12);
    const Index rank = rng.integer(1, dim);
    const double lc = rng.uniform(0.0, 3.0);
    c.dims = {dim};
    c.spec = BlockSpec({{dim, MP}});
    c.method = "mp_kernel";
    c.note = "rank=" + std::to_string(rank);
    guarded(c, [&] {
      const Matrix M = gen_matrix(derive(seed, 1), dim, rank, lc);
      c.residual = penrose_residuals(M, mp_inverse(M)).max();
    });
    c.assert_below(ctx.th().mp);
    ctx.cases.push_back(std::move(c));
  }
}

void fam_uc_consistency(Context& ctx, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    const auto seed = ctx.next_seed();
    Rng rng(seed);
    const Index dim = rng.integer(2, 8);
    const Index drop = i % 2 == 0 ? 0 : rng.integer(1, std::min<Index>(2, dim - 1));
    const double lc = rng.uniform(0.0, 2.0);
    const BlockSpec spec({{dim, UC}});
    VerificationCase c;
    try {
      const Matrix M = gen_matrix(derive(seed, 1), dim, dim - drop, lc);
      c = check_transform_consistency(M, spec, gen_transforms(derive(seed, 2), spec),
                                      MixedMethod::KFold);
    } catch (const Error& e) {
      c.residual = kNaN;
      c.error = e.what();
      c.check = CheckTag::TransformConsistency;
      c.spec = spec;
    }
    c.method = "uc_kernel";
    c.note = "rank=" + std::to_string(dim - drop);
    c.assert_below(ctx.th().uc);
    finish(ctx, std::move(c), "uc_diagonal_consistency", i, seed);
  }
}

void fam_uc_fixture(Context& ctx, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    const auto seed = ctx.next_seed();
    auto c = start("uc_fixture", i, seed, CheckTag::KindAxioms);
    c.dims = {2};
    c.spec = BlockSpec({{2, UC}});
    c.method = "uc_kernel";
    c.note = "uc_inverse([[1,2],[2,4]]) vs [[0.25,0.125],[0.125,0.0625]]";
    guarded(c, [&] {
      Matrix M(2, 2), expected(2, 2);
      M << 1, 2, 2, 4;
      expected << 0.25, 0.125, 0.125, 0.0625;
      c.residual = rel_err(uc_inverse(M), expected);
    });
    c.assert_below(ctx.th().uc_fixture);
    ctx.cases.push_back(std::move(c));
  }
}

void fam_kind_axioms(Context& ctx, std::size_t count) {
  constexpr GinvKind kinds[] = {MP, UC, SC, DZ};
  for (std::size_t i = 0; i < count; ++i) {
    const auto seed = ctx.next_seed();
    auto c = start("kind_axioms", i, seed, CheckTag::KindAxioms);
    const GinvKind kind = kinds[i % 4];
    Rng rng(seed);
    const Index dim = rng.integer(2, 8);
    const Index rank = std::max<Index>(1, dim - rng.integer(1, 2));
    const double lc = rng.uniform(0.0, 1.5);
    c.dims = {dim};
    c.spec = BlockSpec({{dim, kind}});
    c.method = std::string(kind_name(kind)) + "_kernel";
    c.note = "rank=" + std::to_string(rank);
    guarded(c, [&] {
      const Matrix M = gen_matrix(derive(seed, 1), dim, rank, lc);
      const Matrix G = apply_kind(kind, M);
      c.residual = std::max(rel_err(M * G * M, M), rel_err(G * M * G, G));
    });
    if (kind != SC || ctx.config.promote_sc) c.assert_below(ctx.th().kind_axioms);
    ctx.cases.push_back(std::move(c));
  }
}

Matrix nilpotent_block(Index n) {
  Matrix N = Matrix::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) N(i, i + 1) = 1.0;
  return N;
}

void fam_drazin(Context& ctx, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    const auto seed = ctx.next_seed();
    auto c = start("drazin_identities", i, seed, CheckTag::KindAxioms);
    Rng rng(seed);
    c.method = "drazin_kernel";
    guarded(c, [&] {
      Matrix M;
      if (i % 2 == 0) {
        // Generic rank-deficient input: index 1.
        const Index dim = rng.integer(2, 8);
        M = gen_matrix(derive(seed, 1), dim, dim - 1, rng.uniform(0.0, 1.0));
      } else {
        // P diag(N, A) P^-1 with a nilpotent Jordan block N: index = size(N).
        const Index nil = rng.integer(2, 3);
        const Index core = rng.integer(1, 8 - nil);
        const Matrix A = gen_matrix(derive(seed, 2), core, core, 1.0);
        const Matrix pieces[] = {nilpotent_block(nil), A};
        const Matrix P = gen_matrix(derive(seed, 3), nil + core, nil + core, 1.0);
        M = P * block_diag(pieces) * P.inverse();
      }
      const Index dim = M.rows();
      c.dims = {dim};
      c.spec = BlockSpec({{dim, DZ}});
      const Index k = drazin_index(M);
      const Matrix D = drazin_inverse(M);
      Matrix Mk = Matrix::Identity(dim, dim);
      for (Index j = 0; j < k; ++j) Mk = Mk * M;
      c.residual = std::max({rel_err(M * D, D * M), rel_err(D * M * D, D),
                             rel_err(Mk * M * D, Mk)});
      const Index rank_m = numerical_rank(M, 1e-9);
      const Index rank_d = numerical_rank(D, 1e-9);
      c.note = "index=" + std::to_string(k) + " rank(M)=" + std::to_string(rank_m) +
               " rank(D)=" + std::to_string(rank_d) +
               (rank_m == rank_d ? " same-rank" : " rank-differs");
    });
    c.assert_below(ctx.th().drazin);
    ctx.cases.push_back(std::move(c));
  }
}

void fam_nonsingular_reduction(Context& ctx, std::size_t count) {
  constexpr GinvKind kinds[] = {EX, MP, UC, DZ};
  for (std::size_t i = 0; i < count; ++i) {
    const auto seed = ctx.next_seed();
    auto c = start("nonsingular_reduction", i, seed, CheckTag::ExactReduction);
    const GinvKind kind = kinds[i % 4];
    Rng rng(seed);
    const Index dim = rng.integer(1, 8);
    c.dims = {dim};
    c.spec = BlockSpec({{dim, kind}});
    c.method = std::string(kind_name(kind)) + "_kernel";
    guarded(c, [&] {
      const Matrix M = gen_matrix(derive(seed, 1), dim, dim, rng.uniform(0.0, 2.0));
      c.residual = rel_err(apply_kind(kind, M), M.partialPivLu().inverse());
    });
    c.assert_below(ctx.th().exact);
    ctx.cases.push_back(std::move(c));
  }
}

void fam_sc_exact(Context& ctx, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    const auto seed = ctx.next_seed();
    auto c = start("sc_exact", i, seed, CheckTag::ExactReduction);
    Rng rng(seed);
    const Index dim = rng.integer(1, 6);
    c.dims = {dim};
    c.spec = BlockSpec({{dim, SC}});
    c.method = "sc_kernel";
    guarded(c, [&] {
      const Matrix M = gen_matrix(derive(seed, 1), dim, dim, rng.uniform(0.0, 3.0));
      c.residual = rel_err(sc_inverse(M), M.partialPivLu().inverse());
    });
    c.assert_below(ctx.th().sc_exact);
    ctx.cases.push_back(std::move(c));
  }
}

void fam_sc_similarity(Context& ctx, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    const auto seed = ctx.next_seed();
    Rng rng(seed);
    const Index dim = rng.integer(2, 6);
    const BlockSpec spec({{dim, SC}});
    VerificationCase c;
    try {
      const Matrix M = gen_matrix(derive(seed, 1), dim, dim - 1, rng.uniform(0.0, 1.0));
      c = check_transform_consistency(M, spec, gen_transforms(derive(seed, 2), spec),
                                      MixedMethod::KFold);
    } catch (const Error& e) {
      c.residual = kNaN;
      c.error = e.what();
      c.spec = spec;
    }
    c.check = CheckTag::ScRecorded;
    c.method = "sc_kernel";
    c.note = "rank=" + std::to_string(dim - 1);
    if (ctx.config.promote_sc) c.assert_below(ctx.th().sc_similarity);
    finish(ctx, std::move(c), "sc_similarity_singular", i, seed);
  }
}

// ---------------------------------------------------------------- mixed

void fam_dual_exact(Context& ctx, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    const auto seed = ctx.next_seed();
    Rng rng(seed);
    const Index m = rng.integer(1, 5);
    const Index sizes[] = {m, 6 - m};
    const GinvKind kinds[] = {UC, MP};
    const BlockSpec spec = make_spec(sizes, kinds);
    VerificationCase c;
    try {
      const Matrix M = gen_block_well_conditioned(derive(seed, 1), sizes);
      c = check_exact_reduction(M, spec, MixedMethod::Dual);
    } catch (const Error& e) {
      c.residual = kNaN;
      c.error = e.what();
      c.spec = spec;
    }
    c.check = CheckTag::ExactReduction;
    c.assert_below(ctx.th().exact);
    finish(ctx, std::move(c), "dual_exact", i, seed);
  }
}

void fam_triple_exact(Context& ctx, std::size_t count) {
  constexpr MixedMethod methods[] = {MixedMethod::TripleExplicit,
                                     MixedMethod::TripleRecursive, MixedMethod::KFold};
  for (std::size_t i = 0; i < count; ++i) {
    const auto seed = ctx.next_seed();
    Rng rng(seed);
    const auto sizes = triple_sizes(rng);
    const GinvKind kinds[] = {MP, UC, MP};
    const BlockSpec spec = make_spec(sizes, kinds);
    VerificationCase c;
    try {
      const Matrix M = gen_block_well_conditioned(derive(seed, 1), sizes);
      c = check_exact_reduction(M, spec, methods[i % 3]);
    } catch (const Error& e) {
      c.residual = kNaN;
      c.error = e.what();
      c.spec = spec;
    }
    c.check = CheckTag::ExactReduction;
    c.assert_below(ctx.th().exact);
    finish(ctx, std::move(c), "triple_exact", i, seed);
  }
}

void fam_explicit_vs_recursive(Context& ctx, std::size_t count) {
  constexpr std::array<GinvKind, 3> assignments[] = {
      {EX, EX, EX}, {MP, UC, MP}, {MP, UC, UC}};
  for (std::size_t i = 0; i < count; ++i) {
    const auto seed = ctx.next_seed();
    Rng rng(seed);
    const auto sizes = triple_sizes(rng);
    const auto& kinds = assignments[i % 3];
    VerificationCase c;
    try {
      const Matrix M = gen_block_well_conditioned(derive(seed, 1), sizes);
      c = check_explicit_vs_recursive(split3(M, sizes[0], sizes[1], sizes[2]), kinds);
    } catch (const Error& e) {
      c.residual = kNaN;
      c.error = e.what();
      c.spec = make_spec(sizes, kinds);
    }
    c.assert_below(ctx.th().explicit_vs_recursive);
    finish(ctx, std::move(c), "explicit_vs_recursive", i, seed);
  }
}

void fam_explicit_vs_recursive_rd(Context& ctx, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    const auto seed = ctx.next_seed();
    Rng rng(seed);
    const auto sizes = triple_sizes(rng);
    const Index dim = total(sizes);
    const std::array<GinvKind, 3> kinds{MP, UC, MP};
    VerificationCase c;
    try {
      const Matrix M = gen_matrix(derive(seed, 1), dim, dim - 2, 2.0);
      c = check_explicit_vs_recursive(split3(M, sizes[0], sizes[1], sizes[2]), kinds);
    } catch (const Error& e) {
      c.residual = kNaN;
      c.error = e.what();
      c.check = CheckTag::ExplicitVsRecursive;
      c.spec = make_spec(sizes, kinds);
    }
    c.note = "rank=dim-2";
    finish(ctx, std::move(c), "explicit_vs_recursive_rank_deficient", i, seed);
  }
}

void fam_listing_literal(Context& ctx, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    const auto seed = ctx.next_seed();
    auto c = start("listing_literal", i, seed, CheckTag::ExplicitVsRecursive);
    Rng rng(seed);
    const bool well = i % 2 == 0;
    const auto sizes = well ? triple_sizes(rng) : triple_sizes_rank_deficient(rng);
    const Index dim = total(sizes);
    const GinvKind kinds[] = {MP, UC, UC};
    c.dims.assign(sizes.begin(), sizes.end());
    c.spec = make_spec(sizes, kinds);
    c.method = "triple_listing";
    c.note = std::string(well ? "well-conditioned" : "rank=dim-2") +
             "; printed listing with Inverse -> mp vs block expressions";
    guarded(c, [&] {
      const Matrix M = well ? gen_block_well_conditioned(derive(seed, 1), sizes)
                            : gen_matrix(derive(seed, 1), dim, dim - 2, 2.0);
      const Block3 b = split3(M, sizes[0], sizes[1], sizes[2]);
      const Matrix printed = triple_block_listing(b, MP, UC, UC, MP);
      const Matrix canonical = triple_block_explicit(b, MP, UC, UC).value;
      c.residual = rel_err(printed, canonical);
    });
    ctx.cases.push_back(std::move(c));
  }
}

void fam_invariance(Context& ctx, std::size_t count, const std::string& family,
                    std::span<const GinvKind> kinds, MixedMethod method, bool sc,
                    bool screened = true) {
  const std::size_t k = kinds.size();
  for (std::size_t i = 0; i < count; ++i) {
    const auto seed = ctx.next_seed();
    Rng rng(seed);
    const bool full_rank = !sc && screened && i % 2 == 0;
    std::vector<Index> sizes(k);
    for (auto& s : sizes) s = full_rank ? rng.integer(1, 4) : rng.integer(3, k == 2 ? 5 : 4);
    const Index dim = total(sizes);
    const BlockSpec spec = make_spec(sizes, kinds);
    VerificationCase c;
    try {
      const Matrix M = full_rank   ? gen_matrix(derive(seed, 1), dim, dim, 1.0)
                       : screened ? gen_block_rank_deficient(derive(seed, 1), sizes)
                                  : gen_matrix(derive(seed, 1), dim, dim - 2, 2.0);
      c = check_transform_consistency(M, spec, gen_transforms(derive(seed, 2), spec),
                                      method);
    } catch (const Error& e) {
      c.residual = kNaN;
      c.error = e.what();
      c.spec = spec;
      c.method = method_name(method);
    }
    c.check = sc ? CheckTag::ScRecorded : CheckTag::TransformConsistency;
    c.note = full_rank ? "rank=full" : screened ? "rank=dim-2" : "rank=dim-2; unscreened";
    if (screened && (!sc || ctx.config.promote_sc)) c.assert_below(ctx.th().invariance);
    finish(ctx, std::move(c), family, i, seed);
  }
}

void fam_invariance_triple(Context& ctx, std::size_t count) {
  const GinvKind kinds[] = {MP, UC, MP};
  fam_invariance(ctx, count, "mixed_invariance_triple", kinds,
                 MixedMethod::TripleRecursive, false);
}

void fam_invariance_triple_unscreened(Context& ctx, std::size_t count) {
  const GinvKind kinds[] = {MP, UC, MP};
  fam_invariance(ctx, count, "mixed_invariance_triple_unscreened", kinds,
                 MixedMethod::TripleRecursive, false, false);
}

void fam_invariance_dual(Context& ctx, std::size_t count) {
  const GinvKind kinds[] = {UC, MP};
  fam_invariance(ctx, count, "mixed_invariance_dual", kinds, MixedMethod::Dual, false);
}

void fam_invariance_sc(Context& ctx, std::size_t count) {
  const GinvKind kinds[] = {MP, UC, SC};
  fam_invariance(ctx, count, "mixed_invariance_sc", kinds, MixedMethod::TripleRecursive,
                 true);
}

void fam_negative_control(Context& ctx, std::size_t count) {
  if (count == 0) return;
  const double floor = ctx.th().negative_floor;
  std::size_t missed = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const auto seed = ctx.next_seed();
    Rng rng(seed);
    const auto sizes = triple_sizes_rank_deficient(rng);
    const GinvKind kinds[] = {MP, UC, MP};
    const BlockSpec spec = make_spec(sizes, kinds);
    // Even cases scale every block diagonally, odd cases rotate every block.
    const bool diag_on_mp = i % 2 == 0;
    const TransformClass cls = diag_on_mp ? TransformClass::Diagonal : TransformClass::Orthogonal;
    const TransformClass classes[] = {cls, cls, cls};
    VerificationCase c;
    try {
      const Matrix M = gen_block_rank_deficient(derive(seed, 1), sizes);
      c = check_transform_consistency(M, spec, gen_transforms(derive(seed, 2), sizes, classes),
                                      MixedMethod::TripleRecursive);
    } catch (const Error& e) {
      c.residual = kNaN;
      c.error = e.what();
      c.spec = spec;
    }
    c.check = CheckTag::NegativeControl;
    c.floor = floor;
    c.note = diag_on_mp ? "diagonal transforms on every block" : "orthogonal transforms on every block";
    if (c.errored() || !(c.residual > floor)) ++missed;
    finish(ctx, std::move(c), "negative_control", i, seed);
  }
  const auto seed = ctx.next_seed();
  auto agg = start("negative_control", count, seed, CheckTag::NegativeControl);
  agg.case_id = "negative_control/aggregate";
  agg.method = "triple_recursive";
  agg.dims = {static_cast<Index>(count)};
  agg.spec = BlockSpec({{1, MP}});
  agg.residual = static_cast<double>(missed) / static_cast<double>(count);
  agg.note = "fraction of controls not exceeding the floor";
  agg.assert_below(1.0 - ctx.th().negative_fraction);
  ctx.cases.push_back(std::move(agg));
}

void fam_fold_k2(Context& ctx, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    const auto seed = ctx.next_seed();
    auto c = start("fold_k2", i, seed, CheckTag::FoldOrder);
    Rng rng(seed);
    const Index sizes[] = {rng.integer(1, 5), rng.integer(1, 5)};
    const GinvKind kinds[] = {UC, MP};
    c.dims.assign(std::begin(sizes), std::end(sizes));
    c.spec = make_spec(sizes, kinds);
    c.method = "k_fold vs dual";
    guarded(c, [&] {
      const Matrix M = gen_block_well_conditioned(derive(seed, 1), sizes);
      const Matrix fold = k_block_inverse(M, c.spec).value;
      const Matrix dual = dual_block_inverse(split2(M, sizes[0], sizes[1]), UC, MP).value;
      c.residual = rel_err(fold, dual);
    });
    c.assert_below(ctx.th().fold_k2);
    ctx.cases.push_back(std::move(c));
  }
}

void fam_fold_k3(Context& ctx, std::size_t count, bool rank_deficient) {
  const std::string family = rank_deficient ? "fold_k3_rank_deficient" : "fold_k3";
  for (std::size_t i = 0; i < count; ++i) {
    const auto seed = ctx.next_seed();
    auto c = start(family, i, seed, CheckTag::FoldOrder);
    Rng rng(seed);
    const auto sizes = rank_deficient ? triple_sizes_rank_deficient(rng) : triple_sizes(rng);
    const Index dim = total(sizes);
    const GinvKind kinds[] = {MP, UC, MP};
    c.dims.assign(sizes.begin(), sizes.end());
    c.spec = make_spec(sizes, kinds);
    c.method = "k_fold vs triple_recursive";
    c.note = rank_deficient ? "rank=dim-2" : "well-conditioned";
    guarded(c, [&] {
      const Matrix M = rank_deficient ? gen_matrix(derive(seed, 1), dim, dim - 2, 2.0)
                                      : gen_block_well_conditioned(derive(seed, 1), sizes);
      const Matrix fold = k_block_inverse(M, c.spec).value;
      const Matrix rec =
          triple_block_recursive(split3(M, sizes[0], sizes[1], sizes[2]), MP, UC, MP).value;
      c.residual = rel_err(fold, rec);
    });
    if (!rank_deficient) c.assert_below(ctx.th().fold_k3);
    ctx.cases.push_back(std::move(c));
  }
}

using FamilyFn = std::function<void(Context&, std::size_t)>;

struct FamilyEntry {
  FamilyInfo info;
  FamilyFn run;
};

const std::vector<FamilyEntry>& registry() {
  static const std::vector<FamilyEntry> entries = {
      {{"mp_penrose", CheckTag::Penrose, 200, "four Penrose conditions of the MP kernel"},
       fam_mp_penrose},
      {{"uc_diagonal_consistency", CheckTag::TransformConsistency, 100,
        "UC kernel under positive diagonal transforms"},
       fam_uc_consistency},
      {{"uc_fixture", CheckTag::KindAxioms, 1, "hand-derived UC inverse of [[1,2],[2,4]]"},
       fam_uc_fixture},
      {{"kind_axioms", CheckTag::KindAxioms, 100,
        "M G M = M and G M G = G per kernel on rank-deficient input"},
       fam_kind_axioms},
      {{"drazin_identities", CheckTag::KindAxioms, 50, "the three Drazin identities"},
       fam_drazin},
      {{"nonsingular_reduction", CheckTag::ExactReduction, 50,
        "every kernel equals the inverse on nonsingular input"},
       fam_nonsingular_reduction},
      {{"sc_exact", CheckTag::ExactReduction, 50,
        "SC kernel equals the inverse on nonsingular input"},
       fam_sc_exact},
      {{"sc_similarity_singular", CheckTag::ScRecorded, 25,
        "SC kernel under similarity on singular input"},
       fam_sc_similarity},
      {{"dual_exact", CheckTag::ExactReduction, 50,
        "dual-block (UC, MP) inverse of well-conditioned 6x6 input"},
       fam_dual_exact},
      {{"triple_exact", CheckTag::ExactReduction, 150,
        "explicit, recursive and folded triple-block inverses of well-conditioned input"},
       fam_triple_exact},
      {{"explicit_vs_recursive", CheckTag::ExplicitVsRecursive, 150,
        "block expressions against the recursive construction"},
       fam_explicit_vs_recursive},
      {{"explicit_vs_recursive_rank_deficient", CheckTag::ExplicitVsRecursive, 50,
        "same comparison with rank-deficient complements"},
       fam_explicit_vs_recursive_rd},
      {{"listing_literal", CheckTag::ExplicitVsRecursive, 50,
        "printed functional listing against the block expressions"},
       fam_listing_literal},
      {{"mixed_invariance_triple", CheckTag::TransformConsistency, 100,
        "(MP, UC, MP) recursive inverse under block transforms"},
       fam_invariance_triple},
      {{"mixed_invariance_triple_unscreened", CheckTag::TransformConsistency, 50,
        "same check on rank dim-2 input without the spectral-gap screen"},
       fam_invariance_triple_unscreened},
      {{"mixed_invariance_dual", CheckTag::TransformConsistency, 100,
        "(UC, MP) dual-block inverse under block transforms"},
       fam_invariance_dual},
      {{"mixed_invariance_sc", CheckTag::ScRecorded, 25,
        "(MP, UC, SC) recursive inverse under block transforms"},
       fam_invariance_sc},
      {{"negative_control", CheckTag::NegativeControl, 100,
        "mismatched transform classes must break invariance"},
       fam_negative_control},
      {{"fold_k2", CheckTag::FoldOrder, 50, "two-set fold against the dual-block inverse"},
       fam_fold_k2},
      {{"fold_k3", CheckTag::FoldOrder, 50,
        "left fold against the recursive triple-block inverse"},
       [](Context& ctx, std::size_t n) { fam_fold_k3(ctx, n, false); }},
      {{"fold_k3_rank_deficient", CheckTag::FoldOrder, 25,
        "same comparison on rank-deficient input"},
       [](Context& ctx, std::size_t n) { fam_fold_k3(ctx, n, true); }},
  };
  return entries;
}

}  // namespace

std::string_view check_name(CheckTag tag) noexcept {
  switch (tag) {
    case CheckTag::ExactReduction:
      return "exact_reduction";
    case CheckTag::ExplicitVsRecursive:
      return "explicit_vs_recursive";
    case CheckTag::TransformConsistency:
      return "transform_consistency";
    case CheckTag::FoldOrder:
      return "fold_order";
    case CheckTag::Penrose:
      return "penrose";
    case CheckTag::KindAxioms:
      return "kind_axioms";
    case CheckTag::NegativeControl:
      return "negative_control";
    case CheckTag::ScRecorded:
      return "sc_recorded";
  }
  return "unknown";
}

void VerificationCase::assert_below(double limit) {
  threshold = limit;
  passed = !errored() && residual <= limit;
}

std::span<const Erratum> listing_errata() { return kErrata; }

Summary tally(std::span<const VerificationCase> cases) {
  Summary s;
  for (const auto& c : cases) {
    ++s.total;
    if (c.errored()) ++s.errored;
    if (c.threshold) {
      ++s.asserted;
      if (c.passed.value_or(false)) {
        ++s.passed;
      } else {
        ++s.failed;
      }
    } else {
      ++s.recorded;
    }
  }
  return s;
}

bool set_threshold(Thresholds& t, std::string_view name, double value) {
  const std::pair<std::string_view, double Thresholds::*> fields[] = {
      {"mp", &Thresholds::mp},
      {"uc", &Thresholds::uc},
      {"uc_fixture", &Thresholds::uc_fixture},
      {"kind_axioms", &Thresholds::kind_axioms},
      {"exact", &Thresholds::exact},
      {"sc_exact", &Thresholds::sc_exact},
      {"sc_similarity", &Thresholds::sc_similarity},
      {"drazin", &Thresholds::drazin},
      {"explicit_vs_recursive", &Thresholds::explicit_vs_recursive},
      {"invariance", &Thresholds::invariance},
      {"negative_floor", &Thresholds::negative_floor},
      {"negative_fraction", &Thresholds::negative_fraction},
      {"fold_k2", &Thresholds::fold_k2},
      {"fold_k3", &Thresholds::fold_k3},
  };
  for (const auto& [n, field] : fields) {
    if (n == name) {
      t.*field = value;
      return true;
    }
  }
  return false;
}

std::vector<std::string> threshold_names() {
  return {"mp",     "uc",     "uc_fixture", "kind_axioms", "exact",
          "sc_exact", "sc_similarity", "drazin", "explicit_vs_recursive",
          "invariance", "negative_floor", "negative_fraction", "fold_k2", "fold_k3"};
}

const std::vector<FamilyInfo>& families() {
  static const std::vector<FamilyInfo> infos = [] {
    std::vector<FamilyInfo> out;
    for (const auto& e : registry()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

VerificationCase check_transform_consistency(const Matrix& M, const BlockSpec& spec,
                                             const TransformSet& t, MixedMethod method) {
  VerificationCase c;
  c.check = CheckTag::TransformConsistency;
  c.spec = spec;
  c.dims = spec.sizes();
  c.method = method_name(method);
  if (t.blocks.size() != spec.count()) {
    throw InputError("transform set and block spec have different block counts");
  }
  for (std::size_t i = 0; i < spec.count(); ++i) {
    if (t.blocks[i].left.rows() != spec[i].size) {
      throw InputError("transform block " + std::to_string(i + 1) +
                       " does not match its block size");
    }
  }
  guarded(c, [&] {
    const Matrix Gl = t.left();
    const Matrix Gr = t.right();
    const Matrix transformed = mixed_inverse(Gl * M * Gr, spec, method).value;
    const Matrix expected = t.right_inv() * mixed_inverse(M, spec, method).value * t.left_inv();
    c.residual = rel_err(transformed, expected);
  });
  return c;
}

VerificationCase check_exact_reduction(const Matrix& M, const BlockSpec& spec,
                                       MixedMethod method) {
  VerificationCase c;
  c.check = CheckTag::ExactReduction;
  c.spec = spec;
  c.dims = spec.sizes();
  c.method = method_name(method);
  guarded(c, [&] {
    const Matrix J = mixed_inverse(M, spec, method).value;
    c.residual = rel_err(J * M, Matrix::Identity(M.rows(), M.cols()));
  });
  return c;
}

VerificationCase check_explicit_vs_recursive(const Block3& b,
                                             std::array<GinvKind, 3> kinds) {
  VerificationCase c;
  c.check = CheckTag::ExplicitVsRecursive;
  const Index sizes[] = {b.m, b.n, b.p};
  c.spec = make_spec(sizes, kinds);
  c.dims = c.spec.sizes();
  c.method = "triple_explicit vs triple_recursive";
  guarded(c, [&] {
    const Matrix ex = triple_block_explicit(b, kinds[0], kinds[1], kinds[2]).value;
    const Matrix rec = triple_block_recursive(b, kinds[0], kinds[1], kinds[2]).value;
    c.residual = rel_err(ex, rec);
  });
  return c;
}

VerificationReport run_suite(const SuiteConfig& config) {
  std::set<std::string> known;
  for (const auto& e : registry()) known.insert(e.info.name);
  for (const auto& f : config.families) {
    if (!known.count(f)) throw InputError("unknown verification family '" + f + "'");
  }
  for (const auto& [f, n] : config.counts) {
    if (!known.count(f)) throw InputError("unknown verification family '" + f + "'");
  }
  const std::set<std::string> selected(config.families.begin(), config.families.end());

  VerificationReport report;
  report.artifact_version = MIXINV_VERSION;
  report.base_seed = config.base_seed;
  report.promote_sc = config.promote_sc;
  report.errata.assign(kErrata, kErrata + std::size(kErrata));

  Context ctx{config, report.cases};
  for (const auto& e : registry()) {
    if (!selected.empty() && !selected.count(e.info.name)) continue;
    const auto it = config.counts.find(e.info.name);
    const std::size_t count = it == config.counts.end() ? e.info.default_count : it->second;
    const std::size_t before = report.cases.size();
    const auto t0 = std::chrono::steady_clock::now();
    e.run(ctx, count);
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    report.timing.push_back({e.info.name, report.cases.size() - before, dt.count()});
  }
  report.summary = tally(report.cases);
  return report;
}

int exit_status(const VerificationReport& report) {
  return report.summary.failed == 0 ? 0 : 1;
}

}  // namespace mixinv
