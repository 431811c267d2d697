#pragma once

#include <functional>
#include <string_view>

#include "mixinv/matrix.hpp"

namespace mixinv {

/// A generalized-inverse operator on square matrices: either a single kernel
/// or a composite mixed inverse standing in for a merged set of blocks.
using InverseOp = std::function<Matrix(const Matrix&)>;

/// The kernel for one kind as an operator.
InverseOp kernel_op(GinvKind kind);

enum class MixedMethod { Dual, TripleExplicit, TripleRecursive, KFold };

std::string_view method_name(MixedMethod method) noexcept;

struct MixedInverseResult {
  Matrix value;
  MixedMethod method = MixedMethod::Dual;
  BlockSpec spec;
};

/// Two-block mixed inverse over the partition [W X; Y Z]:
///
///     [ (W - X Z^-b Y)^-a          -W^-a X (Z - Y W^-a X)^-b ]
///     [ -Z^-b Y (W - X Z^-b Y)^-a   (Z - Y W^-a X)^-b         ]
///
/// with ^-a from `invA` and ^-b from `invB`. Kernel failures surface as
/// KernelError naming the failing argument.
Matrix dual_block_formula(const Block2& b, const InverseOp& invA,
                          const InverseOp& invB);

MixedInverseResult dual_block_inverse(const Block2& b, GinvKind kindA,
                                      GinvKind kindB);

/// The nine unsimplified block expressions of the three-block mixed inverse
/// with ^-a, ^-b, ^-c taken from the three operators.
Matrix triple_block_formula(const Block3& b, const InverseOp& invA,
                            const InverseOp& invB, const InverseOp& invC);

MixedInverseResult triple_block_explicit(const Block3& b, GinvKind kindA,
                                         GinvKind kindB, GinvKind kindC);

/// Three-block mixed inverse built from two-block solutions: the trailing
/// [V W; Y Z] set is inverted by the (kindB, kindC) dual-block operator,
/// which is then used as ^-b in the dual-block form against R.
MixedInverseResult triple_block_recursive(const Block3& b, GinvKind kindA,
                                          GinvKind kindB, GinvKind kindC);

/// Operator for a contiguous run of blocks, folded left to right: the first
/// two sets are merged with the dual-block form, the merged set is then
/// paired with the third, and so on.
InverseOp fold_op(const BlockSpec& spec);

/// k = 1 applies the kernel, k = 2 is the dual-block inverse, k >= 3 folds.
MixedInverseResult k_block_inverse(const Matrix& M, const BlockSpec& spec);

/// Dispatch on method; Dual needs 2 blocks, the triple methods need 3.
MixedInverseResult mixed_inverse(const Matrix& M, const BlockSpec& spec,
                                 MixedMethod method);

/// The functional listing evaluated literally as printed, with every bare
/// `Inverse[...]` taken from `generic` and every misplaced kind kept as
/// printed. Exists only to measure how far the printed listing drifts from
/// the block expressions; see listing_errata().
Matrix triple_block_listing(const Block3& b, GinvKind kindA, GinvKind kindB,
                            GinvKind kindC, GinvKind generic);

}  // namespace mixinv
