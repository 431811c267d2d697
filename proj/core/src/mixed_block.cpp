#include "mixinv/mixed_block.hpp"

#include <string>

#include "mixinv/errors.hpp"
#include "mixinv/kernels.hpp"

namespace mixinv {

namespace {

// Runs one inverse and tags any failure with the argument it was given.
Matrix invoke(const InverseOp& op, const Matrix& arg, const std::string& name) {
  try {
    return op(arg);
  } catch (const KernelError& e) {
    throw KernelError(name + " / " + e.subexpression(), e.cause());
  } catch (const Error& e) {
    throw KernelError(name, e.what());
  }
}

struct DualLabels {
  std::string first = "W";
  std::string second = "Z";
};

Matrix dual_formula(const Block2& b, const InverseOp& invA, const InverseOp& invB,
                    const DualLabels& labels) {
  const Matrix Wa = invoke(invA, b.W, labels.first);
  const Matrix Zb = invoke(invB, b.Z, labels.second);
  const Matrix w_side = b.W - b.X * Zb * b.Y;
  const Matrix z_side = b.Z - b.Y * Wa * b.X;
  const Matrix w_side_a = invoke(invA, w_side, labels.first + "-side complement");
  const Matrix z_side_b = invoke(invB, z_side, labels.second + "-side complement");

  Block2 out;
  out.m = b.m;
  out.n = b.n;
  out.W = w_side_a;
  out.X = -Wa * b.X * z_side_b;
  out.Y = -Zb * b.Y * w_side_a;
  out.Z = z_side_b;
  return assemble2(out);
}

Matrix hcat(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

Matrix vcat(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() + b.rows(), a.cols());
  out << a, b;
  return out;
}

BlockSpec spec_of(std::initializer_list<std::pair<Index, GinvKind>> blocks) {
  std::vector<BlockEntry> entries;
  for (const auto& [size, kind] : blocks) entries.push_back({size, kind});
  return BlockSpec(std::move(entries));
}

}  // namespace

InverseOp kernel_op(GinvKind kind) {
  return [kind](const Matrix& a) { return apply_kind(kind, a); };
}

std::string_view method_name(MixedMethod method) noexcept {
  switch (method) {
    case MixedMethod::Dual:
      return "dual";
    case MixedMethod::TripleExplicit:
      return "triple_explicit";
    case MixedMethod::TripleRecursive:
      return "triple_recursive";
    case MixedMethod::KFold:
      return "k_fold";
  }
  return "unknown";
}

Matrix dual_block_formula(const Block2& b, const InverseOp& invA,
                          const InverseOp& invB) {
  return dual_formula(b, invA, invB, DualLabels{});
}

MixedInverseResult dual_block_inverse(const Block2& b, GinvKind kindA, GinvKind kindB) {
  Matrix value = dual_block_formula(b, kernel_op(kindA), kernel_op(kindB));
  return {std::move(value), MixedMethod::Dual, spec_of({{b.m, kindA}, {b.n, kindB}})};
}

Matrix triple_block_formula(const Block3& b, const InverseOp& invA,
                            const InverseOp& invB, const InverseOp& invC) {
  const auto& [R, S, T, U, V, W, X, Y, Z, m, n, p] = b;
  (void)m, (void)n, (void)p;

  // The nine blocks are written out unsimplified; only the three inverses
  // and their arguments are bound to names.
  const Matrix Ra = invoke(invA, R, "R");
  const Matrix b_arg = -U * Ra * S + V;
  const Matrix Pb = invoke(invB, b_arg, "(-U R^-a S + V)");
  const Matrix UT = -U * Ra * T + W;  // (-U R^-a T + W)
  const Matrix XS = -X * Ra * S + Y;  // (-X R^-a S + Y)
  const Matrix c_arg = -XS * Pb * UT - X * Ra * T + Z;
  const Matrix Pc = invoke(invC, c_arg, "(-(-X R^-a S + Y)(-U R^-a S + V)^-b(-U R^-a T + W) - X R^-a T + Z)");

  const Matrix J11 =
      ((Ra * S * (Pb + Pb * UT * Pc * XS * Pb) - Ra * T * Pc * XS * Pb) * U +
       (-Ra * S * Pb * UT * Pc + Ra * T * Pc) * X) * Ra + Ra;
  const Matrix J12 = -Ra * S * (Pb + Pb * UT * Pc * XS * Pb) + Ra * T * Pc * XS * Pb;
  const Matrix J13 = Ra * S * Pb * UT * Pc - Ra * T * Pc;
  const Matrix J21 = -((Pb + Pb * UT * Pc * XS * Pb) * U - Pb * UT * Pc * X) * Ra;
  const Matrix J22 = Pb + Pb * UT * Pc * XS * Pb;
  const Matrix J23 = -Pb * UT * Pc;
  const Matrix J31 = -(-Pc * XS * Pb * U + Pc * X) * Ra;
  const Matrix J32 = -Pc * XS * Pb;
  const Matrix J33 = Pc;

  return assemble3(Block3{J11, J12, J13, J21, J22, J23, J31, J32, J33,
                          b.m, b.n, b.p});
}

MixedInverseResult triple_block_explicit(const Block3& b, GinvKind kindA,
                                         GinvKind kindB, GinvKind kindC) {
  Matrix value =
      triple_block_formula(b, kernel_op(kindA), kernel_op(kindB), kernel_op(kindC));
  return {std::move(value), MixedMethod::TripleExplicit,
          spec_of({{b.m, kindA}, {b.n, kindB}, {b.p, kindC}})};
}

MixedInverseResult triple_block_recursive(const Block3& b, GinvKind kindA,
                                          GinvKind kindB, GinvKind kindC) {
  const Index n = b.n;
  const Index p = b.p;
  const InverseOp invB = kernel_op(kindB);
  const InverseOp invC = kernel_op(kindC);
  // The trailing two sets act as one set whose inverse is their own
  // dual-block mixed inverse, whatever matrix it is handed.
  const InverseOp merged = [invB, invC, n, p](const Matrix& arg) {
    return dual_formula(split2(arg, n, p), invB, invC, DualLabels{"V", "Z"});
  };

  Block2 outer;
  outer.m = b.m;
  outer.n = n + p;
  outer.W = b.R;
  outer.X = hcat(b.S, b.T);
  outer.Y = vcat(b.U, b.X);
  outer.Z = vcat(hcat(b.V, b.W), hcat(b.Y, b.Z));
  Matrix value = dual_formula(outer, kernel_op(kindA), merged, DualLabels{"R", "[V W; Y Z]"});
  return {std::move(value), MixedMethod::TripleRecursive,
          spec_of({{b.m, kindA}, {b.n, kindB}, {b.p, kindC}})};
}

InverseOp fold_op(const BlockSpec& spec) {
  if (spec.count() == 0) throw InputError("block spec is empty");
  InverseOp op = kernel_op(spec[0].kind);
  Index merged = spec[0].size;
  for (std::size_t i = 1; i < spec.count(); ++i) {
    const Index size = spec[i].size;
    const std::string left = i == 1 ? "set 1" : "sets 1-" + std::to_string(i);
    const std::string right = "set " + std::to_string(i + 1);
    op = [left_op = op, right_op = kernel_op(spec[i].kind), merged, size, left,
          right](const Matrix& arg) {
      return dual_formula(split2(arg, merged, size), left_op, right_op,
                          DualLabels{left, right});
    };
    merged += size;
  }
  return op;
}

MixedInverseResult k_block_inverse(const Matrix& M, const BlockSpec& spec) {
  require_square(M, "matrix");
  require_finite(M, "matrix");
  spec.require_dimension(M.rows());
  Matrix value = spec.count() == 1 ? apply_kind(spec[0].kind, M) : fold_op(spec)(M);
  return {std::move(value), MixedMethod::KFold, spec};
}

MixedInverseResult mixed_inverse(const Matrix& M, const BlockSpec& spec,
                                 MixedMethod method) {
  require_square(M, "matrix");
  require_finite(M, "matrix");
  spec.require_dimension(M.rows());
  const auto need = [&](std::size_t k) {
    if (spec.count() != k) {
      throw InputError("method " + std::string(method_name(method)) + " needs " +
                       std::to_string(k) + " blocks, got " +
                       std::to_string(spec.count()));
    }
  };
  switch (method) {
    case MixedMethod::Dual:
      need(2);
      return dual_block_inverse(split2(M, spec[0].size, spec[1].size), spec[0].kind,
                                spec[1].kind);
    case MixedMethod::TripleExplicit:
      need(3);
      return triple_block_explicit(split3(M, spec[0].size, spec[1].size, spec[2].size),
                                   spec[0].kind, spec[1].kind, spec[2].kind);
    case MixedMethod::TripleRecursive:
      need(3);
      return triple_block_recursive(split3(M, spec[0].size, spec[1].size, spec[2].size),
                                    spec[0].kind, spec[1].kind, spec[2].kind);
    case MixedMethod::KFold:
      return k_block_inverse(M, spec);
  }
  throw InputError("unknown method");
}

Matrix triple_block_listing(const Block3& b, GinvKind kindA, GinvKind kindB,
                            GinvKind kindC, GinvKind generic) {
  const auto& [R, S, T, U, V, W, X, Y, Z, m, n, p] = b;
  (void)m, (void)n, (void)p;
  const InverseOp InvA = kernel_op(kindA);
  const InverseOp InvB = kernel_op(kindB);
  const InverseOp InvC = kernel_op(kindC);
  const InverseOp Inverse = kernel_op(generic);

  const Matrix Ra = invoke(InvA, R, "R");
  const Matrix ub = -U * Ra * S + V;
  const Matrix uw = -U * Ra * T + W;
  const Matrix xy = -X * Ra * S + Y;
  const Matrix Bub = invoke(InvB, ub, "InvB[-U*InvA[R]*S+V]");
  const Matrix cc = -xy * Bub * uw - X * Ra * T + Z;

  const Matrix Gub = invoke(Inverse, ub, "Inverse[-U*InvA[R]*S+V]");
  const Matrix Cub = invoke(InvC, ub, "InvC[-U*InvA[R]*S+V]");
  const Matrix Ccc = invoke(InvC, cc, "InvC[...]");
  const Matrix Gcc = invoke(Inverse, cc, "Inverse[...]");
  // Mi23 hands InvC an argument that itself contains Inverse[...].
  const Matrix cc23 = -xy * Gub * uw - X * Ra * T + Z;
  const Matrix Ccc23 = invoke(InvC, cc23, "InvC[... Inverse[-U*InvA[R]*S+V] ...]");

  const Matrix Mi11 =
      ((Ra * S * (Bub + Gub * uw * Gcc * xy * Bub) - Ra * T * Ccc * xy * Bub) * U +
       (-Ra * S * Bub * uw * Gcc + Ra * T * Ccc) * X) * Ra + Ra;
  const Matrix Mi12 = -Ra * S * (Bub + Bub * uw * Ccc * xy * Bub) + Ra * T * Ccc * xy * Bub;
  const Matrix Mi13 = Ra * S * Bub * uw * Gcc - Ra * T * Gcc;
  const Matrix Mi21 = -((Gub + Bub * uw * Ccc * xy * Bub) * U - Bub * uw * Ccc * X) * Ra;
  const Matrix Mi22 = Bub + Bub * uw * Ccc * xy * Bub;
  const Matrix Mi23 = -Bub * uw * Ccc23;
  const Matrix Mi31 = -(-Ccc * xy * Cub * U + Gcc * X) * Ra;
  const Matrix Mi32 = -Gcc * xy * Bub;
  const Matrix Mi33 = Gcc;

  return assemble3(Block3{Mi11, Mi12, Mi13, Mi21, Mi22, Mi23, Mi31, Mi32, Mi33,
                          b.m, b.n, b.p});
}

}  // namespace mixinv
