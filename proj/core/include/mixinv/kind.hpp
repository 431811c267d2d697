#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace mixinv {

/// Which generalized inverse a block uses.
enum class GinvKind {
  Exact,
  MoorePenrose,
  UnitConsistent,
  SimilarityConsistent,
  Drazin,
};

/// Short lowercase name used by the CLI and the report ("mp", "uc", ...).
std::string_view kind_name(GinvKind kind) noexcept;

/// Case-insensitive inverse of kind_name.
std::optional<GinvKind> parse_kind(std::string_view name);

}  // namespace mixinv
