#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mixinv/matrix.hpp"

namespace mixinv {

// Text format: one row per line, entries separated by commas, no header.
// Blank trailing lines are ignored; every row must have the same width and
// every entry must be a finite decimal literal. Spaces and tabs around an
// entry are allowed.

/// Throws ParseError with a 1-based line/column on malformed text.
Matrix parse_matrix(std::string_view text);

/// Writes `precision` significant digits per entry (17 round-trips exactly).
std::string format_matrix(const Matrix& a, int precision = 17);

/// Throws InputError if the file cannot be read, ParseError if it is malformed.
Matrix read_matrix_file(const std::filesystem::path& path);

void write_matrix_file(const std::filesystem::path& path, const Matrix& a,
                       int precision = 17);

}  // namespace mixinv
