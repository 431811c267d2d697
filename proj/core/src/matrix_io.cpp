#include "mixinv/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "mixinv/errors.hpp"

namespace mixinv {

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

double parse_entry(std::string_view field, std::size_t line, std::size_t column) {
  std::size_t lead = 0;
  while (lead < field.size() && is_blank(field[lead])) ++lead;
  std::size_t end = field.size();
  while (end > lead && is_blank(field[end - 1])) --end;
  const std::string_view token = field.substr(lead, end - lead);
  if (token.empty()) throw ParseError(line, column, "empty entry");

  // from_chars rejects a leading '+', which plain decimal literals may carry.
  std::string_view digits = token;
  if (digits.front() == '+') digits.remove_prefix(1);

  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec == std::errc::result_out_of_range) {
    throw ParseError(line, column + lead, "value out of range: '" +
                                              std::string(token) + "'");
  }
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw ParseError(line, column + lead,
                     "not a decimal number: '" + std::string(token) + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError(line, column + lead, "non-finite entry");
  }
  return value;
}

}  // namespace

Matrix parse_matrix(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::size_t last_nonblank_line = 0;
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::size_t stop = nl == std::string_view::npos ? text.size() : nl;
    ++line_no;
    std::string_view line = text.substr(pos, stop - pos);
    bool blank = true;
    for (char c : line) blank = blank && is_blank(c);
    if (!blank) last_nonblank_line = line_no;
    lines.emplace_back(line_no, line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (last_nonblank_line == 0) throw ParseError(1, 1, "no matrix rows");

  for (const auto& [number, line] : lines) {
    if (number > last_nonblank_line) break;
    bool blank = true;
    for (char c : line) blank = blank && is_blank(c);
    if (blank) throw ParseError(number, 1, "blank line inside matrix");

    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::size_t stop = comma == std::string_view::npos ? line.size() : comma;
      row.push_back(parse_entry(line.substr(start, stop - start), number, start + 1));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(number, 1,
                       "row has " + std::to_string(row.size()) +
                           " entries, expected " +
                           std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }

  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < out.rows(); ++i) {
    for (Index j = 0; j < out.cols(); ++j) {
      out(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return out;
}

std::string format_matrix(const Matrix& a, int precision) {
  if (precision < 1 || precision > 17) {
    throw InputError("precision must be between 1 and 17, got " +
                     std::to_string(precision));
  }
  std::string out;
  char buf[64];
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (j > 0) out.push_back(',');
      const int len = std::snprintf(buf, sizeof buf, "%.*g", precision, a(i, j));
      out.append(buf, static_cast<std::size_t>(len));
    }
    out.push_back('\n');
  }
  return out;
}

Matrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open matrix file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_matrix(buffer.str());
}

void write_matrix_file(const std::filesystem::path& path, const Matrix& a,
                       int precision) {
  const std::string text = format_matrix(a, precision);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace mixinv
