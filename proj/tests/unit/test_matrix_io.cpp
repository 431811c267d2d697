#include <gtest/gtest.h>

#include <filesystem>

#include "mixinv/errors.hpp"
#include "mixinv/matrix_io.hpp"
#include "mixinv/random.hpp"

using namespace mixinv;

namespace {

void expect_parse_error(const char* text, std::size_t line, std::size_t column) {
  try {
    parse_matrix(text);
    ADD_FAILURE() << "no error for: " << text;
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), line) << text;
    EXPECT_EQ(e.column(), column) << text;
  }
}

}  // namespace

TEST(Parse, Basic) {
  const Matrix a = parse_matrix("1, 2\n3,-4.5e0\n");
  ASSERT_EQ(a.rows(), 2);
  ASSERT_EQ(a.cols(), 2);
  EXPECT_EQ(a(0, 1), 2.0);
  EXPECT_EQ(a(1, 1), -4.5);
  EXPECT_EQ(parse_matrix("+7").value(), 7.0);
  EXPECT_EQ(parse_matrix("1\t,2\r\n\n\n").cols(), 2);
}

TEST(Parse, ErrorsCarryPosition) {
  expect_parse_error("", 1, 1);
  expect_parse_error("1,2\n3,x", 2, 3);
  expect_parse_error("1,2\n3", 2, 1);
  expect_parse_error("1,,2", 1, 3);
  expect_parse_error("1\n\n2", 2, 1);
  expect_parse_error("nan", 1, 1);
  expect_parse_error("1e999", 1, 1);
  expect_parse_error("1, 2abc", 1, 4);
}

TEST(Format, RoundTripsExactly) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix a = rng.gaussian(1 + trial % 4, 1 + trial % 3);
    a *= std::pow(10.0, rng.uniform(-300.0, 300.0));
    const Matrix b = parse_matrix(format_matrix(a));
    EXPECT_EQ(a, b);
  }
  EXPECT_EQ(format_matrix(Matrix::Identity(2, 2)), "1,0\n0,1\n");
  EXPECT_THROW(format_matrix(Matrix::Zero(1, 1), 0), InputError);
}

TEST(File, WriteRead) {
  const auto path = std::filesystem::temp_directory_path() / "mixinv_io_test.csv";
  const Matrix a = gen_matrix(9, 4, 3, 1.0);
  write_matrix_file(path, a);
  EXPECT_EQ(read_matrix_file(path), a);
  std::filesystem::remove(path);
  EXPECT_THROW(read_matrix_file(path), InputError);
}
