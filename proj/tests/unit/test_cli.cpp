#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "mixinv/errors.hpp"
#include "mixinv/kernels.hpp"
#include "mixinv/matrix_io.hpp"
#include "mixinv/mixed_block.hpp"
#include "mixinv/random.hpp"

using namespace mixinv;

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "mixinv");
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mixinv_cli_" + std::string(::testing::UnitTest::GetInstance()
                                            ->current_test_info()
                                            ->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST(ParseBlocks, Forms) {
  const BlockSpec s = cli::parse_blocks("3:mp, 2:UC,1:exact");
  EXPECT_EQ(s.count(), 3u);
  EXPECT_EQ(s[1].kind, GinvKind::UnitConsistent);
  EXPECT_EQ(s[2].size, 1);
  EXPECT_THROW(cli::parse_blocks(""), InputError);
  EXPECT_THROW(cli::parse_blocks("3"), InputError);
  EXPECT_THROW(cli::parse_blocks("0:mp"), InputError);
  EXPECT_THROW(cli::parse_blocks("2:lu"), InputError);
  EXPECT_THROW(cli::parse_method("fast"), InputError);
  EXPECT_EQ(cli::parse_method("recursive"), MixedMethod::TripleRecursive);
}

TEST_F(Cli, InvertIdentity) {
  const auto m = write("m.csv", "1,0,0\n0,1,0\n0,0,1\n");
  const Outcome r = run({"invert", "--matrix", m, "--blocks", "1:mp,1:uc,1:mp"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(parse_matrix(r.out), Matrix::Identity(3, 3));
}

TEST_F(Cli, InvertUcFixture) {
  const auto m = write("m.csv", "1,2\n2,4\n");
  const Outcome r = run({"invert", "--matrix", m, "--blocks", "2:uc"});
  ASSERT_EQ(r.status, 0) << r.err;
  const Matrix g = parse_matrix(r.out);
  Matrix ref(2, 2);
  ref << 0.25, 0.125, 0.125, 0.0625;
  EXPECT_LE(rel_err(g, ref), 1e-12);
}

TEST_F(Cli, InvertMatchesLibraryBitwise) {
  const Matrix a = gen_matrix(77, 7, 5, 2.0);
  const auto m = path("m.csv");
  write_matrix_file(m, a);
  const Outcome r = run({"invert", "--matrix", m, "--blocks", "2:mp,3:uc,2:mp", "--method",
                     "recursive", "--out", path("j.csv")});
  ASSERT_EQ(r.status, 0) << r.err;
  const BlockSpec spec = cli::parse_blocks("2:mp,3:uc,2:mp");
  const Matrix lib =
      mixed_inverse(read_matrix_file(m), spec, MixedMethod::TripleRecursive).value;
  EXPECT_EQ(read_matrix_file(path("j.csv")), lib);
}

TEST_F(Cli, InputErrorsExitTwo) {
  const auto m = write("m.csv", "1,0\n0,1\n");
  EXPECT_EQ(run({"invert", "--matrix", m, "--blocks", "1:mp,2:mp"}).status, 2);
  EXPECT_EQ(run({"invert", "--matrix", m, "--blocks", "2:xx"}).status, 2);
  EXPECT_EQ(run({"invert", "--matrix", path("missing.csv"), "--blocks", "2:mp"}).status, 2);
  EXPECT_EQ(run({"invert", "--matrix", m, "--blocks", "1:mp,1:mp", "--method", "explicit"})
                .status,
            2);
  EXPECT_EQ(run({"invert", "--matrix", m}).status, 2);
  EXPECT_EQ(run({"invert", "--matrix", m, "--blocks", "2:mp", "--bogus"}).status, 2);
  EXPECT_EQ(run({"frobnicate"}).status, 2);
  const auto bad = write("bad.csv", "1,2\n3,q\n");
  const Outcome r = run({"invert", "--matrix", bad, "--blocks", "2:mp"});
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("line 2, column 3"), std::string::npos) << r.err;
}

TEST_F(Cli, KernelFailureExitsOne) {
  const auto m = write("m.csv", "0,0\n0,1\n");
  const Outcome r = run({"invert", "--matrix", m, "--blocks", "1:exact,1:exact"});
  EXPECT_EQ(r.status, 1);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(Cli, Scale) {
  const auto m = write("m.csv", "1,2\n2,4\n");
  const Outcome r = run({"scale", "--matrix", m});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out.rfind("D: 1,0.5\nE: 1,0.5\n", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("sweeps: "), std::string::npos);
}

TEST_F(Cli, Fcf) {
  const auto m = write("m.csv", "1,0\n0,2\n");
  const Outcome r = run({"fcf", "--matrix", m, "--out-c", path("c.csv")});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out, "degrees: 2\n");
  Matrix ref(2, 2);
  ref << 0, -2, 1, 3;
  EXPECT_LE(rel_err(read_matrix_file(path("c.csv")), ref), 1e-12);
  EXPECT_EQ(run({"fcf", "--matrix", write("r.csv", "1,2,3\n4,5,6\n")}).status, 2);
}

TEST_F(Cli, VerifySubset) {
  const Outcome r = run({"verify", "--families", "mp_penrose,uc_fixture", "--count",
                     "mp_penrose=5", "--report", path("r.json")});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("cases: 6 asserted: 6 passed: 6"), std::string::npos) << r.out;
  EXPECT_TRUE(fs::exists(path("r.json")));
}

TEST_F(Cli, VerifySabotagedNegativeControlExitsOne) {
  const Outcome r = run({"verify", "--families", "negative_control", "--count",
                     "negative_control=10", "--threshold", "negative_floor=1e6"});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("FAILED negative_control/aggregate"), std::string::npos) << r.out;
}

TEST_F(Cli, VerifyBadArguments) {
  EXPECT_EQ(run({"verify", "--families", "nope"}).status, 2);
  EXPECT_EQ(run({"verify", "--threshold", "bogus=1"}).status, 2);
  EXPECT_EQ(run({"verify", "--threshold", "mp"}).status, 2);
  EXPECT_EQ(run({"verify", "--count", "mp_penrose=x"}).status, 2);
  EXPECT_EQ(run({"verify", "--families", "uc_fixture", "--report",
                 "/nonexistent-dir/x/r.json"})
                .status,
            2);
}

TEST(CliHelp, ExitsZero) { EXPECT_EQ(run({"--help"}).status, 0); }
