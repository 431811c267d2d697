#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mixinv/errors.hpp"
#include "mixinv/kernels.hpp"
#include "mixinv/matrix_io.hpp"
#include "mixinv/verify.hpp"

namespace mixinv::cli {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

template <class T>
T parse_number(const std::string& text, const std::string& what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InputError("invalid " + what + " '" + text + "'");
  }
  return value;
}

std::string join_vector(const Vector& v) {
  std::string out;
  char buf[64];
  for (Index i = 0; i < v.size(); ++i) {
    if (i > 0) out.push_back(',');
    std::snprintf(buf, sizeof buf, "%.17g", v(i));
    out += buf;
  }
  return out;
}

void emit_matrix(const Matrix& a, const std::string& path, int precision,
                 std::ostream& out) {
  if (path.empty()) {
    out << format_matrix(a, precision);
  } else {
    write_matrix_file(path, a, precision);
  }
}

struct InvertArgs {
  std::string matrix;
  std::string blocks;
  std::string method = "fold";
  std::string out;
  int precision = 17;
};

int cmd_invert(const InvertArgs& a, std::ostream& out) {
  const BlockSpec spec = parse_blocks(a.blocks);
  const MixedMethod method = parse_method(a.method);
  if (a.precision < 1 || a.precision > 17) {
    throw InputError("--precision must be between 1 and 17");
  }
  const Matrix M = read_matrix_file(a.matrix);
  require_square(M, "matrix");
  spec.require_dimension(M.rows());
  const MixedInverseResult result = mixed_inverse(M, spec, method);
  emit_matrix(result.value, a.out, a.precision, out);
  return kOk;
}

int cmd_scale(const std::string& path, std::ostream& out) {
  const Matrix M = read_matrix_file(path);
  const ScalingDecomposition s = uc_scale(M);
  char buf[64];
  out << "D: " << join_vector(s.D) << "\n";
  out << "E: " << join_vector(s.E) << "\n";
  out << "sweeps: " << s.sweeps << "\n";
  std::snprintf(buf, sizeof buf, "%.17g", s.residual);
  out << "residual: " << buf << "\n";
  return kOk;
}

int cmd_fcf(const std::string& path, const std::string& out_f, const std::string& out_c,
            std::ostream& out) {
  const Matrix M = read_matrix_file(path);
  require_square(M, "matrix");
  const FcfDecomposition d = fcf(M);
  out << "degrees: ";
  for (std::size_t i = 0; i < d.degrees.size(); ++i) {
    out << (i ? "," : "") << d.degrees[i];
  }
  out << "\n";
  if (!out_f.empty()) write_matrix_file(out_f, d.F);
  if (!out_c.empty()) write_matrix_file(out_c, d.C);
  return kOk;
}

struct VerifyArgs {
  std::uint64_t seed = 1;
  std::string families;
  std::string report;
  bool promote_sc = false;
  std::vector<std::string> thresholds;
  std::vector<std::string> counts;
};

std::pair<std::string, std::string> key_value(const std::string& text, const char* flag) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
    throw InputError(std::string(flag) + " expects NAME=VALUE, got '" + text + "'");
  }
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  SuiteConfig config;
  config.base_seed = a.seed;
  config.promote_sc = a.promote_sc;
  if (!a.families.empty()) {
    for (auto& f : split(a.families, ',')) {
      if (f.empty()) throw InputError("empty family name in --families");
      config.families.push_back(f);
    }
  }
  for (const auto& t : a.thresholds) {
    const auto [name, value] = key_value(t, "--threshold");
    if (!set_threshold(config.thresholds, name, parse_number<double>(value, "threshold"))) {
      throw InputError("unknown threshold '" + name + "'");
    }
  }
  for (const auto& c : a.counts) {
    const auto [name, value] = key_value(c, "--count");
    config.counts[name] = parse_number<std::size_t>(value, "count");
  }

  const VerificationReport report = run_suite(config);
  if (!a.report.empty()) {
    try {
      write_report(a.report, report);
    } catch (const Error& e) {
      throw InputError(e.what());
    }
  }
  const Summary& s = report.summary;
  out << "cases: " << s.total << " asserted: " << s.asserted << " passed: " << s.passed
      << " failed: " << s.failed << " recorded: " << s.recorded
      << " errored: " << s.errored << "\n";
  for (const auto& c : report.cases) {
    if (c.threshold && !c.passed.value_or(false)) {
      out << "FAILED " << c.case_id << " residual=" << c.residual
          << " threshold=" << *c.threshold;
      if (c.errored()) out << " error: " << c.error;
      out << "\n";
    }
  }
  out << "content_hash: " << content_hash(report) << "\n";
  return exit_status(report);
}

}  // namespace

BlockSpec parse_blocks(const std::string& text) {
  if (trim(text).empty()) throw InputError("--blocks is empty");
  std::vector<BlockEntry> entries;
  for (const auto& item : split(text, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw InputError("block '" + item + "' must look like SIZE:KIND");
    }
    const std::string size_text = trim(item.substr(0, colon));
    const std::string kind_text = trim(item.substr(colon + 1));
    const auto size = parse_number<long long>(size_text, "block size");
    if (size < 1) throw InputError("block size must be positive, got " + size_text);
    const auto kind = parse_kind(kind_text);
    if (!kind) {
      throw InputError("unknown kind '" + kind_text +
                       "' (expected exact, mp, uc, sc or drazin)");
    }
    entries.push_back({static_cast<Index>(size), *kind});
  }
  return BlockSpec(std::move(entries));
}

MixedMethod parse_method(const std::string& text) {
  if (text == "dual") return MixedMethod::Dual;
  if (text == "explicit") return MixedMethod::TripleExplicit;
  if (text == "recursive") return MixedMethod::TripleRecursive;
  if (text == "fold") return MixedMethod::KFold;
  throw InputError("unknown method '" + text + "' (expected dual, explicit, recursive or fold)");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mixed generalized inverses and their verification suite", "mixinv"};
  app.require_subcommand(1);

  InvertArgs inv;
  auto* invert = app.add_subcommand("invert", "Compute a mixed generalized inverse");
  invert->add_option("--matrix", inv.matrix, "Input matrix file")->required();
  invert->add_option("--blocks", inv.blocks, "Block sizes and kinds, e.g. 3:mp,3:uc,3:mp")
      ->required();
  invert->add_option("--method", inv.method, "dual | explicit | recursive | fold")
      ->capture_default_str();
  invert->add_option("--out", inv.out, "Output file (default: stdout)");
  invert->add_option("--precision", inv.precision, "Significant digits")
      ->capture_default_str();

  std::string scale_matrix;
  auto* scale = app.add_subcommand("scale", "Show the unit-consistent diagonal scaling");
  scale->add_option("--matrix", scale_matrix, "Input matrix file")->required();

  std::string fcf_matrix, fcf_f, fcf_c;
  auto* fcf_cmd = app.add_subcommand("fcf", "Frobenius canonical form");
  fcf_cmd->add_option("--matrix", fcf_matrix, "Input matrix file")->required();
  fcf_cmd->add_option("--out-f", fcf_f, "Write the similarity transform F");
  fcf_cmd->add_option("--out-c", fcf_c, "Write the canonical form C");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Run the verification suite");
  verify->add_option("--seed", ver.seed, "Base seed")->capture_default_str();
  verify->add_option("--families", ver.families, "Comma-separated family names");
  verify->add_option("--report", ver.report, "Write the JSON report here");
  verify->add_flag("--promote-sc", ver.promote_sc, "Assert SC-involved families");
  verify->add_option("--threshold", ver.thresholds, "Override a threshold, NAME=VALUE")
      ->take_all();
  verify->add_option("--count", ver.counts, "Override a family count, FAMILY=N")
      ->take_all();

  std::vector<std::string> tail(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(tail.begin(), tail.end());  // CLI11 consumes from the back
  try {
    app.parse(tail);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*invert) return cmd_invert(inv, out);
    if (*scale) return cmd_scale(scale_matrix, out);
    if (*fcf_cmd) return cmd_fcf(fcf_matrix, fcf_f, fcf_c, out);
    if (*verify) return cmd_verify(ver, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const KernelError& e) {
    err << "error: kernel failed on " << e.subexpression() << ": " << e.cause() << "\n";
    return kFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace mixinv::cli
