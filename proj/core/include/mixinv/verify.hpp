#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mixinv/matrix.hpp"
#include "mixinv/mixed_block.hpp"
#include "mixinv/random.hpp"

namespace mixinv {

enum class CheckTag {
  ExactReduction,
  ExplicitVsRecursive,
  TransformConsistency,
  FoldOrder,
  Penrose,
  KindAxioms,
  NegativeControl,
  ScRecorded,
};

std::string_view check_name(CheckTag tag) noexcept;

/// One measured residual. A case with a threshold is asserted and passes
/// when residual <= threshold; a case without one is recorded only.
/// Negative controls instead carry a floor the residual should exceed.
struct VerificationCase {
  std::string case_id;
  std::string family;
  std::uint64_t seed = 0;
  std::vector<Index> dims;
  BlockSpec spec;
  std::string method;
  CheckTag check = CheckTag::ExactReduction;
  double residual = 0.0;  ///< NaN when the case errored
  std::optional<double> threshold;
  std::optional<bool> passed;
  std::optional<double> floor;
  std::string error;  ///< empty unless a kernel failed
  std::string note;

  bool errored() const noexcept { return !error.empty(); }
  /// Sets `threshold` and derives `passed`; errored cases fail.
  void assert_below(double limit);
};

/// A place where the printed functional listing disagrees with the
/// superscripted block expressions.
struct Erratum {
  std::string location;
  std::string printed;
  std::string canonical;
};

/// Every such place, one entry per occurrence, in listing order.
std::span<const Erratum> listing_errata();

struct Summary {
  std::size_t total = 0;
  std::size_t asserted = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t recorded = 0;
  std::size_t errored = 0;

  friend bool operator==(const Summary&, const Summary&) = default;
};

Summary tally(std::span<const VerificationCase> cases);

struct FamilyTiming {
  std::string family;
  std::size_t cases = 0;
  double seconds = 0.0;
};

struct VerificationReport {
  std::string suite_name = "mixinv-verification";
  std::string artifact_version;
  std::uint64_t base_seed = 0;
  bool promote_sc = false;
  std::vector<VerificationCase> cases;
  std::vector<Erratum> errata;
  Summary summary;
  std::vector<FamilyTiming> timing;  ///< excluded from content comparisons
};

struct Thresholds {
  double mp = 1e-10;
  double uc = 1e-8;
  double uc_fixture = 1e-12;
  double kind_axioms = 1e-8;
  double exact = 1e-8;
  double sc_exact = 1e-7;
  double sc_similarity = 1e-7;
  double drazin = 1e-8;
  double explicit_vs_recursive = 1e-8;
  double invariance = 1e-7;
  double negative_floor = 1e-2;
  double negative_fraction = 0.95;
  double fold_k2 = 1e-12;
  double fold_k3 = 1e-8;
};

/// Overrides one threshold by name; false if the name is unknown.
bool set_threshold(Thresholds& t, std::string_view name, double value);
std::vector<std::string> threshold_names();

struct SuiteConfig {
  std::uint64_t base_seed = 1;
  /// Families to run; empty means all.
  std::vector<std::string> families;
  /// Per-family case counts overriding the defaults.
  std::map<std::string, std::size_t> counts;
  /// Assert SC-involved families instead of only recording them.
  bool promote_sc = false;
  Thresholds thresholds;
};

struct FamilyInfo {
  std::string name;
  CheckTag check;
  std::size_t default_count;
  std::string description;
};

const std::vector<FamilyInfo>& families();

/// residual = rel_err(J(G_l M G_r), G_r^-1 J(M) G_l^-1).
VerificationCase check_transform_consistency(const Matrix& M, const BlockSpec& spec,
                                             const TransformSet& t,
                                             MixedMethod method);

/// residual = rel_err(J(M) M, I).
VerificationCase check_exact_reduction(const Matrix& M, const BlockSpec& spec,
                                       MixedMethod method);

/// residual = rel_err(explicit, recursive).
VerificationCase check_explicit_vs_recursive(const Block3& b,
                                             std::array<GinvKind, 3> kinds);

/// Runs the selected families. Case i gets seed base_seed + i.
/// Throws InputError on an unknown family name.
VerificationReport run_suite(const SuiteConfig& config);

/// 0 when every asserted case passed, 1 otherwise.
int exit_status(const VerificationReport& report);

/// Canonical serialization: sorted keys, two-space indent.
std::string to_json(const VerificationReport& report, bool include_timing = true);

/// FNV-1a over the serialization without timing, as 16 hex digits.
std::string content_hash(const VerificationReport& report);

/// Throws Error if the file cannot be written.
void write_report(const std::filesystem::path& path, const VerificationReport& report);

}  // namespace mixinv
