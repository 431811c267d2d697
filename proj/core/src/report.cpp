#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "mixinv/errors.hpp"
#include "mixinv/verify.hpp"

namespace mixinv {

namespace {

using nlohmann::json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <class T>
json optional_or_null(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json case_json(const VerificationCase& c) {
  json spec = json::array();
  for (const auto& b : c.spec.blocks()) {
    spec.push_back({{"size", b.size}, {"kind", std::string(kind_name(b.kind))}});
  }
  return {
      {"case_id", c.case_id},
      {"family", c.family},
      {"seed", c.seed},
      {"dims", c.dims},
      {"spec", std::move(spec)},
      {"method", c.method},
      {"check", std::string(check_name(c.check))},
      {"residual", number_or_null(c.residual)},
      {"threshold", optional_or_null(c.threshold)},
      {"passed", optional_or_null(c.passed)},
      {"floor", optional_or_null(c.floor)},
      {"error", c.error},
      {"note", c.note},
  };
}

json content_json(const VerificationReport& r) {
  json cases = json::array();
  for (const auto& c : r.cases) cases.push_back(case_json(c));
  json errata = json::array();
  for (const auto& e : r.errata) {
    errata.push_back({{"listing_location", e.location},
                      {"printed_text", e.printed},
                      {"canonical_text", e.canonical}});
  }
  const Summary& s = r.summary;
  return {
      {"suite_name", r.suite_name},
      {"artifact_version", r.artifact_version},
      {"base_seed", r.base_seed},
      {"promote_sc", r.promote_sc},
      {"summary",
       {{"total", s.total},
        {"asserted", s.asserted},
        {"passed", s.passed},
        {"failed", s.failed},
        {"recorded", s.recorded},
        {"errored", s.errored}}},
      {"errata", std::move(errata)},
      {"cases", std::move(cases)},
  };
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

std::string to_json(const VerificationReport& report, bool include_timing) {
  json doc = content_json(report);
  if (include_timing) {
    doc["content_hash"] = fnv1a_hex(doc.dump(2));
    json timing = json::array();
    for (const auto& t : report.timing) {
      timing.push_back({{"family", t.family}, {"cases", t.cases}, {"seconds", t.seconds}});
    }
    doc["timing"] = std::move(timing);
  }
  return doc.dump(2) + "\n";
}

std::string content_hash(const VerificationReport& report) {
  return fnv1a_hex(content_json(report).dump(2));
}

void write_report(const std::filesystem::path& path, const VerificationReport& report) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open report file '" + path.string() + "' for writing");
  out << to_json(report);
  if (!out) throw Error("failed writing report file '" + path.string() + "'");
}

}  // namespace mixinv
