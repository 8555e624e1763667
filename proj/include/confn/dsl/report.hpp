#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "confn/certificate.hpp"
#include "confn/core.hpp"
#include "confn/descriptor.hpp"

namespace confn::dsl {

struct AssertionResult {
  std::string statement;
  int line = 0;
  bool passed = false;
  std::string detail;
  friend bool operator==(const AssertionResult&, const AssertionResult&) = default;
};

struct OracleCheck {
  bool ran = false;
  bool ok = true;
  int radius = 0;
  std::vector<std::int64_t> refutedAt;
  std::vector<std::int64_t> clearAt;
  std::string note;
  friend bool operator==(const OracleCheck&, const OracleCheck&) = default;
};

struct VarietyReport {
  std::string name;
  std::string constructor;
  std::int64_t dimension = 0;
  std::int64_t picardRank = 0;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  bool exact = false;
  std::vector<Certificate> certificates;
  std::vector<std::string> advisories;
  Json provenance;
  std::vector<AssertionResult> assertions;
  bool verified = false;
  std::string verification;
  OracleCheck oracle;
  friend bool operator==(const VarietyReport&, const VarietyReport&) = default;
};

struct ErrorEntry {
  int line = 0;
  int col = 0;
  std::string category;
  std::string message;
  std::string hint;
  friend bool operator==(const ErrorEntry&, const ErrorEntry&) = default;
};

struct Report {
  std::string version = "1";
  std::vector<VarietyReport> varieties;
  std::vector<ErrorEntry> errors;
  std::optional<std::string> generatedAt;
  friend bool operator==(const Report&, const Report&) = default;

  bool allAssertionsPassed() const {
    for (const auto& v : varieties)
      for (const auto& a : v.assertions)
        if (!a.passed) return false;
    return true;
  }
  bool allVerified() const {
    for (const auto& v : varieties)
      if (!v.verified || !v.oracle.ok) return false;
    return true;
  }
};

inline Json provenanceJson(const VarietyDescriptor& d) {
  Json j;
  j["constructor"] = d.provenance.constructor;
  Json params = Json::object();
  for (const auto& [k, v] : d.provenance.parameters) params[k] = v;
  j["parameters"] = params;
  if (const auto& tr = d.provenance.construction) {
    Json c;
    c["kind"] = kindName(tr->kind);
    c["parents"] = Json::array();
    for (const auto& p : tr->parents) c["parents"].push_back(provenanceJson(*p));
    if (tr->degree) c["degree"] = tr->degree;
    if (tr->divisor) c["divisor"] = tr->divisor->str(tr->parents.at(0)->lattice);
    c["assertions"] = Json::array();
    for (const auto& a : tr->assertions) c["assertions"].push_back({{"name", a.name}, {"citation", a.citation}});
    j["construction"] = c;
  }
  j["notes"] = d.provenance.notes;
  j["fundamental_group_note"] = d.provenance.fundamentalGroupNote;
  return j;
}

inline Json toJson(const VarietyReport& v) {
  Json j;
  j["name"] = v.name;
  j["constructor"] = v.constructor;
  j["dimension"] = v.dimension;
  j["picard_rank"] = v.picardRank;
  j["interval"] = {{"lo", v.lo}, {"hi", v.hi}, {"exact", v.exact}};
  j["certificates"] = Json::array();
  for (const auto& c : v.certificates) j["certificates"].push_back(c.toJson());
  j["advisories"] = v.advisories;
  j["provenance"] = v.provenance;
  j["assertions"] = Json::array();
  for (const auto& a : v.assertions)
    j["assertions"].push_back({{"statement", a.statement}, {"line", a.line}, {"passed", a.passed}, {"detail", a.detail}});
  j["verified"] = v.verified;
  j["verification"] = v.verification;
  j["oracle"] = {{"ran", v.oracle.ran},         {"ok", v.oracle.ok},           {"radius", v.oracle.radius},
                 {"refuted_at", v.oracle.refutedAt}, {"clear_at", v.oracle.clearAt}, {"note", v.oracle.note}};
  return j;
}

inline Json toJson(const Report& r) {
  Json j;
  j["version"] = r.version;
  if (r.generatedAt) j["generated_at"] = *r.generatedAt;
  j["varieties"] = Json::array();
  for (const auto& v : r.varieties) j["varieties"].push_back(toJson(v));
  j["errors"] = Json::array();
  for (const auto& e : r.errors)
    j["errors"].push_back(
        {{"line", e.line}, {"col", e.col}, {"category", e.category}, {"message", e.message}, {"hint", e.hint}});
  return j;
}

inline Report reportFromJson(const Json& j) {
  Report r;
  r.version = j.at("version").get<std::string>();
  if (r.version != "1") throw Error("unsupported report version '" + r.version + "'");
  if (j.contains("generated_at")) r.generatedAt = j.at("generated_at").get<std::string>();
  for (const auto& vj : j.at("varieties")) {
    VarietyReport v;
    v.name = vj.at("name").get<std::string>();
    v.constructor = vj.at("constructor").get<std::string>();
    v.dimension = vj.at("dimension").get<std::int64_t>();
    v.picardRank = vj.at("picard_rank").get<std::int64_t>();
    v.lo = vj.at("interval").at("lo").get<std::int64_t>();
    v.hi = vj.at("interval").at("hi").get<std::int64_t>();
    v.exact = vj.at("interval").at("exact").get<bool>();
    for (const auto& c : vj.at("certificates")) v.certificates.push_back(Certificate::fromJson(c));
    v.advisories = vj.at("advisories").get<std::vector<std::string>>();
    v.provenance = vj.at("provenance");
    for (const auto& a : vj.at("assertions"))
      v.assertions.push_back({a.at("statement").get<std::string>(), a.at("line").get<int>(), a.at("passed").get<bool>(),
                              a.at("detail").get<std::string>()});
    v.verified = vj.at("verified").get<bool>();
    v.verification = vj.at("verification").get<std::string>();
    const auto& o = vj.at("oracle");
    v.oracle.ran = o.at("ran").get<bool>();
    v.oracle.ok = o.at("ok").get<bool>();
    v.oracle.radius = o.at("radius").get<int>();
    v.oracle.refutedAt = o.at("refuted_at").get<std::vector<std::int64_t>>();
    v.oracle.clearAt = o.at("clear_at").get<std::vector<std::int64_t>>();
    v.oracle.note = o.at("note").get<std::string>();
    r.varieties.push_back(std::move(v));
  }
  for (const auto& e : j.at("errors"))
    r.errors.push_back({e.at("line").get<int>(), e.at("col").get<int>(), e.at("category").get<std::string>(),
                        e.at("message").get<std::string>(), e.at("hint").get<std::string>()});
  return r;
}

namespace detail {

inline std::string mdEscape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else if (c == '\n') out += ' ';
    else out += c;
  }
  return out;
}

/// Citation of the certificate that attains the bound, first in trace order.
inline std::string decidingCitation(const VarietyReport& v, bool upper) {
  for (const auto& c : v.certificates) {
    const bool isUpper = c.kind == CertificateKind::UpperBound;
    if (isUpper == upper && c.value == (upper ? v.hi : v.lo)) return c.rule + ": " + c.citation;
  }
  return upper ? "-" : "trivial: conFN >= 0";
}

}  // namespace detail

inline std::string toMarkdown(const Report& r) {
  std::ostringstream out;
  out << "# conFN report\n\n";
  if (r.generatedAt) out << "Generated: " << *r.generatedAt << "\n\n";
  out << "| variety | constructor | dim | rank | conFN | assertion | verified | upper bound | lower bound |\n";
  out << "|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& v : r.varieties) {
    std::string value = v.exact ? std::to_string(v.lo) : "[" + std::to_string(v.lo) + ", " + std::to_string(v.hi) + "]";
    std::string verdict = "-";
    if (!v.assertions.empty()) {
      bool ok = true;
      for (const auto& a : v.assertions) ok = ok && a.passed;
      verdict = ok ? "PASS" : "FAIL";
    }
    const bool ver = v.verified && v.oracle.ok;
    out << "| " << detail::mdEscape(v.name) << " | " << detail::mdEscape(v.constructor) << " | " << v.dimension
        << " | " << v.picardRank << " | " << value << " | " << verdict << " | " << (ver ? "yes" : "NO") << " | "
        << detail::mdEscape(detail::decidingCitation(v, true)) << " | "
        << detail::mdEscape(detail::decidingCitation(v, false)) << " |\n";
  }
  bool anyFail = false;
  for (const auto& v : r.varieties)
    for (const auto& a : v.assertions)
      if (!a.passed) {
        if (!anyFail) out << "\n## Failed assertions\n\n";
        anyFail = true;
        out << "- line " << a.line << ": `" << a.statement << "`: " << detail::mdEscape(a.detail) << "\n";
      }
  if (!r.errors.empty()) {
    out << "\n## Errors\n\n";
    for (const auto& e : r.errors)
      out << "- " << e.line << ":" << e.col << " " << e.category << ": " << detail::mdEscape(e.message)
          << (e.hint.empty() ? "" : " (hint: " + detail::mdEscape(e.hint) + ")") << "\n";
  }
  return out.str();
}

/// Certificate trace as prose.
inline std::string explain(const VarietyReport& v) {
  std::ostringstream out;
  out << v.name << " (" << v.constructor << ", dim " << v.dimension << ", Picard rank " << v.picardRank << ")\n";
  out << "conFN " << (v.exact ? "= " + std::to_string(v.lo)
                              : "in [" + std::to_string(v.lo) + ", " + std::to_string(v.hi) + "]")
      << "\n";
  for (std::size_t i = 0; i < v.certificates.size(); ++i) {
    const auto& c = v.certificates[i];
    out << "  " << i + 1 << ". " << (c.kind == CertificateKind::UpperBound ? "conFN <= " : "conFN >= ") << c.value
        << " by " << c.rule << "\n     " << c.citation << "\n";
    for (const auto& p : c.premises) out << "     - " << p << "\n";
  }
  for (const auto& a : v.advisories) out << "  note: " << a << "\n";
  out << "  verification: " << (v.verified ? "all certificates re-checked" : v.verification) << "\n";
  return out.str();
}

}  // namespace confn::dsl
