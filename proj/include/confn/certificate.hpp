#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "confn/core.hpp"

namespace confn {

enum class CertificateKind { UpperBound, LowerBoundWitness };

/// One proof step of a bound on conFN. `witness` is re-checked by verifyCertificate.
struct Certificate {
  CertificateKind kind = CertificateKind::UpperBound;
  std::string rule;
  std::int64_t value = 0;
  std::string citation;
  std::vector<std::string> premises;
  Json witness;

  Json toJson() const {
    Json j;
    j["kind"] = kind == CertificateKind::UpperBound ? "upper_bound" : "lower_bound_witness";
    j["rule"] = rule;
    j["value"] = value;
    j["citation"] = citation;
    j["premises"] = premises;
    j["witness"] = witness;
    return j;
  }

  static Certificate fromJson(const Json& j) {
    Certificate c;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "upper_bound")
      c.kind = CertificateKind::UpperBound;
    else if (kind == "lower_bound_witness")
      c.kind = CertificateKind::LowerBoundWitness;
    else
      throw Error("unknown certificate kind '" + kind + "'");
    c.rule = j.at("rule").get<std::string>();
    c.value = j.at("value").get<std::int64_t>();
    c.citation = j.at("citation").get<std::string>();
    c.premises = j.at("premises").get<std::vector<std::string>>();
    c.witness = j.at("witness");
    return c;
  }

  friend bool operator==(const Certificate& a, const Certificate& b) {
    return a.kind == b.kind && a.rule == b.rule && a.value == b.value && a.citation == b.citation &&
           a.premises == b.premises && a.witness == b.witness;
  }
};

/// lo <= conFN <= hi.
struct FujitaInterval {
  std::int64_t lo = 0;
  std::int64_t hi = std::numeric_limits<std::int64_t>::max();
  std::vector<Certificate> certificates;
  std::vector<std::string> advisories;

  bool exact() const { return lo == hi; }
};

}  // namespace confn
