#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "confn/confn.hpp"
#include "confn/dsl/report.hpp"
#include "confn/dsl/syntax.hpp"

namespace confn::dsl {

struct EvalOptions {
  int searchRadius = kDefaultSearchRadius;
  /// Cap on the tuple size tried by the brute-force oracle.
  int maxM = 6;
  int oracleRadius = 4;
  bool oracle = true;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInconsistency = 3;

/// Exit status implied by a report: 3 inconsistency, 2 parse/type error, 1 failure, 0 all pass.
inline int exitCode(const Report& r) {
  bool usage = false, other = false;
  for (const auto& e : r.errors) {
    if (e.category == "inconsistency") return kExitInconsistency;
    if (e.category == "lexical" || e.category == "syntax" || e.category == "name" || e.category == "type")
      usage = true;
    else
      other = true;
  }
  if (usage) return kExitUsage;
  if (other || !r.allAssertionsPassed() || !r.allVerified()) return kExitFailure;
  return kExitOk;
}

namespace detail {

inline std::string statementText(const Statement& st) {
  switch (st.kind) {
    case Statement::Kind::Let: return "let " + st.name + " = " + st.ctor + "(...)";
    case Statement::Kind::Compute: return "compute " + st.name;
    case Statement::Kind::AssertExact: return "assert_confn " + st.name + " = " + st.k.str();
    case Statement::Kind::AssertInterval:
      return "assert_confn " + st.name + " in [" + st.lo.str() + ", " + st.hi.str() + "]";
  }
  return "";
}

[[noreturn]] inline void typeError(Span s, std::string m, std::string h) {
  throw DslError(ErrorCategory::Type, s, std::move(m), std::move(h));
}

/// Named view over one let statement's arguments; shapes were checked by the parser.
class Args {
 public:
  explicit Args(const Statement& st) : st_(st) {
    const auto& sig = signatures().at(st.ctor);
    std::size_t pos = 0;
    for (const auto& a : st.args) {
      const std::string& n = a.name.empty() ? sig.at(pos++).name : a.name;
      values_.emplace(n, &a.value);
    }
  }

  const Value* get(const std::string& n) const {
    auto it = values_.find(n);
    return it == values_.end() ? nullptr : it->second;
  }
  bool has(const std::string& n) const { return get(n) != nullptr; }
  const Value& at(const std::string& n) const { return *get(n); }

  std::int64_t integer(const std::string& n) const {
    const Value& v = at(n);
    if (!confn::detail::fitsInt64(v.terms[0].coeff))
      typeError(v.span, "integer '" + n + "' out of range", "use a smaller value");
    return static_cast<std::int64_t>(v.terms[0].coeff);
  }

  std::vector<std::string> names(const std::string& n) const {
    std::vector<std::string> out;
    if (const Value* v = get(n))
      for (const auto& it : v->items) out.push_back(it.ident());
    return out;
  }

  Span span() const { return st_.span; }

 private:
  const Statement& st_;
  std::map<std::string, const Value*> values_;
};

/// Coefficients of a divisor literal over the given basis, or a type error naming the lattice.
inline std::vector<Integer> divisorCoeffs(const Value& v, const std::vector<std::string>& basis,
                                          const std::string& owner) {
  if (v.isList()) typeError(v.span, "expected a divisor, found a list", "e.g. 3*H - E1");
  std::vector<Integer> c(basis.size(), 0);
  for (const auto& t : v.terms) {
    if (t.name.empty()) {
      if (t.coeff != 0)
        typeError(t.span, "a nonzero constant is not a divisor class", "multiply a basis name, e.g. " +
                                                                               t.coeff.str() + "*" + basis.front());
      continue;
    }
    auto it = std::find(basis.begin(), basis.end(), t.name);
    if (it == basis.end())
      typeError(t.span, "'" + t.name + "' is not a basis class on the lattice of " + owner,
                "basis of " + owner + ": " + joinNames(basis));
    c[static_cast<std::size_t>(it - basis.begin())] += t.coeff;
  }
  return c;
}

inline DivisorClass divisorOn(const Value& v, const VarietyDescriptor& d, const std::string& owner) {
  return DivisorClass::of(d.lattice, divisorCoeffs(v, d.lattice.basisNames(), owner));
}

inline std::vector<Integer> intList(const Value& v, const char* what) {
  if (!v.isList()) typeError(v.span, std::string(what) + " must be a list of integers", "e.g. [1, 0]");
  std::vector<Integer> out;
  for (const auto& it : v.items) {
    if (!it.isInt()) typeError(it.span, std::string(what) + " must contain integers only", "e.g. [1, 0]");
    out.push_back(it.terms[0].coeff);
  }
  return out;
}

inline Json residuesJson(const BlowupResidueAnalysis& a) { return residueJson(a); }

}  // namespace detail

class Evaluator {
 public:
  explicit Evaluator(EvalOptions opt = {}) : opt_(opt) { ropt_.searchRadius = opt.searchRadius; }

  Report run(const Program& p) {
    for (const auto& st : p.statements) {
      try {
        step(st);
      } catch (const DslError& e) {
        record(e.span, categoryName(e.category), e.message, e.hint);
        if (st.kind == Statement::Kind::Let) failed_[st.name] = st.span.line;
      } catch (const InconsistencyError& e) {
        record(st.span, "inconsistency", e.what(), "probable modeling bug in the descriptor or a rule");
        if (st.kind == Statement::Kind::Let) failed_[st.name] = st.span.line;
      } catch (const std::exception& e) {
        record(st.span, "evaluation", e.what(), "");
        if (st.kind == Statement::Kind::Let) failed_[st.name] = st.span.line;
      }
    }
    return report_;
  }

  const std::map<std::string, DescriptorPtr>& bindings() const { return vars_; }

 private:
  void record(Span s, std::string cat, std::string msg, std::string hint) {
    report_.errors.push_back({s.line, s.col, std::move(cat), std::move(msg), std::move(hint)});
  }

  DescriptorPtr lookup(const std::string& n, Span s) const {
    auto it = vars_.find(n);
    if (it != vars_.end()) return it->second;
    auto f = failed_.find(n);
    if (f != failed_.end())
      throw Error("variety '" + n + "' was not constructed (its let on line " + std::to_string(f->second) +
                  " failed)");
    throw DslError(ErrorCategory::Name, s, "variety '" + n + "' is not defined", "define it first with let");
  }

  void step(const Statement& st) {
    switch (st.kind) {
      case Statement::Kind::Let: vars_[st.name] = construct(st); return;
      case Statement::Kind::Compute: ensure(st.name, st.nameSpan); return;
      case Statement::Kind::AssertExact:
      case Statement::Kind::AssertInterval: {
        VarietyReport& v = ensure(st.name, st.nameSpan);
        AssertionResult a;
        a.statement = detail::statementText(st);
        a.line = st.span.line;
        const std::string got =
            v.exact ? "resolved conFN = " + std::to_string(v.lo)
                    : "resolved [" + std::to_string(v.lo) + ", " + std::to_string(v.hi) + "]";
        if (st.kind == Statement::Kind::AssertExact) {
          a.passed = v.exact && Integer(v.lo) == st.k;
          a.detail = "expected " + st.k.str() + ", " + got;
        } else {
          a.passed = Integer(v.lo) >= st.lo && Integer(v.hi) <= st.hi;
          a.detail = "expected within [" + st.lo.str() + ", " + st.hi.str() + "], " + got;
        }
        v.assertions.push_back(std::move(a));
        return;
      }
    }
  }

  VarietyReport& ensure(const std::string& n, Span s) {
    auto it = index_.find(n);
    if (it != index_.end()) return report_.varieties[it->second];
    DescriptorPtr d = lookup(n, s);
    VarietyReport v;
    v.name = n;
    v.constructor = d->provenance.constructor;
    v.dimension = static_cast<std::int64_t>(d->dimension);
    v.picardRank = static_cast<std::int64_t>(d->rank());
    FujitaInterval iv = resolve(*d, ropt_);
    v.lo = iv.lo;
    v.hi = iv.hi;
    v.exact = iv.exact();
    v.certificates = iv.certificates;
    v.advisories = iv.advisories;
    v.provenance = provenanceJson(*d);
    if (auto e = extras_.find(n); e != extras_.end()) v.provenance["pipeline"] = e->second;
    VerifyResult vr = verifyInterval(*d, iv, ropt_);
    v.verified = vr.ok;
    v.verification = vr.ok ? "ok" : vr.reason;
    if (opt_.oracle) v.oracle = runOracle(*d, iv);
    index_[n] = report_.varieties.size();
    report_.varieties.push_back(std::move(v));
    return report_.varieties.back();
  }

  /// Brute-force bracket of an exact interval: refuted at lo-1, clear at hi..hi+2 (capped by maxM).
  OracleCheck runOracle(const VarietyDescriptor& d, const FujitaInterval& iv) const {
    OracleCheck o;
    if (!d.exactEqualsNef() || !d.nef || d.rank() > 3 || !d.nef->enumerable()) return o;
    o.ran = true;
    o.radius = opt_.oracleRadius;
    if (iv.lo >= 1 && iv.lo - 1 <= opt_.maxM) {
      if (bruteForceRefute(*d.nef, d.canonical, static_cast<int>(iv.lo - 1), opt_.oracleRadius))
        o.refutedAt.push_back(iv.lo - 1);
      else {
        o.ok = false;
        o.note = "no refutation found at m = " + std::to_string(iv.lo - 1);
      }
    }
    for (std::int64_t m = iv.hi; m <= iv.hi + 2 && m <= opt_.maxM; ++m) {
      if (bruteForceRefute(*d.nef, d.canonical, static_cast<int>(m), opt_.oracleRadius)) {
        o.ok = false;
        o.note = "refutation found at m = " + std::to_string(m) + " >= hi";
      } else {
        o.clearAt.push_back(m);
      }
    }
    return o;
  }

  DescriptorPtr construct(const Statement& st) {
    detail::Args a(st);
    const std::string& c = st.ctor;
    auto variety = [&](const char* p) { return lookup(a.at(p).ident(), a.at(p).span); };
    auto divisorFor = [&](const char* p, const DescriptorPtr& d, const char* owner) {
      return detail::divisorOn(a.at(p), *d, a.at(owner).ident());
    };

    if (c == "projective_space") return projectiveSpace(static_cast<int>(a.integer("n")));
    if (c == "complete_intersection") {
      std::vector<int> degrees;
      for (const auto& v : detail::intList(a.at("degrees"), "degrees")) degrees.push_back(static_cast<int>(v));
      bool vg = false;
      for (const auto& n : a.names("assume")) {
        if (n != "very_general")
          throw DslError(ErrorCategory::Name, a.at("assume").span, "complete_intersection accepts only very_general",
                         "assume=[very_general]");
        vg = true;
      }
      return completeIntersection(static_cast<int>(a.integer("n")), degrees, vg);
    }
    if (c == "curve") return curve(static_cast<int>(a.integer("genus")));
    if (c == "hirzebruch1") return hirzebruchF1();
    if (c == "delpezzo7") return delPezzo7();
    if (c == "abelian") {
      std::optional<Integer> top;
      if (a.has("top")) top = Integer(a.integer("top"));
      return abelian(static_cast<int>(a.integer("n")), top);
    }
    if (c == "custom") return buildCustom(a, st.name);
    if (c == "product") return product(variety("first"), variety("second"), a.names("assume"));
    if (c == "blowup_point") return blowupPoint(variety("surface"));
    if (c == "hypersurface_section") {
      auto y = variety("ambient");
      return hypersurfaceSection(y, divisorFor("section", y, "ambient"), a.integer("p"), ropt_);
    }
    if (c == "cyclic_cover") {
      auto y = variety("base");
      return cyclicCover(y, divisorFor("branch", y, "base"), a.integer("degree"), a.names("assume"));
    }
    if (c == "pipeline_n2k1") return keep(st.name, pipelineN2K1(variety("surface"), ropt_));
    if (c == "pipeline_n3k1") {
      auto s = variety("surface");
      return keep(st.name, pipelineN3K1(s, divisorFor("m", s, "surface"), ropt_));
    }
    if (c == "pipeline_simple_surface") {
      auto y = variety("ambient");
      return keep(st.name, pipelineFujitaSimpleSurface(y, divisorFor("section", y, "ambient"), a.integer("p"), ropt_));
    }
    if (c == "pipeline_simple_variety") {
      auto y = variety("base");
      return keep(st.name, pipelineFujitaSimpleVariety(y, divisorFor("branch", y, "base"), a.integer("degree"),
                                                       a.names("assume"), ropt_));
    }
    throw DslError(ErrorCategory::Name, st.span, "unknown constructor '" + c + "'", "");
  }

  DescriptorPtr keep(const std::string& name, const PipelineResult& r) {
    Json j;
    j["target"] = r.target;
    j["achieved"] = r.achieved;
    j["notes"] = r.notes;
    if (r.residues) j["residues"] = detail::residuesJson(*r.residues);
    extras_[name] = j;
    return r.descriptor;
  }

  DescriptorPtr buildCustom(const detail::Args& a, const std::string& owner) {
    CustomSpec s;
    s.dimension = static_cast<std::size_t>(std::max<std::int64_t>(0, a.integer("dim")));
    s.basis = a.names("basis");
    if (s.basis.empty()) detail::typeError(a.at("basis").span, "basis must not be empty", "e.g. basis=[H]");
    auto coeffs = [&](const Value& v) { return detail::divisorCoeffs(v, s.basis, owner); };

    const Value& entries = a.at("entries");
    if (!entries.isList()) detail::typeError(entries.span, "entries must be a list", "e.g. entries=[[H, H, 1]]");
    for (const auto& e : entries.items) {
      if (!e.isList() || e.items.size() != s.dimension + 1 || !e.items.back().isInt())
        detail::typeError(e.span,
                          "each entry lists " + std::to_string(s.dimension) + " basis names and then a value",
                          "e.g. [H, H, 24]");
      MultiIndex idx;
      for (std::size_t i = 0; i < s.dimension; ++i) {
        const Value& b = e.items[i];
        if (!b.isIdent()) detail::typeError(b.span, "entry factors must be basis names", "e.g. [H, H, 24]");
        auto it = std::find(s.basis.begin(), s.basis.end(), b.ident());
        if (it == s.basis.end())
          detail::typeError(b.span, "'" + b.ident() + "' is not in basis", "basis: " + joinNames(s.basis));
        idx.push_back(static_cast<std::size_t>(it - s.basis.begin()));
      }
      s.formEntries.push_back({idx, e.items.back().terms[0].coeff});
    }
    s.canonical = coeffs(a.at("canonical"));
    if (const Value* nef = a.get("nef")) {
      if (!nef->isList()) detail::typeError(nef->span, "nef must be a list of functionals", "e.g. nef=[[1, 0], [-1, 1]]");
      std::vector<std::vector<Integer>> fs;
      for (const auto& f : nef->items) {
        auto row = detail::intList(f, "a nef functional");
        if (row.size() != s.basis.size())
          detail::typeError(f.span, "functional has " + std::to_string(row.size()) + " entries, basis has " +
                                        std::to_string(s.basis.size()),
                            "one coefficient per basis class");
        fs.push_back(std::move(row));
      }
      s.nefFunctionals = std::move(fs);
    }
    if (const Value* gg = a.get("gg")) {
      if (gg->isIdent() && gg->ident() == "exact") {
        s.ggKind = CustomSpec::Gg::ExactEqualsNef;
        s.ggJustification = "asserted by the program";
      } else if (gg->isIdent() && gg->ident() == "unknown") {
        s.ggKind = CustomSpec::Gg::Unknown;
      } else if (gg->isList()) {
        s.ggKind = CustomSpec::Gg::UnderApprox;
        for (const auto& c : gg->items) s.ggClasses.push_back(coeffs(c));
      } else {
        detail::typeError(gg->span, "gg must be exact, unknown or a list of divisors", "e.g. gg=[H]");
      }
    }
    const Value* flagsV = a.get("flags");
    for (std::size_t i = 0; flagsV && i < flagsV->items.size(); ++i) {
      const auto& f = flagsV->items[i].ident();
      if (f == "toric") s.flags.toric = true;
      else if (f == "irregularity_zero") s.flags.irregularityZero = true;
      else if (f == "abelian") s.flags.abelian = true;
      else if (f == "very_general_nl") s.flags.veryGeneralNL = true;
      else
        throw DslError(ErrorCategory::Name, flagsV->items[i].span, "unknown flag '" + f + "'",
                       "flags: toric, irregularity_zero, abelian, very_general_nl");
    }
    if (a.has("genus")) s.flags.curveGenus = static_cast<int>(a.integer("genus"));
    if (const Value* anns = a.get("annotations")) {
      if (!anns->isList()) detail::typeError(anns->span, "annotations must be a list", "e.g. annotations=[[24]]");
      for (const auto& an : anns->items) {
        if (!an.isList() || an.items.empty() || !an.items[0].isInt())
          detail::typeError(an.span, "an annotation is [N] or [N, generator, ...]", "e.g. [24] or [2, F]");
        std::vector<std::vector<Integer>> gens;
        for (std::size_t i = 1; i < an.items.size(); ++i) gens.push_back(coeffs(an.items[i]));
        s.annotations.push_back({an.items[0].terms[0].coeff, gens});
      }
    }
    if (const Value* eff = a.get("effective")) {
      if (!eff->isList()) detail::typeError(eff->span, "effective must be a list of divisors", "e.g. effective=[E]");
      for (const auto& c : eff->items) s.effectiveCurves.push_back(coeffs(c));
    }
    return custom(s);
  }

  EvalOptions opt_;
  ResolveOptions ropt_;
  Report report_;
  std::map<std::string, DescriptorPtr> vars_;
  std::map<std::string, int> failed_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, Json> extras_;
};

inline Report evaluate(const Program& p, const EvalOptions& opt = {}) { return Evaluator(opt).run(p); }

/// Parse and evaluate; a parse error becomes the report's only entry.
inline Report evaluateText(std::string_view text, const EvalOptions& opt = {}) {
  try {
    return evaluate(parse(text), opt);
  } catch (const DslError& e) {
    Report r;
    r.errors.push_back({e.span.line, e.span.col, categoryName(e.category), e.message, e.hint});
    return r;
  }
}

}  // namespace confn::dsl
