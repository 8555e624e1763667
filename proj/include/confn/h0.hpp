#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "confn/core.hpp"
#include "confn/descriptor.hpp"

namespace confn {

enum class H0Value { Zero, Positive, Unknown };

inline const char* h0Name(H0Value v) {
  switch (v) {
    case H0Value::Zero: return "zero";
    case H0Value::Positive: return "positive";
    case H0Value::Unknown: return "unknown";
  }
  return "?";
}

/// O(cls) on `space`. On a product the class is read as a box-tensor of its components,
/// on a cyclic cover as a pullback from the base.
struct BundleExpr {
  DescriptorPtr space;
  DivisorClass cls;
};

struct H0Fact {
  H0Value value = H0Value::Unknown;
  Json derivation;
};

namespace detail {

inline std::pair<DivisorClass, DivisorClass> splitProductClass(const VarietyDescriptor& prod,
                                                               const DivisorClass& cls) {
  const auto& parents = prod.provenance.construction->parents;
  const auto& x = *parents.at(0);
  const auto& y = *parents.at(1);
  std::vector<Integer> cx(cls.coeffs().begin(), cls.coeffs().begin() + x.rank());
  std::vector<Integer> cy(cls.coeffs().begin() + x.rank(), cls.coeffs().end());
  return {DivisorClass::of(x.lattice, cx), DivisorClass::of(y.lattice, cy)};
}

inline int curveGenus(const VarietyDescriptor& c) {
  if (c.flags.curveGenus) return *c.flags.curveGenus;
  Integer degK = c.form.evaluate({c.canonical});
  return static_cast<int>((degK + 2) / 2);
}

inline H0Fact proveH0(const VarietyDescriptor& space, const DivisorClass& cls) {
  if (cls.latticeId() != space.lattice.id() || cls.rank() != space.rank())
    throw Error("malformed bundle expression: class is not on the space's lattice");
  H0Fact out;
  Json node;
  node["space"] = space.provenance.constructor;
  node["dimension"] = space.dimension;
  node["class"] = toJson(cls.coeffs());
  const auto kind = space.kind();

  if (kind == ConstructionKind::Product) {
    auto [cx, cy] = splitProductClass(space, cls);
    const auto& parents = space.provenance.construction->parents;
    H0Fact a = proveH0(*parents[0], cx);
    H0Fact b = proveH0(*parents[1], cy);
    node["rule"] = "kunneth";
    node["children"] = Json::array({a.derivation, b.derivation});
    if (a.value == H0Value::Zero || b.value == H0Value::Zero)
      out.value = H0Value::Zero;
    else if (a.value == H0Value::Positive && b.value == H0Value::Positive)
      out.value = H0Value::Positive;
    else
      out.value = H0Value::Unknown;
  } else if (kind == ConstructionKind::CyclicCover) {
    // f_* O_X = O_Y + L^-1 + ... + L^-(d-1).
    const auto& tr = *space.provenance.construction;
    const auto& base = *tr.parents.at(0);
    DivisorClass a = cls.transported(base.lattice);
    node["rule"] = "cover_split";
    node["cover_degree"] = tr.degree;
    node["children"] = Json::array();
    bool allZero = true, anyPositive = false;
    for (std::int64_t i = 0; i < tr.degree; ++i) {
      H0Fact s = proveH0(base, a - Integer(i) * *tr.divisor);
      node["children"].push_back(s.derivation);
      allZero = allZero && s.value == H0Value::Zero;
      anyPositive = anyPositive || s.value == H0Value::Positive;
    }
    out.value = allZero ? H0Value::Zero : anyPositive ? H0Value::Positive : H0Value::Unknown;
  } else if (space.dimension == 1) {
    Integer deg = space.form.evaluate({cls});
    const int g = curveGenus(space);
    node["degree"] = toJson(deg);
    node["genus"] = g;
    if (deg < 0) {
      node["rule"] = "negative_degree";
      out.value = H0Value::Zero;
    } else if (cls.isZero()) {
      node["rule"] = "trivial";
      out.value = H0Value::Positive;
    } else if (deg >= 2 * g) {
      node["rule"] = "globally_generated_on_curve";
      out.value = H0Value::Positive;
    } else {
      node["rule"] = "undetermined";
      out.value = H0Value::Unknown;
    }
  } else if (cls.isZero()) {
    node["rule"] = "trivial";
    out.value = H0Value::Positive;
  } else if (space.knownGloballyGenerated(cls)) {
    node["rule"] = "globally_generated";
    out.value = H0Value::Positive;
  } else {
    node["rule"] = "undetermined";
    out.value = H0Value::Unknown;
  }
  node["value"] = h0Name(out.value);
  out.derivation = std::move(node);
  return out;
}

}  // namespace detail

inline H0Fact kunnethH0Prover(const BundleExpr& expr) {
  if (!expr.space) throw Error("malformed bundle expression: no space");
  return detail::proveH0(*expr.space, expr.cls);
}

/// Box-tensor of component classes on a product descriptor.
inline BundleExpr boxTensor(const DescriptorPtr& product, const DivisorClass& onFirst,
                            const DivisorClass& onSecond) {
  if (product->kind() != ConstructionKind::Product) throw Error("malformed bundle expression: not a product");
  const auto& parents = product->provenance.construction->parents;
  if (onFirst.latticeId() != parents[0]->lattice.id() || onSecond.latticeId() != parents[1]->lattice.id())
    throw Error("malformed bundle expression: components on the wrong factors");
  std::vector<Integer> c = onFirst.coeffs();
  c.insert(c.end(), onSecond.coeffs().begin(), onSecond.coeffs().end());
  return {product, DivisorClass::of(product->lattice, c)};
}

/// f^* of a class on the base of a cyclic cover.
inline BundleExpr pullback(const DescriptorPtr& cover, const DivisorClass& onBase) {
  if (cover->kind() != ConstructionKind::CyclicCover) throw Error("malformed bundle expression: not a cover");
  const auto& base = *cover->provenance.construction->parents.at(0);
  if (onBase.latticeId() != base.lattice.id()) throw Error("malformed bundle expression: class not on the base");
  return {cover, onBase.transported(cover->lattice)};
}

}  // namespace confn
