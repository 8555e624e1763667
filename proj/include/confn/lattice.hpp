#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "confn/core.hpp"

namespace confn {

inline bool isIdentifier(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

/// Free lattice of finite rank with a named basis. Models numerical classes only.
class PicardLattice {
 public:
  explicit PicardLattice(std::vector<std::string> basisNames)
      : id_(detail::nextId()), names_(std::move(basisNames)) {
    if (names_.empty()) throw DescriptorError("Picard lattice must have rank >= 1");
    std::set<std::string> seen;
    for (const auto& n : names_) {
      if (!isIdentifier(n)) throw DescriptorError("invalid basis name '" + n + "'");
      if (!seen.insert(n).second) throw DescriptorError("duplicate basis name '" + n + "'");
    }
  }

  std::uint64_t id() const { return id_; }
  std::size_t rank() const { return names_.size(); }
  const std::vector<std::string>& basisNames() const { return names_; }

  std::optional<std::size_t> indexOf(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names_.begin());
  }

 private:
  std::uint64_t id_;
  std::vector<std::string> names_;
};

/// Integer coefficient vector on a specific lattice.
class DivisorClass {
 public:
  DivisorClass() = default;
  DivisorClass(std::uint64_t latticeId, std::vector<Integer> coeffs)
      : latticeId_(latticeId), coeffs_(std::move(coeffs)) {}

  static DivisorClass zero(const PicardLattice& lat) {
    return DivisorClass(lat.id(), std::vector<Integer>(lat.rank(), 0));
  }
  static DivisorClass basis(const PicardLattice& lat, std::size_t i) {
    auto d = zero(lat);
    d.coeffs_.at(i) = 1;
    return d;
  }
  static DivisorClass of(const PicardLattice& lat, std::vector<Integer> coeffs) {
    if (coeffs.size() != lat.rank())
      throw LatticeMismatch("class has " + std::to_string(coeffs.size()) +
                            " coefficients, lattice rank is " + std::to_string(lat.rank()));
    return DivisorClass(lat.id(), std::move(coeffs));
  }

  std::uint64_t latticeId() const { return latticeId_; }
  std::size_t rank() const { return coeffs_.size(); }
  const std::vector<Integer>& coeffs() const { return coeffs_; }
  const Integer& operator[](std::size_t i) const { return coeffs_[i]; }

  bool isZero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Integer& c) { return c == 0; });
  }

  /// Same coefficients, reinterpreted on another lattice of equal rank.
  DivisorClass transported(const PicardLattice& target) const {
    if (target.rank() != rank())
      throw LatticeMismatch("cannot transport a class between lattices of different rank");
    return DivisorClass(target.id(), coeffs_);
  }

  DivisorClass& operator+=(const DivisorClass& o) {
    requireSame(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  DivisorClass& operator-=(const DivisorClass& o) {
    requireSame(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  friend DivisorClass operator+(DivisorClass a, const DivisorClass& b) { return a += b; }
  friend DivisorClass operator-(DivisorClass a, const DivisorClass& b) { return a -= b; }
  friend DivisorClass operator*(const Integer& s, DivisorClass a) {
    for (auto& c : a.coeffs_) c *= s;
    return a;
  }
  friend DivisorClass operator-(DivisorClass a) { return Integer(-1) * std::move(a); }
  friend bool operator==(const DivisorClass& a, const DivisorClass& b) {
    return a.latticeId_ == b.latticeId_ && a.coeffs_ == b.coeffs_;
  }

  void requireSame(const DivisorClass& o) const {
    if (o.latticeId_ != latticeId_ || o.coeffs_.size() != coeffs_.size())
      throw LatticeMismatch("divisor classes live on different lattices");
  }

  std::string str(const PicardLattice& lat) const {
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      const Integer& c = coeffs_[i];
      if (c == 0) continue;
      if (first) {
        if (c < 0) out << "-";
      } else {
        out << (c < 0 ? " - " : " + ");
      }
      Integer a = c < 0 ? Integer(-c) : c;
      if (a != 1) out << a << "*";
      out << lat.basisNames()[i];
      first = false;
    }
    if (first) out << "0";
    return out.str();
  }

 private:
  std::uint64_t latticeId_ = 0;
  std::vector<Integer> coeffs_;
};

/// Weakly increasing 0-based multi-index.
using MultiIndex = std::vector<std::size_t>;

/// Symmetric multilinear form of fixed degree, stored sparsely on sorted multi-indices.
class IntersectionForm {
 public:
  IntersectionForm(const PicardLattice& lat, std::size_t degree)
      : latticeId_(lat.id()), rank_(lat.rank()), degree_(degree) {
    if (degree_ < 1) throw DescriptorError("intersection form degree must be >= 1");
  }

  std::uint64_t latticeId() const { return latticeId_; }
  std::size_t rank() const { return rank_; }
  std::size_t degree() const { return degree_; }
  const std::map<MultiIndex, Integer>& entries() const { return entries_; }

  /// Sets the value of the monomial; indices may be given in any order.
  IntersectionForm& set(MultiIndex idx, Integer value) {
    if (idx.size() != degree_)
      throw ArityError("monomial has " + std::to_string(idx.size()) + " factors, form degree is " +
                       std::to_string(degree_));
    for (auto i : idx)
      if (i >= rank_) throw LatticeMismatch("monomial index out of range");
    std::sort(idx.begin(), idx.end());
    if (value == 0)
      entries_.erase(idx);
    else
      entries_[std::move(idx)] = std::move(value);
    return *this;
  }

  Integer entry(MultiIndex idx) const {
    std::sort(idx.begin(), idx.end());
    auto it = entries_.find(idx);
    return it == entries_.end() ? Integer(0) : it->second;
  }

  Integer evaluate(std::span<const DivisorClass> args) const {
    if (args.size() != degree_)
      throw ArityError("form of degree " + std::to_string(degree_) + " evaluated on " +
                       std::to_string(args.size()) + " classes");
    std::vector<std::vector<std::size_t>> support(args.size());
    for (std::size_t j = 0; j < args.size(); ++j) {
      if (args[j].latticeId() != latticeId_ || args[j].rank() != rank_)
        throw LatticeMismatch("argument " + std::to_string(j + 1) + " is not on the form's lattice");
      for (std::size_t i = 0; i < rank_; ++i)
        if (args[j][i] != 0) support[j].push_back(i);
    }
    Integer total = 0;
    MultiIndex idx(degree_);
    std::function<void(std::size_t, const Integer&)> rec = [&](std::size_t pos, const Integer& acc) {
      if (pos == degree_) {
        MultiIndex sorted = idx;
        std::sort(sorted.begin(), sorted.end());
        auto it = entries_.find(sorted);
        if (it != entries_.end()) total += acc * it->second;
        return;
      }
      for (auto i : support[pos]) {
        idx[pos] = i;
        rec(pos + 1, acc * args[pos][i]);
      }
    };
    rec(0, Integer(1));
    return total;
  }

  Integer evaluate(std::initializer_list<DivisorClass> args) const {
    std::vector<DivisorClass> v(args);
    return evaluate(std::span<const DivisorClass>(v));
  }

  /// (L^k); only k == degree is representable.
  Integer selfIntersection(const DivisorClass& l, std::size_t k) const {
    if (k != degree_)
      throw ArityError("self-intersection exponent " + std::to_string(k) +
                       " differs from form degree " + std::to_string(degree_));
    std::vector<DivisorClass> v(k, l);
    return evaluate(std::span<const DivisorClass>(v));
  }

  /// Degree-(n-1) form M_1..M_{n-1} -> (M_1 ... M_{n-1} . h), on the lattice `target`.
  IntersectionForm contracted(const DivisorClass& h, const PicardLattice& target) const {
    if (degree_ < 2) throw ArityError("cannot contract a degree-1 form");
    if (target.rank() != rank_) throw LatticeMismatch("contraction target has different rank");
    IntersectionForm out(target, degree_ - 1);
    forEachMonomial(rank_, degree_ - 1, [&](const MultiIndex& idx) {
      std::vector<DivisorClass> args;
      for (auto i : idx) args.push_back(unit(i));
      args.push_back(h);
      out.set(idx, evaluate(std::span<const DivisorClass>(args)));
    });
    return out;
  }

  /// Same monomial values times `factor`, on the lattice `target`.
  IntersectionForm scaled(const Integer& factor, const PicardLattice& target) const {
    if (target.rank() != rank_) throw LatticeMismatch("scaling target has different rank");
    IntersectionForm out(target, degree_);
    for (const auto& [idx, v] : entries_) out.set(idx, v * factor);
    return out;
  }

  /// Gram matrix of a degree-2 form.
  std::vector<std::vector<Integer>> gram() const {
    if (degree_ != 2) throw ArityError("Gram matrix requires a degree-2 form");
    std::vector<std::vector<Integer>> g(rank_, std::vector<Integer>(rank_, 0));
    for (std::size_t i = 0; i < rank_; ++i)
      for (std::size_t j = 0; j < rank_; ++j) g[i][j] = entry({i, j});
    return g;
  }

  /// Calls f on every weakly increasing multi-index of the given length.
  template <class F>
  static void forEachMonomial(std::size_t rank, std::size_t length, F&& f) {
    MultiIndex idx(length, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
      if (pos == length) {
        f(static_cast<const MultiIndex&>(idx));
        return;
      }
      for (std::size_t i = start; i < rank; ++i) {
        idx[pos] = i;
        rec(pos + 1, i);
      }
    };
    rec(0, 0);
  }

  DivisorClass unit(std::size_t i) const {
    std::vector<Integer> c(rank_, 0);
    c.at(i) = 1;
    return DivisorClass(latticeId_, std::move(c));
  }

 private:
  std::uint64_t latticeId_;
  std::size_t rank_;
  std::size_t degree_;
  std::map<MultiIndex, Integer> entries_;
};

inline Integer evaluateForm(const IntersectionForm& form, std::span<const DivisorClass> args) {
  return form.evaluate(args);
}

inline Integer selfIntersection(const IntersectionForm& form, const DivisorClass& l, std::size_t k) {
  return form.selfIntersection(l, k);
}

/// Claim: every degree-n intersection number of classes in scope is divisible by `modulus`.
struct DivisibilityAnnotation {
  Integer modulus;
  /// Empty optional means the full lattice.
  std::optional<std::vector<DivisorClass>> generators;

  bool fullLattice() const { return !generators.has_value(); }

  static DivisibilityAnnotation full(Integer n) { return {std::move(n), std::nullopt}; }
  static DivisibilityAnnotation sublattice(Integer n, std::vector<DivisorClass> gens) {
    return {std::move(n), std::move(gens)};
  }
};

/// Checks every degree-n monomial of the scope generators; multilinearity extends it to the span.
inline bool checkAnnotation(const IntersectionForm& form, const DivisibilityAnnotation& ann) {
  if (ann.modulus < 2) return false;
  if (ann.fullLattice()) {
    for (const auto& [idx, v] : form.entries())
      if (detail::mod(v, ann.modulus) != 0) return false;
    return true;
  }
  const auto& gens = *ann.generators;
  for (const auto& g : gens)
    if (g.latticeId() != form.latticeId()) throw LatticeMismatch("annotation generator on foreign lattice");
  bool ok = true;
  IntersectionForm::forEachMonomial(gens.size(), form.degree(), [&](const MultiIndex& idx) {
    if (!ok) return;
    std::vector<DivisorClass> args;
    for (auto i : idx) args.push_back(gens[i]);
    if (detail::mod(form.evaluate(std::span<const DivisorClass>(args)), ann.modulus) != 0) ok = false;
  });
  return ok;
}

/// Surfaces only: (D^2) even for all D, equivalently every diagonal Gram entry is even.
inline bool isEvenForm(const IntersectionForm& form) {
  if (form.degree() != 2) throw ArityError("evenness is defined for degree-2 forms only");
  for (std::size_t i = 0; i < form.rank(); ++i)
    if (detail::mod(form.entry({i, i}), 2) != 0) return false;
  return true;
}

/// Fraction-free Gaussian elimination (Bareiss).
inline Integer determinant(std::vector<std::vector<Integer>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[k], m[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

/// Rank of an integer matrix (rows), by fraction-free elimination.
inline std::size_t matrixRank(std::vector<std::vector<Integer>> m) {
  if (m.empty()) return 0;
  const std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[r], m[p]);
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      if (m[i][c] == 0) continue;
      Integer a = m[r][c], b = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] = m[i][j] * a - m[r][j] * b;
    }
    ++r;
  }
  return r;
}

}  // namespace confn
