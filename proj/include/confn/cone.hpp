#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "confn/core.hpp"
#include "confn/lattice.hpp"

namespace confn {

inline constexpr int kDefaultSearchRadius = 16;
inline constexpr int kIrredundancyRadius = 8;

namespace detail {

using Point = std::vector<std::int64_t>;

inline constexpr std::int64_t kSmallCoeffBound = std::int64_t{1} << 40;
// Boxes larger than this are sampled rather than enumerated.
inline constexpr double kEnumerationBudget = 4.0e6;

inline double boxSize(std::size_t rank, int radius) {
  double s = 1;
  for (std::size_t i = 0; i < rank; ++i) s *= 2.0 * radius + 1;
  return s;
}

/// Visits every lattice point with max-norm exactly r (the origin when r == 0).
/// The visitor returns false to stop early.
template <class F>
bool forEachShellPoint(std::size_t rank, int r, F&& f) {
  if (r == 0) return f(static_cast<const Point&>(Point(rank, 0)));
  Point p(rank, -r);
  while (true) {
    bool onShell = std::any_of(p.begin(), p.end(), [r](std::int64_t c) { return c == r || c == -r; });
    if (onShell && !f(static_cast<const Point&>(p))) return false;
    std::size_t i = rank;
    while (i > 0 && p[i - 1] == r) {
      p[i - 1] = -r;
      --i;
    }
    if (i == 0) return true;
    ++p[i - 1];
  }
}

}  // namespace detail

/// Rational polyhedral cone { x : phi_k(x) >= 0 for all k } given by primitive integral functionals.
class ConeByFunctionals {
 public:
  ConeByFunctionals(const PicardLattice& lat, std::vector<std::vector<Integer>> functionals)
      : latticeId_(lat.id()), rank_(lat.rank()) {
    if (functionals.empty()) throw ConeError("cone needs at least one functional");
    for (auto& f : functionals) {
      if (f.size() != rank_)
        throw ConeError("functional has " + std::to_string(f.size()) + " coefficients, rank is " +
                        std::to_string(rank_));
      Integer g = 0;
      for (const auto& c : f) g = gcd(g, c < 0 ? Integer(-c) : c);
      if (g == 0) throw ConeError("zero functional");
      for (auto& c : f) c /= g;
      std::vector<std::int64_t> small;
      for (const auto& c : f) {
        if (abs(c) > detail::kSmallCoeffBound) {
          small_.clear();
          smallOk_ = false;
          break;
        }
        small.push_back(static_cast<std::int64_t>(c));
      }
      if (smallOk_) small_.push_back(std::move(small));
    }
    functionals_ = std::move(functionals);
    checkIrredundant();
  }

  std::uint64_t latticeId() const { return latticeId_; }
  std::size_t rank() const { return rank_; }
  std::size_t size() const { return functionals_.size(); }
  const std::vector<std::vector<Integer>>& functionals() const { return functionals_; }

  Integer value(std::size_t k, const DivisorClass& l) const {
    requireLattice(l);
    Integer v = 0;
    for (std::size_t i = 0; i < rank_; ++i) v += functionals_.at(k)[i] * l[i];
    return v;
  }

  std::vector<Integer> values(const DivisorClass& l) const {
    std::vector<Integer> out;
    for (std::size_t k = 0; k < size(); ++k) out.push_back(value(k, l));
    return out;
  }

  bool contains(const DivisorClass& l) const {
    for (std::size_t k = 0; k < size(); ++k)
      if (value(k, l) < 0) return false;
    return true;
  }

  bool strictlyContains(const DivisorClass& l) const {
    for (std::size_t k = 0; k < size(); ++k)
      if (value(k, l) <= 0) return false;
    return true;
  }

  /// The cone is pointed iff the functionals span the dual space.
  bool pointed() const { return matrixRank(functionals_) == rank_; }

  /// int64 fast path used by enumeration; requires small coefficients.
  std::int64_t smallValue(std::size_t k, const detail::Point& p) const {
    std::int64_t v = 0;
    const auto& f = small_[k];
    for (std::size_t i = 0; i < rank_; ++i) v += f[i] * p[i];
    return v;
  }

  bool enumerable() const { return smallOk_; }

  void requireLattice(const DivisorClass& l) const {
    if (l.latticeId() != latticeId_ || l.rank() != rank_)
      throw LatticeMismatch("class is not on the cone's lattice");
  }

  DivisorClass classAt(const detail::Point& p) const {
    std::vector<Integer> c(p.begin(), p.end());
    return DivisorClass(latticeId_, std::move(c));
  }

  /// Same functionals on another lattice of the same rank.
  ConeByFunctionals transported(const PicardLattice& target) const {
    if (target.rank() != rank_) throw LatticeMismatch("cannot transport cone across ranks");
    ConeByFunctionals c = *this;
    c.latticeId_ = target.id();
    return c;
  }

 private:
  // Each functional must be violated somewhere the others hold, within radius 8.
  void checkIrredundant() const {
    if (!smallOk_) throw ConeError("functional coefficients too large for the irredundancy check");
    const std::size_t n = size();
    std::vector<bool> witnessed(n, false);
    std::size_t remaining = n;
    auto visit = [&](const detail::Point& p) {
      std::size_t negatives = 0, which = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (smallValue(k, p) < 0) {
          ++negatives;
          which = k;
          if (negatives > 1) break;
        }
      }
      if (negatives == 1 && !witnessed[which]) {
        witnessed[which] = true;
        --remaining;
      }
      return remaining > 0;
    };
    if (n == 1) {
      // A single nonzero functional is violated at some unit vector or its negative.
      return;
    }
    for (int r = 1; r <= kIrredundancyRadius && remaining > 0; ++r) {
      if (detail::boxSize(rank_, r) <= detail::kEnumerationBudget) {
        detail::forEachShellPoint(rank_, r, visit);
      } else {
        std::mt19937_64 rng(0x5eed + static_cast<std::uint64_t>(r));
        std::uniform_int_distribution<std::int64_t> dist(-r, r);
        detail::Point p(rank_);
        for (int s = 0; s < 400000 && remaining > 0; ++s) {
          for (auto& c : p) c = dist(rng);
          visit(p);
        }
      }
    }
    if (remaining > 0) {
      for (std::size_t k = 0; k < n; ++k)
        if (!witnessed[k])
          throw ConeError("functional " + std::to_string(k + 1) +
                          " appears implied by the others (no separating lattice point within radius " +
                          std::to_string(kIrredundancyRadius) + ")");
    }
  }

  std::uint64_t latticeId_;
  std::size_t rank_;
  std::vector<std::vector<Integer>> functionals_;
  std::vector<std::vector<std::int64_t>> small_;
  bool smallOk_ = true;
};

enum class SearchStatus { Certified, Supplied, Inconclusive };

/// mu_k = min { phi_k(L) : phi_j(L) >= 1 for all j }.
struct InteriorMinimum {
  std::size_t functional = 0;
  SearchStatus status = SearchStatus::Inconclusive;
  std::optional<Integer> value;
  std::optional<DivisorClass> minimizer;
  int radiusUsed = 0;
  std::string note;

  bool usable() const { return status != SearchStatus::Inconclusive && value && minimizer; }

  /// Caller-supplied minimum; validated against the cone but trusted to be global.
  static InteriorMinimum supplied(const ConeByFunctionals& cone, std::size_t k, Integer mu,
                                  DivisorClass point) {
    if (!cone.strictlyContains(point))
      throw ConeError("supplied minimizer is not strictly inside the cone");
    if (cone.value(k, point) != mu) throw ConeError("supplied minimizer does not attain the supplied value");
    InteriorMinimum m;
    m.functional = k;
    m.status = SearchStatus::Supplied;
    m.value = std::move(mu);
    m.minimizer = std::move(point);
    m.note = "caller-supplied";
    return m;
  }
};

/// Enumerates lattice points by increasing max-norm shell up to `searchRadius`. A found value of 1 is
/// the global minimum by integrality; anything else is Inconclusive. Among minimizers the lexicographically
/// smallest in the smallest box containing a value-1 point is returned.
inline InteriorMinimum minInteriorValue(const ConeByFunctionals& cone, std::size_t k,
                                        int searchRadius = kDefaultSearchRadius) {
  if (k >= cone.size()) throw ConeError("functional index out of range");
  if (searchRadius < 1) throw ConeError("search radius must be positive");
  if (!cone.pointed()) throw ConeError("cone is not pointed");
  if (!cone.enumerable()) throw ConeError("functional coefficients too large to enumerate");

  InteriorMinimum result;
  result.functional = k;
  std::optional<std::int64_t> best;
  detail::Point bestPoint;
  for (int r = 1; r <= searchRadius; ++r) {
    if (detail::boxSize(cone.rank(), r) > detail::kEnumerationBudget) {
      result.note = "enumeration budget exhausted at radius " + std::to_string(r);
      break;
    }
    detail::forEachShellPoint(cone.rank(), r, [&](const detail::Point& p) {
      for (std::size_t j = 0; j < cone.size(); ++j)
        if (cone.smallValue(j, p) < 1) return true;
      std::int64_t v = cone.smallValue(k, p);
      if (!best || v < *best || (v == *best && p < bestPoint)) {
        best = v;
        bestPoint = p;
      }
      return true;
    });
    result.radiusUsed = r;
    if (best && *best == 1) break;
  }
  if (best) {
    result.value = Integer(*best);
    result.minimizer = cone.classAt(bestPoint);
  }
  if (best && *best == 1) {
    result.status = SearchStatus::Certified;
    result.note = "value 1 meets the integrality lower bound";
  } else {
    result.status = SearchStatus::Inconclusive;
    if (result.note.empty())
      result.note = best ? "minimum found exceeds 1; not certified global"
                         : "no strictly interior lattice point within radius";
  }
  return result;
}

struct FunctionalThreshold {
  std::size_t functional;
  Integer valueOnCanonical;
  Integer mu;
  Integer requiredM;
};

struct ThresholdReport {
  Integer mStar;
  std::vector<FunctionalThreshold> perFunctional;
  std::optional<std::size_t> critical;
  /// mStar - 1 ample classes whose adjoint leaves the cone; empty tuple when mStar == 1.
  std::vector<DivisorClass> witness;
};

/// mStar = max(0, max_k ceil(-phi_k(K) / mu_k)).
inline ThresholdReport adjointFreenessThreshold(const ConeByFunctionals& cone, const DivisorClass& canonical,
                                                const std::vector<InteriorMinimum>& mu) {
  cone.requireLattice(canonical);
  ThresholdReport rep;
  rep.mStar = 0;
  std::vector<const InteriorMinimum*> byK(cone.size(), nullptr);
  for (const auto& m : mu)
    if (m.functional < cone.size() && m.usable()) byK[m.functional] = &m;
  for (std::size_t k = 0; k < cone.size(); ++k) {
    if (!byK[k]) throw InconclusiveError("no certified interior minimum for functional " + std::to_string(k + 1));
    if (*byK[k]->value < 1) throw ConeError("interior minimum must be >= 1");
    FunctionalThreshold ft{k, cone.value(k, canonical), *byK[k]->value, 0};
    ft.requiredM = detail::ceilDiv(-ft.valueOnCanonical, ft.mu);
    if (ft.requiredM > rep.mStar) {
      rep.mStar = ft.requiredM;
      rep.critical = k;
    }
    rep.perFunctional.push_back(ft);
  }
  if (rep.mStar >= 1) {
    const auto& pt = *byK[*rep.critical]->minimizer;
    for (Integer i = 0; i < rep.mStar - 1; ++i) rep.witness.push_back(pt);
  } else {
    rep.critical.reset();
  }
  return rep;
}

/// True iff the witness tuple is strictly interior and K + sum leaves the cone.
inline bool witnessViolates(const ConeByFunctionals& cone, const DivisorClass& canonical,
                            const std::vector<DivisorClass>& tuple) {
  DivisorClass sum = canonical;
  for (const auto& l : tuple) {
    if (!cone.strictlyContains(l)) return false;
    sum += l;
  }
  return !cone.contains(sum);
}

struct Refutation {
  std::vector<DivisorClass> tuple;
  std::size_t functional;
  Integer value;
};

/// Exhaustive search over multisets of m strictly interior points with |coord| <= radius for one whose
/// adjoint K + sum leaves the cone. Subtrees are pruned only when no extension can go negative.
inline std::optional<Refutation> bruteForceRefute(const ConeByFunctionals& cone, const DivisorClass& canonical,
                                                  int m, int radius) {
  if (radius < 1) throw ConeError("radius must be >= 1");
  if (m < 0) throw ConeError("tuple size must be >= 0");
  if (!cone.enumerable()) throw ConeError("functional coefficients too large to enumerate");
  cone.requireLattice(canonical);
  const std::size_t nf = cone.size();

  std::vector<detail::Point> points;
  for (int r = 1; r <= radius; ++r) {
    detail::forEachShellPoint(cone.rank(), r, [&](const detail::Point& p) {
      for (std::size_t j = 0; j < nf; ++j)
        if (cone.smallValue(j, p) < 1) return true;
      points.push_back(p);
      return true;
    });
  }
  std::sort(points.begin(), points.end());

  std::vector<Integer> base(nf);
  for (std::size_t k = 0; k < nf; ++k) base[k] = cone.value(k, canonical);

  auto found = [&](const std::vector<std::size_t>& chosen, const std::vector<Integer>& acc) {
    for (std::size_t k = 0; k < nf; ++k)
      if (acc[k] < 0) {
        Refutation ref;
        for (auto i : chosen) ref.tuple.push_back(cone.classAt(points[i]));
        ref.functional = k;
        ref.value = acc[k];
        return std::optional<Refutation>(std::move(ref));
      }
    return std::optional<Refutation>();
  };

  if (m == 0) return found({}, base);
  if (points.empty()) return std::nullopt;

  std::vector<std::vector<std::int64_t>> vals(points.size(), std::vector<std::int64_t>(nf));
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t k = 0; k < nf; ++k) vals[i][k] = cone.smallValue(k, points[i]);
  std::vector<std::vector<std::int64_t>> suffixMin(points.size() + 1,
                                                   std::vector<std::int64_t>(nf, INT64_MAX));
  for (std::size_t i = points.size(); i-- > 0;)
    for (std::size_t k = 0; k < nf; ++k) suffixMin[i][k] = std::min(suffixMin[i + 1][k], vals[i][k]);

  std::vector<std::size_t> chosen;
  std::optional<Refutation> out;
  auto canStillFail = [&](const std::vector<Integer>& acc, std::size_t from, int remaining) {
    for (std::size_t k = 0; k < nf; ++k)
      if (acc[k] + Integer(remaining) * suffixMin[from][k] < 0) return true;
    return false;
  };
  std::function<void(std::size_t, std::vector<Integer>&)> dfs = [&](std::size_t start, std::vector<Integer>& acc) {
    if (out) return;
    const int remaining = m - static_cast<int>(chosen.size());
    if (remaining == 0) {
      out = found(chosen, acc);
      return;
    }
    for (std::size_t i = start; i < points.size() && !out; ++i) {
      if (!canStillFail(acc, i, remaining)) return;
      for (std::size_t k = 0; k < nf; ++k) acc[k] += vals[i][k];
      chosen.push_back(i);
      dfs(i, acc);
      chosen.pop_back();
      for (std::size_t k = 0; k < nf; ++k) acc[k] -= vals[i][k];
    }
  };
  dfs(0, base);
  return out;
}

}  // namespace confn
