#pragma once

#include <atomic>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

namespace confn {

using Integer = boost::multiprecision::cpp_int;
using Json = nlohmann::json;

/// Base of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LatticeMismatch : public Error {
 public:
  using Error::Error;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

class DescriptorError : public Error {
 public:
  using Error::Error;
};

class ConstructionError : public Error {
 public:
  using Error::Error;
};

class ConeError : public Error {
 public:
  using Error::Error;
};

/// A rule could not be applied because a search did not certify its input.
class InconclusiveError : public Error {
 public:
  using Error::Error;
};

/// Resolver produced lo > hi. Never a valid state.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline std::uint64_t nextId() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

inline bool fitsInt64(const Integer& v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

inline std::int64_t toInt64(const Integer& v, const char* what) {
  if (!fitsInt64(v)) throw Error(std::string(what) + ": value out of 64-bit range");
  return static_cast<std::int64_t>(v);
}

/// Floor division for arbitrary-precision integers (cpp_int truncates).
inline Integer floorDiv(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Integer ceilDiv(const Integer& a, const Integer& b) { return -floorDiv(-a, b); }

inline Integer mod(const Integer& a, const Integer& n) {
  Integer r = a % n;
  if (r < 0) r += n;
  return r;
}

}  // namespace detail

inline Json toJson(const Integer& v) {
  if (detail::fitsInt64(v)) return Json(static_cast<std::int64_t>(v));
  return Json(v.str());
}

inline Integer integerFromJson(const Json& j) {
  if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
  if (j.is_string()) return Integer(j.get<std::string>());
  throw Error("expected an integer in JSON, got " + j.dump());
}

inline Json toJson(const std::vector<Integer>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(toJson(x));
  return out;
}

inline std::vector<Integer> integersFromJson(const Json& j) {
  if (!j.is_array()) throw Error("expected an integer array in JSON, got " + j.dump());
  std::vector<Integer> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(integerFromJson(x));
  return out;
}

}  // namespace confn
