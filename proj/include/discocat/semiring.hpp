#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

namespace discocat {

/// The scalar structures a Matrix can carry.
///
/// All three are stored as `double`: Boolean uses {0, 1} with (or, and),
/// nonneg-real uses (+, *) on [0, inf), fuzzy uses (max, min) on [0, 1].
enum class Semiring { kBoolean, kReal, kFuzzy };

using Scalar = double;

constexpr std::string_view to_string(Semiring s) {
  switch (s) {
    case Semiring::kBoolean:
      return "boolean";
    case Semiring::kReal:
      return "real";
    case Semiring::kFuzzy:
      return "fuzzy";
  }
  return "?";
}

// Accepts the CLI spellings plus "nonneg-real" / "fuzzy-minmax".
inline std::optional<Semiring> parse_semiring(std::string_view name) {
  if (name == "boolean" || name == "bool") return Semiring::kBoolean;
  if (name == "real" || name == "nonneg-real") return Semiring::kReal;
  if (name == "fuzzy" || name == "fuzzy-minmax") return Semiring::kFuzzy;
  return std::nullopt;
}

constexpr Scalar zero(Semiring) { return 0.0; }
constexpr Scalar one(Semiring) { return 1.0; }

constexpr Scalar add(Semiring s, Scalar a, Scalar b) {
  switch (s) {
    case Semiring::kBoolean:
      return (a != 0.0 || b != 0.0) ? 1.0 : 0.0;
    case Semiring::kReal:
      return a + b;
    case Semiring::kFuzzy:
      return a < b ? b : a;
  }
  return 0.0;
}

constexpr Scalar mul(Semiring s, Scalar a, Scalar b) {
  switch (s) {
    case Semiring::kBoolean:
      return (a != 0.0 && b != 0.0) ? 1.0 : 0.0;
    case Semiring::kReal:
      return a * b;
    case Semiring::kFuzzy:
      return a < b ? a : b;
  }
  return 0.0;
}

inline bool is_valid(Semiring s, Scalar x) {
  switch (s) {
    case Semiring::kBoolean:
      return x == 0.0 || x == 1.0;
    case Semiring::kReal:
      return std::isfinite(x) && x >= 0.0;
    case Semiring::kFuzzy:
      return x >= 0.0 && x <= 1.0;
  }
  return false;
}

/// Default relative tolerance for nonneg-real comparisons.
inline constexpr double kDefaultRelTol = 1e-9;

/// Exact for Boolean and fuzzy, relative tolerance for nonneg-real.
inline bool scalars_equal(Semiring s, Scalar a, Scalar b,
                          double rel_tol = kDefaultRelTol) {
  if (s != Semiring::kReal || a == b) return a == b;
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= rel_tol * scale;
}

}  // namespace discocat
