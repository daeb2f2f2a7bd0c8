#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "coinfeed/errors.hpp"

namespace coinfeed {

// Exact non-negative rational, used for the decoding radius r. Radii are
// compared against integer round counts, so floating point is never involved
// in a board-threshold decision.
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Ratio() = default;
  Ratio(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) fail("invalid-config", "ratio with zero denominator");
    if (num < 0 || den < 0) fail("invalid-config", "negative ratio");
    const std::int64_t g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  // floor(r * n), computed exactly.
  std::int64_t floor_mul(std::int64_t n) const {
    const __int128 p = static_cast<__int128>(num) * n;
    return static_cast<std::int64_t>(p / den);
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

  // Accepts "p/q", an integer, or a plain decimal ("0.3" -> 3/10).
  static Ratio parse(const std::string& text);
};

bool operator==(const Ratio& a, const Ratio& b);

}  // namespace coinfeed
