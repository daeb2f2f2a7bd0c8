#include "coinfeed/ratio.hpp"

#include <cctype>
#include <cstdlib>

namespace coinfeed {

namespace {

std::int64_t parse_int(const std::string& s) {
  if (s.empty()) fail("invalid-config", "empty number in ratio");
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) fail("invalid-config", "bad ratio literal: " + s);
  return std::strtoll(s.c_str(), nullptr, 10);
}

}  // namespace

Ratio Ratio::parse(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    return Ratio(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  }
  const auto dot = text.find('.');
  if (dot != std::string::npos) {
    const std::string whole = text.substr(0, dot);
    const std::string frac = text.substr(dot + 1);
    if (frac.size() > 18) fail("invalid-config", "decimal too precise: " + text);
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const std::int64_t w = whole.empty() ? 0 : parse_int(whole);
    const std::int64_t f = frac.empty() ? 0 : parse_int(frac);
    return Ratio(w * den + f, den);
  }
  return Ratio(parse_int(text), 1);
}

bool operator==(const Ratio& a, const Ratio& b) { return a.num == b.num && a.den == b.den; }

}  // namespace coinfeed
