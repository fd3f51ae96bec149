#ifndef QCONF_RATIONAL_HPP
#define QCONF_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qconf {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Accepts "p/q", plain integers, and finite decimals ("0.25"), all parsed
// exactly. No binary floating point is involved anywhere.
inline Rat parse_rational(const std::string& text) {
  std::size_t b = text.find_first_not_of(" \t");
  std::size_t e = text.find_last_not_of(" \t");
  if (b == std::string::npos)
    throw std::invalid_argument("empty rational literal");
  std::string s = text.substr(b, e - b + 1);

  bool negative = false;
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') {
    negative = (s[i] == '-');
    ++i;
  }

  auto digits = [&](std::size_t from, std::size_t to) -> BigInt {
    if (from == to)
      throw std::invalid_argument("malformed rational literal: '" + text + "'");
    BigInt acc = 0;
    for (std::size_t k = from; k < to; ++k) {
      if (s[k] < '0' || s[k] > '9')
        throw std::invalid_argument("malformed rational literal: '" + text + "'");
      acc = acc * 10 + (s[k] - '0');
    }
    return acc;
  };

  Rat value;
  std::size_t slash = s.find('/', i);
  std::size_t dot = s.find('.', i);
  if (slash != std::string::npos) {
    BigInt num = digits(i, slash);
    BigInt den = digits(slash + 1, s.size());
    if (den == 0)
      throw std::invalid_argument("zero denominator in '" + text + "'");
    value = Rat(num, den);
  } else if (dot != std::string::npos) {
    BigInt ip = (dot == i) ? BigInt(0) : digits(i, dot);
    BigInt frac = digits(dot + 1, s.size());
    BigInt scale = 1;
    for (std::size_t k = dot + 1; k < s.size(); ++k) scale *= 10;
    value = Rat(ip * scale + frac, scale);
  } else {
    value = Rat(digits(i, s.size()));
  }
  return negative ? Rat(-value) : value;
}

// Canonical form: "p/q" reduced, or the bare integer when q = 1.
inline std::string format_rational(const Rat& r) {
  if (denominator(r) == 1)
    return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

// Rounded decimal rendering (half away from zero), for display columns only.
inline std::string decimal_string(const Rat& r, int digits) {
  if (digits < 0)
    throw std::invalid_argument("negative decimal precision");
  BigInt num = numerator(r), den = denominator(r);
  bool neg = num < 0;
  if (neg) num = -num;
  BigInt scale = 1;
  for (int k = 0; k < digits; ++k) scale *= 10;
  BigInt q = num * scale / den;
  BigInt rem = num * scale % den;
  if (2 * rem >= den) ++q;
  std::string out = (neg && q != 0) ? "-" : "";
  if (digits == 0) return out + q.str();
  BigInt ip = q / scale, fp = q % scale;
  std::string frac = fp.str();
  frac.insert(frac.begin(), static_cast<std::size_t>(digits) - frac.size(), '0');
  return out + ip.str() + "." + frac;
}

}  // namespace qconf

#endif  // QCONF_RATIONAL_HPP
