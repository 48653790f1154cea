#pragma once

#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace treeperm {

// Exact scalars. Every engine is written against the Ring concept below and
// never divides; the two shipped instantiations are these.
using Integer = mpz_class;
using Rational = mpq_class;

template <class T>
concept Ring = std::regular<T> && requires(const T& a, const T& b, T& c) {
  T(0);
  T(1);
  { T(a + b) };
  { T(a - b) };
  { T(a * b) };
  { T(-a) };
  c += a;
  c -= a;
};

template <Ring T>
inline bool is_zero(const T& v) {
  return v == T(0);
}
inline bool is_zero(const Integer& v) { return sgn(v) == 0; }
inline bool is_zero(const Rational& v) { return sgn(v) == 0; }

/// Counts ring multiplications performed by a kernel.
struct OpCounter {
  std::uint64_t mults = 0;
  void add(std::uint64_t k = 1) noexcept { mults += k; }
};

template <Ring T>
T parse_scalar(std::string_view text);

/// Decimal integer, optional leading sign.
template <>
inline Integer parse_scalar<Integer>(std::string_view text) {
  std::string s(text);
  if (!s.empty() && s[0] == '+') s.erase(0, 1);
  if (s.empty() || s == "-") throw std::invalid_argument("empty integer literal");
  for (std::size_t i = (s[0] == '-') ? 1 : 0; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad integer literal '" + std::string(text) + "'");
  return Integer(s, 10);
}

/// Integer or `p/q`; canonicalized. Zero denominators are rejected.
template <>
inline Rational parse_scalar<Rational>(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_scalar<Integer>(text));
  Integer num = parse_scalar<Integer>(text.substr(0, slash));
  Integer den = parse_scalar<Integer>(text.substr(slash + 1));
  if (sgn(den) == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Integer& v) { return v.get_str(); }
inline std::string to_string(const Rational& v) { return v.get_str(); }

} // namespace treeperm
