#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <string>
#include <vector>

#include "nilspec/error.hpp"
#include "nilspec/matrix.hpp"

namespace nilspec {

using Rational = boost::multiprecision::cpp_rational;
using RationalMatrix = BasicMatrix<Rational>;

/// Monic coefficients of det(lambda I - M), highest power first.
template <typename T>
struct PolyCoeffs {
  std::vector<T> coeffs;

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  /// Coefficient of lambda^power.
  const T& of_power(std::size_t power) const { return coeffs[degree() - power]; }
};

inline constexpr std::size_t kMaxCharPolyDim = 64;

/// Characteristic polynomial by the Faddeev-LeVerrier recursion
///
///   M_0 = 0,  M_r = A M_{r-1} + c_{r-1} I,  c_r = -tr(A M_r) / r,
///
/// where c_r is the coefficient of lambda^{n-r}. Exact when `T` is Rational.
template <typename T>
PolyCoeffs<T> char_poly(const BasicMatrix<T>& a) {
  a.require_square("char_poly");
  const std::size_t n = a.rows();
  if (n > kMaxCharPolyDim) throw ShapeError("char_poly: dimension exceeds 64");
  PolyCoeffs<T> p;
  p.coeffs.assign(n + 1, T(0));
  p.coeffs[0] = T(1);
  BasicMatrix<T> mk(n, n);
  for (std::size_t r = 1; r <= n; ++r) {
    for (std::size_t i = 0; i < n; ++i) mk(i, i) += p.coeffs[r - 1];
    mk = a * mk;
    p.coeffs[r] = -mk.trace() / T(static_cast<long long>(r));
  }
  return p;
}

/// Parses "p/q", "p" or a decimal literal such as "-0.25" into an exact rational.
inline Rational parse_rational(const std::string& text) {
  using boost::multiprecision::cpp_int;
  const auto bad = [&] { return InputError("malformed rational literal '" + text + "'"); };
  // Decimal digits only; cpp_int's own parser would read a leading 0 as octal.
  const auto parse_int = [&](std::string s) {
    bool negative = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
      negative = s[0] == '-';
      s.erase(0, 1);
    }
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw bad();
    cpp_int v = 0;
    for (char ch : s) v = v * 10 + (ch - '0');
    return negative ? cpp_int(-v) : v;
  };
  if (text.empty()) throw bad();
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const cpp_int den = parse_int(text.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in '" + text + "'");
    return Rational(parse_int(text.substr(0, slash)), den);
  }
  if (const auto dot = text.find('.'); dot != std::string::npos) {
    const std::string frac = text.substr(dot + 1);
    if (frac.find_first_not_of("0123456789") != std::string::npos) throw bad();
    cpp_int den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    std::string whole = text.substr(0, dot);
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    return Rational(parse_int(whole + frac), den);
  }
  return Rational(parse_int(text));
}

inline double to_double(const Rational& r) { return static_cast<double>(r); }

}  // namespace nilspec
