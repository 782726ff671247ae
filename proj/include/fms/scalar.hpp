#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace fms {

/// Exact scalar backend. Every IEEE double is a dyadic rational, so lifting
/// a double instance into Rational is lossless; only divisions introduce
/// non-dyadic denominators.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

using Index = Eigen::Index;

/// Column array over the finest atoms (or over the atoms of one level).
template <typename S>
using Vec = Eigen::Array<S, Eigen::Dynamic, 1>;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

template <typename S>
S from_double(double x);

template <>
inline double from_double<double>(double x) {
  return x;
}

template <>
inline Rational from_double<Rational>(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("cannot lift non-finite value to Rational");
  return Rational(x);  // exact
}

template <typename S>
constexpr bool is_rational_v = std::is_same_v<S, Rational>;

inline bool is_integer(double x) {
  return std::isfinite(x) && x == std::floor(x) && std::abs(x) <= 1e15;
}
inline bool is_integer(const Rational& x) { return denominator(x) == 1; }

inline long to_long(double x) { return static_cast<long>(std::llround(x)); }
inline long to_long(const Rational& x) { return numerator(x).convert_to<long>(); }

/// Exact 2^k for k of either sign.
template <typename S>
S pow2(int k) {
  if constexpr (is_rational_v<S>) {
    if (k >= 0) return Rational(BigInt(1) << k);
    return Rational(BigInt(1), BigInt(1) << (-k));
  } else {
    return std::ldexp(S(1), k);
  }
}

/// base^e for integer e, exact over Rational (e < 0 requires base != 0).
template <typename S>
S pow_int(S base, long e) {
  if (e < 0) {
    if (base == S(0)) throw std::domain_error("pow_int: zero base with negative exponent");
    base = S(1) / base;
    e = -e;
  }
  S r(1);
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

/// base^expo. Integer exponents are evaluated exactly; fractional exponents
/// go through double precision (documented 1e-9 tolerance in rational mode).
template <typename S>
S power(const S& base, const S& expo) {
  if (is_integer(expo)) return pow_int(base, to_long(expo));
  return from_double<S>(std::pow(to_double(base), to_double(expo)));
}

/// exp/log are transcendental and always evaluated in double precision.
template <typename S>
S exp_of(const S& x) {
  return from_double<S>(std::exp(to_double(x)));
}
template <typename S>
S log_of(const S& x) {
  if (!(x > S(0))) throw std::domain_error("log_of: nonpositive argument");
  return from_double<S>(std::log(to_double(x)));
}

/// The unique k with 2^{k-1} < v <= 2^k, for v > 0. Exact over Rational.
template <typename S>
int dyadic_shell(const S& v) {
  if (!(v > S(0))) throw std::domain_error("dyadic_shell: argument must be positive");
  int k;
  if constexpr (is_rational_v<S>) {
    double d = to_double(v);
    int e = 0;
    std::frexp(d > 0 ? d : std::numeric_limits<double>::min(), &e);
    k = e;  // first guess from the double approximation, then fix up exactly
    while (pow2<S>(k - 1) >= v) --k;
    while (pow2<S>(k) < v) ++k;
  } else {
    int e = 0;
    double m = std::frexp(v, &e);
    k = (m == 0.5) ? e - 1 : e;
  }
  return k;
}

/// Conjugate exponent p' = p/(p-1); exact over Rational.
template <typename S>
S conjugate_exponent(const S& p) {
  if (!(p > S(1))) throw std::invalid_argument("conjugate_exponent: requires p > 1");
  return p / (p - S(1));
}

/// Comparison slack for floating point runs. Rational comparisons are exact.
struct Tolerance {
  double rel = 1e-9;
  double abs = 1e-12;
};

inline bool le_tol(double a, double b, Tolerance t = {}) {
  return a <= b + t.rel * std::max(std::abs(a), std::abs(b)) + t.abs;
}
inline bool close_tol(double a, double b, Tolerance t = {}) {
  return le_tol(a, b, t) && le_tol(b, a, t);
}

/// a <= b, with relative slack in double mode and exactly in rational mode.
template <typename S>
bool le_with_slack(const S& a, const S& b, Tolerance t = {}) {
  if constexpr (is_rational_v<S>) {
    (void)t;
    return a <= b;
  } else {
    return le_tol(a, b, t);
  }
}

template <typename S>
bool eq_with_slack(const S& a, const S& b, Tolerance t = {}) {
  if constexpr (is_rational_v<S>) {
    (void)t;
    return a == b;
  } else {
    return close_tol(a, b, t);
  }
}

}  // namespace fms
