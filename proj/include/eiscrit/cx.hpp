#pragma once
// Minimal complex type usable with both long double and MpReal.

#include <cmath>
#include <complex>

#include "eiscrit/mpreal.hpp"

namespace eiscrit {

template <class T>
struct Cx {
  T re{}, im{};

  Cx() = default;
  Cx(const T& r) : re(r), im(0) {}
  Cx(const T& r, const T& i) : re(r), im(i) {}

  Cx& operator+=(const Cx& o) { re += o.re; im += o.im; return *this; }
  Cx& operator-=(const Cx& o) { re -= o.re; im -= o.im; return *this; }
  Cx& operator*=(const Cx& o) {
    T r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Cx& operator*=(const T& s) { re *= s; im *= s; return *this; }
  Cx& operator/=(const Cx& o) { *this = *this / o; return *this; }
  Cx operator-() const { return {-re, -im}; }

  friend Cx operator+(Cx a, const Cx& b) { return a += b; }
  friend Cx operator-(Cx a, const Cx& b) { return a -= b; }
  friend Cx operator*(Cx a, const Cx& b) { return a *= b; }
  friend Cx operator*(Cx a, const T& s) { return a *= s; }
  friend Cx operator*(const T& s, Cx a) { return a *= s; }
  friend Cx operator/(const Cx& a, const Cx& b) {
    using std::fabs;
    // Smith's algorithm
    if (fabs(b.re) >= fabs(b.im)) {
      T r = b.im / b.re;
      T den = b.re + b.im * r;
      return {(a.re + a.im * r) / den, (a.im - a.re * r) / den};
    }
    T r = b.re / b.im;
    T den = b.re * r + b.im;
    return {(a.re * r + a.im) / den, (a.im * r - a.re) / den};
  }
  friend Cx operator/(const Cx& a, const T& s) { return {a.re / s, a.im / s}; }
};

template <class T>
Cx<T> conj(const Cx<T>& z) { return {z.re, -z.im}; }

template <class T>
T norm(const Cx<T>& z) { return z.re * z.re + z.im * z.im; }

template <class T>
T abs(const Cx<T>& z) { using std::hypot; return hypot(z.re, z.im); }

template <class T>
T arg(const Cx<T>& z) { using std::atan2; return atan2(z.im, z.re); }

// e^{i t}
template <class T>
Cx<T> cis(const T& t) { using std::cos; using std::sin; return {cos(t), sin(t)}; }

template <class T>
Cx<T> exp(const Cx<T>& z) {
  using std::exp;
  T m = exp(z.re);
  Cx<T> c = cis(z.im);
  return {m * c.re, m * c.im};
}

template <class T>
Cx<T> log(const Cx<T>& z) { using std::log; return {log(abs(z)), arg(z)}; }

template <class T>
Cx<T> powi(Cx<T> z, long n) {
  if (n < 0) return Cx<T>(T(1)) / powi(z, -n);
  Cx<T> r(T(1));
  while (n) {
    if (n & 1) r *= z;
    n >>= 1;
    if (n) z *= z;
  }
  return r;
}

template <class T>
T pi_const();
template <>
inline long double pi_const<long double>() { return 3.141592653589793238462643383279502884L; }
template <>
inline MpReal pi_const<MpReal>() { return mp_pi(); }

inline long double to_ld(long double x) { return x; }
inline long double to_ld(const MpReal& x) { return x.to_ld(); }

template <class T>
std::complex<long double> to_std(const Cx<T>& z) { return {to_ld(z.re), to_ld(z.im)}; }

template <class T>
Cx<T> from_std(const std::complex<long double>& z) { return {T(z.real()), T(z.imag())}; }

// relative rounding unit of T at the current working precision
template <class T>
long double unit_roundoff();
template <>
inline long double unit_roundoff<long double>() { return std::ldexp(1.0L, -63); }
template <>
inline long double unit_roundoff<MpReal>() { return std::ldexp(1.0L, -static_cast<int>(MpReal::precision()) + 1); }

}  // namespace eiscrit
