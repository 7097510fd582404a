#pragma once
// Exact arithmetic and certified evaluation of Eisenstein series and friends.

#include <gmpxx.h>

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "eiscrit/cx.hpp"
#include "eiscrit/errors.hpp"

namespace eiscrit {

using Real = long double;
using Complex = std::complex<long double>;

class HalfPlanePoint {
 public:
  HalfPlanePoint(Real re, Real im);
  explicit HalfPlanePoint(Complex z) : HalfPlanePoint(z.real(), z.imag()) {}
  Real re() const { return re_; }
  Real im() const { return im_; }
  Complex z() const { return {re_, im_}; }

 private:
  Real re_, im_;
};

struct EvalBudget {
  int working_precision_bits = 128;
  Real target_abs_error = 1e-30L;
  long max_terms = 200000;
  // Optional: also accept once the certified error is below rel * |value|.
  Real target_rel_error = 0;
  // Precision escalation (doubling) stops here.
  int max_precision_bits = 1024;

  void validate() const;
  // The error the result must meet, given the magnitude of the value.
  Real target_for(Real magnitude) const;
  // long double only, no escalation
  static EvalBudget fast() { return {64, 1e-60L, 400000, 1e-17L, 64}; }
  static EvalBudget relative(Real rel, int bits = 128) { return {bits, 1e-300L, 400000, rel, 1024}; }
};

struct EvalResult {
  Complex value{};
  Real tail_bound = 0;
  long terms_used = 0;
  Real rounding_bound = 0;  // estimate of accumulated floating error
  int precision_bits = 0;

  Real error_bound() const { return tail_bound + rounding_bound; }
};

class RationalNumber {
 public:
  RationalNumber() = default;
  RationalNumber(long n) : q_(n) {}
  RationalNumber(long n, long d);
  explicit RationalNumber(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }
  // Accepts "p", "p/q" and "-p/q".
  static RationalNumber parse(const std::string& s);

  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }
  const mpq_class& get() const { return q_; }
  std::string str() const;
  long double to_ld() const;
  bool is_zero() const { return sgn(q_) == 0; }
  int sign() const { return sgn(q_); }

  friend RationalNumber operator+(const RationalNumber& a, const RationalNumber& b) { return RationalNumber(mpq_class(a.q_ + b.q_)); }
  friend RationalNumber operator-(const RationalNumber& a, const RationalNumber& b) { return RationalNumber(mpq_class(a.q_ - b.q_)); }
  friend RationalNumber operator*(const RationalNumber& a, const RationalNumber& b) { return RationalNumber(mpq_class(a.q_ * b.q_)); }
  friend RationalNumber operator/(const RationalNumber& a, const RationalNumber& b);
  RationalNumber operator-() const { return RationalNumber(mpq_class(-q_)); }
  RationalNumber& operator+=(const RationalNumber& o) { q_ += o.q_; return *this; }
  RationalNumber& operator-=(const RationalNumber& o) { q_ -= o.q_; return *this; }
  RationalNumber& operator*=(const RationalNumber& o) { q_ *= o.q_; return *this; }
  friend bool operator==(const RationalNumber& a, const RationalNumber& b) { return a.q_ == b.q_; }
  friend bool operator!=(const RationalNumber& a, const RationalNumber& b) { return a.q_ != b.q_; }
  friend bool operator<(const RationalNumber& a, const RationalNumber& b) { return a.q_ < b.q_; }

 private:
  mpq_class q_{0};
};

RationalNumber bernoulli(int k);
mpz_class divisor_power_sum(long n, int e);
// -2k/B_k, the Fourier coefficient multiplier of E_k.
RationalNumber eisenstein_multiplier(int k);

EvalResult eval_Ek(int k, const HalfPlanePoint& z, const EvalBudget& budget = {});
EvalResult eval_Ek_deriv(int k, const HalfPlanePoint& z, int r, const EvalBudget& budget = {});
// E_k, E_k', ..., E_k^{(rmax)} from a single pass over the q-series.
std::vector<EvalResult> eval_Ek_jet(int k, const HalfPlanePoint& z, int rmax, const EvalBudget& budget = {});
EvalResult eval_hk(int k, const HalfPlanePoint& z, const EvalBudget& budget = {});
EvalResult eval_hk_lattice(int k, const HalfPlanePoint& z, const EvalBudget& budget = {});
EvalResult eval_Gk_lattice(int k, const HalfPlanePoint& z, const EvalBudget& budget = {});
EvalResult eval_E2(const HalfPlanePoint& z, const EvalBudget& budget = {});
EvalResult eval_Delta(const HalfPlanePoint& z, const EvalBudget& budget = {});

struct ArcPair {
  EvalResult f;  // real; imaginary part discarded after the consistency check
  EvalResult g;
};
ArcPair eval_fk_gk(int k, Real theta, const EvalBudget& budget = {});

// ---- generic layer, instantiated for long double and MpReal ----

template <class T>
struct Jet {
  std::vector<Cx<T>> v;             // v[r] = r-th derivative
  std::vector<long double> tail;    // certified truncation bound per order
  std::vector<long double> rounding;
  long terms = 0;
};

// Derivatives 0..rmax of E_k at z.
template <class T>
Jet<T> eisenstein_jet(int k, const Cx<T>& z, int rmax, long double target_abs, long double target_rel, long max_terms);

// h_k(z) = sum n sigma_{k-1}(n) q^n, k >= 2 of any parity.
template <class T>
Jet<T> hk_series(int k, const Cx<T>& z, long double target_abs, long double target_rel, long max_terms);

template <class T>
struct LatticeSum {
  Cx<T> value;
  long double tail = 0;
  long double rounding = 0;
  long terms = 0;
};

template <class T>
LatticeSum<T> hk_lattice(int k, const Cx<T>& z, long double target_abs, long double target_rel, long max_terms);
template <class T>
LatticeSum<T> gk_lattice(int k, const Cx<T>& z, long double target_abs, long double target_rel, long max_terms);

}  // namespace eiscrit
