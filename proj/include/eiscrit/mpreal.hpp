#pragma once
// Thin RAII wrapper over mpfr_t.
// New values take the calling thread's working precision (see PrecisionScope);
// there is no process-wide precision state, so threads never interfere.

#include <mpfr.h>
#include <gmpxx.h>

#include <string>
#include <utility>

namespace eiscrit {

class PrecisionScope;

class MpReal {
 public:
  MpReal() { init(); mpfr_set_zero(v_, 1); }
  MpReal(long double x) { init(); mpfr_set_ld(v_, x, MPFR_RNDN); }
  MpReal(double x) { init(); mpfr_set_d(v_, x, MPFR_RNDN); }
  MpReal(int x) { init(); mpfr_set_si(v_, x, MPFR_RNDN); }
  MpReal(long x) { init(); mpfr_set_si(v_, x, MPFR_RNDN); }
  explicit MpReal(const mpz_class& z) { init(); mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN); }
  explicit MpReal(const mpq_class& q) { init(); mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }

  MpReal(const MpReal& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  MpReal(MpReal&& o) noexcept {
    v_[0] = o.v_[0];
    o.v_[0]._mpfr_d = nullptr;
  }
  MpReal& operator=(const MpReal& o) {
    if (this == &o) return *this;
    if (!live()) mpfr_init2(v_, mpfr_get_prec(o.v_));
    else if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_)) mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  MpReal& operator=(MpReal&& o) noexcept {
    std::swap(v_[0], o.v_[0]);
    return *this;
  }
  ~MpReal() {
    if (live()) mpfr_clear(v_);
  }

  static mpfr_prec_t precision();
  static void set_thread_precision(mpfr_prec_t bits);

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }
  long double to_ld() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  explicit operator long double() const { return to_ld(); }
  std::string str(int digits = 40) const;

  MpReal& operator+=(const MpReal& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  MpReal& operator-=(const MpReal& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  MpReal& operator*=(const MpReal& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  MpReal& operator/=(const MpReal& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
  MpReal operator-() const { MpReal r(Uninit{}); mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }

  friend MpReal operator+(const MpReal& a, const MpReal& b) { MpReal r(Uninit{}); mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend MpReal operator-(const MpReal& a, const MpReal& b) { MpReal r(Uninit{}); mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend MpReal operator*(const MpReal& a, const MpReal& b) { MpReal r(Uninit{}); mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend MpReal operator/(const MpReal& a, const MpReal& b) { MpReal r(Uninit{}); mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }

  friend bool operator<(const MpReal& a, const MpReal& b) { return mpfr_less_p(a.v_, b.v_); }
  friend bool operator>(const MpReal& a, const MpReal& b) { return mpfr_greater_p(a.v_, b.v_); }
  friend bool operator<=(const MpReal& a, const MpReal& b) { return mpfr_lessequal_p(a.v_, b.v_); }
  friend bool operator>=(const MpReal& a, const MpReal& b) { return mpfr_greaterequal_p(a.v_, b.v_); }
  friend bool operator==(const MpReal& a, const MpReal& b) { return mpfr_equal_p(a.v_, b.v_); }

  int sign() const { return mpfr_sgn(v_); }

 private:
  struct Uninit {};
  explicit MpReal(Uninit) { init(); }
  void init() { mpfr_init2(v_, precision()); }
  bool live() const { return v_[0]._mpfr_d != nullptr; }

  mpfr_t v_;
};

// Sets the working precision of the current thread for the lifetime of the scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(int bits) : saved_(MpReal::precision()) { MpReal::set_thread_precision(bits); }
  ~PrecisionScope() { MpReal::set_thread_precision(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  mpfr_prec_t saved_;
};

MpReal sqrt(const MpReal& x);
MpReal exp(const MpReal& x);
MpReal log(const MpReal& x);
MpReal sin(const MpReal& x);
MpReal cos(const MpReal& x);
MpReal atan2(const MpReal& y, const MpReal& x);
MpReal abs(const MpReal& x);
MpReal fabs(const MpReal& x);
MpReal hypot(const MpReal& x, const MpReal& y);
MpReal floor(const MpReal& x);
MpReal ldexp(const MpReal& x, int e);
MpReal mp_pi();

}  // namespace eiscrit
