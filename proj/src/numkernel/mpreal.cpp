#include "eiscrit/mpreal.hpp"

#include <vector>

namespace eiscrit {

namespace {
thread_local mpfr_prec_t tl_precision = 128;
}

mpfr_prec_t MpReal::precision() { return tl_precision; }
void MpReal::set_thread_precision(mpfr_prec_t bits) { tl_precision = bits < MPFR_PREC_MIN ? MPFR_PREC_MIN : bits; }

std::string MpReal::str(int digits) const {
  std::vector<char> buf(digits + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
  return std::string(buf.data());
}

#define EISCRIT_UNARY(name, fn)              \
  MpReal name(const MpReal& x) {             \
    MpReal r;                                \
    fn(r.raw(), x.raw(), MPFR_RNDN);         \
    return r;                                \
  }

EISCRIT_UNARY(sqrt, mpfr_sqrt)
EISCRIT_UNARY(exp, mpfr_exp)
EISCRIT_UNARY(log, mpfr_log)
EISCRIT_UNARY(sin, mpfr_sin)
EISCRIT_UNARY(cos, mpfr_cos)
EISCRIT_UNARY(abs, mpfr_abs)
EISCRIT_UNARY(fabs, mpfr_abs)
#undef EISCRIT_UNARY

MpReal atan2(const MpReal& y, const MpReal& x) {
  MpReal r;
  mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
  return r;
}

MpReal hypot(const MpReal& x, const MpReal& y) {
  MpReal r;
  mpfr_hypot(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}

MpReal floor(const MpReal& x) {
  MpReal r;
  mpfr_floor(r.raw(), x.raw());
  return r;
}

MpReal ldexp(const MpReal& x, int e) {
  MpReal r;
  mpfr_mul_2si(r.raw(), x.raw(), e, MPFR_RNDN);
  return r;
}

MpReal mp_pi() {
  MpReal r;
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

}  // namespace eiscrit
