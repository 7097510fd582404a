// q-series evaluation with the geometric-domination tail certificate.
#include <cmath>

#include "eiscrit/numkernel.hpp"
#include "tables.hpp"

namespace eiscrit {

namespace {

// log of an upper bound for sigma_e(n)
long double log_sigma_bound(int e, long double n) {
  if (e >= 2) return std::log(2.0L) + e * std::log(n);
  if (e == 1) return std::log(n) + std::log1p(std::log(n));
  return std::log(2.0L) + 0.5L * std::log(n);
}

// log of the bound on |mult * n^r sigma_e(n) q^n|
long double log_term_bound(int e, int r, long double log_mult, long double log_q, long n) {
  long double ln = static_cast<long double>(n);
  return log_mult + r * std::log(ln) + log_sigma_bound(e, ln) + ln * log_q;
}

template <class T>
Cx<T> q_of(const Cx<T>& z) {
  using std::exp;
  using std::floor;
  T two_pi = 2 * pi_const<T>();
  T x = z.re - floor(z.re);
  Cx<T> c = cis(T(two_pi * x));
  T m = exp(T(-(two_pi * z.im)));
  return {m * c.re, m * c.im};
}

// Crude size estimate for the sigma table: first n where the bound is below target.
long estimate_terms(int e, int rmax, long double log_mult, long double log_q, long double log_target) {
  long n = 1;
  while (n < 50000000 && log_term_bound(e, rmax, log_mult, log_q, n) > log_target) n = n * 2;
  return n;
}

struct SeriesPlan {
  int e;
  int rmin, rmax;
  std::vector<long double> log_mult;  // indexed by r - rmin
  std::vector<std::complex<long double>> mult;  // value = offset + mult * S_r
  std::vector<long double> offset;
};

// Computes S_r = sum_{n>=1} n^r sigma_e(n) q^n for rmin <= r <= rmax.
template <class T>
void raw_series(const SeriesPlan& sp, const Cx<T>& z, long double target_abs, long double target_rel, long max_terms,
                std::vector<Cx<T>>& sums, std::vector<long double>& tails, std::vector<long double>& rounding,
                long& terms) {
  using std::floor;
  const int nr = sp.rmax - sp.rmin + 1;
  const long double y = to_ld(z.im);
  const long double log_q = -2 * pi_const<long double>() * y;
  const long double u = unit_roundoff<T>();
  const long double zmag = std::hypot(to_ld(z.re - floor(z.re)), y);

  sums.assign(nr, Cx<T>(T(0)));
  tails.assign(nr, 0);
  rounding.assign(nr, 0);
  std::vector<long double> abs_acc(nr, 0);
  std::vector<bool> done(nr, false);

  long double max_log_mult = sp.log_mult[0];
  for (auto v : sp.log_mult) max_log_mult = std::max(max_log_mult, v);
  long double lt = std::log(std::max(target_abs, 1e-4000L));
  long need = std::min<long>(max_terms, estimate_terms(sp.e, sp.rmax, max_log_mult, log_q, lt)) + 64;
  auto table = detail::SigmaTable<T>::get(sp.e, need);

  Cx<T> q = q_of(z);
  Cx<T> qp = q;
  long n = 1;
  int remaining = nr;
  for (;; ++n) {
    if (n > max_terms) {
      long double best = 0;
      for (int i = 0; i < nr; ++i)
        best = std::max(best, 2 * std::exp(log_term_bound(sp.e, sp.rmin + i, sp.log_mult[i], log_q, n)));
      throw CertificationError("q-series: term budget exhausted", best);
    }
    if (n >= static_cast<long>(table->size())) table = detail::SigmaTable<T>::get(sp.e, 2 * n);
    Cx<T> t = qp * (*table)[n];
    for (int i = 0; i < sp.rmin; ++i) t *= T(n);
    const T tn(n);
    for (int i = 0; i < nr; ++i) {
      if (i) t *= tn;
      if (!done[i]) {
        sums[i] += t;
        long double lb = log_term_bound(sp.e, sp.rmin + i, sp.log_mult[i], log_q, n);
        long double b = std::exp(lb);
        abs_acc[i] += (n + 4) * b;
        long double lb1 = log_term_bound(sp.e, sp.rmin + i, sp.log_mult[i], log_q, n + 1);
        bool ratio_ok = lb1 - lb < -std::log(2.0L);
        if (ratio_ok) {
          long double target = target_abs;
          if (target_rel > 0) {
            auto s = to_std(sums[i]);
            long double mag = std::abs(sp.offset[i] + sp.mult[i] * std::complex<long double>(s));
            target = std::max(target, target_rel * mag);
          }
          if (b < target / 4) {
            done[i] = true;
            tails[i] = 2 * std::exp(lb1);
            rounding[i] = 2 * u * (2 * pi_const<long double>() * zmag + 2) * abs_acc[i];
            --remaining;
          }
        }
      }
    }
    if (remaining == 0) break;
    qp *= q;
  }
  terms = n;
}

template <class T>
T rational_to(const RationalNumber& r);
template <>
long double rational_to<long double>(const RationalNumber& r) { return r.to_ld(); }
template <>
MpReal rational_to<MpReal>(const RationalNumber& r) { return MpReal(r.get()); }

}  // namespace

template <class T>
Jet<T> eisenstein_jet(int k, const Cx<T>& z, int rmax, long double target_abs, long double target_rel, long max_terms) {
  if (k < 2 || k % 2) throw DomainError("eisenstein_jet: k must be even and >= 2");
  if (rmax < 0) throw DomainError("eisenstein_jet: derivative order must be >= 0");
  if (!(to_ld(z.im) > 0)) throw DomainError("eisenstein_jet: point not in the upper half-plane");
  RationalNumber c = eisenstein_multiplier(k);
  long double cld = c.to_ld();
  const long double two_pi = 2 * pi_const<long double>();

  SeriesPlan sp{k - 1, 0, rmax, {}, {}, {}};
  std::complex<long double> ipow(1, 0);
  for (int r = 0; r <= rmax; ++r) {
    sp.log_mult.push_back(std::log(std::fabs(cld)) + r * std::log(two_pi));
    sp.mult.push_back(cld * std::pow(two_pi, static_cast<long double>(r)) * ipow);
    sp.offset.push_back(r == 0 ? 1.0L : 0.0L);
    ipow *= std::complex<long double>(0, 1);
  }
  Jet<T> out;
  std::vector<Cx<T>> sums;
  raw_series(sp, z, target_abs, target_rel, max_terms, sums, out.tail, out.rounding, out.terms);

  T ct = rational_to<T>(c);
  T tp = 2 * pi_const<T>();
  T scale = ct;
  out.v.resize(rmax + 1);
  for (int r = 0; r <= rmax; ++r) {
    Cx<T> v = sums[r] * scale;
    // multiply by i^r
    for (int j = 0; j < r % 4; ++j) v = Cx<T>(-v.im, v.re);
    if (r == 0) v.re += T(1);
    out.v[r] = v;
    out.rounding[r] += 4 * unit_roundoff<T>() * to_ld(abs(v));
    scale = scale * tp;
  }
  return out;
}

template <class T>
Jet<T> hk_series(int k, const Cx<T>& z, long double target_abs, long double target_rel, long max_terms) {
  if (k < 2) throw DomainError("hk_series: k must be >= 2");
  if (!(to_ld(z.im) > 0)) throw DomainError("hk_series: point not in the upper half-plane");
  SeriesPlan sp{k - 1, 1, 1, {0.0L}, {{1.0L, 0.0L}}, {0.0L}};
  Jet<T> out;
  raw_series(sp, z, target_abs, target_rel, max_terms, out.v, out.tail, out.rounding, out.terms);
  out.rounding[0] += 4 * unit_roundoff<T>() * to_ld(abs(out.v[0]));
  return out;
}

template Jet<long double> eisenstein_jet(int, const Cx<long double>&, int, long double, long double, long);
template Jet<MpReal> eisenstein_jet(int, const Cx<MpReal>&, int, long double, long double, long);
template Jet<long double> hk_series(int, const Cx<long double>&, long double, long double, long);
template Jet<MpReal> hk_series(int, const Cx<MpReal>&, long double, long double, long);

}  // namespace eiscrit
