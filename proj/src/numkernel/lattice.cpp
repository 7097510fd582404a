// Lattice-sum oracle for G_k and h_k.
//
// Sums row by row over c; each row sum_d (cz+d)^{-s} is summed directly for
// |d| < a and its two tails are closed with Euler-Maclaurin (p correction terms,
// certified remainder). Rows with c > C are bounded by the remainder of the
// Euler-Maclaurin formula over the whole line, where the integral vanishes.
#include <cmath>
#include <map>
#include <mutex>

#include "eiscrit/numkernel.hpp"

namespace eiscrit {

namespace {

const long double kLog2Pi = std::log(2 * pi_const<long double>());

// log of the rising factorial (s)_m
long double lrising(int s, int m) { return std::lgamma(static_cast<long double>(s + m)) - std::lgamma(static_cast<long double>(s)); }

// log of |B_2p|/(2p)! * bound with zeta(2p) <= 2
long double lbern_factor(int p) { return std::log(4.0L) - 2 * p * kLog2Pi; }

// log bound on one Euler-Maclaurin tail remainder starting at a, for |Re u| <= 1/2
long double ltail_rem(int s, int p, long a) {
  int m = s + 2 * p - 1;
  return lbern_factor(p) + lrising(s, 2 * p) - std::log(static_cast<long double>(m)) - m * std::log(a - 0.5L);
}

// log of beta(sigma) = int (1+u^2)^{-sigma/2} du
long double lbeta(long double sigma) {
  return 0.5L * std::log(pi_const<long double>()) + std::lgamma((sigma - 1) / 2) - std::lgamma(sigma / 2);
}

// log bound on sum_{c > C} c^nu |row(c z)| with Im z = y
long double lctail(int s, int nu, long double y, long C, int* best_p) {
  long double best = INFINITY;
  for (int p = 1; p <= 400; ++p) {
    long double ex = s + 2 * p - nu - 2;
    if (ex <= 0) continue;
    long double v = lbern_factor(p) + lrising(s, 2 * p) + lbeta(s + 2 * p) + (1 - s - 2 * p) * std::log(y) -
                    ex * std::log(static_cast<long double>(C)) - std::log(ex);
    if (v < best) {
      best = v;
      if (best_p) *best_p = p;
    }
  }
  return best;
}

// Euler-Maclaurin coefficients B_2j (s)_{2j-1} / (2j)!, exact, memoized per (s, p).
std::mutex em_mu;
std::map<int, std::vector<mpq_class>> em_cache;

std::vector<mpq_class> em_coeffs(int s, int p) {
  std::lock_guard<std::mutex> lock(em_mu);
  auto& v = em_cache[s];
  while (static_cast<int>(v.size()) < p) {
    int j = static_cast<int>(v.size()) + 1;
    mpq_class c = bernoulli(2 * j).get();
    mpz_class num = 1, den = 1;
    for (int i = 0; i < 2 * j - 1; ++i) num *= (s + i);
    for (int i = 1; i <= 2 * j; ++i) den *= i;
    c *= mpq_class(num, den);
    c.canonicalize();
    v.push_back(c);
  }
  return std::vector<mpq_class>(v.begin(), v.begin() + p);
}

template <class T>
T from_q(const mpq_class& q);
template <>
long double from_q<long double>(const mpq_class& q) { return RationalNumber(q).to_ld(); }
template <>
MpReal from_q<MpReal>(const mpq_class& q) { return MpReal(q); }

template <class T>
struct Row {
  Cx<T> v;
  long double rem = 0;     // certified Euler-Maclaurin remainder
  long double absmag = 0;  // sum of |terms|, for the rounding estimate
  long terms = 0;
};

// sum over d in Z of (u + d)^{-s}, |Re u| <= 1/2; skip_zero drops d = 0 (used for u = 0)
template <class T>
Row<T> row_sum(const Cx<T>& u, int s, long double tol, bool skip_zero) {
  long a = 16;
  int p = 1;
  for (;; a *= 2) {
    long double best = INFINITY;
    for (int pp = 1; pp <= 60; ++pp) {
      long double v = ltail_rem(s, pp, a);
      if (v < best) {
        best = v;
        p = pp;
      }
    }
    if (best + std::log(2.0L) <= std::log(tol) || a > (1L << 22)) break;
  }
  Row<T> out;
  out.rem = 2 * std::exp(ltail_rem(s, p, a));
  out.v = Cx<T>(T(0));
  const long double ur = to_ld(u.re), ui = to_ld(u.im);
  for (long d = -(a - 1); d <= a - 1; ++d) {
    if (skip_zero && d == 0) continue;
    Cx<T> w(u.re + T(d), u.im);
    out.v += powi(Cx<T>(T(1)) / w, s);
    out.absmag += std::pow(std::hypot(ur + d, ui), -static_cast<long double>(s));
    ++out.terms;
  }
  auto coeffs = em_coeffs(s, p);
  std::vector<T> ct;
  ct.reserve(p);
  for (auto& c : coeffs) ct.push_back(from_q<T>(c));
  // tails: T+(u) + (-1)^s T+(-u)
  for (int side = 0; side < 2; ++side) {
    Cx<T> uu = side == 0 ? u : -u;
    Cx<T> v = uu + Cx<T>(T(a));
    Cx<T> vinv = Cx<T>(T(1)) / v;
    Cx<T> vs = powi(vinv, s);  // v^{-s}
    Cx<T> acc = vs * v * (T(1) / T(s - 1)) + vs * T(0.5L);
    Cx<T> pw = vs * vinv;  // v^{-s-1}
    Cx<T> vinv2 = vinv * vinv;
    for (int j = 0; j < p; ++j) {
      acc += pw * ct[j];
      pw *= vinv2;
    }
    if (side == 1 && (s % 2)) acc = -acc;
    out.v += acc;
    out.absmag += 2 * std::abs(to_std(acc));
  }
  return out;
}

long double lprefactor_h(int k) { return std::lgamma(static_cast<long double>(k + 1)) - (k + 1) * kLog2Pi; }

// sum_{c=1}^{C} c^nu row(c z) + certified bounds; tol is on the raw sum
template <class T>
LatticeSum<T> row_sums(const Cx<T>& z, int s, int nu, long double tol, long max_terms) {
  using std::floor;
  const long double y = to_ld(z.im);
  long C = 1;
  while (lctail(s, nu, y, C, nullptr) > std::log(tol / 2)) {
    ++C;
    if (C > 100000) throw CertificationError("lattice: row count exceeds limit", std::exp(lctail(s, nu, y, C, nullptr)));
  }
  LatticeSum<T> out;
  out.value = Cx<T>(T(0));
  out.tail = std::exp(lctail(s, nu, y, C, nullptr));
  long double weight_sum = 0;
  for (long c = 1; c <= C; ++c) weight_sum += std::pow(static_cast<long double>(c), nu);
  long double row_tol = tol / (2 * weight_sum);
  for (long c = 1; c <= C; ++c) {
    Cx<T> w = z * T(c);
    T shift = floor(w.re + T(0.5L));
    Cx<T> u(w.re - shift, w.im);
    Row<T> r = row_sum(u, s, row_tol, false);
    long double cw = std::pow(static_cast<long double>(c), nu);
    out.value += r.v * T(cw);
    out.tail += cw * r.rem;
    out.rounding += cw * r.absmag * (s + 8) * unit_roundoff<T>() * 4;
    out.terms += r.terms;
    if (out.terms > max_terms) throw CertificationError("lattice: term budget exhausted", out.tail);
  }
  return out;
}

// Runs f(tol) with shrinking tol until the bound meets target_abs or target_rel * |value|.
template <class T, class F>
LatticeSum<T> refine(F f, long double target_abs, long double target_rel, long double tol0) {
  long double tol = std::max(target_abs, tol0);
  for (int it = 0; it < 40; ++it) {
    LatticeSum<T> r = f(tol);
    long double mag = std::abs(to_std(r.value));
    long double want = std::max(target_abs, target_rel * std::max(0.0L, mag - r.tail));
    if (r.tail <= want) return r;
    long double next = want > 0 ? std::min(tol * 1e-3L, want / 4) : tol * 1e-8L;
    if (next < target_abs) next = target_abs;
    if (next >= tol) return r;
    tol = next;
  }
  return f(tol);
}

}  // namespace

template <class T>
LatticeSum<T> hk_lattice(int k, const Cx<T>& z, long double target_abs, long double target_rel, long max_terms) {
  if (k < 2) throw DomainError("hk_lattice: k must be >= 2");
  if (!(to_ld(z.im) > 0)) throw DomainError("hk_lattice: point not in the upper half-plane");
  const int s = k + 1;
  const long double lpre = lprefactor_h(k);
  const long double pre = std::exp(lpre);
  // crude magnitude of the first row, to seed the tolerance
  long double y = to_ld(z.im);
  long double seed = pre * std::pow(y, -static_cast<long double>(s) + 1) * std::exp(lbeta(s)) * 1e-3L;
  auto run = [&](long double tol) {
    LatticeSum<T> r = row_sums(z, s, 1, tol / pre, max_terms);
    // (2 pi)^{-k-1} k! i^{k+1}
    T fac(1);
    for (int i = 2; i <= k; ++i) fac *= T(i);
    const T tp = 2 * pi_const<T>();
    for (int i = 0; i <= k; ++i) fac /= tp;
    Cx<T> v = r.value * fac;
    for (int j = 0; j < (k + 1) % 4; ++j) v = Cx<T>(-v.im, v.re);
    r.value = v;
    r.tail *= pre;
    r.rounding = r.rounding * pre + 4 * unit_roundoff<T>() * std::abs(to_std(v));
    return r;
  };
  return refine<T>(run, target_abs, target_rel, seed);
}

template <class T>
LatticeSum<T> gk_lattice(int k, const Cx<T>& z, long double target_abs, long double target_rel, long max_terms) {
  if (k < 4 || k % 2) throw DomainError("gk_lattice: k must be even and >= 4");
  if (!(to_ld(z.im) > 0)) throw DomainError("gk_lattice: point not in the upper half-plane");
  auto run = [&](long double tol) {
    // c = 0 row is 2 zeta(k); c and -c rows coincide for even k
    Row<T> r0 = row_sum(Cx<T>(T(0)), k, tol / 4, true);
    LatticeSum<T> r = row_sums(z, k, 0, tol / 4, max_terms);
    r.value = r.value * T(2) + r0.v;
    r.tail = 2 * r.tail + r0.rem;
    r.rounding = 2 * r.rounding + r0.absmag * (k + 8) * unit_roundoff<T>() * 4;
    r.terms += r0.terms;
    return r;
  };
  return refine<T>(run, target_abs, target_rel, 1e-6L);
}

template LatticeSum<long double> hk_lattice(int, const Cx<long double>&, long double, long double, long);
template LatticeSum<MpReal> hk_lattice(int, const Cx<MpReal>&, long double, long double, long);
template LatticeSum<long double> gk_lattice(int, const Cx<long double>&, long double, long double, long);
template LatticeSum<MpReal> gk_lattice(int, const Cx<MpReal>&, long double, long double, long);

}  // namespace eiscrit
