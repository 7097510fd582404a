#include "eiscrit/critzeros.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eiscrit/precision.hpp"

namespace eiscrit {

namespace {

const Real kPi = pi_const<Real>();
const Real kSqrt3Half = std::sqrt(3.0L) / 2;

void require_weight(int k, const char* who) {
  if (k < 4 || k % 2) throw DomainError(std::string(who) + ": k must be even and >= 4");
}

int sign_of(const EvalResult& r, Real x) {
  if (std::fabs(x) <= r.error_bound()) return 0;
  return x > 0 ? 1 : -1;
}

// sign of the real number h_k(1/2 + it); 0 when not certified
int line_sign(int k, Real t, const EvalBudget& b = EvalBudget::relative(1e-3L, 64)) {
  EvalResult h = eval_hk(k, HalfPlanePoint(0.5L, t), b);
  return sign_of(h, h.value.real());
}

int arc_sign(int k, Real theta) {
  ArcPair p = eval_fk_gk(k, theta, EvalBudget::fast());
  int s = sign_of(p.f, p.f.value.real());
  if (s) return s;
  p = eval_fk_gk(k, theta, EvalBudget{256, 1e-70L, 400000, 1e-40L, 1024});
  return sign_of(p.f, p.f.value.real());
}

}  // namespace

BracketTable bracket_table(int k) {
  require_weight(k, "bracket_table");
  BracketTable tab;
  tab.k = k;
  tab.M = k / 6;
  for (int m = 1; m <= tab.M; ++m) tab.t_values.push_back(0.5L / std::tan(m * kPi / (k + 1)));
  tab.includes_base_interval = k % 6 == 4 && k != 4;
  return tab;
}

std::vector<std::pair<Real, Real>> line_brackets(const BracketTable& tab) {
  std::vector<std::pair<Real, Real>> out;
  for (int m = 1; m < tab.M; ++m) out.emplace_back(tab.t_values[m], tab.t_values[m - 1]);
  if (tab.includes_base_interval) out.emplace_back(kSqrt3Half, tab.t_values.back());
  return out;
}

SignCertificate proposition1_sign(int k, int m, SignRoute route) {
  if (k < 2) throw DomainError("proposition1_sign: k must be >= 2");
  if (m < 1 || m > (k + 1) / 6) throw DomainError("proposition1_sign: need 1 <= m <= floor((k+1)/6)");
  SignCertificate c;
  c.k = k;
  c.m = m;
  c.t = 0.5L / std::tan(m * kPi / (k + 1));
  HalfPlanePoint z(0.5L, c.t);
  // the point itself is rounded; that does not matter as long as the sign is stable
  EvalBudget b = EvalBudget::relative(1e-12L, 64);
  c.h = route == SignRoute::QSeries ? eval_hk(k, z, b) : eval_hk_lattice(k, z, b);
  Real v = c.h.value.real();
  if (std::fabs(v) <= c.h.error_bound())
    throw CertificationError("proposition1_sign: |h_k| not separated from its error bound", c.h.error_bound());
  c.sign = v > 0 ? 1 : -1;
  if (c.sign != (m % 2 ? -1 : 1))
    throw ContradictionError("proposition1_sign: sign of h_" + std::to_string(k) + " at t_" + std::to_string(m) +
                             " is not (-1)^m");
  return c;
}

namespace {

CriticalPointRecord refine_line_zero(int k, Real lo, Real hi) {
  int slo = line_sign(k, lo), shi = line_sign(k, hi);
  if (!slo || !shi || slo == shi)
    throw ContradictionError("locate_line_zeros: no sign change of E_k' on [" + std::to_string((double)lo) + ", " +
                             std::to_string((double)hi) + "] for k = " + std::to_string(k));
  // uniqueness: a second zero shows up as extra sign changes on a sample
  const int samples = 12;
  int prev = slo, changes = 0;
  for (int i = 1; i <= samples; ++i) {
    int s = i == samples ? shi : line_sign(k, lo + (hi - lo) * i / samples);
    if (s == 0) continue;
    if (s != prev) ++changes;
    prev = s;
  }
  if (changes != 1)
    throw ContradictionError("locate_line_zeros: " + std::to_string(changes) + " sign changes in one bracket for k = " +
                             std::to_string(k));

  Real a = lo, b = hi;
  int sa = slo;
  const Real width = 1e-12L;
  while (b - a > width) {
    Real mid = (a + b) / 2;
    int s = line_sign(k, mid);
    if (s == 0) {
      a = b = mid;
      break;
    }
    if (s == sa) a = mid;
    else b = mid;
  }
  Complex z(0.5L, (a + b) / 2);
  Real scale = std::abs(eval_Ek_deriv(k, HalfPlanePoint(z), 2, EvalBudget::relative(1e-3L, 64)).value);
  EvalBudget nb{64, 1e-21L * scale, 400000, 1e-18L, 1024};
  std::vector<EvalResult> jet;
  for (int it = 0; it < 5; ++it) {
    jet = eval_Ek_jet(k, HalfPlanePoint(z), 2, nb);
    if (jet[1].value == Complex(0)) break;
    Complex step = jet[1].value / jet[2].value;
    Complex next = z - step;
    next = Complex(next.real(), std::clamp(next.imag(), lo, hi));
    if (next == z) break;
    z = next;
  }
  jet = eval_Ek_jet(k, HalfPlanePoint(z), 2, nb);
  CriticalPointRecord r;
  r.k = k;
  r.location = HalfPlanePoint(z);
  r.bracket_lo = lo;
  r.bracket_hi = hi;
  r.residual = std::abs(jet[1].value);
  r.simplicity_margin = std::abs(jet[2].value);
  r.simple = r.simplicity_margin > 1e3L * r.residual / width;
  r.classification = ZeroClass::Nontrivial;
  return r;
}

}  // namespace

LineZeros locate_line_zeros(int k) {
  require_weight(k, "locate_line_zeros");
  LineZeros out;
  for (auto [lo, hi] : line_brackets(bracket_table(k))) out.zeros.push_back(refine_line_zero(k, lo, hi));

  // the endpoint e^{i pi/3}, placed exactly at 512 bits
  auto ends = at_precision(512, [&]<class T>() {
    using std::sqrt;
    Cx<T> rho(T(1) / T(2), sqrt(T(3)) / T(2));
    Jet<T> j = eisenstein_jet<T>(k, rho, 2, 1e-80L, 0, 400000);
    return std::pair<long double, long double>(std::abs(to_std(j.v[1])), std::abs(to_std(j.v[2])));
  });
  CriticalPointRecord& e = out.endpoint;
  e.k = k;
  e.location = HalfPlanePoint(0.5L, kSqrt3Half);
  e.bracket_lo = e.bracket_hi = kSqrt3Half;
  e.residual = ends.first;
  e.simplicity_margin = ends.second;
  e.classification = ZeroClass::Trivial;
  out.endpoint_is_zero = ends.first <= 1e-30L * (1 + ends.second);
  e.simple = out.endpoint_is_zero && ends.second > 0;
  return out;
}

int expected_interior_arc_zeros(int k) {
  require_weight(k, "expected_interior_arc_zeros");
  switch (k % 6) {
    case 4: return (k - 4) / 6;
    case 0: return k / 6;
    default: return (k - 8) / 6;
  }
}

namespace {

// vanishing order of f_k at an endpoint from the one-sided decay |f(t0 + d)| ~ d^p
int endpoint_order(int k, Real theta0, Real dir, Real fscale) {
  ArcPair p0 = eval_fk_gk(k, theta0, EvalBudget::fast());
  if (std::fabs(p0.f.value.real()) > 1e-12L * fscale + p0.f.error_bound()) return 0;
  const Real d = 1e-3L / k;
  Real f1 = std::fabs(eval_fk_gk(k, theta0 + dir * d, EvalBudget::fast()).f.value.real());
  Real f2 = std::fabs(eval_fk_gk(k, theta0 + 2 * dir * d, EvalBudget::fast()).f.value.real());
  Real p = std::log2(f2 / f1);
  int order = static_cast<int>(std::lround(p));
  if (std::fabs(p - order) > 0.25L || order < 1)
    throw ContradictionError("locate_arc_zeros: endpoint vanishing order not resolved for k = " + std::to_string(k));
  return order;
}

ArcZeroRecord arc_record(int k, Real theta, Real lo, Real hi, int order, bool endpoint) {
  ArcPair p = eval_fk_gk(k, theta, EvalBudget::fast());
  ArcZeroRecord r;
  r.k = k;
  r.theta = theta;
  r.bracket_lo = lo;
  r.bracket_hi = hi;
  r.f_residual = std::fabs(p.f.value.real());
  r.order = order;
  r.endpoint = endpoint;
  r.g_value = p.g.value.real();
  r.g_sign = order == 1 ? sign_of(p.g, r.g_value) : 0;
  if (order == 1 && r.g_sign == 0)
    throw ContradictionError("locate_arc_zeros: g_k vanishes at a simple zero for k = " + std::to_string(k));
  return r;
}

}  // namespace

std::vector<ArcZeroRecord> locate_arc_zeros(int k) {
  require_weight(k, "locate_arc_zeros");
  const Real a = kPi / 3, b = 2 * kPi / 3;
  const int n = 4 * k;
  std::vector<Real> th(n), f(n);
  Real fscale = 0;
  for (int i = 0; i < n; ++i) {
    th[i] = a + (b - a) * i / (n - 1);
    f[i] = eval_fk_gk(k, th[i], EvalBudget::fast()).f.value.real();
    fscale = std::max(fscale, std::fabs(f[i]));
  }
  int ord_lo = endpoint_order(k, a, 1, fscale), ord_hi = endpoint_order(k, b, -1, fscale);

  std::vector<ArcZeroRecord> out;
  if (ord_lo) out.push_back(arc_record(k, a, a, a, ord_lo, true));
  int first = ord_lo ? 1 : 0, last = ord_hi ? n - 2 : n - 1;
  int prev_i = first, prev_s = arc_sign(k, th[first]);
  for (int i = first + 1; i <= last; ++i) {
    int s = arc_sign(k, th[i]);
    if (!s) throw CertificationError("locate_arc_zeros: grid point on a zero", 0);
    if (s == prev_s) {
      prev_i = i;
      continue;
    }
    Real lo = th[prev_i], hi = th[i], x = lo, y = hi;
    int sx = prev_s;
    while (y - x > 1e-15L) {
      Real mid = (x + y) / 2;
      int sm = arc_sign(k, mid);
      if (!sm) {
        x = y = mid;
        break;
      }
      if (sm == sx) x = mid;
      else y = mid;
    }
    Real t = (x + y) / 2;
    for (int it = 0; it < 3; ++it) {
      // f' = Re g at a zero of f
      ArcPair p = eval_fk_gk(k, t, EvalBudget::fast());
      Real next = std::clamp(t - p.f.value.real() / p.g.value.real(), lo, hi);
      if (next == t) break;
      t = next;
    }
    out.push_back(arc_record(k, t, lo, hi, 1, false));
    prev_i = i;
    prev_s = s;
  }
  if (ord_hi) out.push_back(arc_record(k, b, b, b, ord_hi, true));

  int interior = static_cast<int>(std::count_if(out.begin(), out.end(), [](const ArcZeroRecord& r) { return !r.endpoint; }));
  if (interior != expected_interior_arc_zeros(k))
    throw ContradictionError("locate_arc_zeros: found " + std::to_string(interior) + " interior zeros for k = " +
                             std::to_string(k) + ", expected " + std::to_string(expected_interior_arc_zeros(k)));
  return out;
}

bool arc_sign_pattern_ok(int k, const std::vector<ArcZeroRecord>& recs) {
  require_weight(k, "arc_sign_pattern_ok");
  std::vector<const ArcZeroRecord*> inner;
  for (const auto& r : recs)
    if (!r.endpoint) inner.push_back(&r);
  const int N = static_cast<int>(inner.size());
  auto alt = [](int e) { return e % 2 ? -1 : 1; };
  if (k % 6 == 4) {
    // theta_0 .. theta_{N+1} with sign (-1)^{N+1-j}, endpoints simple zeros
    if (recs.size() != inner.size() + 2 || !recs.front().endpoint || !recs.back().endpoint) return false;
    for (size_t j = 0; j < recs.size(); ++j)
      if (recs[j].order != 1 || recs[j].g_sign != alt(N + 1 - static_cast<int>(j))) return false;
    return true;
  }
  if (k % 6 == 0 && recs.size() != inner.size()) return false;
  if (k % 6 == 2) {
    if (recs.size() != inner.size() + 2 || recs.front().order != 2 || recs.back().order != 2) return false;
  }
  // sign of g_k(theta_j) is (-1)^{N-j}, j = 1..N
  for (int j = 1; j <= N; ++j)
    if (inner[j - 1]->g_sign != alt(N - j)) return false;
  return true;
}

CriticalPointRecord e2_line_zero(Real lo, Real hi) {
  if (!(lo > 0 && hi > lo)) throw DomainError("e2_line_zero: need 0 < lo < hi");
  const EvalBudget sb = EvalBudget::relative(1e-3L, 64);
  auto sgn = [&](Real t) {
    EvalResult e = eval_E2(HalfPlanePoint(0, t), sb);
    return sign_of(e, e.value.real());
  };
  int slo = sgn(lo), shi = sgn(hi);
  if (!slo || !shi || slo == shi) throw DomainError("e2_line_zero: no sign change of E_2(it) in the box");
  Real a = lo, b = hi;
  const Real width = 1e-15L;
  while (b - a > width) {
    Real mid = (a + b) / 2;
    int s = sgn(mid);
    if (!s) {
      a = b = mid;
      break;
    }
    if (s == slo) a = mid;
    else b = mid;
  }
  Complex z(0, (a + b) / 2);
  const EvalBudget nb{64, 1e-22L, 400000, 1e-18L, 1024};
  std::vector<EvalResult> jet;
  for (int it = 0; it < 4; ++it) {
    jet = eval_Ek_jet(2, HalfPlanePoint(z), 1, nb);
    Complex next = z - jet[0].value / jet[1].value;
    next = Complex(next.real(), std::clamp(next.imag(), lo, hi));
    if (next == z) break;
    z = next;
  }
  jet = eval_Ek_jet(2, HalfPlanePoint(z), 1, nb);
  CriticalPointRecord r;
  r.k = 2;
  r.location = HalfPlanePoint(z);
  r.bracket_lo = lo;
  r.bracket_hi = hi;
  r.residual = std::abs(jet[0].value);
  r.simplicity_margin = std::abs(jet[1].value);
  r.simple = r.simplicity_margin > 1e3L * r.residual / width;
  return r;
}

nlohmann::json to_json(const CriticalPointRecord& r, const char* kind) {
  return {{"k", r.k},
          {"kind", kind},
          {"re", static_cast<double>(r.location.re())},
          {"im", static_cast<double>(r.location.im())},
          {"residual", static_cast<double>(r.residual)},
          {"margin", static_cast<double>(r.simplicity_margin)},
          {"bracket", {static_cast<double>(r.bracket_lo), static_cast<double>(r.bracket_hi)}}};
}

nlohmann::json to_json(const ArcZeroRecord& r) {
  return {{"k", r.k},
          {"kind", r.endpoint ? "endpoint" : "arc"},
          {"theta", static_cast<double>(r.theta)},
          {"residual", static_cast<double>(r.f_residual)},
          {"margin", static_cast<double>(std::fabs(r.g_value))},
          {"order", r.order},
          {"bracket", {static_cast<double>(r.bracket_lo), static_cast<double>(r.bracket_hi)}}};
}

}  // namespace eiscrit
