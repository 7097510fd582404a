#include "eiscrit/phimap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

#include "eiscrit/critzeros.hpp"
#include "eiscrit/quasimod.hpp"
#include "eiscrit/winding.hpp"

namespace eiscrit {

namespace {

const Real kPi = pi_const<Real>();
const Real kS3 = 0.8660254037844386467637231707529361835L;  // sqrt3/2
const Complex kRho(0.5L, kS3);
const Complex kRho2(-0.5L, kS3);
const Real kCornerExclusion = 1e-3L;

void require_weight(int k, const char* who) {
  if (k < 4 || k % 2) throw DomainError(std::string(who) + ": k must be even and >= 4");
}

Complex cis(Real t) { return {std::cos(t), std::sin(t)}; }

// (-1)^e
int neg1(int e) { return (e % 2 + 2) % 2 ? -1 : 1; }

// Per-k memo; concurrent first calls may both compute, the first insert wins.
template <class V, class Make>
V cached(std::map<int, V>& store, std::mutex& mu, int k, Make make) {
  {
    std::lock_guard<std::mutex> lk(mu);
    auto it = store.find(k);
    if (it != store.end()) return it->second;
  }
  V v = make();
  std::lock_guard<std::mutex> lk(mu);
  return store.emplace(k, std::move(v)).first->second;
}

Sample arc_sample(int k, Real th) {
  PhiValue p = phi(k, HalfPlanePoint(cis(th)));
  if (p.pole) throw ContradictionError("phi_k has a pole on the unit arc");
  return Sample{p.value, p.error};
}

std::mutex wtab_mu;
std::map<int, WTable> wtab_store;

const WTable default_wtable(int k) {
  return cached(wtab_store, wtab_mu, k, [&] { return wk_table(k, 4 * k); });
}

// w_k at theta inside grid cell i of t
Real w_local(int k, const WTable& t, size_t i, Real th) {
  TraceOptions o;
  o.initial_samples = 1;
  return t.w[i] + arg_variation([&](Real s) { return arc_sample(k, s); }, t.theta[i], th, o).total_variation;
}

// Angles in (lo, hi) where w_k crosses a multiple of pi, restricted to even (parity 0),
// odd (1) or all (-1) multiples. Increasing.
std::vector<Real> w_level_points(int k, int parity, Real lo, Real hi) {
  const WTable t = default_wtable(k);
  std::vector<Real> out;
  for (size_t i = 0; i + 1 < t.theta.size(); ++i) {
    if (t.theta[i + 1] <= lo || t.theta[i] >= hi) continue;
    long m0 = static_cast<long>(std::floor(t.w[i] / kPi)) + 1;
    for (long m = m0; m * kPi <= t.w[i + 1]; ++m) {
      if (parity >= 0 && ((m % 2) + 2) % 2 != parity) continue;
      const Real target = m * kPi;
      Real a = t.theta[i], b = t.theta[i + 1];
      for (int it = 0; it < 64 && b - a > 1e-18L; ++it) {
        Real mid = (a + b) / 2;
        (w_local(k, t, i, mid) < target ? a : b) = mid;
      }
      Real th = (a + b) / 2;
      if (th > lo && th < hi) out.push_back(th);
    }
  }
  return out;
}

struct FkSample {
  Real value = 0, error = 0;
};

// F_k(1/2 + it) = (k+1)E'^2 - k E E'', real on the line
FkSample fk_on_line(int k, Real t) {
  auto j = eval_Ek_jet(k, HalfPlanePoint(0.5L, t), 2, EvalBudget::relative(1e-12L, 64));
  const Complex e0 = j[0].value, e1 = j[1].value, e2 = j[2].value;
  const Real d0 = j[0].error_bound(), d1 = j[1].error_bound(), d2 = j[2].error_bound();
  Complex f = Real(k + 1) * e1 * e1 - Real(k) * e0 * e2;
  Real err = (k + 1) * (2 * std::abs(e1) * d1 + d1 * d1) + k * (std::abs(e0) * d2 + std::abs(e2) * d0 + d0 * d2);
  return {f.real(), err + std::fabs(f.imag())};
}

int fk_sign(int k, Real t) {
  FkSample s = fk_on_line(k, t);
  if (!(std::fabs(s.value) > s.error)) throw CertificationError("pole_table: sign of F_k not certified", s.error);
  return s.value > 0 ? 1 : -1;
}

// Zeros of F_k on the line between lo and hi, from sign changes on an n-point grid.
std::vector<Real> fk_roots(int k, Real lo, Real hi, int n) {
  std::vector<Real> out;
  Real tprev = lo;
  int sprev = fk_sign(k, lo);
  for (int i = 1; i <= n; ++i) {
    Real t = i == n ? hi : lo + (hi - lo) * i / n;
    int s = fk_sign(k, t);
    if (s != sprev) {
      Real a = tprev, b = t;
      while (b - a > 8 * std::numeric_limits<Real>::epsilon() * b) {
        Real mid = (a + b) / 2;
        FkSample f = fk_on_line(k, mid);
        if (!(std::fabs(f.value) > f.error)) {  // inside the noise band of the root
          a = b = mid;
          break;
        }
        ((f.value > 0 ? 1 : -1) == sprev ? a : b) = mid;
      }
      out.push_back((a + b) / 2);
    }
    tprev = t;
    sprev = s;
  }
  return out;
}

std::mutex pole_mu;
std::map<int, PoleTable> pole_store;
std::mutex locus_mu;
std::map<int, std::vector<LocusCurve>> locus_store;

}  // namespace

// ---- UnimodularMatrix ----

UnimodularMatrix::UnimodularMatrix(long a_, long b_, long c_, long d_) : a(a_), b(b_), c(c_), d(d_) {
  __int128 det = static_cast<__int128>(a) * d - static_cast<__int128>(b) * c;
  if (det != 1) throw DomainError("UnimodularMatrix: ad - bc must be 1");
}

UnimodularMatrix UnimodularMatrix::parse(const std::string& s) {
  std::vector<long> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      v.push_back(std::stol(item, &used));
      if (used != item.size()) throw DomainError("");
    } catch (const std::exception&) {
      throw DomainError("UnimodularMatrix: expected four integers a,b,c,d, got '" + s + "'");
    }
  }
  if (v.size() != 4) throw DomainError("UnimodularMatrix: expected four integers a,b,c,d, got '" + s + "'");
  return {v[0], v[1], v[2], v[3]};
}

Complex UnimodularMatrix::mobius(Complex w) const {
  return (Real(a) * w + Real(b)) / (Real(c) * w + Real(d));
}

Complex UnimodularMatrix::apply(Complex z) const {
  if (!(z.imag() > 0)) throw DomainError("UnimodularMatrix::apply: point not in the upper half-plane");
  return mobius(z);
}

std::string UnimodularMatrix::str() const {
  return std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "," + std::to_string(d);
}

// ---- phi ----

EvalBudget phi_budget() { return EvalBudget::relative(1e-15L, 64); }

PhiValue phi(int k, const HalfPlanePoint& z, const EvalBudget& budget) {
  require_weight(k, "phi");
  auto j = eval_Ek_jet(k, z, 2, budget);
  const Complex e0 = j[0].value, e1 = j[1].value, e2 = j[2].value;
  const Real d0 = j[0].error_bound(), d1 = j[1].error_bound();
  const Real a0 = std::abs(e0), a1 = std::abs(e1);
  PhiValue out;
  if (a1 <= d1) {
    if (a0 <= d0) throw ContradictionError("phi: E_k and E_k' both vanish within their error bounds");
    out.pole = true;
    out.reciprocal = e1 / (Real(k) * e0);
    out.error = std::numeric_limits<Real>::infinity();
    return out;
  }
  const Complex r = e0 / e1;
  out.value = z.z() + Real(k) * r;
  out.error = k * (d0 + std::abs(r) * d1) / (a1 - d1);
  out.reciprocal = a0 > 0 ? e1 / (Real(k) * e0) : Complex(std::numeric_limits<Real>::infinity(), 0);
  out.derivative = Real(k + 1) - Real(k) * e0 * e2 / (e1 * e1);
  return out;
}

Real vk(int k, Real t) {
  if (!(t >= kS3 - 1e-15L)) throw DomainError("vk: t must be >= sqrt3/2");
  PhiValue p = phi(k, HalfPlanePoint(0.5L, t));
  if (p.pole || !(p.error <= 1e-6L * std::max<Real>(1, std::abs(p.value))))
    throw DomainError("vk: t is at or next to a pole");
  return p.value.imag();
}

// ---- w_k ----

Real wk_anchor(int k) { return k % 6 == 0 ? -kPi / 3 : kPi / 3; }

Real wk_end(int k) {
  switch (k % 6) {
    case 0: return (k - 2) * kPi / 3;
    case 2: return k * kPi / 3;
    default: return (k + 4) * kPi / 3;
  }
}

Real wk_mid(int k) {
  switch (k % 6) {
    case 0: return (k - 3) * kPi / 6;
    case 2: return (k + 1) * kPi / 6;
    default: return (k + 5) * kPi / 6;
  }
}

Real wk_symmetric(int k) { return 2 * wk_mid(k); }

WTable wk_table(int k, int intervals) {
  require_weight(k, "wk_table");
  if (intervals < 2 || intervals % 2) throw DomainError("wk_table: need an even number of intervals");
  WTable t;
  t.k = k;
  const Real a = kPi / 3, b = 2 * kPi / 3;
  for (int i = 0; i <= intervals; ++i) t.theta.push_back(i == intervals ? b : a + (b - a) * i / intervals);
  Sample s0 = arc_sample(k, a);
  Real off = std::remainder(std::arg(s0.value) - wk_anchor(k), 2 * kPi);
  if (std::fabs(off) > 1e-9L) throw ContradictionError("wk_table: arg phi_k(e^{i pi/3}) does not match the anchor");
  t.w.push_back(wk_anchor(k));
  TraceOptions o;
  o.initial_samples = 1;
  auto f = [&](Real th) { return arc_sample(k, th); };
  for (int i = 0; i < intervals; ++i)
    t.w.push_back(t.w.back() + arg_variation(f, t.theta[i], t.theta[i + 1], o).total_variation);
  return t;
}

WChecks check_w_laws(int k, int intervals) {
  WTable t = intervals == 4 * k ? default_wtable(k) : wk_table(k, intervals);
  WChecks c;
  const size_t n = t.w.size() - 1;
  c.start = t.w.front();
  c.end = t.w.back();
  c.mid = t.w[n / 2];
  c.monotone = true;
  for (size_t i = 0; i < n; ++i)
    if (!(t.w[i + 1] > t.w[i])) c.monotone = false;
  const Real sym = wk_symmetric(k);
  for (size_t i = 0; i <= n; ++i) c.symmetric_spread = std::max(c.symmetric_spread, std::fabs(t.w[i] + t.w[n - i] - sym));
  return c;
}

// ---- poles and stationary points on the line ----

bool PoleTable::interleaved() const {
  if (c_values.size() != b_values.size()) return false;
  for (size_t m = 0; m < b_values.size(); ++m) {
    if (!(c_values[m] > b_values[m])) return false;
    if (m + 1 < b_values.size() && !(b_values[m] > c_values[m + 1])) return false;
  }
  return true;
}

PoleTable pole_table(int k) {
  require_weight(k, "pole_table");
  return cached(pole_store, pole_mu, k, [k] {
    PoleTable tab;
    tab.k = k;
    for (const auto& r : locate_line_zeros(k).zeros) tab.b_values.push_back(r.location.im());
    const auto& b = tab.b_values;
    const size_t n = b.size();
    if (static_cast<int>(n) != (k - 4) / 6) throw ContradictionError("pole_table: unexpected number of poles");

    // v_k' = F_k/E_k'^2 and E_k'^2 < 0 on the line, so sign changes of v_k' are those of F_k
    for (size_t m = 0; m < n; ++m) {
      Real lo = b[m], hi;
      if (m == 0) {
        const int s0 = fk_sign(k, lo);
        Real step = 0.25L;
        hi = lo + step;
        while (fk_sign(k, hi) == s0) {
          step *= 2;
          hi = lo + step;
          if (step > 16) throw ContradictionError("pole_table: no stationary point above the top pole");
        }
      } else {
        hi = b[m - 1];
      }
      auto roots = fk_roots(k, lo, hi, 64);
      if (roots.size() != 1)
        throw ContradictionError("pole_table: expected one sign change of v_k' in band " + std::to_string(m + 1) +
                                 ", found " + std::to_string(roots.size()));
      tab.c_values.push_back(roots[0]);
    }
    const Real low = kS3 + kCornerExclusion;
    const Real top = n ? b[n - 1] : 4;
    if (!fk_roots(k, low, top, 64).empty()) throw ContradictionError("pole_table: v_k' vanishes below the lowest pole");

    for (Real bm : b) {
      auto j = eval_Ek_jet(k, HalfPlanePoint(0.5L, bm), 2, EvalBudget::relative(1e-12L, 64));
      tab.residues.push_back((Real(k) * j[0].value / j[2].value).real());
    }

    if (n) {
      const IsobaricPoly F = build_Ff(eisenstein_poly(k));
      for (Real c : tab.c_values) {
        HalfPlanePoint z(0.5L, c);
        auto j = eval_Ek_jet(k, z, 3, EvalBudget::relative(1e-12L, 64));
        // |F_k(c)| against |F_k'(c)| c: the relative distance from c to a root of the polynomial form
        const Real scale = std::abs(Real(k + 2) * j[1].value * j[2].value - Real(k) * j[0].value * j[3].value) * c;
        EvalBudget bud{128, 1e-14L * scale / (4 * kPi * kPi), 400000, 0, 1024};
        EvalResult psi = psi_eval(F, z, bud);
        Real res = 4 * kPi * kPi * (std::abs(psi.value) + psi.error_bound()) / scale;
        if (!(res <= 1e-9L)) throw ContradictionError("pole_table: stationary point is not a zero of F_k");
        tab.ff_residuals.push_back(res);
      }
    }
    if (!tab.interleaved()) throw ContradictionError("pole_table: c_1 > b_1 > ... > c_n > b_n fails");
    return tab;
  });
}

VChecks check_v_laws(int k) {
  PoleTable tab = pole_table(k);
  const auto& b = tab.b_values;
  const int n = static_cast<int>(b.size());
  const int h = k / 2;
  auto sgn = [](Real x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); };
  VChecks c;
  c.at_base = vk(k, kS3);
  c.base_ok = std::fabs(c.at_base - (k % 6 == 0 ? -kS3 : kS3)) <= 1e-9L;
  c.limits_ok = true;
  for (int m = 1; m <= n; ++m) {
    if (sgn(vk(k, b[m - 1] - 1e-4L)) != neg1(h + m)) c.limits_ok = false;
    if (sgn(vk(k, b[m - 1] + 1e-4L)) != neg1(h + m - 1)) c.limits_ok = false;
  }
  c.bands_ok = true;
  for (int m = 1; m <= n + 1; ++m) {
    Real lo = m == n + 1 ? kS3 : b[m - 1];
    Real hi = m == 1 ? lo + 2 : b[m - 2];
    for (int i = 0; i < 10; ++i)
      if (sgn(vk(k, lo + (hi - lo) * (i + 0.5L) / 10)) != neg1(h + m - 1)) c.bands_ok = false;
  }
  c.infinity_ok = sgn(vk(k, (n ? b[0] : 1) + 3)) == neg1(h);
  return c;
}

// ---- real locus ----

LocusCurve LocusCurve::mirrored() const {
  LocusCurve m = *this;
  for (Complex& z : m.polyline) z = -std::conj(z);
  for (Real& v : m.phi_values) v = -v;
  m.alpha = kPi - alpha;
  return m;
}

std::vector<Real> locus_seeds(int k) {
  require_weight(k, "locus_seeds");
  std::vector<Real> a = w_level_points(k, -1, kPi / 3, kPi / 2);
  std::reverse(a.begin(), a.end());
  if (static_cast<int>(a.size()) != (k + 2) / 6) throw ContradictionError("locus_seeds: wrong number of seeds");
  if (k % 6 == 2 && !a.empty() && a.back() - kPi / 3 < 2 * std::asin(kCornerExclusion / 2))
    throw CertificationError("locus_seeds: seed inside the excluded corner disk", a.back() - kPi / 3);
  return a;
}

namespace {

LocusCurve trace_one(int k, int j, Real alpha, const std::vector<Real>& poles) {
  LocusCurve c;
  c.j = j;
  c.alpha = alpha;
  Complex z = cis(alpha);
  PhiValue p = phi(k, HalfPlanePoint(z));
  const Real sgn = neg1(k / 2 + j + 1);
  if (p.pole || std::abs(p.value - sgn) > 1e-9L) throw ContradictionError("trace_locus: phi_k(u_j) is not (-1)^(k/2+j+1)");
  c.polyline.push_back(z);
  c.phi_values.push_back(p.value.real());
  if (j >= 1) c.b = poles.at(j - 1);

  // steps shrink to a quarter of the distance near a pole, so the snap happens at 2 * 2.5e-4
  // the cutoff stays above the highest pole, which passes Im z = 5 near k = 46
  const Real h0 = 1e-2L, hmin = 1e-5L, snap = 5e-4L, cutoff = std::max<Real>(6, poles.empty() ? 0 : poles.front() + 1);
  // a short first chord keeps the measured angle at u_j close to the tangent's
  Real h = h0 / 10;
  int streak = 0;
  for (long step = 0;; ++step) {
    if (step > 200000) throw ContradictionError("trace_locus: continuation did not terminate");
    Real hcap = h0;
    for (size_t m = 0; m < poles.size(); ++m) {
      Complex pole(0.5L, poles[m]);
      hcap = std::min(hcap, std::abs(z - pole) / 4);
      if (std::abs(z - pole) < snap) {
        if (static_cast<int>(m) + 1 != j) throw ContradictionError("trace_locus: curve reached the wrong pole");
        c.end_angle_deg = std::fabs(std::arg(pole - z)) * 180 / kPi;
        c.polyline.push_back(pole);
        goto done;
      }
    }
    if (z.imag() >= cutoff) {
      if (j != 0) throw ContradictionError("trace_locus: curve escaped to the cusp");
      c.asymptote = true;
      c.exit_re = z.real();
      goto done;
    }
    {
      Complex d = sgn * std::conj(p.derivative) / std::abs(p.derivative);
      Complex nrm = Complex(0, 1) * d;
      const Real hs = std::min(h, hcap);
      Complex zp = z + hs * d;
      Real s = 0;
      bool ok = false;
      PhiValue pn;
      Complex zn;
      for (int it = 0; it < 8; ++it) {
        zn = zp + s * nrm;
        if (!(zn.imag() > 0)) break;
        pn = phi(k, HalfPlanePoint(zn));
        if (pn.pole) break;
        Real g = pn.value.imag();
        if (std::fabs(g) <= std::max(1e-13L * std::max<Real>(1, std::abs(pn.value)), 4 * pn.error)) {
          ok = true;
          break;
        }
        Real gp = (pn.derivative * nrm).imag();
        if (gp == 0) break;
        s -= g / gp;
        if (std::fabs(s) > hs) break;
      }
      ok = ok && sgn * pn.value.real() > sgn * c.phi_values.back() && zn.real() > 0 && zn.real() < 0.5L &&
           std::abs(zn) > 1;
      if (!ok) {
        h /= 2;
        streak = 0;
        if (h < hmin) throw ContradictionError("trace_locus: continuation step failure");
        continue;
      }
      z = zn;
      p = pn;
      c.polyline.push_back(z);
      c.phi_values.push_back(p.value.real());
      if (++streak >= 4 && h < h0) {
        h = std::min(h0, 2 * h);
        streak = 0;
      }
    }
  }
done:
  if (c.polyline.size() < 3) throw ContradictionError("trace_locus: curve too short");
  c.start_angle_deg = std::fabs(std::arg((c.polyline[1] - c.polyline[0]) / c.polyline[0])) * 180 / kPi;
  return c;
}

Real seg_point_dist(Complex p, Complex a, Complex b) {
  Complex ab = b - a;
  Real l2 = std::norm(ab);
  Real t = l2 > 0 ? std::clamp<Real>(((p - a) * std::conj(ab)).real() / l2, 0, 1) : 0;
  return std::abs(p - (a + t * ab));
}

Real cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

Real seg_seg_dist(Complex a, Complex b, Complex c, Complex d) {
  Real d1 = cross(b - a, c - a), d2 = cross(b - a, d - a), d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return 0;
  return std::min({seg_point_dist(a, c, d), seg_point_dist(b, c, d), seg_point_dist(c, a, b), seg_point_dist(d, a, b)});
}

}  // namespace

Real locus_separation(const std::vector<LocusCurve>& curves) {
  std::vector<std::vector<Complex>> all;
  for (const auto& c : curves) {
    all.push_back(c.polyline);
    all.push_back(c.mirrored().polyline);
  }
  Real best = std::numeric_limits<Real>::infinity();
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = i + 1; j < all.size(); ++j)
      for (size_t p = 0; p + 1 < all[i].size(); ++p)
        for (size_t q = 0; q + 1 < all[j].size(); ++q) {
          const Complex a = all[i][p], b = all[i][p + 1], c = all[j][q], d = all[j][q + 1];
          // boxes farther apart than the current best cannot improve it
          Real gx = std::max({std::min(a.real(), b.real()) - std::max(c.real(), d.real()),
                              std::min(c.real(), d.real()) - std::max(a.real(), b.real()), Real(0)});
          Real gy = std::max({std::min(a.imag(), b.imag()) - std::max(c.imag(), d.imag()),
                              std::min(c.imag(), d.imag()) - std::max(a.imag(), b.imag()), Real(0)});
          if (std::hypot(gx, gy) >= best) continue;
          best = std::min(best, seg_seg_dist(a, b, c, d));
        }
  return best;
}

std::vector<LocusCurve> trace_locus(int k) {
  require_weight(k, "trace_locus");
  return cached(locus_store, locus_mu, k, [k] {
    const std::vector<Real> seeds = locus_seeds(k);
    const std::vector<Real> poles = pole_table(k).b_values;
    std::vector<std::future<LocusCurve>> jobs;
    for (size_t j = 0; j < seeds.size(); ++j)
      jobs.push_back(std::async(std::launch::async, trace_one, k, static_cast<int>(j), seeds[j], std::cref(poles)));
    std::vector<LocusCurve> out;
    for (auto& f : jobs) out.push_back(f.get());
    if (!(locus_separation(out) > 0)) throw ContradictionError("trace_locus: curves intersect");
    return out;
  });
}

// ---- phi_k = lambda ----

PhiSolutions solve_phi_eq(int k, Real lambda) {
  require_weight(k, "solve_phi_eq");
  if (!std::isfinite(lambda)) throw DomainError("solve_phi_eq: lambda must be finite");
  PhiSolutions out;
  const Real al = std::fabs(lambda);
  const int expected = (k + 2) / 6;
  std::vector<Real> arc_thetas;

  if (al == 1) {
    out.on_arc = true;
    arc_thetas = w_level_points(k, lambda > 0 ? 0 : 1, kPi / 3, 2 * kPi / 3);
    for (Real th : arc_thetas) out.points.push_back(cis(th));
  } else if (al > 1) {
    for (const LocusCurve& c : trace_locus(k)) {
      const bool mirror = (lambda > 0) != (c.phi_values.front() > 0);
      const Real mu = mirror ? -lambda : lambda;
      // phi is monotone along the curve from +-1 towards +-infinity
      size_t i = 0;
      while (i + 1 < c.phi_values.size() && std::fabs(c.phi_values[i + 1]) < al) ++i;
      Complex z = c.polyline[i];
      if (i + 1 < c.phi_values.size()) {
        Real f0 = std::fabs(c.phi_values[i]), f1 = std::fabs(c.phi_values[i + 1]);
        z += (c.polyline[i + 1] - z) * ((al - f0) / (f1 - f0));
      }
      bool converged = false;
      for (int it = 0; it < 60 && !converged; ++it) {
        PhiValue p = phi(k, HalfPlanePoint(z));
        if (p.pole) throw ContradictionError("solve_phi_eq: Newton hit a pole");
        Complex dz = (p.value - mu) / p.derivative;
        if (std::abs(dz) > 0.05L) dz *= 0.05L / std::abs(dz);
        z -= dz;
        converged = std::abs(dz) <= 1e-17L * std::abs(z);
      }
      PhiValue p = phi(k, HalfPlanePoint(z));
      if (!converged || std::abs(p.value - mu) > 1e-10L * al)
        throw ContradictionError("solve_phi_eq: Newton along the locus did not converge");
      if (mirror) z = -std::conj(z);
      if (std::fabs(z.real()) > 0.5L + 1e-12L || std::abs(z) < 1 - 1e-12L)
        throw ContradictionError("solve_phi_eq: solution outside D");
      out.points.push_back(z);
    }
  }
  std::sort(out.points.begin(), out.points.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  // independent count: winding of phi_k - lambda around the boundary of D_T, poles excluded
  const PoleTable tab = pole_table(k);
  BoundaryShape shape;
  shape.line_points = tab.b_values;
  shape.right_outward = false;
  shape.left_outward = false;
  shape.eps = default_eps(tab.b_values);
  for (Real r : tab.residues) shape.eps = std::min(shape.eps, std::fabs(r) / (4 * (1 + al)));
  shape.corner_eps = k % 6 == 2 ? kCornerExclusion : 0;
  shape.T = std::max<Real>(3, tab.b_values.empty() ? 0 : tab.b_values.front() + 1);
  while (std::abs(phi(k, HalfPlanePoint(0.25L, shape.T)).value) < 10 * (1 + al)) shape.T += 1;
  if (!arc_thetas.empty()) {
    std::vector<Real> marks = arc_thetas;
    marks.push_back(kPi / 3 + 2 * std::asin(shape.corner_eps / 2));
    marks.push_back(2 * kPi / 3 - 2 * std::asin(shape.corner_eps / 2));
    std::sort(marks.begin(), marks.end());
    Real gap = 1;
    for (size_t i = 0; i + 1 < marks.size(); ++i) gap = std::min(gap, marks[i + 1] - marks[i]);
    shape.arc_points = arc_thetas;
    shape.arc_eps = std::min<Real>(1e-2L, gap / 4);
  }
  Contour contour = boundary_contour(shape);
  PointFn f = [k, lambda](Complex z) {
    PhiValue p = phi(k, HalfPlanePoint(z));
    if (p.pole) throw ZeroOnCurveError("solve_phi_eq: pole of phi_k on the contour", z);
    return Sample{p.value - lambda, p.error};
  };
  out.winding = trace_contour(contour, f).total_variation / (2 * kPi);

  const int count = static_cast<int>(out.points.size());
  if (std::fabs(out.winding - count) > 1e-6L || count != (al >= 1 ? expected : 0)) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "solve_phi_eq: k=%d lambda=%.6Lg curve count %d, winding %.9Lf, expected %d", k,
                  lambda, count, out.winding, al >= 1 ? expected : 0);
    throw ContradictionError(buf);
  }
  return out;
}

PhiSolutions solve_phi_eq(int k, const RationalNumber& lambda) { return solve_phi_eq(k, lambda.to_ld()); }

// ---- zeros of E_k' in gamma D ----

std::vector<TransportedZero> zeros_in_gamma_D(int k, const UnimodularMatrix& g, Real tol) {
  require_weight(k, "zeros_in_gamma_D");
  if (g.c == 0) throw DomainError("zeros_in_gamma_D: c must be nonzero");
  PhiSolutions sols = solve_phi_eq(k, RationalNumber(-g.d, g.c));
  const int expected = std::labs(g.d) >= std::labs(g.c) ? (k + 2) / 6 : 0;
  if (static_cast<int>(sols.points.size()) != expected) throw ContradictionError("zeros_in_gamma_D: wrong count");

  std::vector<TransportedZero> out;
  for (Complex t0 : sols.points) {
    PrecisionScope ps(256);
    using C = Cx<MpReal>;
    C tau = from_std<MpReal>(t0);
    const MpReal a(g.a), b(g.b), c(g.c), d(g.d), kk(static_cast<long>(k)), k1(static_cast<long>(k + 1));
    Jet<MpReal> J;
    C G, Gp, w;
    for (int it = 0; it < 16; ++it) {
      J = eisenstein_jet<MpReal>(k, tau, 2, 1e-72L, 0, 400000);
      w = c * tau + C(d);
      G = w * J.v[1] + (kk * c) * J.v[0];
      Gp = (k1 * c) * J.v[1] + w * J.v[2];
      C step = G / Gp;
      tau -= step;
      if (to_ld(abs(step)) < 1e-68L) break;
    }
    J = eisenstein_jet<MpReal>(k, tau, 2, 1e-72L, 0, 400000);
    w = c * tau + C(d);
    G = w * J.v[1] + (kk * c) * J.v[0];
    Gp = (k1 * c) * J.v[1] + w * J.v[2];
    const Real aw = to_ld(abs(w));
    const Real gerr = aw * (J.tail[1] + J.rounding[1]) + k * std::labs(g.c) * (J.tail[0] + J.rounding[0]);
    TransportedZero z;
    z.tau = to_std(tau);
    z.image = to_std((a * tau + C(b)) / w);
    // E_k'(gamma tau) = (c tau + d)^{k+1} E_k'(tau) (c phi_k(tau) + d) = (c tau + d)^{k+1} G(tau)
    z.residual = std::pow(aw, k + 1) * (to_ld(abs(G)) + gerr);
    z.margin = std::pow(aw, k + 3) * to_ld(abs(Gp));
    z.simple = z.margin * 1e-6L * z.image.imag() > 1e3L * z.residual;
    if (!(z.residual <= tol)) throw ContradictionError("zeros_in_gamma_D: residual of E_k'(gamma tau) exceeds tol");
    if (std::labs(g.d) == std::labs(g.c)) {
      Real r = z.image.real() - 0.5L;
      if (std::fabs(r - std::round(r)) > 1e-9L || !(z.image.imag() > kS3 / 3) || !(z.image.imag() < kS3))
        throw ContradictionError("zeros_in_gamma_D: image off the segment r + 1/2 + i(sqrt3/6, sqrt3/2)");
    }
    out.push_back(z);
  }
  return out;
}

LineCount total_line_count(int k) {
  require_weight(k, "total_line_count");
  LineCount c;
  LineZeros lz = locate_line_zeros(k);
  c.upper = static_cast<int>(lz.zeros.size());
  for (const auto& z : zeros_in_gamma_D(k, UnimodularMatrix(1, 0, 1, 1)))
    if (std::fabs(z.image.real() - 0.5L) <= 1e-9L) ++c.middle;
  c.endpoints = k % 6 == 2 ? 2 : 0;
  if (c.endpoints && !lz.endpoint_is_zero) throw ContradictionError("total_line_count: endpoint zero missing");
  if (c.total() != 1 + 2 * ((k - 2) / 6)) throw ContradictionError("total_line_count: assembly mismatch");
  return c;
}

// ---- exports ----

std::vector<TrajectoryPoint> phi_trajectory(int k, Real eps, int samples) {
  require_weight(k, "phi_trajectory");
  if (samples < 2 || !(eps > 0)) throw DomainError("phi_trajectory: bad samples or eps");
  PoleTable tab = pole_table(k);
  const Real top = tab.b_values.empty() ? 2 : tab.b_values.back() - eps;
  if (!(top > kS3)) throw DomainError("phi_trajectory: eps too large");
  std::vector<TrajectoryPoint> out;
  auto add = [&](Complex z) {
    PhiValue p = phi(k, HalfPlanePoint(z));
    if (!p.pole) out.push_back({z, p.value});
  };
  for (int i = 0; i < samples; ++i) add({-0.5L, top + (kS3 - top) * i / samples});
  for (int i = 0; i < samples; ++i) add(cis(2 * kPi / 3 - (kPi / 3) * i / samples));
  for (int i = 0; i <= samples; ++i) add({0.5L, kS3 + (top - kS3) * i / samples});
  return out;
}

nlohmann::json to_json(const LocusCurve& c) {
  nlohmann::json poly = nlohmann::json::array();
  for (Complex z : c.polyline) poly.push_back({static_cast<double>(z.real()), static_cast<double>(z.imag())});
  nlohmann::json j{{"j", c.j},
                   {"alpha", static_cast<double>(c.alpha)},
                   {"start", {static_cast<double>(c.start().real()), static_cast<double>(c.start().imag())}},
                   {"polyline", poly},
                   {"start_angle_deg", static_cast<double>(c.start_angle_deg)}};
  std::vector<double> pv(c.phi_values.begin(), c.phi_values.end());
  j["phi_values"] = pv;
  if (c.asymptote) {
    j["end"] = "asymptote";
    j["exit_re"] = static_cast<double>(c.exit_re);
  } else {
    j["end"] = {0.5, static_cast<double>(c.b)};
    j["end_angle_deg"] = static_cast<double>(c.end_angle_deg);
  }
  return j;
}

std::string vk_csv(int k, Real t0, Real t1, int samples) {
  if (samples < 1) throw DomainError("vk_csv: need at least one sample");
  std::string s = "t,v\n";
  char buf[96];
  for (int i = 0; i <= samples; ++i) {
    Real t = i == samples ? t1 : t0 + (t1 - t0) * i / samples;
    try {
      std::snprintf(buf, sizeof buf, "%.12Lf,%.15Le\n", t, vk(k, t));
      s += buf;
    } catch (const DomainError&) {
      // pole: no row
    }
  }
  return s;
}

std::string wk_csv(const WTable& t) {
  std::string s = "theta,w\n";
  char buf[96];
  for (size_t i = 0; i < t.theta.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.15Lf,%.15Lf\n", t.theta[i], t.w[i]);
    s += buf;
  }
  return s;
}

}  // namespace eiscrit
