#include "eiscrit/winding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <utility>

#include "eiscrit/critzeros.hpp"

namespace eiscrit {

namespace {

const Real kPi = pi_const<Real>();
const Complex kRho(0.5L, 0.8660254037844386467637231707529361835L);
const Complex kRho2(-0.5L, 0.8660254037844386467637231707529361835L);

Sample checked(const Sample& s, Complex where) {
  if (!(std::abs(s.value) > s.error))
    throw ZeroOnCurveError("arg_variation: |f| does not exceed its error bound on the curve", where);
  return s;
}

}  // namespace

void ArgTrace::append(const ArgTrace& next) {
  if (next.values.empty()) return;
  if (values.empty()) {
    *this = next;
    return;
  }
  const Real shift = unwrapped_args.back() - next.unwrapped_args.front();
  for (size_t i = 1; i < next.values.size(); ++i) {
    parameter_samples.push_back(next.parameter_samples[i]);
    values.push_back(next.values[i]);
    unwrapped_args.push_back(next.unwrapped_args[i] + shift);
  }
  total_variation = unwrapped_args.back() - unwrapped_args.front();
}

ArgTrace arg_variation(const ParamFn& f, Real s0, Real s1, const TraceOptions& opt) {
  if (opt.initial_samples < 1) throw DomainError("arg_variation: need at least one initial interval");
  struct Pt {
    Real s;
    Complex v;
  };
  long evaluations = 0;
  auto eval = [&](Real s) {
    if (++evaluations > opt.max_samples) throw CertificationError("arg_variation: sample cap exceeded", 0);
    Sample v = f(s);
    if (!(std::abs(v.value) > v.error))
      throw ZeroOnCurveError("arg_variation: |f| does not exceed its error bound on the curve", Complex(s, 0));
    return Pt{s, v.value};
  };
  auto fine = [&](const Pt& l, const Pt& r) {
    Complex q = r.v / l.v;
    Real ratio = std::abs(q);
    return std::fabs(std::arg(q)) <= opt.max_step && ratio <= opt.max_ratio && ratio >= 1 / opt.max_ratio;
  };

  std::vector<Pt> out;
  out.push_back(eval(s0));
  const Real span = std::fabs(s1 - s0) + std::fabs(s0) + std::fabs(s1);
  for (int i = 1; i <= opt.initial_samples; ++i) {
    std::vector<Pt> stack{eval(i == opt.initial_samples ? s1 : s0 + (s1 - s0) * i / opt.initial_samples)};
    while (!stack.empty()) {
      const Pt& cur = out.back();
      Pt target = stack.back();
      if (fine(cur, target)) {
        out.push_back(target);
        stack.pop_back();
        continue;
      }
      if (std::fabs(target.s - cur.s) < 1e-17L * span)
        throw ZeroOnCurveError("arg_variation: argument jump not resolved; f vanishes on or next to the curve",
                               Complex(cur.s, 0));
      stack.push_back(eval((cur.s + target.s) / 2));
    }
  }

  ArgTrace t;
  t.parameter_samples.reserve(out.size());
  Real acc = std::arg(out[0].v);
  for (size_t i = 0; i < out.size(); ++i) {
    if (i) acc += std::arg(out[i].v / out[i - 1].v);
    t.parameter_samples.push_back(out[i].s);
    t.values.push_back(out[i].v);
    t.unwrapped_args.push_back(acc);
  }
  t.total_variation = t.unwrapped_args.back() - t.unwrapped_args.front();
  return t;
}

Segment Segment::vertical(Real x, Real y0, Real y1) { return {Kind::Vertical, Complex(x, 0), 0, y0, y1, false}; }
Segment Segment::horizontal(Real y, Real x0, Real x1) { return {Kind::Horizontal, Complex(0, y), 0, x0, x1, false}; }
Segment Segment::unit_arc(Real t0, Real t1) { return {Kind::UnitArc, Complex(0), 1, t0, t1, false}; }
Segment Segment::detour(Complex c, Real r, Real p0, Real p1, bool inside) {
  if (!(r > 0)) throw DomainError("Segment::detour: radius must be positive");
  return {Kind::Detour, c, r, p0, p1, inside};
}

Complex Segment::point(Real s) const {
  Real a = a0 + (a1 - a0) * s;
  if (s == 1) a = a1;
  switch (kind) {
    case Kind::Vertical: return {center.real(), a};
    case Kind::Horizontal: return {a, center.imag()};
    case Kind::UnitArc: return {std::cos(a), std::sin(a)};
    case Kind::Detour: return center + radius * Complex(std::cos(a), std::sin(a));
  }
  return {};
}

void Contour::validate(Real tol) const {
  if (segments.empty()) throw DomainError("Contour: no segments");
  for (size_t i = 1; i < segments.size(); ++i)
    if (std::abs(segments[i].start() - segments[i - 1].end()) > tol)
      throw DomainError("Contour: segment " + std::to_string(i) + " does not start where the previous one ends");
}

bool Contour::closed(Real tol) const {
  return !segments.empty() && std::abs(segments.front().start() - segments.back().end()) <= tol;
}

namespace {

ArgTrace trace_segment(const Segment& seg, const PointFn& f, const TraceOptions& opt = {}) {
  try {
    return arg_variation([&](Real s) { return f(seg.point(s)); }, 0, 1, opt);
  } catch (const ZeroOnCurveError& e) {
    throw ZeroOnCurveError(e.what(), seg.point(e.where().real()));
  }
}

}  // namespace

ArgTrace trace_contour(const Contour& c, const PointFn& f, const TraceOptions& opt) {
  c.validate();
  ArgTrace all;
  for (size_t i = 0; i < c.segments.size(); ++i) {
    ArgTrace t = trace_segment(c.segments[i], f, opt);
    for (Real& s : t.parameter_samples) s += static_cast<Real>(i);
    all.append(t);
  }
  return all;
}

PointFn ek_deriv_fn(int k) {
  return [k](Complex z) {
    EvalResult r = eval_Ek_deriv(k, HalfPlanePoint(z), 1, EvalBudget::relative(1e-8L, 64));
    return checked(Sample{r.value, r.error_bound()}, z);
  };
}

Sample gk_sample(int k, Real theta) {
  ArcPair p = eval_fk_gk(k, theta, EvalBudget::relative(1e-8L, 64));
  return Sample{p.g.value, p.g.error_bound()};
}

namespace {

// eta-limit of the variation of f along [pi/3 + eta, 2pi/3 - eta], or the plain variation
EtaLimit arc_variation(int k, const ParamFn& f, Real tol) {
  const Real a = kPi / 3, b = 2 * kPi / 3;
  EtaLimit out;
  if (k % 6 != 2) {
    out.value = arg_variation(f, a, b).total_variation;
    return out;
  }
  Real eta = 1e-2L;
  Real v = arg_variation(f, a + eta, b - eta).total_variation;
  for (int j = 1; j <= 40; ++j) {
    Real e2 = eta / 2;
    Real nv = v + arg_variation(f, a + e2, a + eta).total_variation + arg_variation(f, b - eta, b - e2).total_variation;
    out.last_change = std::fabs(nv - v);
    v = nv;
    eta = e2;
    if (out.last_change < tol / 2) {
      out.value = v;
      out.steps = j;
      return out;
    }
  }
  throw CertificationError("arc variation: eta-limit did not stabilise", out.last_change);
}

void require_weight(int k, const char* who) {
  if (k < 4 || k % 2) throw DomainError(std::string(who) + ": k must be even and >= 4");
}

}  // namespace

EtaLimit compute_A(int k, Real tol) {
  require_weight(k, "compute_A");
  PointFn e = ek_deriv_fn(k);
  return arc_variation(k, [&](Real th) { return e(Complex(std::cos(th), std::sin(th))); }, tol);
}

EtaLimit compute_B(int k, Real tol) {
  require_weight(k, "compute_B");
  return arc_variation(k, [&](Real th) { return checked(gk_sample(k, th), Complex(std::cos(th), std::sin(th))); }, tol);
}

Real expected_A(int k) { return k % 6 == 4 ? -(k + 2) * kPi / 3 : -k * kPi / 3; }
Real expected_B(int k) { return k % 6 == 4 ? -(k + 2) * kPi / 6 : -(k - 2) * kPi / 6; }

Real default_eps(const std::vector<Real>& zeros) {
  std::vector<Complex> pts{kRho, kRho2};
  for (Real b : zeros) {
    pts.emplace_back(0.5L, b);
    pts.emplace_back(-0.5L, b);
  }
  Real d = 0.1L;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) d = std::min(d, std::abs(pts[i] - pts[j]));
  return std::min<Real>(0.05L, d / 2);
}

Contour boundary_contour(const BoundaryShape& shape) {
  std::vector<Real> zs = shape.line_points;
  std::sort(zs.begin(), zs.end());
  std::vector<Real> arcs = shape.arc_points;
  std::sort(arcs.begin(), arcs.end(), std::greater<>());
  const Real y0 = kRho.imag();
  const Real eps = shape.eps, ceps = shape.corner_eps, T = shape.T;
  const bool corners = ceps > 0;
  const Real ystart = corners ? y0 + ceps : y0;
  for (Real b : zs)
    if (!(eps > 0 && b - eps > ystart && b + eps < T)) throw DomainError("boundary_contour: zero or detour outside the edge");
  if (!(T > ystart + 2 * std::max(eps, ceps))) throw DomainError("boundary_contour: bad T or eps");
  const Real delta = corners ? 2 * std::asin(ceps / 2) : 0;
  const Real adelta = arcs.empty() ? 0 : 2 * std::asin(shape.arc_eps / 2);
  if (!arcs.empty() && !(shape.arc_eps > 0)) throw DomainError("boundary_contour: arc detours need a radius");

  Contour c;
  auto& s = c.segments;
  // arc, right to left in Im, with bulges into |z| < 1 around the given points
  Real th = 2 * kPi / 3 - delta;
  for (Real a : arcs) {
    if (!(a + adelta < th && a - adelta > kPi / 3 + delta)) throw DomainError("boundary_contour: arc detour out of range");
    s.push_back(Segment::unit_arc(th, a + adelta));
    Complex ctr(std::cos(a), std::sin(a));
    Real p0 = std::arg(Complex(std::cos(a + adelta), std::sin(a + adelta)) - ctr);
    Real p1 = std::arg(Complex(std::cos(a - adelta), std::sin(a - adelta)) - ctr);
    while (p1 < p0) p1 += 2 * kPi;
    s.push_back(Segment::detour(ctr, shape.arc_eps, p0, p1, false));
    th = a - adelta;
  }
  s.push_back(Segment::unit_arc(th, kPi / 3 + delta));
  if (corners) {
    Complex p = Complex(std::cos(kPi / 3 + delta), std::sin(kPi / 3 + delta)) - kRho;
    s.push_back(Segment::detour(kRho, ceps, std::arg(p), kPi / 2, true));
  }
  Real y = ystart;
  for (Real b : zs) {
    s.push_back(Segment::vertical(0.5L, y, b - eps));
    if (shape.right_outward)
      s.push_back(Segment::detour(Complex(0.5L, b), eps, -kPi / 2, kPi / 2, false));
    else
      s.push_back(Segment::detour(Complex(0.5L, b), eps, -kPi / 2, -3 * kPi / 2, true));
    y = b + eps;
  }
  s.push_back(Segment::vertical(0.5L, y, T));
  s.push_back(Segment::horizontal(T, 0.5L, -0.5L));
  y = T;
  for (auto it = zs.rbegin(); it != zs.rend(); ++it) {
    s.push_back(Segment::vertical(-0.5L, y, *it + eps));
    if (shape.left_outward)
      s.push_back(Segment::detour(Complex(-0.5L, *it), eps, kPi / 2, 3 * kPi / 2, false));
    else
      s.push_back(Segment::detour(Complex(-0.5L, *it), eps, kPi / 2, -kPi / 2, true));
    y = *it - eps;
  }
  s.push_back(Segment::vertical(-0.5L, y, ystart));
  if (corners) {
    Complex p = Complex(std::cos(2 * kPi / 3 - delta), std::sin(2 * kPi / 3 - delta)) - kRho2;
    s.push_back(Segment::detour(kRho2, ceps, kPi / 2, std::arg(p), true));
  }
  c.validate(1e-15L);
  if (!c.closed(1e-15L)) throw DomainError("boundary_contour: contour does not close");
  return c;
}

Contour fundamental_contour(int k, Real T, Real eps, const std::vector<Real>& line_zeros) {
  require_weight(k, "fundamental_contour");
  if (!(eps > 0)) throw DomainError("fundamental_contour: bad T or eps");
  BoundaryShape shape;
  shape.T = T;
  shape.eps = eps;
  shape.line_points = line_zeros;
  shape.right_outward = true;
  shape.left_outward = false;
  shape.corner_eps = k % 6 == 2 ? eps : 0;
  return boundary_contour(shape);
}

ContourCount contour_count_I(int k, const ContourOptions& opt) {
  require_weight(k, "contour_count_I");
  std::vector<Real> zeros = opt.line_zeros;
  if (!opt.zeros_given) {
    zeros.clear();
    for (const auto& r : locate_line_zeros(k).zeros) zeros.push_back(r.location.im());
  }
  ContourCount out;
  BracketTable tab = bracket_table(k);
  out.T = opt.T > 0 ? opt.T : (tab.t_values.empty() ? 2.0L : tab.t_values.front() + 1);
  for (Real b : zeros)
    if (out.T < b + 1) throw DomainError("contour_count_I: T must exceed every line zero by at least 1");
  out.eps = opt.eps > 0 ? opt.eps : default_eps(zeros);
  Contour c = fundamental_contour(k, out.T, out.eps, zeros);
  PointFn f = ek_deriv_fn(k);
  Real total = 0;
  for (const Segment& seg : c.segments) {
    ArgTrace t = trace_segment(seg, f);
    out.samples += static_cast<long>(t.values.size());
    total += t.total_variation;
    switch (seg.kind) {
      case Segment::Kind::UnitArc: out.arc += t.total_variation; break;
      case Segment::Kind::Horizontal: out.top += t.total_variation; break;
      default: (seg.center.real() > 0 ? out.right : out.left) += t.total_variation;
    }
  }
  out.I = total / (2 * kPi);
  return out;
}

std::string to_csv(const ArgTrace& t) {
  std::string s = "parameter,re,im,unwrapped_arg\n";
  char buf[160];
  for (size_t i = 0; i < t.values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17Lg,%.17Lg,%.17Lg,%.17Lg\n", t.parameter_samples[i], t.values[i].real(),
                  t.values[i].imag(), t.unwrapped_args[i]);
    s += buf;
  }
  return s;
}

}  // namespace eiscrit
