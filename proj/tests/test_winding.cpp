#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eiscrit/critzeros.hpp"
#include "eiscrit/winding.hpp"

using namespace eiscrit;

namespace {
const Real kPi = 3.141592653589793238462643383279502884L;

Sample exact(Complex v) { return Sample{v, 0}; }
}  // namespace

TEST_CASE("argument of the identity along the upper semicircle") {
  ArgTrace t = arg_variation([](Real th) { return exact(Complex(std::cos(th), std::sin(th))); }, 0, kPi);
  CHECK(std::fabs(t.total_variation - kPi) < 1e-15L);
  for (size_t i = 1; i < t.unwrapped_args.size(); ++i) CHECK(std::fabs(t.unwrapped_args[i] - t.unwrapped_args[i - 1]) < kPi / 2);
  CHECK(t.total_variation == t.unwrapped_args.back() - t.unwrapped_args.front());
}

TEST_CASE("reversal and additivity") {
  auto f = [](Real s) { return exact(std::pow(Complex(std::cos(s), std::sin(s)), 3) + Complex(0.4L, 0.1L)); };
  ArgTrace fw = arg_variation(f, 0, 5), bw = arg_variation(f, 5, 0);
  CHECK(std::fabs(fw.total_variation + bw.total_variation) < 1e-14L);
  ArgTrace a = arg_variation(f, 0, 2), b = arg_variation(f, 2, 5);
  a.append(b);
  CHECK(std::fabs(a.total_variation - fw.total_variation) < 1e-14L);
  // full winding of z^3 + c around the origin, |c| < 1
  ArgTrace full = arg_variation(f, 0, 2 * kPi);
  CHECK(std::fabs(full.total_variation - 6 * kPi) < 1e-13L);
}

TEST_CASE("fast winding is not aliased") {
  // z^40 on the circle: 40 turns, far more than the initial sample count
  ArgTrace t = arg_variation([](Real s) { return exact(std::pow(Complex(std::cos(s), std::sin(s)), 40)); }, 0, 2 * kPi);
  CHECK(std::fabs(t.total_variation - 80 * kPi) < 1e-10L);
}

TEST_CASE("zero on the curve aborts") {
  CHECK_THROWS_AS(arg_variation([](Real s) { return Sample{Complex(s - 0.5L, 0), 1e-12L}; }, 0, 1), ZeroOnCurveError);
  TraceOptions tight;
  tight.max_samples = 10;
  CHECK_THROWS_AS(arg_variation([](Real s) { return exact(std::exp(Complex(0, 100 * s))); }, 0, 1, tight), CertificationError);
}

TEST_CASE("top edge contributes one clockwise turn") {
  PointFn f = ek_deriv_fn(12);
  ArgTrace t = arg_variation([&](Real x) { return f(Complex(x, 4)); }, 0.5L, -0.5L);
  CHECK(std::fabs(t.total_variation + 2 * kPi) < 1e-6L);
}

TEST_CASE("vertical edges cancel") {
  for (int k : {4, 6, 12, 16}) {
    PointFn f = ek_deriv_fn(k);
    // above every line zero
    BracketTable tab = bracket_table(k);
    Real y0 = tab.t_values.empty() ? 1.5L : tab.t_values[0] + 0.5L, y1 = y0 + 2;
    ArgTrace r = arg_variation([&](Real y) { return f(Complex(0.5L, y)); }, y0, y1);
    ArgTrace l = arg_variation([&](Real y) { return f(Complex(-0.5L, y)); }, y1, y0);
    CHECK(std::fabs(r.total_variation + l.total_variation) < 1e-8L);
  }
}

TEST_CASE("arc variations A and B") {
  CHECK(std::fabs(compute_A(16).value + 6 * kPi) < 1e-6L);
  CHECK(std::fabs(compute_A(18).value + 6 * kPi) < 1e-6L);
  CHECK(std::fabs(compute_A(20).value + 20 * kPi / 3) < 1e-6L);
  CHECK(std::fabs(compute_B(16).value + 3 * kPi) < 1e-6L);
  CHECK(std::fabs(compute_B(18).value + 8 * kPi / 3) < 1e-6L);
  CHECK(std::fabs(compute_B(20).value + 3 * kPi) < 1e-6L);
  CHECK(compute_A(20).steps > 0);
  CHECK(compute_A(18).steps == 0);
  for (int k = 4; k <= 30; k += 2) {
    CAPTURE(k);
    Real A = compute_A(k).value, B = compute_B(k).value;
    CHECK(std::fabs(A - expected_A(k)) < 1e-6L);
    CHECK(std::fabs(B - expected_B(k)) < 1e-6L);
    CHECK(std::fabs(A - (-(k + 2) * kPi / 6 + B)) < 2e-6L);
  }
}

TEST_CASE("direction of g at 2pi/3 for k = 0 mod 6") {
  for (int k : {6, 12, 18, 24}) {
    Sample g = gk_sample(k, 2 * kPi / 3);
    Real a = std::arg(g.value);
    CHECK(std::fabs(std::remainder(a + kPi / 3, 2 * kPi)) < 1e-6L);
  }
}

TEST_CASE("contour geometry") {
  Contour c = fundamental_contour(8, 3, 0.05L, {});
  CHECK(c.closed());
  CHECK_NOTHROW(c.validate());
  Contour d = fundamental_contour(16, 4, 0.02L, {1.1L, 2.2L});
  CHECK(d.closed());
  int detours = 0;
  for (const auto& s : d.segments)
    if (s.kind == Segment::Kind::Detour) ++detours;
  CHECK(detours == 4);
  CHECK_THROWS_AS(fundamental_contour(16, 2, 0.02L, {2.2L}), DomainError);
  Contour broken;
  broken.segments = {Segment::vertical(0, 1, 2), Segment::vertical(0, 3, 4)};
  CHECK_THROWS_AS(broken.validate(), DomainError);
  CHECK(default_eps({}) == doctest::Approx(0.05));
  CHECK(default_eps({0.88L}) < 0.01L);
}

TEST_CASE("contour count I") {
  ContourOptions o;
  o.T = 4;
  CHECK(std::fabs(contour_count_I(12, o).I - 1) < 1e-6L);
  CHECK(std::fabs(contour_count_I(16).I - 2) < 1e-6L);
  ContourCount c8 = contour_count_I(8);
  CHECK(std::fabs(c8.I) < 1e-6L);
  for (int k = 4; k <= 30; k += 2) {
    CAPTURE(k);
    ContourCount a = contour_count_I(k);
    ContourOptions o2;
    o2.eps = a.eps / 3;
    ContourCount b = contour_count_I(k, o2);
    CHECK(std::fabs(a.I - (k - 4) / 6) < 1e-6L);
    CHECK(std::fabs(b.I - (k - 4) / 6) < 1e-6L);
    CHECK(std::fabs(a.top + 2 * kPi) < 1e-6L);
  }
}

TEST_CASE("missing detour changes the count") {
  // without the detour the trace passes straight through the zero's neighbourhood
  ContourOptions o;
  o.zeros_given = true;
  o.T = 4;
  bool changed = true;
  try {
    changed = std::fabs(contour_count_I(12, o).I - 1) > 0.5L;
  } catch (const ZeroOnCurveError& e) {
    CHECK(std::fabs(e.where().real() - 0.5L) < 1e-12L);
  }
  CHECK(changed);
}

TEST_CASE("csv export") {
  ArgTrace t = arg_variation([](Real th) { return exact(Complex(std::cos(th), std::sin(th))); }, 0, 1);
  std::string csv = to_csv(t);
  CHECK(csv.rfind("parameter,re,im,unwrapped_arg\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(t.values.size()) + 1);
}

TEST_CASE("boundary contours with inside, outside and arc detours") {
  const Real th = 1.3L;
  const Complex u(std::cos(th), std::sin(th)), p(0.5L, 1.4L), q(-0.5L, 1.4L);
  BoundaryShape s;
  s.T = 3;
  s.eps = 0.05L;
  s.line_points = {1.4L};
  s.arc_points = {th};
  s.arc_eps = 0.02L;
  s.corner_eps = 1e-3L;
  s.right_outward = false;
  Contour c = boundary_contour(s);
  CHECK(c.closed(1e-15L));
  auto wind = [&](const Contour& cc, Complex a) {
    return trace_contour(cc, [a](Complex z) { return exact(z - a); }).total_variation / (2 * kPi);
  };
  // the arc bulge takes u in, inside detours leave both edge points out
  CHECK(std::fabs(wind(c, u) - 1) < 1e-12L);
  CHECK(std::fabs(wind(c, p)) < 1e-12L);
  CHECK(std::fabs(wind(c, q)) < 1e-12L);
  s.right_outward = true;
  s.left_outward = true;
  Contour o = boundary_contour(s);
  CHECK(std::fabs(wind(o, p) - 1) < 1e-12L);
  CHECK(std::fabs(wind(o, q) - 1) < 1e-12L);
  s.arc_points = {1.05L};  // detour would run into the corner
  CHECK_THROWS_AS(boundary_contour(s), DomainError);
}
