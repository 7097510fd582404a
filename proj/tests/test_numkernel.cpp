#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <thread>

#include "eiscrit/numkernel.hpp"

using namespace eiscrit;

namespace {

const Real kPi = pi_const<Real>();

Complex cpow(Complex z, int k) {
  Complex r = 1;
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}

// independent sigma: plain divisor enumeration in unsigned arithmetic
unsigned long long brute_sigma(unsigned n, unsigned e) {
  unsigned long long s = 0;
  for (unsigned d = 1; d <= n; ++d)
    if (n % d == 0) {
      unsigned long long p = 1;
      for (unsigned i = 0; i < e; ++i) p *= d;
      s += p;
    }
  return s;
}

mpz_class binom(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

}  // namespace

TEST_CASE("bernoulli values") {
  CHECK(bernoulli(4) == RationalNumber(-1, 30));
  CHECK(bernoulli(6) == RationalNumber(1, 42));
  CHECK(bernoulli(2) == RationalNumber(1, 6));
  CHECK(bernoulli(12) == RationalNumber(-691, 2730));
  CHECK(eisenstein_multiplier(4) == RationalNumber(240));
  CHECK(eisenstein_multiplier(6) == RationalNumber(-504));
  CHECK(eisenstein_multiplier(2) == RationalNumber(-24));
  CHECK_THROWS_AS(bernoulli(3), DomainError);
  CHECK_THROWS_AS(bernoulli(0), DomainError);
}

TEST_CASE("bernoulli satisfies the binomial recurrence") {
  // sum_{j<n} C(n, j) B_j = 0 for n >= 2, with B_1 = -1/2 and odd B_j = 0 beyond
  for (int n = 2; n <= 60; ++n) {
    mpq_class s = 1;  // B_0
    s += mpq_class(binom(n, 1)) * mpq_class(-1, 2);
    for (int j = 2; j < n; j += 2) s += mpq_class(binom(n, j)) * bernoulli(j).get();
    CHECK(s == 0);
  }
}

TEST_CASE("rational numbers stay canonical") {
  RationalNumber r(6, -4);
  CHECK(r.numerator() == -3);
  CHECK(r.denominator() == 2);
  CHECK(r.str() == "-3/2");
  CHECK(RationalNumber::parse("10/4") == RationalNumber(5, 2));
  CHECK(RationalNumber::parse("-7") == RationalNumber(-7));
  CHECK_THROWS_AS(RationalNumber::parse("1/0"), DomainError);
  CHECK_THROWS_AS(RationalNumber::parse("x"), DomainError);
}

TEST_CASE("divisor power sums") {
  CHECK(divisor_power_sum(1, 3) == 1);
  CHECK(divisor_power_sum(6, 3) == 252);
  CHECK(divisor_power_sum(2, 1) == 3);
  CHECK_THROWS_AS(divisor_power_sum(0, 3), DomainError);
  for (unsigned n = 1; n <= 200; ++n)
    for (unsigned e = 0; e <= 5; ++e) CHECK(divisor_power_sum(n, e) == mpz_class(std::to_string(brute_sigma(n, e))));
}

TEST_CASE("half-plane points reject im <= 0") {
  CHECK_THROWS_AS(HalfPlanePoint(0, 0), DomainError);
  CHECK_THROWS_AS(HalfPlanePoint(0.3L, -1), DomainError);
  CHECK_NOTHROW(HalfPlanePoint(0.3L, 1e-9L));
}

TEST_CASE("E_k basic values") {
  // far up the axis the q-terms are invisible
  EvalResult e = eval_Ek(4, HalfPlanePoint(0.1L, 50));
  CHECK(std::abs(e.value - Complex(1)) < 1e-30L);
  CHECK(e.tail_bound <= 1e-30L);

  // E_4(i) = 3 Gamma(1/4)^8 / (2 pi)^6, E_2(i) = 3/pi, E_6(i) = 0
  Real e4i = 3 * std::pow(std::tgamma(0.25L), 8) / std::pow(2 * kPi, 6);
  CHECK(std::abs(eval_Ek(4, HalfPlanePoint(0, 1)).value - Complex(e4i)) < 1e-17L);
  CHECK(std::abs(eval_Ek(4, HalfPlanePoint(0, 1)).value - Complex(1.455762892268709322462422003598869287432L)) < 1e-18L);
  CHECK(std::abs(eval_E2(HalfPlanePoint(0, 1)).value - Complex(3 / kPi)) < 1e-18L);
  CHECK(std::abs(eval_Ek(6, HalfPlanePoint(0, 1)).value) < 1e-18L);
  // E_4 vanishes at e^{i pi/3}
  CHECK(std::abs(eval_Ek(4, HalfPlanePoint(0.5L, std::sqrt(3.0L) / 2)).value) < 1e-17L);
}

TEST_CASE("lattice G_4 oracle agrees with the q-series") {
  // 2 zeta(4) = pi^4 / 45
  EvalResult g = eval_Gk_lattice(4, HalfPlanePoint(0, 1), {128, 1e-20L, 1000000, 0, 1024});
  EvalResult e = eval_Ek(4, HalfPlanePoint(0, 1));
  Real two_zeta4 = std::pow(kPi, 4) / 45;
  CHECK(std::abs(g.value / two_zeta4 - e.value) < 1e-12L);
  CHECK(std::abs(g.value / two_zeta4 - e.value) <= g.error_bound() / two_zeta4 + e.error_bound() + 1e-18L);
}

TEST_CASE("lattice G_k is translation invariant and weight-k modular") {
  EvalBudget b{128, 1e-22L, 2000000, 1e-22L, 1024};
  for (int k : {4, 6, 8, 12}) {
    HalfPlanePoint z(0.23L, 1.1L);
    Complex g = eval_Gk_lattice(k, z, b).value;
    Complex g1 = eval_Gk_lattice(k, HalfPlanePoint(1.23L, 1.1L), b).value;
    CHECK(std::abs(g - g1) < 1e-15L * std::abs(g));
    Complex zz = z.z();
    Complex w = Complex(-1) / zz;
    Complex gs = eval_Gk_lattice(k, HalfPlanePoint(w), b).value;
    CHECK(std::abs(gs - cpow(zz, k) * g) < 1e-10L * std::abs(gs));
  }
}

TEST_CASE("periodicity of every series within tail bounds") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.3, 2.0);
  for (int i = 0; i < 20; ++i) {
    Real x = re(rng), y = im(rng);
    for (int k : {2, 4, 10, 24}) {
      EvalResult a = eval_Ek(k, HalfPlanePoint(x, y)), b = eval_Ek(k, HalfPlanePoint(x + 1, y));
      CHECK(std::abs(a.value - b.value) <= a.error_bound() + b.error_bound() + 1e-30L);
      EvalResult h = eval_hk(k + 1, HalfPlanePoint(x, y)), h1 = eval_hk(k + 1, HalfPlanePoint(x + 1, y));
      CHECK(std::abs(h.value - h1.value) <= h.error_bound() + h1.error_bound() + 1e-30L);
    }
  }
}

TEST_CASE("modularity at S") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.8, 1.6);
  for (int i = 0; i < 10; ++i) {
    Complex z(re(rng), im(rng));
    for (int k : {4, 6, 12, 20, 36}) {
      EvalResult a = eval_Ek(k, HalfPlanePoint(Complex(-1) / z));
      EvalResult b = eval_Ek(k, HalfPlanePoint(z));
      Complex zk = cpow(z, k);
      Real scale = std::abs(zk);
      // -1/z is itself rounded to long double, hence the 1e-16 allowance
      CHECK(std::abs(a.value - zk * b.value) <= a.error_bound() + scale * b.error_bound() + 1e-16L * k * scale);
    }
  }
}

TEST_CASE("E_2 quasi-modularity") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.9, 1.5);
  const int mats[][4] = {{0, -1, 1, 0}, {1, 1, 1, 2}, {2, 1, 1, 1}, {1, 0, 2, 1}, {3, 2, 1, 1}};
  for (int i = 0; i < 8; ++i) {
    Complex z(re(rng), im(rng));
    for (auto& m : mats) {
      Complex cz = Real(m[2]) * z + Real(m[3]);
      Complex gz = (Real(m[0]) * z + Real(m[1])) / cz;
      Complex lhs = eval_E2(HalfPlanePoint(gz)).value;
      Complex rhs = cz * cz * eval_E2(HalfPlanePoint(z)).value + Real(12 * m[2]) * cz / Complex(0, 2 * kPi);
      CHECK(std::abs(lhs - rhs) < 1e-16L * (1 + std::abs(rhs)));
    }
  }
}

TEST_CASE("reality on the line Re = 1/2") {
  for (int k : {4, 10, 12, 30, 60}) {
    for (Real t : {0.9L, 1.3L, 2.0L, 4.0L, 9.0L}) {
      HalfPlanePoint z(0.5L, t);
      EvalResult e = eval_Ek(k, z, EvalBudget::relative(1e-25L));
      CHECK(std::abs(e.value.imag()) <= e.error_bound() + 1e-30L);
      EvalResult d = eval_Ek_deriv(k, z, 1, EvalBudget::relative(1e-25L));
      CHECK(std::abs(d.value.real()) <= d.error_bound() + 1e-28L * std::abs(d.value));
      CHECK(std::abs(d.value.real()) <= 1e-12L * std::abs(d.value) + 1e-300L);
    }
  }
}

TEST_CASE("E_k' = -(4 pi k i / B_k) h_k") {
  for (int k : {4, 8, 12, 26}) {
    Complex factor = Complex(0, -4 * kPi * k) / bernoulli(k).to_ld();
    for (Complex z : {Complex(0.1L, 0.9L), Complex(0.5L, 1.2L), Complex(-0.3L, 2.5L)}) {
      EvalResult d = eval_Ek_deriv(k, HalfPlanePoint(z), 1);
      EvalResult h = eval_hk(k, HalfPlanePoint(z));
      Real f = std::abs(factor);
      CHECK(std::abs(d.value - factor * h.value) <= d.error_bound() + f * h.error_bound() + 1e-17L * std::abs(d.value));
    }
  }
}

TEST_CASE("first Fourier coefficient of h_k is 1") {
  // h_k(z) / q -> sigma_{k-1}(1) = 1 as Im z grows
  for (int k : {2, 5, 12}) {
    HalfPlanePoint z(0, 8);
    Complex q = std::exp(Complex(0, 2 * kPi) * z.z());
    Complex r = eval_hk(k, z, EvalBudget::relative(1e-25L)).value / q;
    CHECK(std::abs(r - Complex(1)) < 1e-18L * (1L << k));
  }
}

TEST_CASE("derivatives match central differences") {
  const Real h = 1e-6L;
  for (int k : {4, 12}) {
    for (int r = 1; r <= 3; ++r) {
      HalfPlanePoint z(0.2L, 1.1L);
      auto lo = eval_Ek_jet(k, HalfPlanePoint(0.2L, 1.1L - h), r, {64, 1e-30L, 100000, 1e-18L, 64});
      auto hi = eval_Ek_jet(k, HalfPlanePoint(0.2L, 1.1L + h), r, {64, 1e-30L, 100000, 1e-18L, 64});
      Complex num = (hi[r - 1].value - lo[r - 1].value) / Complex(0, 2 * h);
      Complex exact = eval_Ek_deriv(k, z, r).value;
      CHECK(std::abs(num - exact) <= 1e-4L * std::abs(exact));
    }
  }
}

TEST_CASE("h_k lattice oracle agrees at random points") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.8, 3.0);
  std::uniform_int_distribution<int> kk(2, 30);
  for (int i = 0; i < 50; ++i) {
    int k = kk(rng);
    HalfPlanePoint z(re(rng), im(rng));
    EvalResult q = eval_hk(k, z, EvalBudget::relative(1e-20L));
    EvalResult l = eval_hk_lattice(k, z, EvalBudget::relative(1e-20L));
    CHECK(std::abs(q.value - l.value) <= q.error_bound() + l.error_bound() + 1e-18L * std::abs(q.value));
    CHECK(std::abs(q.value - l.value) <= 1e-10L * std::abs(q.value));
  }
}

TEST_CASE("h_k lattice symmetry under z -> -conj(z)") {
  for (int k : {4, 12, 13}) {
    EvalResult a = eval_hk_lattice(k, HalfPlanePoint(0.31L, 1.05L), EvalBudget::relative(1e-20L));
    EvalResult b = eval_hk_lattice(k, HalfPlanePoint(-0.31L, 1.05L), EvalBudget::relative(1e-20L));
    CHECK(std::abs(a.value - std::conj(b.value)) <= a.error_bound() + b.error_bound() + 1e-18L * std::abs(a.value));
  }
}

TEST_CASE("h_12 signs at t_1 and t_2") {
  Real t1 = 0.5L / std::tan(kPi / 13), t2 = 0.5L / std::tan(2 * kPi / 13);
  EvalResult a = eval_hk(12, HalfPlanePoint(0.5L, t1), EvalBudget::relative(1e-20L));
  CHECK(std::abs(a.value.imag()) <= a.error_bound());
  CHECK(a.value.real() < -a.error_bound());
  EvalResult b = eval_hk_lattice(12, HalfPlanePoint(0.5L, t2), EvalBudget::relative(1e-20L));
  CHECK(std::abs(b.value.imag()) <= b.error_bound() + 1e-18L * std::abs(b.value));
  CHECK(b.value.real() > b.error_bound());
}

TEST_CASE("f_k and g_k on the arc") {
  for (int k : {4, 12, 16, 18, 20, 34}) {
    for (Real th = 1.1L; th < 2.05L; th += 0.0731L) {
      ArcPair p = eval_fk_gk(k, th);
      ArcPair m = eval_fk_gk(k, kPi - th);
      Real sgn = (k / 2) % 2 ? -1 : 1;
      CHECK(std::abs(m.f.value.real() - sgn * p.f.value.real()) < 1e-10L);
      // g = f' - (k i / 2) f, f' by central difference
      Real h = 1e-7L;
      Real fp = (eval_fk_gk(k, th + h).f.value.real() - eval_fk_gk(k, th - h).f.value.real()) / (2 * h);
      Complex g = Complex(fp, -k * p.f.value.real() / 2);
      CHECK(std::abs(p.g.value - g) < 1e-6L * (1 + std::abs(g)));
    }
  }
  CHECK_THROWS_AS(eval_fk_gk(4, 0), DomainError);
  CHECK_THROWS_AS(eval_fk_gk(4, kPi), DomainError);
}

TEST_CASE("budget exhaustion is a certification failure") {
  EvalBudget b{128, 1e-30L, 3, 0, 128};
  CHECK_THROWS_AS(eval_Ek(12, HalfPlanePoint(0.5L, 0.2L), b), CertificationError);
  try {
    eval_Ek(12, HalfPlanePoint(0.5L, 0.2L), b);
  } catch (const CertificationError& e) {
    CHECK(e.best_bound() > 0);
  }
  EvalBudget bad{128, 0, 10, 0, 128};
  CHECK_THROWS_AS(eval_Ek(4, HalfPlanePoint(0, 1), bad), DomainError);
}

TEST_CASE("precision escalation is recorded") {
  // heavy cancellation: |E_k'| is tiny far up the line
  EvalResult d = eval_Ek_deriv(40, HalfPlanePoint(0.5L, 6), 1, EvalBudget::relative(1e-30L, 64));
  CHECK(d.precision_bits > 64);
  EvalResult f = eval_Ek(4, HalfPlanePoint(0, 1), EvalBudget::fast());
  CHECK(f.precision_bits == 64);
}

TEST_CASE("Delta product matches (E_4^3 - E_6^2)/1728") {
  HalfPlanePoint z(0.17L, 1.2L);
  Complex d = eval_Delta(z).value;
  Complex e4 = eval_Ek(4, z).value, e6 = eval_Ek(6, z).value;
  CHECK(std::abs(d - (e4 * e4 * e4 - e6 * e6) / Real(1728)) < 1e-18L * std::abs(e4 * e4 * e4));
}

TEST_CASE("concurrent evaluation is deterministic") {
  std::vector<Complex> out(8);
  std::vector<std::thread> th;
  for (int i = 0; i < 8; ++i)
    th.emplace_back([&out, i] { out[i] = eval_Ek(60 + 2 * (i % 2), HalfPlanePoint(0.5L, 1.01L), EvalBudget{256}).value; });
  for (auto& t : th) t.join();
  for (int i = 2; i < 8; ++i) CHECK(out[i] == out[i % 2]);
}
