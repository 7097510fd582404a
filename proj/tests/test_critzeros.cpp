#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "eiscrit/critzeros.hpp"

using namespace eiscrit;

namespace {
const Real kPi = 3.141592653589793238462643383279502884L;
const Real kSqrt3Half = 0.8660254037844386467637231707529361835L;
}  // namespace

TEST_CASE("bracket table") {
  BracketTable t4 = bracket_table(4);
  CHECK(t4.M == 0);
  CHECK(t4.t_values.empty());
  CHECK_FALSE(t4.includes_base_interval);
  CHECK(line_brackets(t4).empty());

  BracketTable t12 = bracket_table(12);
  CHECK(t12.M == 2);
  CHECK_FALSE(t12.includes_base_interval);
  // mpmath, 40 digits
  CHECK(std::fabs(t12.t_values[0] - 2.028579742819058230L) < 1e-16L);
  CHECK(std::fabs(t12.t_values[1] - 0.952670405651534737L) < 1e-16L);

  BracketTable t10 = bracket_table(10);
  CHECK(t10.M == 1);
  CHECK(t10.includes_base_interval);
  auto br = line_brackets(t10);
  REQUIRE(br.size() == 1);
  CHECK(br[0].first == doctest::Approx(kSqrt3Half));

  for (int k = 4; k <= 200; k += 2) {
    BracketTable t = bracket_table(k);
    CHECK(line_brackets(t).size() == static_cast<size_t>((k - 4) / 6));
    for (size_t m = 1; m < t.t_values.size(); ++m) CHECK(t.t_values[m] < t.t_values[m - 1]);
    if (!t.t_values.empty()) CHECK(t.t_values.back() > kSqrt3Half);
  }
  CHECK_THROWS_AS(bracket_table(7), DomainError);
  CHECK_THROWS_AS(bracket_table(2), DomainError);
}

TEST_CASE("sign law at t_m") {
  CHECK(proposition1_sign(12, 1).sign == -1);
  CHECK(proposition1_sign(12, 2).sign == 1);
  SignCertificate c = proposition1_sign(31, 5);
  CHECK(c.sign == -1);
  CHECK(std::fabs(c.h.value.real()) > c.h.error_bound());
  CHECK_THROWS_AS(proposition1_sign(12, 3), DomainError);
  CHECK_THROWS_AS(proposition1_sign(12, 0), DomainError);
  CHECK_THROWS_AS(proposition1_sign(1, 1), DomainError);
}

TEST_CASE("sign law for all small k, both routes") {
  for (int k = 2; k <= 40; ++k)
    for (int m = 1; m <= (k + 1) / 6; ++m) {
      CAPTURE(k);
      CAPTURE(m);
      SignCertificate q = proposition1_sign(k, m);
      CHECK(q.sign == (m % 2 ? -1 : 1));
      if ((k + m) % 5 == 0) {
        SignCertificate l = proposition1_sign(k, m, SignRoute::Lattice);
        CHECK(l.sign == q.sign);
        CHECK(std::abs(l.h.value - q.h.value) <= 1e-10L * std::abs(q.h.value));
      }
    }
}

TEST_CASE("line zeros for k = 12 against a bisection oracle") {
  LineZeros z = locate_line_zeros(12);
  REQUIRE(z.zeros.size() == 1);
  const CriticalPointRecord& r = z.zeros[0];
  // mpmath findroot on E_12'(1/2 + it), 40 digits
  CHECK(std::fabs(r.location.im() - 1.318641509412574275281L) < 1e-15L);
  CHECK(std::fabs(r.location.re() - 0.5L) < 1e-15L);
  CHECK(r.bracket_lo == doctest::Approx(0.952670405651534737));
  CHECK(r.bracket_hi == doctest::Approx(2.028579742819058230));
  CHECK(r.simple);
  CHECK(r.residual <= 1e-9L);
  CHECK_FALSE(z.endpoint_is_zero);
}

TEST_CASE("line zero counts and the endpoint law") {
  for (int k = 4; k <= 48; k += 2) {
    CAPTURE(k);
    LineZeros z = locate_line_zeros(k);
    CHECK(z.zeros.size() == static_cast<size_t>((k - 4) / 6));
    CHECK(z.endpoint_is_zero == (k % 6 == 2));
    auto br = line_brackets(bracket_table(k));
    for (size_t i = 0; i < z.zeros.size(); ++i) {
      const auto& r = z.zeros[i];
      CHECK(r.location.im() > br[i].first);
      CHECK(r.location.im() < br[i].second);
      CHECK(r.residual <= 1e-9L);
      CHECK(r.simple);
      CHECK(r.simplicity_margin >= 1e6L * r.residual);
      // the translate by -1 is a zero of the same size
      EvalResult e = eval_Ek_deriv(k, HalfPlanePoint(r.location.re() - 1, r.location.im()), 1, EvalBudget::fast());
      CHECK(std::abs(e.value) <= 10 * r.residual + 1e-15L * r.simplicity_margin);
    }
  }
  CHECK(locate_line_zeros(8).zeros.empty());
  CHECK(locate_line_zeros(8).endpoint_is_zero);
  CHECK(locate_line_zeros(10).zeros.size() == 1);
  CHECK(locate_line_zeros(10).zeros[0].location.im() < bracket_table(10).t_values[0]);
}

TEST_CASE("line zeros are where h changes sign") {
  // independent check with a fine sign scan of h_k
  for (int k : {16, 22, 30}) {
    LineZeros z = locate_line_zeros(k);
    int changes = 0;
    Real prev = 0;
    for (int i = 0; i <= 2000; ++i) {
      Real t = 0.87L + (6 - 0.87L) * i / 2000;
      Real v = eval_hk(k, HalfPlanePoint(0.5L, t), EvalBudget::relative(1e-6L, 64)).value.real();
      if (i && (v > 0) != (prev > 0)) ++changes;
      prev = v;
    }
    CHECK(changes == static_cast<int>(z.zeros.size()));
  }
}

TEST_CASE("arc zeros") {
  auto r16 = locate_arc_zeros(16);
  CHECK(r16.size() == 4);
  CHECK(r16.front().endpoint);
  CHECK(r16.front().theta == doctest::Approx(kPi / 3));
  CHECK(r16.back().theta == doctest::Approx(2 * kPi / 3));

  auto r18 = locate_arc_zeros(18);
  CHECK(r18.size() == 3);
  for (const auto& r : r18) CHECK_FALSE(r.endpoint);

  auto r20 = locate_arc_zeros(20);
  REQUIRE(r20.size() == 4);
  CHECK(r20.front().order == 2);
  CHECK(r20.back().order == 2);

  for (int k = 4; k <= 40; k += 2) {
    CAPTURE(k);
    auto recs = locate_arc_zeros(k);
    int inner = 0;
    for (size_t i = 0; i < recs.size(); ++i) {
      if (!recs[i].endpoint) ++inner;
      CHECK(recs[i].f_residual <= 1e-12L);
      if (i) CHECK(recs[i].theta > recs[i - 1].theta);
    }
    CHECK(inner == expected_interior_arc_zeros(k));
    CHECK(arc_sign_pattern_ok(k, recs));
  }
}

TEST_CASE("arc zeros are zeros of E_k on the circle") {
  for (const auto& r : locate_arc_zeros(24)) {
    EvalResult e = eval_Ek(24, HalfPlanePoint(std::cos(r.theta), std::sin(r.theta)), EvalBudget::fast());
    CHECK(std::abs(e.value) <= 1e-14L);
  }
}

TEST_CASE("arc sign pattern rejects a flipped record") {
  auto recs = locate_arc_zeros(18);
  recs[1].g_sign = -recs[1].g_sign;
  CHECK_FALSE(arc_sign_pattern_ok(18, recs));
}

TEST_CASE("E2 zero on the imaginary axis") {
  CriticalPointRecord r = e2_line_zero(0.4L, 0.7L);
  CHECK(std::fabs(r.location.im() - 0.5235217000179992668005L) < 1e-16L);
  CHECK(r.simplicity_margin > 0);
  CHECK(r.simple);
  CHECK_THROWS_AS(e2_line_zero(2, 3), DomainError);
}

TEST_CASE("JSON records") {
  LineZeros z = locate_line_zeros(12);
  nlohmann::json j = to_json(z.zeros[0]);
  CHECK(j["kind"] == "line");
  CHECK(j["k"] == 12);
  CHECK(j["bracket"].size() == 2);
  nlohmann::json a = to_json(locate_arc_zeros(16).front());
  CHECK(a["kind"] == "endpoint");
  CHECK(a.contains("theta"));
}
