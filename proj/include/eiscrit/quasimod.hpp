#pragma once
// Quasi-modular forms as isobaric polynomials in X = E2, Y = E4, Z = E6 over Q.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eiscrit/numkernel.hpp"

namespace eiscrit {

struct Monomial {
  int a = 0, b = 0, c = 0;  // X^a Y^b Z^c
  int weight() const { return 2 * a + 4 * b + 6 * c; }
  int degree() const { return a + b + c; }
  friend bool operator==(const Monomial& l, const Monomial& r) { return l.a == r.a && l.b == r.b && l.c == r.c; }
};

// graded lexicographic: total degree first, then a, b, c
struct GradedLex {
  bool operator()(const Monomial& l, const Monomial& r) const {
    if (l.degree() != r.degree()) return l.degree() < r.degree();
    if (l.a != r.a) return l.a < r.a;
    if (l.b != r.b) return l.b < r.b;
    return l.c < r.c;
  }
};

class IsobaricPoly {
 public:
  using Terms = std::map<Monomial, RationalNumber, GradedLex>;

  IsobaricPoly() = default;
  IsobaricPoly(const RationalNumber& c);  // constant
  static IsobaricPoly monomial(int a, int b, int c, const RationalNumber& coef = RationalNumber(1));
  static IsobaricPoly X() { return monomial(1, 0, 0); }
  static IsobaricPoly Y() { return monomial(0, 1, 0); }
  static IsobaricPoly Z() { return monomial(0, 0, 1); }
  // Inverse of str(): terms "c * X^a Y^b Z^c" joined by "+".
  static IsobaricPoly parse(const std::string& text);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // Common weight of all monomials; nullopt when mixed. The zero polynomial has weight 0.
  std::optional<int> weight() const;
  bool contains_X() const;
  RationalNumber coefficient(int a, int b, int c) const;
  // Highest monomial first.
  std::string str() const;

  IsobaricPoly& operator+=(const IsobaricPoly& o);
  IsobaricPoly& operator-=(const IsobaricPoly& o);
  friend IsobaricPoly operator+(IsobaricPoly l, const IsobaricPoly& r) { return l += r; }
  friend IsobaricPoly operator-(IsobaricPoly l, const IsobaricPoly& r) { return l -= r; }
  friend IsobaricPoly operator*(const IsobaricPoly& l, const IsobaricPoly& r);
  friend IsobaricPoly operator*(const RationalNumber& s, const IsobaricPoly& p);
  IsobaricPoly operator-() const { return RationalNumber(-1) * *this; }
  friend bool operator==(const IsobaricPoly& l, const IsobaricPoly& r);
  friend bool operator!=(const IsobaricPoly& l, const IsobaricPoly& r) { return !(l == r); }

 private:
  void add_term(const Monomial& m, const RationalNumber& c);
  Terms terms_;
};

IsobaricPoly pow(const IsobaricPoly& p, int e);

class QExpansion {
 public:
  QExpansion() = default;
  explicit QExpansion(std::vector<RationalNumber> coeffs) : c_(std::move(coeffs)) {}
  int truncation_order() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<RationalNumber>& coefficients() const { return c_; }
  const RationalNumber& operator[](size_t n) const { return c_.at(n); }

  friend QExpansion operator+(const QExpansion& a, const QExpansion& b);
  friend QExpansion operator-(const QExpansion& a, const QExpansion& b);
  friend QExpansion operator*(const QExpansion& a, const QExpansion& b);
  friend QExpansion operator*(const RationalNumber& s, const QExpansion& a);
  friend bool operator==(const QExpansion& a, const QExpansion& b) { return a.c_ == b.c_; }
  // q d/dq, term by term
  QExpansion q_derivative() const;
  // JSON array of "p/q" strings
  std::string to_json() const;
  static QExpansion from_json(const std::string& text);

 private:
  std::vector<RationalNumber> c_;
};

EvalResult psi_eval(const IsobaricPoly& P, const HalfPlanePoint& z, const EvalBudget& budget = {});
QExpansion q_expand(const IsobaricPoly& P, int N);
IsobaricPoly apply_D(const IsobaricPoly& P);
IsobaricPoly apply_dE2(const IsobaricPoly& P);
bool check_bracket(const IsobaricPoly& P);
bool check_lemma17(const IsobaricPoly& P, int r, int j);
// (w+1)(Df)^2 - w f D^2 f; the analytic F_f is (2 pi i)^2 times this.
IsobaricPoly build_Ff(const IsobaricPoly& f);
// E_k written in Y and Z, solved exactly from q-expansions.
IsobaricPoly eisenstein_poly(int k);

struct ScanOptions {
  Real tol_value = 1e-14L;  // relative to the size of the terms of psi_P
  Real tol_deriv = 1e-7L;   // relative, for psi_{DP}
  int max_newton = 80;
  EvalBudget budget = EvalBudget::fast();
};
std::vector<HalfPlanePoint> multiple_zero_scan(const IsobaricPoly& P, const std::vector<HalfPlanePoint>& points,
                                               const ScanOptions& opt = {});

}  // namespace eiscrit
