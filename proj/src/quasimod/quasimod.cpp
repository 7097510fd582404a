#include "eiscrit/quasimod.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

#include "eiscrit/precision.hpp"

namespace eiscrit {

// ---------------------------------------------------------------------------
// IsobaricPoly

IsobaricPoly::IsobaricPoly(const RationalNumber& c) {
  if (!c.is_zero()) terms_[Monomial{}] = c;
}

IsobaricPoly IsobaricPoly::monomial(int a, int b, int c, const RationalNumber& coef) {
  if (a < 0 || b < 0 || c < 0) throw DomainError("monomial: negative exponent");
  IsobaricPoly p;
  p.add_term(Monomial{a, b, c}, coef);
  return p;
}

void IsobaricPoly::add_term(const Monomial& m, const RationalNumber& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

std::optional<int> IsobaricPoly::weight() const {
  if (terms_.empty()) return 0;
  int w = terms_.begin()->first.weight();
  for (const auto& [m, c] : terms_)
    if (m.weight() != w) return std::nullopt;
  return w;
}

bool IsobaricPoly::contains_X() const {
  for (const auto& [m, c] : terms_)
    if (m.a > 0) return true;
  return false;
}

RationalNumber IsobaricPoly::coefficient(int a, int b, int c) const {
  auto it = terms_.find(Monomial{a, b, c});
  return it == terms_.end() ? RationalNumber(0) : it->second;
}

std::string IsobaricPoly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const Monomial& m = it->first;
    if (!out.empty()) out += " + ";
    out += it->second.str();
    std::string vars;
    auto var = [&vars](char v, int e) {
      if (e == 0) return;
      if (!vars.empty()) vars += ' ';
      vars += v;
      if (e > 1) vars += "^" + std::to_string(e);
    };
    var('X', m.a);
    var('Y', m.b);
    var('Z', m.c);
    if (!vars.empty()) out += " * " + vars;
  }
  return out;
}

IsobaricPoly IsobaricPoly::parse(const std::string& text) {
  IsobaricPoly p;
  std::string t = text;
  size_t pos = 0;
  auto trim = [](std::string s) {
    size_t a = s.find_first_not_of(" \t\n"), b = s.find_last_not_of(" \t\n");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  if (trim(t) == "0") return p;
  while (pos <= t.size()) {
    size_t next = t.find(" + ", pos);
    std::string term = trim(t.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
    if (term.empty()) throw DomainError("IsobaricPoly::parse: empty term");
    size_t star = term.find('*');
    RationalNumber coef = RationalNumber::parse(trim(term.substr(0, star)));
    Monomial m;
    if (star != std::string::npos) {
      std::istringstream vs(term.substr(star + 1));
      std::string f;
      while (vs >> f) {
        int e = 1;
        size_t caret = f.find('^');
        if (f.empty() || (caret != std::string::npos && caret != 1) || (caret == std::string::npos && f.size() != 1))
          throw DomainError("IsobaricPoly::parse: bad factor '" + f + "'");
        if (caret != std::string::npos) {
          try {
            e = std::stoi(f.substr(2));
          } catch (...) {
            throw DomainError("IsobaricPoly::parse: bad exponent '" + f + "'");
          }
          if (e < 0) throw DomainError("IsobaricPoly::parse: negative exponent");
        }
        switch (f[0]) {
          case 'X': m.a += e; break;
          case 'Y': m.b += e; break;
          case 'Z': m.c += e; break;
          default: throw DomainError("IsobaricPoly::parse: unknown generator '" + f + "'");
        }
      }
    }
    p.add_term(m, coef);
    if (next == std::string::npos) break;
    pos = next + 3;
  }
  return p;
}

IsobaricPoly& IsobaricPoly::operator+=(const IsobaricPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

IsobaricPoly& IsobaricPoly::operator-=(const IsobaricPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

IsobaricPoly operator*(const IsobaricPoly& l, const IsobaricPoly& r) {
  IsobaricPoly out;
  for (const auto& [ml, cl] : l.terms_)
    for (const auto& [mr, cr] : r.terms_) out.add_term(Monomial{ml.a + mr.a, ml.b + mr.b, ml.c + mr.c}, cl * cr);
  return out;
}

IsobaricPoly operator*(const RationalNumber& s, const IsobaricPoly& p) {
  IsobaricPoly out;
  for (const auto& [m, c] : p.terms_) out.add_term(m, s * c);
  return out;
}

bool operator==(const IsobaricPoly& l, const IsobaricPoly& r) {
  if (l.terms_.size() != r.terms_.size()) return false;
  auto a = l.terms_.begin();
  for (auto b = r.terms_.begin(); b != r.terms_.end(); ++a, ++b)
    if (!(a->first == b->first) || a->second != b->second) return false;
  return true;
}

IsobaricPoly pow(const IsobaricPoly& p, int e) {
  if (e < 0) throw DomainError("pow: negative exponent");
  IsobaricPoly r(RationalNumber(1)), base = p;
  while (e) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

// ---------------------------------------------------------------------------
// QExpansion

namespace {
size_t common(const QExpansion& a, const QExpansion& b) {
  return std::min(a.coefficients().size(), b.coefficients().size());
}
}  // namespace

QExpansion operator+(const QExpansion& a, const QExpansion& b) {
  std::vector<RationalNumber> c(common(a, b));
  for (size_t i = 0; i < c.size(); ++i) c[i] = a.c_[i] + b.c_[i];
  return QExpansion(std::move(c));
}

QExpansion operator-(const QExpansion& a, const QExpansion& b) {
  std::vector<RationalNumber> c(common(a, b));
  for (size_t i = 0; i < c.size(); ++i) c[i] = a.c_[i] - b.c_[i];
  return QExpansion(std::move(c));
}

QExpansion operator*(const QExpansion& a, const QExpansion& b) {
  size_t n = common(a, b);
  std::vector<mpq_class> acc(n, 0);
  for (size_t i = 0; i < n; ++i) {
    if (a.c_[i].is_zero()) continue;
    for (size_t j = 0; i + j < n; ++j) acc[i + j] += a.c_[i].get() * b.c_[j].get();
  }
  std::vector<RationalNumber> c;
  c.reserve(n);
  for (auto& v : acc) c.emplace_back(v);
  return QExpansion(std::move(c));
}

QExpansion operator*(const RationalNumber& s, const QExpansion& a) {
  std::vector<RationalNumber> c(a.c_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = s * a.c_[i];
  return QExpansion(std::move(c));
}

QExpansion QExpansion::q_derivative() const {
  std::vector<RationalNumber> c(c_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = RationalNumber(static_cast<long>(i)) * c_[i];
  return QExpansion(std::move(c));
}

std::string QExpansion::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& c : c_) j.push_back(c.str());
  return j.dump();
}

QExpansion QExpansion::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.is_array()) throw DomainError("QExpansion::from_json: expected an array");
  std::vector<RationalNumber> c;
  for (const auto& e : j) c.push_back(RationalNumber::parse(e.get<std::string>()));
  return QExpansion(std::move(c));
}

namespace {

QExpansion eisenstein_expansion(int k, int N) {
  RationalNumber m = eisenstein_multiplier(k);
  std::vector<RationalNumber> c(N + 1);
  c[0] = RationalNumber(1);
  for (int n = 1; n <= N; ++n) c[n] = m * RationalNumber(mpq_class(divisor_power_sum(n, k - 1)));
  return QExpansion(std::move(c));
}

}  // namespace

QExpansion q_expand(const IsobaricPoly& P, int N) {
  if (N < 0) throw DomainError("q_expand: N must be >= 0");
  const QExpansion gen[3] = {eisenstein_expansion(2, N), eisenstein_expansion(4, N), eisenstein_expansion(6, N)};
  std::vector<std::vector<QExpansion>> powers(3);
  auto power = [&](int g, int e) -> const QExpansion& {
    auto& v = powers[g];
    if (v.empty()) {
      std::vector<RationalNumber> one(N + 1, RationalNumber(0));
      one[0] = RationalNumber(1);
      v.emplace_back(std::move(one));
    }
    while (static_cast<int>(v.size()) <= e) v.push_back(v.back() * gen[g]);
    return v[e];
  };
  QExpansion sum(std::vector<RationalNumber>(N + 1, RationalNumber(0)));
  for (const auto& [m, c] : P.terms()) sum = sum + c * (power(0, m.a) * power(1, m.b) * power(2, m.c));
  return sum;
}

// ---------------------------------------------------------------------------
// derivations

IsobaricPoly apply_D(const IsobaricPoly& P) {
  IsobaricPoly out;
  for (const auto& [m, c] : P.terms()) {
    // D X = (X^2 - Y)/12, D Y = (XY - Z)/3, D Z = (XZ - Y^2)/2
    if (m.a) {
      out += IsobaricPoly::monomial(m.a + 1, m.b, m.c, c * RationalNumber(m.a, 12));
      out -= IsobaricPoly::monomial(m.a - 1, m.b + 1, m.c, c * RationalNumber(m.a, 12));
    }
    if (m.b) {
      out += IsobaricPoly::monomial(m.a + 1, m.b, m.c, c * RationalNumber(m.b, 3));
      out -= IsobaricPoly::monomial(m.a, m.b - 1, m.c + 1, c * RationalNumber(m.b, 3));
    }
    if (m.c) {
      out += IsobaricPoly::monomial(m.a + 1, m.b, m.c, c * RationalNumber(m.c, 2));
      out -= IsobaricPoly::monomial(m.a, m.b + 2, m.c - 1, c * RationalNumber(m.c, 2));
    }
  }
  return out;
}

IsobaricPoly apply_dE2(const IsobaricPoly& P) {
  IsobaricPoly out;
  for (const auto& [m, c] : P.terms())
    if (m.a) out += IsobaricPoly::monomial(m.a - 1, m.b, m.c, c * RationalNumber(m.a));
  return out;
}

bool check_bracket(const IsobaricPoly& P) {
  auto w = P.weight();
  if (!w) throw DomainError("check_bracket: mixed-weight polynomial");
  IsobaricPoly lhs = apply_dE2(apply_D(P)) - apply_D(apply_dE2(P));
  return lhs == RationalNumber(*w, 12) * P;
}

bool check_lemma17(const IsobaricPoly& P, int r, int j) {
  auto w = P.weight();
  if (!w) throw DomainError("check_lemma17: mixed-weight polynomial");
  if (P.contains_X() && P != IsobaricPoly::X()) throw DomainError("check_lemma17: polynomial must be X-free or X itself");
  if (r < 0 || j < 0 || j > r) throw DomainError("check_lemma17: need 0 <= j <= r");
  std::vector<IsobaricPoly> Dp{P};
  for (int i = 0; i < r; ++i) Dp.push_back(apply_D(Dp.back()));
  IsobaricPoly lhs = Dp[r];
  for (int i = 0; i < j; ++i) lhs = apply_dE2(lhs);
  RationalNumber prod(1);
  for (int i = 1; i <= j; ++i) prod *= RationalNumber(static_cast<long>(*w + r - i) * (r - i + 1), 12);
  return lhs == prod * Dp[r - j];
}

IsobaricPoly build_Ff(const IsobaricPoly& f) {
  auto w = f.weight();
  if (!w) throw DomainError("build_Ff: mixed-weight polynomial");
  if (f.contains_X()) throw DomainError("build_Ff: f must be X-free");
  IsobaricPoly df = apply_D(f);
  IsobaricPoly d2f = apply_D(df);
  return RationalNumber(*w + 1) * (df * df) - RationalNumber(*w) * (f * d2f);
}

IsobaricPoly eisenstein_poly(int k) {
  if (k < 4 || k % 2) throw DomainError("eisenstein_poly: k must be even and >= 4");
  std::vector<Monomial> basis;
  for (int c = 0; 6 * c <= k; ++c)
    if ((k - 6 * c) % 4 == 0) basis.push_back(Monomial{0, (k - 6 * c) / 4, c});
  const int m = static_cast<int>(basis.size());
  // rows: q^0..q^{m-1}; columns: basis expansions; last column: E_k
  std::vector<std::vector<mpq_class>> A(m, std::vector<mpq_class>(m + 1));
  for (int j = 0; j < m; ++j) {
    QExpansion e = q_expand(IsobaricPoly::monomial(0, basis[j].b, basis[j].c), m - 1);
    for (int i = 0; i < m; ++i) A[i][j] = e[i].get();
  }
  QExpansion ek = eisenstein_expansion(k, m - 1);
  for (int i = 0; i < m; ++i) A[i][m] = ek[i].get();
  for (int col = 0; col < m; ++col) {
    int piv = col;
    while (piv < m && A[piv][col] == 0) ++piv;
    if (piv == m) throw ContradictionError("eisenstein_poly: singular system");
    std::swap(A[piv], A[col]);
    for (int i = 0; i < m; ++i) {
      if (i == col || A[i][col] == 0) continue;
      mpq_class f = A[i][col] / A[col][col];
      for (int j = col; j <= m; ++j) A[i][j] -= f * A[col][j];
    }
  }
  IsobaricPoly p;
  for (int j = 0; j < m; ++j) {
    mpq_class v = A[j][m] / A[j][j];
    v.canonicalize();
    p += IsobaricPoly::monomial(0, basis[j].b, basis[j].c, RationalNumber(v));
  }
  return p;
}

// ---------------------------------------------------------------------------
// numeric evaluation

namespace {

template <class T>
struct PsiOut {
  Cx<T> value;
  long double err = 0, rounding = 0;
  long double scale = 0;  // sum of term sizes with each generator taken at least 1
};

template <class T>
PsiOut<T> psi_generic(const IsobaricPoly& P, const Cx<T>& z, const EvalBudget& b) {
  Cx<T> g[3];
  long double ge[3], ga[3];
  const int ks[3] = {2, 4, 6};
  int maxe[3] = {0, 0, 0};
  for (const auto& [m, c] : P.terms()) {
    maxe[0] = std::max(maxe[0], m.a);
    maxe[1] = std::max(maxe[1], m.b);
    maxe[2] = std::max(maxe[2], m.c);
  }
  for (int i = 0; i < 3; ++i) {
    if (!maxe[i]) {
      g[i] = Cx<T>(T(1));
      ge[i] = 0;
      ga[i] = 1;
      continue;
    }
    Jet<T> j = eisenstein_jet<T>(ks[i], z, 0, b.target_abs_error, b.target_rel_error, b.max_terms);
    g[i] = j.v[0];
    ge[i] = j.tail[0] + j.rounding[0];
    ga[i] = std::abs(to_std(g[i]));
  }
  std::vector<Cx<T>> pw[3];
  for (int i = 0; i < 3; ++i) {
    pw[i].push_back(Cx<T>(T(1)));
    for (int e = 1; e <= maxe[i]; ++e) pw[i].push_back(pw[i].back() * g[i]);
  }
  PsiOut<T> out;
  out.value = Cx<T>(T(0));
  const long double u = unit_roundoff<T>();
  for (const auto& [m, c] : P.terms()) {
    T ct;
    if constexpr (std::is_same_v<T, long double>) ct = c.to_ld();
    else ct = MpReal(c.get());
    out.value += pw[0][m.a] * pw[1][m.b] * pw[2][m.c] * ct;
    const int e[3] = {m.a, m.b, m.c};
    long double mag = std::fabs(c.to_ld());
    long double lsum = 0, size = std::fabs(c.to_ld());
    bool zero_base = false;
    for (int i = 0; i < 3; ++i) {
      if (!e[i]) continue;
      mag *= std::pow(ga[i], static_cast<long double>(e[i]));
      size *= std::pow(std::max(ga[i], 1.0L), static_cast<long double>(e[i]));
      if (ga[i] == 0) zero_base = true;
      else lsum += e[i] * std::log1p(ge[i] / ga[i]);
    }
    long double err;
    if (zero_base) {
      err = std::fabs(c.to_ld());
      for (int i = 0; i < 3; ++i) err *= std::pow(ga[i] + ge[i], static_cast<long double>(e[i]));
    } else {
      err = mag * std::expm1(lsum);
    }
    out.err += err;
    out.scale += size;
    out.rounding += mag * u * (2 * m.degree() + 4);
  }
  return out;
}

}  // namespace

EvalResult psi_eval(const IsobaricPoly& P, const HalfPlanePoint& z, const EvalBudget& budget) {
  return with_precision(budget, [&]<class T>() {
    PsiOut<T> o = psi_generic<T>(P, Cx<T>(T(z.re()), T(z.im())), budget);
    EvalResult r;
    r.value = to_std(o.value);
    r.tail_bound = o.err;
    r.rounding_bound = o.rounding;
    return std::vector<EvalResult>{r};
  })[0];
}

std::vector<HalfPlanePoint> multiple_zero_scan(const IsobaricPoly& P, const std::vector<HalfPlanePoint>& points,
                                               const ScanOptions& opt) {
  std::vector<HalfPlanePoint> flagged;
  if (P.is_zero()) return flagged;
  const IsobaricPoly DP = apply_D(P);
  const Real two_pi = 2 * pi_const<Real>();
  auto eval = [&](const IsobaricPoly& Q, Complex z) {
    return at_precision(opt.budget.working_precision_bits, [&]<class T>() {
      PsiOut<T> o = psi_generic<T>(Q, Cx<T>(T(z.real()), T(z.imag())), opt.budget);
      return std::pair<Complex, Real>(to_std(o.value), o.scale);
    });
  };
  for (const HalfPlanePoint& p0 : points) {
    Complex z = p0.z();
    bool ok = false;
    for (int it = 0; it < opt.max_newton; ++it) {
      auto [v, s] = eval(P, z);
      if (std::abs(v) <= opt.tol_value * s * 1e-3L) {
        ok = true;
        break;
      }
      auto [dv, ds] = eval(DP, z);
      if (dv == Complex(0)) break;
      // psi_P' = 2 pi i psi_{DP}
      Complex step = v / (Complex(0, two_pi) * dv);
      if (std::abs(step) > 0.1L) step *= 0.1L / std::abs(step);
      z -= step;
      if (z.imag() < 0.2L || std::abs(z.real()) > 2 || z.imag() > 6) break;
      if (std::abs(step) < 1e-17L * (1 + std::abs(z))) {
        ok = true;
        break;
      }
    }
    if (!ok) continue;
    auto [v, s] = eval(P, z);
    auto [dv, ds] = eval(DP, z);
    if (std::abs(v) <= opt.tol_value * s && std::abs(dv) <= opt.tol_deriv * ds) {
      bool dup = false;
      for (const auto& f : flagged)
        if (std::abs(f.z() - z) < 1e-6L) dup = true;
      if (!dup) flagged.emplace_back(z);
    }
  }
  return flagged;
}

}  // namespace eiscrit
