#include <cmath>

#include "eiscrit/numkernel.hpp"
#include "eiscrit/precision.hpp"

namespace eiscrit {

HalfPlanePoint::HalfPlanePoint(Real re, Real im) : re_(re), im_(im) {
  if (!(im > 0) || !std::isfinite(im) || !std::isfinite(re)) throw DomainError("HalfPlanePoint: im must be > 0");
}

void EvalBudget::validate() const {
  if (!(target_abs_error > 0)) throw DomainError("EvalBudget: target_abs_error must be > 0");
  if (max_terms < 1) throw DomainError("EvalBudget: max_terms must be >= 1");
  if (working_precision_bits < 2) throw DomainError("EvalBudget: working_precision_bits must be positive");
  if (target_rel_error < 0) throw DomainError("EvalBudget: target_rel_error must be >= 0");
}

Real EvalBudget::target_for(Real magnitude) const { return std::max(target_abs_error, target_rel_error * magnitude); }

namespace {

template <class T>
Cx<T> point(const HalfPlanePoint& z) { return {T(z.re()), T(z.im())}; }

template <class T>
std::vector<EvalResult> jet_results(const Jet<T>& j) {
  std::vector<EvalResult> out(j.v.size());
  for (size_t r = 0; r < j.v.size(); ++r) {
    out[r].value = to_std(j.v[r]);
    out[r].tail_bound = j.tail[r];
    out[r].rounding_bound = j.rounding[r];
    out[r].terms_used = j.terms;
  }
  return out;
}

template <class T>
std::vector<EvalResult> lattice_result(const LatticeSum<T>& s) {
  EvalResult e;
  e.value = to_std(s.value);
  e.tail_bound = s.tail;
  e.rounding_bound = s.rounding;
  e.terms_used = s.terms;
  return {e};
}

}  // namespace

std::vector<EvalResult> eval_Ek_jet(int k, const HalfPlanePoint& z, int rmax, const EvalBudget& b) {
  if (k < 2 || k % 2) throw DomainError("eval_Ek: k must be even and >= 2");
  if (rmax < 0) throw DomainError("eval_Ek_jet: rmax must be >= 0");
  return with_precision(b, [&]<class T>() {
    return jet_results(eisenstein_jet<T>(k, point<T>(z), rmax, b.target_abs_error, b.target_rel_error, b.max_terms));
  });
}

EvalResult eval_Ek(int k, const HalfPlanePoint& z, const EvalBudget& b) { return eval_Ek_jet(k, z, 0, b)[0]; }

EvalResult eval_Ek_deriv(int k, const HalfPlanePoint& z, int r, const EvalBudget& b) {
  if (r < 1) throw DomainError("eval_Ek_deriv: derivative order must be >= 1");
  return eval_Ek_jet(k, z, r, b)[r];
}

EvalResult eval_E2(const HalfPlanePoint& z, const EvalBudget& b) { return eval_Ek(2, z, b); }

EvalResult eval_hk(int k, const HalfPlanePoint& z, const EvalBudget& b) {
  if (k < 2) throw DomainError("eval_hk: k must be >= 2");
  return with_precision(b, [&]<class T>() {
    return jet_results(hk_series<T>(k, point<T>(z), b.target_abs_error, b.target_rel_error, b.max_terms));
  })[0];
}

EvalResult eval_hk_lattice(int k, const HalfPlanePoint& z, const EvalBudget& b) {
  if (k < 2) throw DomainError("eval_hk_lattice: k must be >= 2");
  return with_precision(b, [&]<class T>() {
    return lattice_result(hk_lattice<T>(k, point<T>(z), b.target_abs_error, b.target_rel_error, b.max_terms));
  })[0];
}

EvalResult eval_Gk_lattice(int k, const HalfPlanePoint& z, const EvalBudget& b) {
  if (k < 4 || k % 2) throw DomainError("eval_Gk_lattice: k must be even and >= 4");
  return with_precision(b, [&]<class T>() {
    return lattice_result(gk_lattice<T>(k, point<T>(z), b.target_abs_error, b.target_rel_error, b.max_terms));
  })[0];
}

EvalResult eval_Delta(const HalfPlanePoint& z, const EvalBudget& b) {
  return with_precision(b, [&]<class T>() {
    using std::exp;
    using std::floor;
    Cx<T> zz = point<T>(z);
    T two_pi = 2 * pi_const<T>();
    T x = zz.re - floor(zz.re);
    Cx<T> q = cis(T(two_pi * x)) * exp(T(-(two_pi * zz.im)));
    const long double aq = std::exp(-2 * pi_const<long double>() * z.im());
    Cx<T> prod(T(1)), qn = q;
    long n = 1;
    long double s = 0;
    for (;; ++n) {
      if (n > b.max_terms) throw CertificationError("eval_Delta: term budget exhausted", 0);
      prod *= Cx<T>(T(1)) - qn;
      // bound on 24 sum_{m>n} |q|^m / (1-|q|^m)
      s = 24 * std::pow(aq, static_cast<long double>(n + 1)) / ((1 - aq) * (1 - aq));
      long double mag = std::abs(to_std(prod)) * aq;
      if (std::expm1(s) * mag * 24 < b.target_for(mag) / 4 || mag == 0) break;
      qn *= q;
    }
    prod = powi(prod, 24) * q;
    EvalResult e;
    e.value = to_std(prod);
    e.tail_bound = std::abs(e.value) * std::expm1(s) * 2;
    e.rounding_bound = std::abs(e.value) * unit_roundoff<T>() * (8 * n + 64);
    e.terms_used = n;
    return std::vector<EvalResult>{e};
  })[0];
}

ArcPair eval_fk_gk(int k, Real theta, const EvalBudget& b) {
  if (k < 4 || k % 2) throw DomainError("eval_fk_gk: k must be even and >= 4");
  if (!(theta > 0 && theta < pi_const<Real>())) throw DomainError("eval_fk_gk: theta must lie in ]0, pi[");
  auto res = with_precision(b, [&]<class T>() {
    T th(theta);
    Cx<T> z = cis(th);
    Jet<T> j = eisenstein_jet<T>(k, z, 1, b.target_abs_error, b.target_rel_error, b.max_terms);
    Cx<T> f = j.v[0] * cis(T(th * T(k) / T(2)));
    // g = i e^{(k+2) i theta / 2} E'
    Cx<T> g = j.v[1] * cis(T(th * T(k + 2) / T(2)));
    g = Cx<T>(-g.im, g.re);
    std::vector<EvalResult> out(2);
    out[0].value = to_std(f);
    out[0].tail_bound = j.tail[0];
    long double u = unit_roundoff<T>();
    // includes the error of placing e^{i theta} itself
    out[0].rounding_bound = j.rounding[0] + 8 * u * (std::abs(to_std(j.v[1])) + k * std::abs(to_std(f)) + 1);
    out[1].value = to_std(g);
    out[1].tail_bound = j.tail[1];
    out[1].rounding_bound = j.rounding[1] + 8 * u * (std::abs(to_std(j.v[1])) * (k + 2));
    out[0].terms_used = out[1].terms_used = j.terms;
    return out;
  });
  ArcPair p{res[0], res[1]};
  Real allow = 2 * p.f.error_bound();
  if (std::abs(p.f.value.imag()) > allow)
    throw ContradictionError("eval_fk_gk: imaginary part of f_k exceeds the certified bound");
  p.f.value = Complex(p.f.value.real(), 0);
  return p;
}

}  // namespace eiscrit
