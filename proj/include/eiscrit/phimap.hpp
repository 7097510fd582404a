#pragma once
// The map phi_k(z) = z + k E_k(z)/E_k'(z): poles, boundary functions, the equation phi_k = lambda,
// zeros of E_k' in translates gamma D, and the real locus R_k.

#include <json.hpp>

#include <string>
#include <vector>

#include "eiscrit/numkernel.hpp"

namespace eiscrit {

struct UnimodularMatrix {
  long a = 1, b = 0, c = 0, d = 1;

  UnimodularMatrix() = default;
  UnimodularMatrix(long a, long b, long c, long d);  // throws DomainError unless ad - bc = 1
  // "a,b,c,d"
  static UnimodularMatrix parse(const std::string& s);
  Complex apply(Complex z) const;
  Complex mobius(Complex w) const;  // (a w + b)/(c w + d) for any complex w
  std::string str() const;
};

struct PhiValue {
  Complex value{};      // meaningless when pole
  Real error = 0;
  bool pole = false;
  Complex reciprocal{};  // 1/(phi_k - z) = E_k'/(k E_k); finite at poles
  Complex derivative{};  // phi_k' = (k+1) - k E_k E_k''/E_k'^2
};

EvalBudget phi_budget();
// phi_k(z); ContradictionError when E_k and E_k' are both indistinguishable from 0.
PhiValue phi(int k, const HalfPlanePoint& z, const EvalBudget& budget = phi_budget());

// v_k(t) = Im phi_k(1/2 + it); DomainError at or next to a pole.
Real vk(int k, Real t);

struct WTable {
  int k = 0;
  std::vector<Real> theta;  // uniform grid on [pi/3, 2pi/3]
  std::vector<Real> w;      // continuous argument of phi_k(e^{i theta})
};

// w_k on a grid of `intervals` + 1 points, anchored at w_k(pi/3).
WTable wk_table(int k, int intervals);
Real wk_anchor(int k);     // w_k(pi/3)
Real wk_end(int k);        // w_k(2pi/3)
Real wk_mid(int k);        // w_k(pi/2)
Real wk_symmetric(int k);  // w_k(pi - theta) + w_k(theta)

struct WChecks {
  Real start = 0, end = 0, mid = 0;
  bool monotone = false;
  Real symmetric_spread = 0;  // max |w(pi - theta) + w(theta) - wk_symmetric(k)| on the grid
};
WChecks check_w_laws(int k, int intervals);

struct PoleTable {
  int k = 0;
  std::vector<Real> b_values;   // poles 1/2 + i b_m, decreasing
  std::vector<Real> c_values;   // zeros of v_k', c_1 > b_1 > c_2 > ... > c_n > b_n
  std::vector<Real> residues;   // phi_k ~ residue/(z - 1/2 - i b_m), real
  std::vector<Real> ff_residuals;  // |(2 pi i)^2 psi_F(1/2 + i c_m)| / (|F_k'(1/2 + i c_m)| c_m)
  bool interleaved() const;
};

// Computed once per k and cached.
PoleTable pole_table(int k);

struct VChecks {
  Real at_base = 0;        // v_k(sqrt3/2)
  bool base_ok = false;
  bool limits_ok = false;  // signs at b_m -+ 1e-4
  bool bands_ok = false;   // ten samples per band
  bool infinity_ok = false;  // sign for large t
};
VChecks check_v_laws(int k);

struct LocusCurve {
  int j = 0;
  Real alpha = 0;                 // u_j = e^{i alpha}
  std::vector<Complex> polyline;  // from u_j; ends at the pole (j >= 1) or above the cutoff (j = 0)
  std::vector<Real> phi_values;   // phi_k at polyline[i]; the snapped pole has no entry
  bool asymptote = false;
  Real b = 0;                     // pole height for j >= 1
  Real start_angle_deg = 0;       // deviation from orthogonality at u_j
  Real end_angle_deg = 0;         // at the pole; for j = 0, 0
  Real exit_re = 0;               // Re z at the cutoff max(6, b_1 + 1), for j = 0

  Complex start() const { return polyline.front(); }
  LocusCurve mirrored() const;  // z -> -conj(z), phi -> -phi
};

// Angles alpha_0 > ... > alpha_n in (pi/3, pi/2) with w_k(alpha_j) in pi Z.
std::vector<Real> locus_seeds(int k);
// Components of R_k in the right half of D. Cached per k.
std::vector<LocusCurve> trace_locus(int k);
// Minimum distance between polylines of distinct curves (mirrors included); 0 on an intersection.
Real locus_separation(const std::vector<LocusCurve>& curves);

struct PhiSolutions {
  std::vector<Complex> points;  // sorted by real part
  Real winding = 0;             // (1/2pi) arg variation of phi_k - lambda along the boundary
  bool on_arc = false;
};

// Solutions of phi_k(z) = lambda in D; ContradictionError if the two counting routes disagree.
PhiSolutions solve_phi_eq(int k, Real lambda);
PhiSolutions solve_phi_eq(int k, const RationalNumber& lambda);

struct TransportedZero {
  Complex tau{};    // solution of phi_k(tau) = -d/c in D
  Complex image{};  // gamma tau, a zero of E_k'
  Real residual = 0;  // bound on |E_k'(gamma tau)|
  Real margin = 0;    // |E_k''(gamma tau)|
  bool simple = false;
};

std::vector<TransportedZero> zeros_in_gamma_D(int k, const UnimodularMatrix& g, Real tol = 1e-8L);

struct LineCount {
  int upper = 0, middle = 0, endpoints = 0;
  int total() const { return upper + middle + endpoints; }
};
// Zeros of E_k' on Re z = 1/2; ContradictionError unless the total is 1 + 2 floor((k-2)/6).
LineCount total_line_count(int k);

struct TrajectoryPoint {
  Complex z, phi;
};
// phi_k along the left edge down, the arc, and the right edge up (stopping eps below the lowest pole).
std::vector<TrajectoryPoint> phi_trajectory(int k, Real eps = 1e-2L, int samples = 400);

nlohmann::json to_json(const LocusCurve& c);
std::string vk_csv(int k, Real t0, Real t1, int samples);
std::string wk_csv(const WTable& t);

}  // namespace eiscrit
