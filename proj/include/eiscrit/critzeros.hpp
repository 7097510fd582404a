#pragma once
// Zeros of E_k' on Re z = 1/2, zeros of E_k on the unit arc, and the sign laws behind them.

#include <json.hpp>

#include <vector>

#include "eiscrit/numkernel.hpp"

namespace eiscrit {

struct BracketTable {
  int k = 0;
  int M = 0;                     // floor(k/6)
  std::vector<Real> t_values;    // t_m = cot(m pi/(k+1))/2, decreasing
  bool includes_base_interval = false;  // (sqrt3/2, t_M) carries a zero
};

BracketTable bracket_table(int k);

// Intervals on the t-axis each holding exactly one zero of E_k'(1/2 + it), highest first.
std::vector<std::pair<Real, Real>> line_brackets(const BracketTable& tab);

enum class SignRoute { QSeries, Lattice };

struct SignCertificate {
  int k = 0, m = 0;
  Real t = 0;
  EvalResult h;  // h_k(1/2 + i t_m)
  int sign = 0;
};

// Sign of h_k(1/2 + i t_m), certified (|value| > error) and checked against (-1)^m.
SignCertificate proposition1_sign(int k, int m, SignRoute route = SignRoute::QSeries);

enum class ZeroClass { Trivial, Nontrivial };

struct CriticalPointRecord {
  int k = 0;
  HalfPlanePoint location{0, 1};
  Real bracket_lo = 0, bracket_hi = 0;
  Real residual = 0;           // |E'| at the refined point
  Real simplicity_margin = 0;  // |E''| at the refined point
  bool simple = false;         // margin > 1e3 * residual / bracket width
  ZeroClass classification = ZeroClass::Nontrivial;
};

struct LineZeros {
  std::vector<CriticalPointRecord> zeros;  // decreasing imaginary part
  bool endpoint_is_zero = false;           // 1/2 + i sqrt3/2
  CriticalPointRecord endpoint;            // residual and margin there
};

LineZeros locate_line_zeros(int k);

struct ArcZeroRecord {
  int k = 0;
  Real theta = 0;
  Real bracket_lo = 0, bracket_hi = 0;
  Real f_residual = 0;
  Real g_value = 0;  // real part of g_k(theta)
  int g_sign = 0;    // 0 at a double zero, where g vanishes
  int order = 1;
  bool endpoint = false;
};

// Zeros of f_k on [pi/3, 2pi/3] in increasing theta, endpoints included when they are zeros.
std::vector<ArcZeroRecord> locate_arc_zeros(int k);
int expected_interior_arc_zeros(int k);
// The sign law for g_k(theta_j) for the residue class of k.
bool arc_sign_pattern_ok(int k, const std::vector<ArcZeroRecord>& recs);

// Zero of t -> E_2(it) between lo and hi.
CriticalPointRecord e2_line_zero(Real lo, Real hi);

nlohmann::json to_json(const CriticalPointRecord& r, const char* kind = "line");
nlohmann::json to_json(const ArcZeroRecord& r);

}  // namespace eiscrit
