#pragma once
// Continuous arguments along curves and the winding quantities A, B and I.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eiscrit/numkernel.hpp"

namespace eiscrit {

class ZeroOnCurveError : public std::runtime_error {
 public:
  explicit ZeroOnCurveError(const std::string& what, Complex where) : std::runtime_error(what), where_(where) {}
  Complex where() const { return where_; }

 private:
  Complex where_;
};

struct Sample {
  Complex value;
  Real error = 0;  // certified bound on |value - exact|
};

using ParamFn = std::function<Sample(Real)>;
using PointFn = std::function<Sample(Complex)>;

struct ArgTrace {
  std::vector<Real> parameter_samples;
  std::vector<Complex> values;
  std::vector<Real> unwrapped_args;
  Real total_variation = 0;

  // Appends another trace whose first sample repeats this one's last.
  void append(const ArgTrace& next);
};

struct TraceOptions {
  int initial_samples = 32;
  Real max_step = 0.7853981633974483096L;  // refine while an argument step exceeds this (< pi/2)
  Real max_ratio = 2;                      // and while |f| changes by more than this factor
  long max_samples = 1L << 20;
};

// Argument variation of s -> f(s) on [s0, s1] (s1 < s0 runs backwards).
ArgTrace arg_variation(const ParamFn& f, Real s0, Real s1, const TraceOptions& opt = {});

struct Segment {
  enum class Kind { Vertical, Horizontal, UnitArc, Detour };
  Kind kind = Kind::Vertical;
  Complex center{};  // Vertical: x in real part; Horizontal: y in imag part; Detour: centre
  Real radius = 0;
  Real a0 = 0, a1 = 0;  // y, x, theta or detour angle range
  bool inside = false;  // Detour: bulges into the region rather than out of it

  static Segment vertical(Real x, Real y0, Real y1);
  static Segment horizontal(Real y, Real x0, Real x1);
  static Segment unit_arc(Real theta0, Real theta1);
  static Segment detour(Complex c, Real r, Real phi0, Real phi1, bool inside);

  Complex point(Real s) const;  // s in [0, 1]
  Complex start() const { return point(0); }
  Complex end() const { return point(1); }
};

struct Contour {
  std::vector<Segment> segments;
  // Throws DomainError when consecutive segments do not meet.
  void validate(Real tol = 1e-12L) const;
  bool closed(Real tol = 1e-12L) const;
};

// Traces f along the contour; segment i covers parameters [i, i+1].
ArgTrace trace_contour(const Contour& c, const PointFn& f, const TraceOptions& opt = {});

// E_k' and g_k as sample functions with certified errors.
PointFn ek_deriv_fn(int k);
Sample gk_sample(int k, Real theta);

struct EtaLimit {
  Real value = 0;
  int steps = 0;       // eta = 1e-2 * 2^-steps at acceptance; 0 when no limit was needed
  Real last_change = 0;
};

// Variation of arg E_k'(e^{i theta}) along [pi/3, 2pi/3] (eta-limit when k = 2 mod 6).
EtaLimit compute_A(int k, Real tol = 1e-7L);
// Variation of arg g_k along the same interval.
EtaLimit compute_B(int k, Real tol = 1e-7L);
Real expected_A(int k);
Real expected_B(int k);

struct ContourOptions {
  Real T = 0;                  // 0: one above the top bracket
  Real eps = 0;                // 0: half the minimum spacing of boundary zeros and corners, at most 0.05
  std::vector<Real> line_zeros;  // imaginary parts of the zeros on Re z = 1/2; empty: located
  bool zeros_given = false;
};

struct ContourCount {
  Real I = 0;
  Real T = 0, eps = 0;
  Real arc = 0, right = 0, top = 0, left = 0;  // variations, detours included with their edge
  long samples = 0;
};

// Winding number of E_k' along the boundary of D_T with eps-detours.
ContourCount contour_count_I(int k, const ContourOptions& opt = {});
Contour fundamental_contour(int k, Real T, Real eps, const std::vector<Real>& line_zeros);

// Boundary of D_T traversed counterclockwise, starting at the right end of the arc.
struct BoundaryShape {
  Real T = 2;
  Real eps = 0;                   // radius of the detours around line_points
  std::vector<Real> line_points;  // imaginary parts, detoured on both edges
  bool right_outward = true;      // right edge bulges out of D
  bool left_outward = false;
  Real corner_eps = 0;            // > 0: inside detours of this radius at both corners
  std::vector<Real> arc_points;   // angles on the open arc, detoured through |z| < 1
  Real arc_eps = 0;
};
Contour boundary_contour(const BoundaryShape& shape);
Real default_eps(const std::vector<Real>& line_zeros);

std::string to_csv(const ArgTrace& t);

}  // namespace eiscrit
