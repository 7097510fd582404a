#include "eiscrit/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>
#include <tuple>

#include "eiscrit/critzeros.hpp"
#include "eiscrit/quasimod.hpp"
#include "eiscrit/winding.hpp"

namespace eiscrit::cli {

namespace {

const Real kPi = 3.141592653589793238462643383279502884L;
const Real kS3 = 0.866025403784438646763723170752936183L;

std::string num(Real x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12Lg", x);
  return buf;
}

std::string sci(Real x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3Le", x);
  return buf;
}

std::string yes(bool b) { return b ? "true" : "false"; }

const RationalNumber& lambda_at(size_t i) {
  static const std::vector<RationalNumber> lams{{0},     {1, 3}, {-1, 3}, {1, 2}, {-1, 2},  {1},
                                                {-1},    {3, 2}, {-3, 2}, {7, 3}, {-7, 3}};
  return lams.at(i);
}
constexpr size_t kLambdas = 11;

class Rows {
 public:
  explicit Rows(int k) : k_(k) {}
  void add(std::string check, std::string expected, std::string observed, bool pass) {
    rows_.push_back({std::move(check), k_, std::move(expected), std::move(observed), pass});
  }
  // Runs body; an exception becomes a FAIL row named `check`.
  template <class F>
  void guard(const std::string& check, F&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      add(check, "no error", std::string("error: ") + e.what(), false);
    }
  }
  std::vector<ReportRow> take() { return std::move(rows_); }

 private:
  int k_;
  std::vector<ReportRow> rows_;
};

void line_checks(int k, const RunConfig& cfg, Rows& r) {
  r.guard("line_zero_count", [&] {
    LineZeros lz = locate_line_zeros(k);
    const size_t expect = static_cast<size_t>((k - 4) / 6);
    r.add("line_zero_count", std::to_string(expect), std::to_string(lz.zeros.size()), lz.zeros.size() == expect);

    auto br = line_brackets(bracket_table(k));
    size_t inside = 0;
    for (size_t i = 0; i < std::min(br.size(), lz.zeros.size()); ++i) {
      Real t = lz.zeros[i].location.im();
      if (t > br[i].first && t < br[i].second) ++inside;
    }
    r.add("line_zero_brackets", "one zero in each of " + std::to_string(br.size()),
          std::to_string(inside) + " of " + std::to_string(br.size()), inside == br.size() && br.size() == expect);

    // re-evaluated at the configured precision
    const EvalBudget b{cfg.precision_bits, cfg.tol * 1e-6L, 400000, 0, std::max(1024, cfg.precision_bits)};
    Real worst = 0;
    int simple = 0;
    for (const auto& z : lz.zeros) {
      EvalResult e = eval_Ek_deriv(k, z.location, 1, b);
      worst = std::max(worst, std::abs(e.value) + e.error_bound());
      simple += z.simple;
    }
    r.add("line_zero_residual", "<= " + sci(cfg.tol), sci(worst), worst <= cfg.tol);
    r.add("line_zero_simple", std::to_string(lz.zeros.size()), std::to_string(simple),
          simple == static_cast<int>(lz.zeros.size()));

    const bool want = k % 6 == 2;
    r.add("endpoint_zero", want ? "zero" : "nonzero", lz.endpoint_is_zero ? "zero" : "nonzero",
          want == lz.endpoint_is_zero && (!want || lz.endpoint.simple));
  });

  r.guard("prop1_sign", [&] {
    std::string expect, seen;
    for (int m = 1; m <= (k + 1) / 6; ++m) {
      expect += m % 2 ? '-' : '+';
      try {
        seen += proposition1_sign(k, m).sign > 0 ? '+' : '-';
      } catch (const ContradictionError&) {
        seen += '?';
      }
    }
    r.add("prop1_sign", expect, seen, expect == seen);
  });
}

void arc_checks(int k, Rows& r) {
  r.guard("arc_zero_count", [&] {
    std::vector<ArcZeroRecord> recs = locate_arc_zeros(k);
    const int interior = static_cast<int>(std::count_if(recs.begin(), recs.end(), [](const auto& a) { return !a.endpoint; }));
    const int expect = k % 6 == 4 ? (k - 4) / 6 : k % 6 == 0 ? k / 6 : (k - 8) / 6;
    r.add("arc_zero_count", std::to_string(expect), std::to_string(interior), interior == expect);
    const bool ok = arc_sign_pattern_ok(k, recs);
    r.add("arc_sign_pattern", "true", yes(ok), ok);
  });
}

void winding_checks(int k, Rows& r) {
  r.guard("winding_A", [&] {
    Real A = compute_A(k).value, B = compute_B(k).value;
    r.add("winding_A", num(expected_A(k)), num(A), std::fabs(A - expected_A(k)) < 1e-6L);
    r.add("winding_B", num(expected_B(k)), num(B), std::fabs(B - expected_B(k)) < 1e-6L);
    Real gap = A - (-(k + 2) * kPi / 6 + B);
    r.add("winding_identity", "0", sci(gap), std::fabs(gap) < 2e-6L);
  });
  r.guard("contour_count_I", [&] {
    ContourCount a = contour_count_I(k);
    ContourOptions o;
    o.eps = a.eps / 3;
    ContourCount b = contour_count_I(k, o);
    const Real expect = (k - 4) / 6;
    r.add("contour_count_I", num(expect) + " at two eps", num(a.I) + " / " + num(b.I),
          std::fabs(a.I - expect) < 1e-6L && std::fabs(b.I - expect) < 1e-6L);
  });
}

void phi_checks(int k, const RunConfig& cfg, Rows& r) {
  r.guard("pole_interleaving", [&] {
    PoleTable t = pole_table(k);
    const size_t n = static_cast<size_t>((k - 4) / 6);
    r.add("pole_interleaving", std::to_string(n) + " interleaved",
          std::to_string(t.b_values.size()) + (t.interleaved() ? " interleaved" : " not interleaved"),
          t.b_values.size() == n && t.interleaved());
    Real worst = 0;
    for (Real x : t.ff_residuals) worst = std::max(worst, x);
    r.add("ff_residual", "<= 1e-9", sci(worst), worst <= 1e-9L);
  });
  r.guard("ff_polynomial_x_free", [&] {
    IsobaricPoly F = build_Ff(eisenstein_poly(k));
    r.add("ff_polynomial_x_free", "true", yes(!F.contains_X()), !F.contains_X() && F.weight() == 2 * k + 4);
  });
  r.guard("v_laws", [&] {
    VChecks v = check_v_laws(k);
    r.add("v_base", "sign law", num(v.at_base), v.base_ok);
    r.add("v_limits", "true", yes(v.limits_ok), v.limits_ok);
    r.add("v_bands", "true", yes(v.bands_ok), v.bands_ok);
    r.add("v_infinity", "true", yes(v.infinity_ok), v.infinity_ok);
  });
  r.guard("w_laws", [&] {
    WChecks w = check_w_laws(k, 4 * k);
    r.add("w_end", num(wk_end(k)), num(w.end), std::fabs(w.end - wk_end(k)) < 1e-9L);
    r.add("w_mid", num(wk_mid(k)), num(w.mid), std::fabs(w.mid - wk_mid(k)) < 1e-9L);
    r.add("w_monotone", "true", yes(w.monotone), w.monotone);
    r.add("w_symmetry", "<= 1e-9", sci(w.symmetric_spread), w.symmetric_spread < 1e-9L);
  });
  for (size_t i = 0; i < kLambdas; ++i) {
    const RationalNumber& lam = lambda_at(i);
    const std::string name = "phi_count[" + lam.str() + "]";
    r.guard(name, [&] {
      PhiSolutions s = solve_phi_eq(k, lam);
      const bool big = std::fabs(lam.to_ld()) >= 1, unit = std::fabs(lam.to_ld()) == 1;
      const size_t expect = big ? static_cast<size_t>((k + 2) / 6) : 0;
      bool ok = s.points.size() == expect && std::fabs(s.winding - static_cast<Real>(s.points.size())) < 1e-6L;
      for (Complex z : s.points) {
        Real m = std::abs(z);
        ok = ok && (unit ? std::fabs(m - 1) < 1e-12L : m > 1) && std::fabs(z.real()) < 0.5L;
      }
      r.add(name, std::to_string(expect) + (unit ? " on the arc" : ""),
            std::to_string(s.points.size()) + ", winding " + num(s.winding), ok);
    });
  }
  r.guard("locus", [&] {
    LocusReport L = check_locus(k);
    r.add("locus_curves", std::to_string(L.expected), std::to_string(L.curves), L.curves == L.expected);
    r.add("locus_endpoints", "true", yes(L.endpoints), L.endpoints);
    r.add("locus_monotone", "true", yes(L.monotone), L.monotone);
    r.add("locus_orthogonality", "<= 2 deg", num(L.max_angle_deg), L.max_angle_deg <= 2);
    r.add("locus_asymptote", "|Re - 1/4| < 0.02", yes(L.asymptote), L.asymptote);
    r.add("locus_disjoint", "> 0", sci(L.separation), L.separation > 0);
  });
  // one matrix from each of |d| < |c|, |d| = |c|, |d| > |c|
  for (const UnimodularMatrix& g : {UnimodularMatrix(0, -1, 1, 0), UnimodularMatrix(1, 0, 1, 1), UnimodularMatrix(1, 1, 1, 2)}) {
    const std::string name = "gamma_transport[" + g.str() + "]";
    r.guard(name, [&] {
      std::vector<TransportedZero> zs = zeros_in_gamma_D(k, g, cfg.tol);
      const size_t expect = std::labs(g.d) >= std::labs(g.c) ? static_cast<size_t>((k + 2) / 6) : 0;
      Real worst = 0;
      bool simple = true;
      for (const auto& z : zs) {
        worst = std::max(worst, z.residual);
        simple = simple && z.simple;
      }
      r.add(name, std::to_string(expect) + " simple, residual <= " + sci(cfg.tol),
            std::to_string(zs.size()) + (simple ? " simple" : " not all simple") + ", residual " + sci(worst),
            zs.size() == expect && simple && worst <= cfg.tol);
    });
  }
  r.guard("total_line_count", [&] {
    LineCount c = total_line_count(k);
    const int expect = 1 + 2 * ((k - 2) / 6);
    r.add("total_line_count", std::to_string(expect), std::to_string(c.total()), c.total() == expect);
  });
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  return f;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f = open_out(path);
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string fixed(Real x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15Lf", x);
  return buf;
}

std::string expo(Real x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15Le", x);
  return buf;
}

nlohmann::json pair(Complex z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

}  // namespace

KRange KRange::parse(const std::string& s, int min_k) {
  auto whole = [&](const std::string& t) {
    size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(t, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != t.size()) throw DomainError("weight range: '" + s + "' is not an integer or a..b");
    return v;
  };
  KRange r;
  size_t dots = s.find("..");
  if (dots == std::string::npos) {
    r.lo = r.hi = whole(s);
  } else {
    r.lo = whole(s.substr(0, dots));
    r.hi = whole(s.substr(dots + 2));
  }
  if (r.lo % 2 || r.hi % 2) throw DomainError("weight range: k must be even, got '" + s + "'");
  if (r.lo < min_k) throw DomainError("weight range: k must be >= " + std::to_string(min_k) + ", got '" + s + "'");
  if (r.lo > r.hi) throw DomainError("weight range: empty range '" + s + "'");
  return r;
}

std::vector<int> KRange::values() const {
  std::vector<int> v;
  for (int k = lo; k <= hi; k += 2) v.push_back(k);
  return v;
}

Format parse_format(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  throw DomainError("format must be json or csv, got '" + s + "'");
}

void RunConfig::validate(int min_k) const {
  if (k.lo % 2 || k.hi % 2 || k.lo < min_k || k.lo > k.hi) throw DomainError("RunConfig: bad weight range");
  if (precision_bits < 64 || precision_bits > 4096) throw DomainError("RunConfig: precision_bits must be in [64, 4096]");
  if (!(tol > 0)) throw DomainError("RunConfig: tol must be positive");
  if (parallelism < 1) throw DomainError("RunConfig: parallelism must be >= 1");
}

bool all_pass(const std::vector<ReportRow>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

void sort_rows(std::vector<ReportRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ReportRow& a, const ReportRow& b) { return std::tie(a.k, a.check) < std::tie(b.k, b.check); });
}

std::string report_text(const std::vector<ReportRow>& rows) {
  std::string s;
  for (const auto& r : rows)
    s += "k=" + std::to_string(r.k) + " " + r.check + ": expected " + r.expected + " observed " + r.observed +
         (r.pass ? " PASS\n" : " FAIL\n");
  return s;
}

std::string report_json(const std::vector<ReportRow>& rows) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& r : rows)
    a.push_back({{"check", r.check}, {"k", r.k}, {"expected", r.expected}, {"observed", r.observed},
                 {"status", r.pass ? "PASS" : "FAIL"}});
  return a.dump(2) + "\n";
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  auto quote = [](const std::string& x) {
    std::string q = "\"";
    for (char c : x) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  std::string s = "check,k,expected,observed,status\n";
  for (const auto& r : rows)
    s += quote(r.check) + "," + std::to_string(r.k) + "," + quote(r.expected) + "," + quote(r.observed) + "," +
         (r.pass ? "PASS" : "FAIL") + "\n";
  return s;
}

std::vector<ReportRow> verify_weight(int k, const RunConfig& cfg) {
  Rows r(k);
  if (k == 2) {
    r.guard("e2_zero", [&] {
      CriticalPointRecord z = e2_line_zero(0.4L, 0.7L);
      r.add("e2_zero", "simple zero on the imaginary axis", "t = " + num(z.location.im()) + (z.simple ? ", simple" : ""),
            z.simple && z.simplicity_margin > 0);
    });
    return r.take();
  }
  line_checks(k, cfg, r);
  arc_checks(k, r);
  winding_checks(k, r);
  phi_checks(k, cfg, r);
  return r.take();
}

std::vector<ReportRow> cmd_verify(const RunConfig& cfg) {
  cfg.validate(2);
  const std::vector<int> ks = cfg.k.values();
  std::vector<std::vector<ReportRow>> per(ks.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i; (i = next++) < ks.size();) per[i] = verify_weight(ks[i], cfg);
  };
  const size_t n = std::min<size_t>(static_cast<size_t>(cfg.parallelism), ks.size());
  std::vector<std::thread> pool;
  for (size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::vector<ReportRow> rows;
  for (auto& p : per) rows.insert(rows.end(), p.begin(), p.end());
  sort_rows(rows);
  return rows;
}

LocusReport check_locus(int k) {
  LocusReport L;
  std::vector<LocusCurve> curves = trace_locus(k);
  PoleTable tab = pole_table(k);
  L.expected = (k + 2) / 6;
  L.curves = static_cast<int>(curves.size());
  L.endpoints = L.monotone = true;
  for (const LocusCurve& c : curves) {
    L.endpoints = L.endpoints && !c.phi_values.empty() && std::fabs(std::abs(c.start()) - 1) < 1e-12L &&
                  std::fabs(std::fabs(c.phi_values.front()) - 1) < 1e-9L;
    L.max_angle_deg = std::max(L.max_angle_deg, c.start_angle_deg);
    if (c.j == 0) {
      L.endpoints = L.endpoints && c.asymptote && c.polyline.back().imag() >= 6;
      L.asymptote = c.asymptote && std::fabs(c.exit_re - 0.25L) < 0.02L;
    } else {
      const bool has = c.j - 1 < static_cast<int>(tab.b_values.size());
      L.endpoints = L.endpoints && !c.asymptote && has &&
                    std::abs(c.polyline.back() - Complex(0.5L, tab.b_values[c.j - 1])) < 1e-12L;
      L.max_angle_deg = std::max(L.max_angle_deg, c.end_angle_deg);
    }
    for (size_t i = 0; i < c.phi_values.size(); ++i) {
      L.monotone = L.monotone && std::fabs(c.phi_values[i]) >= 1 - 1e-12L;
      if (i) L.monotone = L.monotone && std::fabs(c.phi_values[i]) > std::fabs(c.phi_values[i - 1]);
    }
  }
  L.separation = locus_separation(curves);
  return L;
}

ExportKind parse_export_kind(const std::string& s) {
  for (ExportKind k : {ExportKind::LineZeros, ExportKind::ArcZeros, ExportKind::GkCurve, ExportKind::Locus,
                       ExportKind::Trajectory, ExportKind::Vk, ExportKind::Wk})
    if (export_name(k) == s) return k;
  throw DomainError("unknown export kind '" + s + "'");
}

std::string export_name(ExportKind kind) {
  switch (kind) {
    case ExportKind::LineZeros: return "line-zeros";
    case ExportKind::ArcZeros: return "arc-zeros";
    case ExportKind::GkCurve: return "gk-curve";
    case ExportKind::Locus: return "locus";
    case ExportKind::Trajectory: return "trajectory";
    case ExportKind::Vk: return "vk";
    case ExportKind::Wk: return "wk";
  }
  return "";
}

std::vector<std::string> cmd_export(ExportKind kind, const RunConfig& cfg) {
  cfg.validate();
  namespace fs = std::filesystem;
  const fs::path dir = cfg.output_path.empty() ? fs::path(".") : fs::path(cfg.output_path);
  fs::create_directories(dir);
  const bool json = cfg.format == Format::Json;
  const std::string ext = json ? ".json" : ".csv";
  std::vector<std::string> written;
  auto emit = [&](const std::string& stem, const std::string& text) {
    std::string p = (dir / (stem + ext)).string();
    write_file(p, text);
    written.push_back(p);
  };

  for (int k : cfg.k.values()) {
    const std::string base = export_name(kind) + "_k" + std::to_string(k);
    switch (kind) {
      case ExportKind::LineZeros: {
        LineZeros lz = locate_line_zeros(k);
        if (json) {
          nlohmann::json a = nlohmann::json::array();
          for (const auto& z : lz.zeros) a.push_back(to_json(z));
          emit(base, a.dump(2) + "\n");
        } else {
          std::string s = "k,re,im,residual,simplicity_margin,simple\n";
          for (const auto& z : lz.zeros)
            s += std::to_string(k) + "," + fixed(z.location.re()) + "," + fixed(z.location.im()) + "," + expo(z.residual) +
                 "," + expo(z.simplicity_margin) + "," + yes(z.simple) + "\n";
          emit(base, s);
        }
        break;
      }
      case ExportKind::ArcZeros: {
        std::vector<ArcZeroRecord> recs = locate_arc_zeros(k);
        if (json) {
          nlohmann::json a = nlohmann::json::array();
          for (const auto& z : recs) a.push_back(to_json(z));
          emit(base, a.dump(2) + "\n");
        } else {
          std::string s = "k,theta,f_residual,g_value,g_sign,order,endpoint\n";
          for (const auto& z : recs)
            s += std::to_string(k) + "," + fixed(z.theta) + "," + expo(z.f_residual) + "," + expo(z.g_value) + "," +
                 std::to_string(z.g_sign) + "," + std::to_string(z.order) + "," + yes(z.endpoint) + "\n";
          emit(base, s);
        }
        break;
      }
      case ExportKind::GkCurve: {
        // g_k vanishes at the corners when k = 2 mod 6
        const Real eta = k % 6 == 2 ? 1e-3L : 0;
        ArgTrace t = arg_variation([k](Real th) { return gk_sample(k, th); }, kPi / 3 + eta, 2 * kPi / 3 - eta);
        if (json) {
          nlohmann::json a = nlohmann::json::array();
          for (size_t i = 0; i < t.values.size(); ++i)
            a.push_back({{"theta", static_cast<double>(t.parameter_samples[i])},
                         {"g", pair(t.values[i])},
                         {"arg", static_cast<double>(t.unwrapped_args[i])}});
          emit(base, nlohmann::json{{"k", k}, {"eta", static_cast<double>(eta)}, {"samples", a}}.dump(2) + "\n");
        } else {
          emit(base, to_csv(t));
        }
        break;
      }
      case ExportKind::Locus: {
        for (const LocusCurve& c : trace_locus(k)) {
          const LocusCurve m = c.mirrored();
          for (bool mirror : {false, true}) {
            const LocusCurve& cc = mirror ? m : c;
            const std::string stem = base + "_j" + std::to_string(c.j) + (mirror ? "_mirror" : "");
            if (json) {
              emit(stem, to_json(cc).dump(2) + "\n");
            } else {
              std::string s = "re,im,phi\n";
              for (size_t i = 0; i < cc.polyline.size(); ++i)
                s += fixed(cc.polyline[i].real()) + "," + fixed(cc.polyline[i].imag()) + "," +
                     (i < cc.phi_values.size() ? expo(cc.phi_values[i]) : std::string("pole")) + "\n";
              emit(stem, s);
            }
          }
        }
        break;
      }
      case ExportKind::Trajectory: {
        std::vector<TrajectoryPoint> tr = phi_trajectory(k);
        if (json) {
          nlohmann::json a = nlohmann::json::array();
          for (const auto& p : tr) a.push_back({{"z", pair(p.z)}, {"phi", pair(p.phi)}});
          emit(base, a.dump(2) + "\n");
        } else {
          std::string s = "z_re,z_im,phi_re,phi_im\n";
          for (const auto& p : tr)
            s += fixed(p.z.real()) + "," + fixed(p.z.imag()) + "," + expo(p.phi.real()) + "," + expo(p.phi.imag()) + "\n";
          emit(base, s);
        }
        break;
      }
      case ExportKind::Vk: {
        PoleTable tab = pole_table(k);
        const Real t0 = kS3, t1 = tab.b_values.empty() ? 3 : tab.b_values.front() + 1;
        const int samples = 2000;
        if (json) {
          nlohmann::json a = nlohmann::json::array();
          for (int i = 0; i <= samples; ++i) {
            Real t = i == samples ? t1 : t0 + (t1 - t0) * i / samples;
            try {
              a.push_back({static_cast<double>(t), static_cast<double>(vk(k, t))});
            } catch (const DomainError&) {
              // pole
            }
          }
          emit(base, nlohmann::json{{"k", k}, {"t_v", a}}.dump(2) + "\n");
        } else {
          emit(base, vk_csv(k, t0, t1, samples));
        }
        break;
      }
      case ExportKind::Wk: {
        WTable t = wk_table(k, 4 * k);
        if (json) {
          std::vector<double> th(t.theta.begin(), t.theta.end()), w(t.w.begin(), t.w.end());
          emit(base, nlohmann::json{{"k", k}, {"theta", th}, {"w", w}}.dump(2) + "\n");
        } else {
          emit(base, wk_csv(t));
        }
        break;
      }
    }
  }
  return written;
}

PhiSolveResult cmd_phi_solve(const RunConfig& cfg, const RationalNumber& lambda) {
  cfg.validate();
  PhiSolveResult out;
  out.solutions = nlohmann::json::array();
  out.csv = "k,re,im\n";
  const std::string name = "phi_count[" + lambda.str() + "]";
  for (int k : cfg.k.values()) {
    Rows r(k);
    r.guard(name, [&] {
      PhiSolutions s = solve_phi_eq(k, lambda);
      const size_t expect = std::fabs(lambda.to_ld()) >= 1 ? static_cast<size_t>((k + 2) / 6) : 0;
      r.add(name, std::to_string(expect), std::to_string(s.points.size()) + ", winding " + num(s.winding),
            s.points.size() == expect);
      nlohmann::json pts = nlohmann::json::array();
      for (Complex z : s.points) {
        pts.push_back(pair(z));
        out.csv += std::to_string(k) + "," + fixed(z.real()) + "," + fixed(z.imag()) + "\n";
      }
      out.solutions.push_back(
          {{"k", k}, {"points", pts}, {"winding", static_cast<double>(s.winding)}, {"on_arc", s.on_arc}});
    });
    for (auto& row : r.take()) out.rows.push_back(std::move(row));
  }
  return out;
}

GammaCountResult cmd_gamma_count(const RunConfig& cfg, const UnimodularMatrix& g) {
  cfg.validate();
  GammaCountResult out;
  out.zeros = nlohmann::json::array();
  out.csv = "k,tau_re,tau_im,image_re,image_im,residual,margin,simple\n";
  const std::string name = "gamma_count[" + g.str() + "]";
  for (int k : cfg.k.values()) {
    Rows r(k);
    r.guard(name, [&] {
      std::vector<TransportedZero> zs = zeros_in_gamma_D(k, g, cfg.tol);
      const size_t expect = std::labs(g.d) >= std::labs(g.c) ? static_cast<size_t>((k + 2) / 6) : 0;
      bool simple = true;
      for (const auto& z : zs) {
        simple = simple && z.simple;
        out.zeros.push_back({{"k", k},
                             {"tau", pair(z.tau)},
                             {"image", pair(z.image)},
                             {"residual", static_cast<double>(z.residual)},
                             {"margin", static_cast<double>(z.margin)},
                             {"simple", z.simple}});
        out.csv += std::to_string(k) + "," + fixed(z.tau.real()) + "," + fixed(z.tau.imag()) + "," +
                   fixed(z.image.real()) + "," + fixed(z.image.imag()) + "," + expo(z.residual) + "," +
                   expo(z.margin) + "," + yes(z.simple) + "\n";
      }
      r.add(name, std::to_string(expect) + " simple", std::to_string(zs.size()) + (simple ? " simple" : " not all simple"),
            zs.size() == expect && simple);
    });
    for (auto& row : r.take()) out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace eiscrit::cli
