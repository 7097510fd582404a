#pragma once
// Sweeps, reports and data export behind the eiscrit command-line tool.

#include <json.hpp>

#include <string>
#include <vector>

#include "eiscrit/numkernel.hpp"
#include "eiscrit/phimap.hpp"

namespace eiscrit::cli {

// Inclusive range of even weights, written "k" or "a..b".
struct KRange {
  int lo = 4, hi = 4;
  // DomainError on odd bounds, lo > hi, or lo < min_k.
  static KRange parse(const std::string& s, int min_k = 4);
  std::vector<int> values() const;
};

enum class Format { Json, Csv };
Format parse_format(const std::string& s);

struct RunConfig {
  KRange k;
  int precision_bits = 128;
  Real tol = 1e-9L;
  Format format = Format::Json;
  std::string output_path;  // report file for verify, directory for export
  int parallelism = 1;

  void validate(int min_k = 4) const;
};

struct ReportRow {
  std::string check;
  int k = 0;
  std::string expected, observed;
  bool pass = false;
};

bool all_pass(const std::vector<ReportRow>& rows);
// Sorted by (k, check).
void sort_rows(std::vector<ReportRow>& rows);
std::string report_text(const std::vector<ReportRow>& rows);  // "check: expected E observed O PASS", prefixed by k
std::string report_json(const std::vector<ReportRow>& rows);
std::string report_csv(const std::vector<ReportRow>& rows);

// Every check for one weight; exceptions become FAIL rows.
std::vector<ReportRow> verify_weight(int k, const RunConfig& cfg);
// All weights of cfg.k, cfg.parallelism at a time.
std::vector<ReportRow> cmd_verify(const RunConfig& cfg);

struct LocusReport {
  int curves = 0, expected = 0;
  bool endpoints = false;   // start on the arc, end at the right pole or at the cusp
  bool monotone = false;    // |phi_k| increasing, >= 1
  Real max_angle_deg = 0;   // worst deviation from orthogonality at both ends
  bool asymptote = false;   // |exit_re - 1/4| < 0.02 at the cutoff
  Real separation = 0;
};
LocusReport check_locus(int k);

enum class ExportKind { LineZeros, ArcZeros, GkCurve, Locus, Trajectory, Vk, Wk };
ExportKind parse_export_kind(const std::string& s);
std::string export_name(ExportKind kind);
// Writes <kind>_k<k>[_j<j>[_mirror]].<ext> under cfg.output_path (default "."); returns the paths in order.
std::vector<std::string> cmd_export(ExportKind kind, const RunConfig& cfg);

// Solutions of phi_k = lambda for each k, plus one count row per k.
struct PhiSolveResult {
  std::vector<ReportRow> rows;
  nlohmann::json solutions;  // [{k, points: [[re, im], ...], winding, on_arc}]
  std::string csv;           // k,re,im
};
PhiSolveResult cmd_phi_solve(const RunConfig& cfg, const RationalNumber& lambda);

struct GammaCountResult {
  std::vector<ReportRow> rows;
  nlohmann::json zeros;  // [{k, tau, image, residual, margin, simple}]
  std::string csv;
};
GammaCountResult cmd_gamma_count(const RunConfig& cfg, const UnimodularMatrix& g);

}  // namespace eiscrit::cli
