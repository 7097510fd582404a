#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "eiscrit/cli.hpp"

using namespace eiscrit;
using namespace eiscrit::cli;

namespace {

std::string slurp(const std::string& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("eiscrit_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("weight ranges") {
  KRange r = KRange::parse("4..10");
  CHECK(r.values() == std::vector<int>{4, 6, 8, 10});
  CHECK(KRange::parse("12").values() == std::vector<int>{12});
  CHECK(KRange::parse("2", 2).lo == 2);
  CHECK_THROWS_AS(KRange::parse("7"), DomainError);
  CHECK_THROWS_AS(KRange::parse("4..9"), DomainError);
  CHECK_THROWS_AS(KRange::parse("2"), DomainError);
  CHECK_THROWS_AS(KRange::parse("10..4"), DomainError);
  CHECK_THROWS_AS(KRange::parse("4..x"), DomainError);
  CHECK_THROWS_AS(KRange::parse(""), DomainError);
  CHECK(parse_format("csv") == Format::Csv);
  CHECK_THROWS_AS(parse_format("xml"), DomainError);
  RunConfig c;
  c.parallelism = 0;
  CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("report formats and ordering") {
  std::vector<ReportRow> rows{{"b", 6, "1", "1", true}, {"a", 6, "0", "1", false}, {"z", 4, "x,\"y\"", "x", true}};
  sort_rows(rows);
  CHECK(rows[0].k == 4);
  CHECK(rows[1].check == "a");
  CHECK_FALSE(all_pass(rows));
  CHECK(report_text(rows).find("k=6 a: expected 0 observed 1 FAIL\n") != std::string::npos);
  auto j = nlohmann::json::parse(report_json(rows));
  REQUIRE(j.size() == 3);
  CHECK(j[2] == nlohmann::json{{"check", "b"}, {"k", 6}, {"expected", "1"}, {"observed", "1"}, {"status", "PASS"}});
  std::string csv = report_csv(rows);
  CHECK(csv.rfind("check,k,expected,observed,status\n", 0) == 0);
  CHECK(csv.find("\"z\",4,\"x,\"\"y\"\"\",\"x\",PASS") != std::string::npos);
}

TEST_CASE("verify for one weight") {
  RunConfig c;
  c.k = KRange::parse("12");
  std::vector<ReportRow> rows = cmd_verify(c);
  CHECK(all_pass(rows));
  CHECK(report_text(rows).find("line_zero_count: expected 1 observed 1 PASS") != std::string::npos);
  for (size_t i = 1; i < rows.size(); ++i) CHECK(rows[i - 1].check < rows[i].check);

  std::vector<ReportRow> e2 = verify_weight(2, c);
  REQUIRE(e2.size() == 1);
  CHECK(e2[0].check == "e2_zero");
  CHECK(e2[0].pass);
}

TEST_CASE("parallel sweep matches the serial one") {
  RunConfig c;
  c.k = KRange::parse("4..14");
  std::string serial = report_json(cmd_verify(c));
  c.parallelism = 3;
  CHECK(report_json(cmd_verify(c)) == serial);
}

TEST_CASE("a failing check surfaces as a row") {
  RunConfig c;
  c.k = KRange::parse("12");
  c.tol = 1e-80L;  // no residual can meet this
  std::vector<ReportRow> rows = cmd_verify(c);
  CHECK_FALSE(all_pass(rows));
  bool residual_failed = false;
  for (const auto& r : rows)
    if (r.check == "line_zero_residual") residual_failed = !r.pass;
  CHECK(residual_failed);
}

TEST_CASE("locus report") {
  LocusReport L = check_locus(16);
  CHECK(L.curves == 3);
  CHECK(L.endpoints);
  CHECK(L.monotone);
  CHECK(L.asymptote);
  CHECK(L.max_angle_deg <= 2);
  CHECK(L.separation > 0);
}

TEST_CASE("exports are deterministic files") {
  auto dir = scratch("export");
  RunConfig c;
  c.output_path = dir.string();
  c.format = Format::Csv;
  c.k = KRange::parse("4");
  auto p = cmd_export(ExportKind::LineZeros, c);
  REQUIRE(p.size() == 1);
  CHECK(slurp(p[0]) == "k,re,im,residual,simplicity_margin,simple\n");

  c.k = KRange::parse("16");
  c.format = Format::Json;
  auto loc = cmd_export(ExportKind::Locus, c);
  REQUIRE(loc.size() == 6);
  CHECK(std::filesystem::path(loc[1]).filename() == "locus_k16_j0_mirror.json");
  auto j1 = nlohmann::json::parse(slurp(loc[2]));
  CHECK(j1["j"] == 1);
  std::string first = slurp(loc[3]);
  cmd_export(ExportKind::Locus, c);
  CHECK(slurp(loc[3]) == first);

  c.k = KRange::parse("12");
  c.format = Format::Csv;
  auto tr = cmd_export(ExportKind::Trajectory, c);
  std::string t = slurp(tr[0]);
  CHECK(t.rfind("z_re,z_im,phi_re,phi_im\n", 0) == 0);
  for (ExportKind kind : {ExportKind::ArcZeros, ExportKind::GkCurve, ExportKind::Vk, ExportKind::Wk}) {
    auto a = cmd_export(kind, c), b = a;
    std::string once = slurp(a[0]);
    cmd_export(kind, c);
    CHECK(slurp(b[0]) == once);
    CHECK(std::filesystem::path(a[0]).filename() == export_name(kind) + "_k12.csv");
  }
  CHECK(parse_export_kind("gk-curve") == ExportKind::GkCurve);
  CHECK_THROWS_AS(parse_export_kind("poles"), DomainError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("phi-solve and gamma-count") {
  RunConfig c;
  c.k = KRange::parse("16");
  PhiSolveResult s = cmd_phi_solve(c, RationalNumber(3, 2));
  REQUIRE(s.rows.size() == 1);
  CHECK(s.rows[0].pass);
  CHECK(s.solutions[0]["points"].size() == 3);
  CHECK(std::count(s.csv.begin(), s.csv.end(), '\n') == 4);

  c.k = KRange::parse("8..10");
  GammaCountResult g = cmd_gamma_count(c, UnimodularMatrix(1, 0, 1, 1));
  REQUIRE(g.rows.size() == 2);
  CHECK(all_pass(g.rows));
  CHECK(g.zeros.size() == 3);  // 1 for k = 8, 2 for k = 10
}
