// eiscrit: verification sweeps, zero tables and curve data for critical points of Eisenstein series.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "eiscrit/cli.hpp"

using namespace eiscrit;

namespace {

constexpr int kUsage = 2;

void write_out(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f || !(f << text)) throw std::runtime_error("cannot write " + path);
}

std::string render(const std::vector<cli::ReportRow>& rows, cli::Format f) {
  return f == cli::Format::Json ? cli::report_json(rows) : cli::report_csv(rows);
}

int finish(const std::vector<cli::ReportRow>& rows) {
  std::cout << cli::report_text(rows);
  size_t failed = 0;
  for (const auto& r : rows) failed += !r.pass;
  std::cout << rows.size() << " checks, " << failed << " failed\n";
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical points of Eisenstein series E_k: verification sweeps and data export"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string k_text, format = "json", out;
  double tol = 1e-9;
  int bits = 128, jobs = 1;
  app.add_option("--k", k_text, "even weight k or inclusive range a..b")->envname("EISCRIT_K")->required();
  app.add_option("--tol", tol, "residual tolerance")->envname("EISCRIT_TOL")->check(CLI::PositiveNumber);
  app.add_option("--precision-bits", bits, "working precision for residual checks")
      ->envname("EISCRIT_PRECISION_BITS")
      ->check(CLI::Range(64, 4096));
  app.add_option("--format", format, "report / export format")
      ->envname("EISCRIT_FORMAT")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", out, "report file (verify, phi-solve, gamma-count) or output directory (export)")
      ->envname("EISCRIT_OUT");
  app.add_option("--jobs", jobs, "weights verified concurrently")->envname("EISCRIT_JOBS")->check(CLI::PositiveNumber);

  CLI::App* verify = app.add_subcommand("verify", "run every count and sign check over the weight range");

  CLI::App* exp = app.add_subcommand("export", "write plotting data files");
  std::string kind;
  exp->add_option("kind", kind, "line-zeros | arc-zeros | gk-curve | locus | trajectory | vk | wk")
      ->required()
      ->check(CLI::IsMember({"line-zeros", "arc-zeros", "gk-curve", "locus", "trajectory", "vk", "wk"}));

  CLI::App* solve = app.add_subcommand("phi-solve", "solve phi_k(z) = lambda in the fundamental domain");
  std::string lambda_text;
  solve->add_option("--lambda", lambda_text, "rational p/q")->required()->envname("EISCRIT_LAMBDA");

  CLI::App* gamma = app.add_subcommand("gamma-count", "zeros of E_k' in gamma D");
  std::string gamma_text;
  gamma->add_option("--gamma", gamma_text, "a,b,c,d with ad - bc = 1")->required()->envname("EISCRIT_GAMMA");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  cli::RunConfig cfg;
  RationalNumber lambda;
  UnimodularMatrix g;
  try {
    cfg.k = cli::KRange::parse(k_text, verify->parsed() ? 2 : 4);
    cfg.tol = tol;
    cfg.precision_bits = bits;
    cfg.format = cli::parse_format(format);
    cfg.output_path = out;
    cfg.parallelism = jobs;
    cfg.validate(verify->parsed() ? 2 : 4);
    if (solve->parsed()) lambda = RationalNumber::parse(lambda_text);
    if (gamma->parsed()) {
      g = UnimodularMatrix::parse(gamma_text);
      if (g.c == 0) throw DomainError("--gamma: c must be nonzero");
    }
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (verify->parsed()) {
      std::vector<cli::ReportRow> rows = cli::cmd_verify(cfg);
      if (!out.empty()) write_out(out, render(rows, cfg.format));
      return finish(rows);
    }
    if (exp->parsed()) {
      for (const std::string& p : cli::cmd_export(cli::parse_export_kind(kind), cfg)) std::cout << p << "\n";
      return 0;
    }
    if (solve->parsed()) {
      cli::PhiSolveResult r = cli::cmd_phi_solve(cfg, lambda);
      if (!out.empty()) write_out(out, cfg.format == cli::Format::Json ? r.solutions.dump(2) + "\n" : r.csv);
      return finish(r.rows);
    }
    cli::GammaCountResult r = cli::cmd_gamma_count(cfg, g);
    if (!out.empty()) write_out(out, cfg.format == cli::Format::Json ? r.zeros.dump(2) + "\n" : r.csv);
    return finish(r.rows);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
