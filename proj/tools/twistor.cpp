// twistor: verification suites, fiber-map profiles and completeness verdicts.
// Exit status: 0 pass, 1 failed checks or numeric failure, 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tw/fibermap.hpp"
#include "tw/report.hpp"

namespace {

using nlohmann::json;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::string default_report_path() {
  if (const char* dir = std::getenv("TWISTOR_REPORT_DIR"); dir && *dir)
    return (std::filesystem::path(dir) / "report.json").string();
  return {};
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw tw::UsageError("cannot open '" + path + "' for writing");
  out << text;
}

tw::SuiteConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw tw::UsageError("cannot read config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw tw::ConfigurationError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return tw::SuiteConfig::from_json(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twistor-space verification suites"};
  app.require_subcommand(1);

  std::string config_path, metric, suite, tier, report_path;
  int points = -1;
  std::uint64_t seed = 0;
  auto* verify = app.add_subcommand("verify", "run a verification suite and write a JSON report");
  verify->add_option("--config", config_path, "JSON config file")->required();
  auto* o_metric = verify->add_option("--metric", metric, "fixture name");
  auto* o_suite = verify->add_option("--suite", suite, "suite name");
  auto* o_points = verify->add_option("--points", points, "sample points per suite");
  auto* o_seed = verify->add_option("--seed", seed, "sampling seed");
  auto* o_tier = verify->add_option("--tol-tier", tier, "strict or loose");
  verify->add_option("--report", report_path, "report path ('-' for stdout)");

  std::string profile = "cylinder", branch = "quadrature", csv_path;
  double c = 0.0;
  int sign = 1, samples = 100;
  auto* solve = app.add_subcommand("solve-map", "tabulate phi(z) and its conformality");
  solve->add_option("--profile", profile, "sphere, cylinder, wide_cylinder or cosh");
  solve->add_option("--branch", branch, "paper_closed_form, alternate_closed_form or quadrature");
  solve->add_option("--c", c, "integration constant");
  solve->add_option("--sign", sign, "+1 or -1");
  solve->add_option("--samples", samples, "grid size");
  solve->add_option("--csv", csv_path, "output CSV ('-' for stdout)")->required();

  std::string family = "power_pole", expr;
  double p = 0.0;
  auto* classify = app.add_subcommand("classify-completeness", "completeness of Omega_h");
  classify->add_option("--family", family, "power_pole");
  auto* o_p = classify->add_option("--p", p, "power_pole exponent");
  classify->add_option("--expr", expr, "weight h(zeta) as an expression (instead of --family)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*verify) {
      tw::SuiteConfig cfg = load_config(config_path);
      if (*o_metric) cfg.metric = metric;
      if (*o_suite) cfg.suite = suite;
      if (*o_points) cfg.sample_count = points;
      if (*o_seed) cfg.seed = seed;
      if (*o_tier) cfg.tol_tier = tier;
      const auto report = tw::run_suite(cfg);
      if (report_path.empty()) report_path = default_report_path();
      write_text(report_path, report.dump());
      int failed = 0;
      for (const auto& r : report.checks)
        if (!r.pass) {
          ++failed;
          std::cerr << "FAIL " << r.check_id << ": " << r.max_residual << " vs " << r.threshold
                    << (r.note.empty() ? "" : " (" + r.note + ")") << "\n";
        }
      std::cerr << report.checks.size() - failed << "/" << report.checks.size() << " checks passed, "
                << report.skipped.size() << " skipped\n";
      return report.pass() ? 0 : kExitFail;
    }
    if (*solve) {
      const auto pr = tw::make_profile(profile);
      const auto map = tw::solve_phi(pr, c, sign, tw::parse_branch(branch));
      const auto rep = tw::conformality_check(pr, map, samples);
      std::ostringstream csv;
      csv.precision(17);
      csv << "z,phi,anisotropy\n";
      for (const auto& s : rep.samples) {
        if (s.skipped) continue;
        csv << s.z << "," << s.phi << "," << s.anisotropy << "\n";
      }
      write_text(csv_path, csv.str());
      std::cerr << "max anisotropy " << rep.max_anisotropy << ", "
                << (rep.orientation_preserving ? "orientation preserving" : "orientation reversing")
                << (rep.degenerate_constant ? ", degenerate constant map" : "") << ", "
                << rep.points_skipped << " points skipped\n";
      return 0;
    }
    if (*classify) {
      tw::CompletenessResult r;
      json out;
      if (!expr.empty()) {
        r = tw::completeness_expression(tw::Expression::parse(expr));
        out["h"] = expr;
      } else {
        if (family != "power_pole") throw tw::UsageError("unknown family '" + family + "'");
        if (!*o_p) throw tw::UsageError("--p is required for the power_pole family");
        r = tw::completeness_power_pole(p);
        out["family"] = family;
        out["p"] = p;
      }
      out["verdict"] = tw::completeness_name(r.verdict);
      out["exponent_north"] = r.exponent_north;
      out["exponent_south"] = r.exponent_south;
      out["truncated_north"] = r.truncated_north;
      out["truncated_south"] = r.truncated_south;
      out["method"] = r.method;
      std::cout << out.dump(2) << "\n";
      return 0;
    }
  } catch (const tw::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const tw::ConfigurationError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const tw::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const tw::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return 0;
}
