// End-to-end tests for the command-line tool.  Each case shells out to the
// real binary (path in LOSSFORGE_BIN, set by CTest), feeds it CSV fixtures
// generated from the library's own samplers, and checks exit codes plus the
// JSON reports against in-process results computed from the same data.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "lossforge/data.hpp"
#include "lossforge/families.hpp"
#include "lossforge/glmga.hpp"
#include "lossforge/inference.hpp"
#include "lossforge/rng.hpp"
#include "lossforge/version.hpp"

namespace lf = lossforge;
using nlohmann::json;

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string output;
};

// Runs the tool with the given argument string and captures stdout (optionally
// with stderr folded in).  The exit code is the process's, or -1 if it died
// abnormally.
CmdResult run_cli(const std::string& args, bool merge_stderr = false) {
  const char* bin = std::getenv("LOSSFORGE_BIN");
  if (bin == nullptr) {
    throw std::runtime_error("LOSSFORGE_BIN is not set; run via ctest");
  }
  std::string cmd = std::string("'") + bin + "' " + args;
  cmd += merge_stderr ? " 2>&1" : " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("popen failed");
  std::string out;
  char buf[4096];
  std::size_t nread = 0;
  while ((nread = std::fread(buf, 1, sizeof(buf), pipe)) > 0) {
    out.append(buf, nread);
  }
  const int status = pclose(pipe);
  CmdResult r;
  r.output = std::move(out);
  if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream is(text);
  while (std::getline(is, line)) lines.push_back(line);
  return lines;
}

// Fixture CSVs live in a per-run temp directory; losses come from the
// library's own samplers so the CLI results can be cross-checked against
// in-process fits on identical data (17 digits round-trip exactly).
struct Fixtures {
  std::string dir;

  std::string glmga_csv;  // "loss", 400 draws from sigma=.3, a=1, b=1
  Eigen::VectorXd glmga_losses;

  std::string big_csv;  // same shape, rescaled so every loss exceeds 1

  std::string reg_csv;  // "loss,x,z", 300 rows, two-link truth
  Eigen::VectorXd reg_losses;
  Eigen::MatrixXd reg_covs;  // columns x, z

  std::string dup_csv;     // "loss,x,x2,z" with x2 == x
  std::string region_csv;  // "loss,region", region in {0,1}: 25 / 15 rows
  std::string mixed_csv;   // 20 good rows, bad rows at file lines 5 and 9
  std::string amount_csv;  // loss column named "amount"
  std::string flat_csv;    // 12 identical losses
  std::string trash_csv;   // 3 of 10 rows unusable (> 20%)
  std::string header_only_csv;
};

void write_loss_csv(const std::string& path, const Eigen::VectorXd& y) {
  std::ofstream f(path);
  f << "loss\n" << std::setprecision(17);
  for (Eigen::Index i = 0; i < y.size(); ++i) f << y[i] << "\n";
}

const Fixtures& fx() {
  static const Fixtures f = [] {
    Fixtures x;
    std::string tmpl =
        (std::filesystem::temp_directory_path() / "lossforge_cli_XXXXXX")
            .string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    if (mkdtemp(buf.data()) == nullptr) {
      throw std::runtime_error("mkdtemp failed");
    }
    x.dir = buf.data();

    x.glmga_losses = lf::glmga::sample(lf::GlmgaParams{0.3, 1.0, 1.0}, 400,
                                       20240819);
    x.glmga_csv = x.dir + "/glmga.csv";
    write_loss_csv(x.glmga_csv, x.glmga_losses);

    // Rescaling by c keeps the family (b -> b * c^{-1/sigma}); pushing the
    // minimum above 1 lets every comparator family, including the one whose
    // support starts at 1, produce a finite likelihood.
    const double scale = 2.0 / x.glmga_losses.minCoeff();
    x.big_csv = x.dir + "/glmga_big.csv";
    write_loss_csv(x.big_csv, (x.glmga_losses * scale).eval());

    {
      const Eigen::Index n = 300;
      lf::Rng rng(777);
      x.reg_losses.resize(n);
      x.reg_covs.resize(n, 2);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double xv = rng.normal();
        const double zv = rng.normal();
        x.reg_covs(i, 0) = xv;
        x.reg_covs(i, 1) = zv;
        const lf::GlmgaParams p{std::exp(-1.0 + 0.5 * xv), 0.5,
                                std::exp(1.0 + 0.5 * zv)};
        x.reg_losses[i] = lf::glmga::quantile(p, rng.uniform());
      }
      x.reg_csv = x.dir + "/reg.csv";
      std::ofstream fcsv(x.reg_csv);
      fcsv << "loss,x,z\n" << std::setprecision(17);
      for (Eigen::Index i = 0; i < n; ++i) {
        fcsv << x.reg_losses[i] << ',' << x.reg_covs(i, 0) << ','
             << x.reg_covs(i, 1) << "\n";
      }

      x.dup_csv = x.dir + "/reg_dup.csv";
      std::ofstream fdup(x.dup_csv);
      fdup << "loss,x,x2,z\n" << std::setprecision(17);
      for (Eigen::Index i = 0; i < 60; ++i) {
        fdup << x.reg_losses[i] << ',' << x.reg_covs(i, 0) << ','
             << x.reg_covs(i, 0) << ',' << x.reg_covs(i, 1) << "\n";
      }
    }

    {
      x.region_csv = x.dir + "/region.csv";
      std::ofstream f2(x.region_csv);
      f2 << "loss,region\n" << std::setprecision(17);
      lf::Rng rng(31);
      for (int i = 0; i < 40; ++i) {
        f2 << std::exp(rng.normal()) << ',' << (i < 25 ? 0 : 1) << "\n";
      }
    }

    {
      x.mixed_csv = x.dir + "/mixed.csv";
      std::ofstream f2(x.mixed_csv);
      f2 << "loss\n"     // line 1
            "1.2\n"      // 2
            "0.7\n"      // 3
            "2.5\n"      // 4
            "-1\n"       // 5: non-positive -> rejected
            "3.1\n"      // 6
            "1.9\n"      // 7
            "0.8\n"      // 8
            "abc\n"      // 9: unparsable -> rejected
            "0.4\n"      // 10
            "2.2\n"      // 11
            "5.5\n"      // 12
            "1.1\n"      // 13
            "0.9\n"      // 14
            "4.2\n"      // 15
            "0.6\n"      // 16
            "1.4\n"      // 17
            "2.8\n"      // 18
            "0.3\n"      // 19
            "1.7\n"      // 20
            "3.6\n"      // 21
            "2.0\n"      // 22
            "1.3\n"      // 23
            "\n";        // blank line: skipped without rejection
    }

    {
      x.amount_csv = x.dir + "/amount.csv";
      std::ofstream f2(x.amount_csv);
      f2 << "amount\n";
      for (int i = 1; i <= 30; ++i) f2 << 0.5 * i << "\n";
    }

    {
      x.flat_csv = x.dir + "/flat.csv";
      std::ofstream f2(x.flat_csv);
      f2 << "loss\n";
      for (int i = 0; i < 12; ++i) f2 << "5.0\n";
    }

    {
      x.trash_csv = x.dir + "/trash.csv";
      std::ofstream f2(x.trash_csv);
      f2 << "loss\n1.0\nbad\n2.0\nbad\n3.0\nbad\n4.0\n5.0\n6.0\n7.0\n";
    }

    {
      x.header_only_csv = x.dir + "/empty.csv";
      std::ofstream f2(x.header_only_csv);
      f2 << "loss\n";
    }

    return x;
  }();
  return f;
}

lf::LossSample glmga_sample_in_process() {
  lf::LossSample s;
  s.losses = fx().glmga_losses;
  return s;
}

}  // namespace

TEST_CASE("cli: version flag and argument errors") {
  const CmdResult ver = run_cli("--version");
  CHECK(ver.exit_code == 0);
  CHECK(ver.output.find(lf::kVersion) != std::string::npos);

  CHECK(run_cli("").exit_code == 1);            // a subcommand is required
  CHECK(run_cli("bogus").exit_code == 1);       // unknown subcommand
  CHECK(run_cli("fit --input x.csv --no-such-flag").exit_code == 1);
  CHECK(run_cli("fit").exit_code == 1);         // --input is required
  CHECK(run_cli("sample --sigma 0.3 --a 1 --b 1").exit_code == 1);  // no -n
}

TEST_CASE("cli: fit emits a full report that matches the in-process fit") {
  const std::string out = fx().dir + "/fit.json";
  const CmdResult r = run_cli("fit --input " + fx().glmga_csv +
                              " --deterministic --seed 7 --out " + out);
  CHECK(r.exit_code == 0);
  CHECK(r.output.empty());  // --out diverts the report away from stdout

  const json j = json::parse(read_file(out));
  CHECK(j["metadata"]["schema_version"] == lf::kReportSchemaVersion);
  CHECK(j["metadata"]["tool_version"] == std::string(lf::kVersion));
  CHECK(j["metadata"]["seed"] == 7);
  CHECK(!j["metadata"].contains("created"));  // deterministic: no timestamp

  CHECK(j["input"]["rows_kept"] == 400);
  CHECK(j["input"]["rows_rejected"] == 0);
  CHECK(j["input"]["rejected_lines"].empty());

  const lf::FitResult ref =
      lf::fit_univariate(lf::Family::glmga, glmga_sample_in_process());
  const json& fit = j["fit"];
  CHECK(fit["family"] == "glmga");
  CHECK(fit["model"] == "univariate");
  CHECK(fit["n_obs"] == 400);
  CHECK(fit["n_params"] == 3);
  CHECK(fit["converged"] == true);
  CHECK(fit["boundary"] == false);
  CHECK(fit["se_available"] == true);
  const char* names[] = {"sigma", "a", "b"};
  for (int i = 0; i < 3; ++i) {
    CHECK(fit["estimates"][names[i]].get<double>() ==
          doctest::Approx(ref.estimates[i]).epsilon(1e-12));
    CHECK(fit["std_errors"][names[i]].get<double>() ==
          doctest::Approx(ref.std_errors[i]).epsilon(1e-12));
  }
  CHECK(fit["log_likelihood"].get<double>() ==
        doctest::Approx(ref.log_likelihood).epsilon(1e-12));
  CHECK(fit["aic"].get<double>() == doctest::Approx(ref.aic).epsilon(1e-12));
  CHECK(fit["bic"].get<double>() == doctest::Approx(ref.bic).epsilon(1e-12));
  CHECK(fit["n_evals"].get<long>() > 0);
  CHECK(fit["n_restarts_used"].get<int>() >= 1);

  CHECK(j["residuals"]["qq_correlation"].get<double>() > 0.95);
  CHECK(j["residuals"]["n_clamped"] == 0);
}

TEST_CASE("cli: deterministic reruns are byte-identical") {
  const std::string args =
      "fit --input " + fx().glmga_csv + " --deterministic --seed 3";
  const CmdResult first = run_cli(args);
  const CmdResult second = run_cli(args);
  CHECK(first.exit_code == 0);
  CHECK(first.output == second.output);

  // --out writes exactly the bytes that would have gone to stdout.
  const std::string out = fx().dir + "/fit_bytes.json";
  CHECK(run_cli(args + " --out " + out).exit_code == 0);
  CHECK(read_file(out) == first.output);

  // Without --deterministic the metadata gains a UTC timestamp.
  const json timed =
      json::parse(run_cli("fit --input " + fx().glmga_csv).output);
  CHECK(timed["metadata"].contains("created"));
  const std::string ts = timed["metadata"]["created"].get<std::string>();
  CHECK(ts.size() == 20);
  CHECK(ts.back() == 'Z');
}

TEST_CASE("cli: fit reports rejected rows with file line numbers") {
  const CmdResult r = run_cli("fit --input " + fx().mixed_csv +
                              " --family lognormal --deterministic");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.output);
  CHECK(j["input"]["rows_kept"] == 20);
  CHECK(j["input"]["rows_rejected"] == 2);
  CHECK(j["input"]["rejected_lines"] == json::array({5, 9}));
  CHECK(j["fit"]["n_obs"] == 20);
}

TEST_CASE("cli: fit honors --loss-col") {
  const CmdResult r = run_cli("fit --input " + fx().amount_csv +
                              " --loss-col amount --family lognormal " +
                              "--deterministic");
  CHECK(r.exit_code == 0);
  CHECK(json::parse(r.output)["input"]["rows_kept"] == 30);
}

TEST_CASE("cli: ingestion and configuration failures exit 1") {
  CHECK(run_cli("fit --input " + fx().dir + "/no_such.csv").exit_code == 1);
  CHECK(run_cli("fit --input " + fx().header_only_csv).exit_code == 1);
  CHECK(run_cli("fit --input " + fx().trash_csv).exit_code == 1);
  CHECK(run_cli("fit --input " + fx().glmga_csv + " --loss-col nope")
            .exit_code == 1);
  CHECK(run_cli("fit --input " + fx().glmga_csv + " --family cauchy")
            .exit_code == 1);
  // Unwritable output path.
  CHECK(run_cli("fit --input " + fx().glmga_csv + " --out " + fx().dir +
                "/missing_dir/out.json")
            .exit_code == 1);
}

TEST_CASE("cli: a degenerate sample exits 2 with a diagnostic") {
  const CmdResult r =
      run_cli("fit --input " + fx().flat_csv, /*merge_stderr=*/true);
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("degenerate") != std::string::npos);
}

TEST_CASE("cli: regress matches the in-process two-link fit") {
  const CmdResult r =
      run_cli("regress --input " + fx().reg_csv +
              " --sigma-cols x --b-cols z --deterministic");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.output);
  const json& fit = j["fit"];
  CHECK(fit["model"] == "regression");
  CHECK(fit["family"] == "glmga");
  CHECK(fit["converged"] == true);
  CHECK(fit["n_params"] == 5);
  CHECK(fit["n_obs"] == 300);

  lf::LossSample s;
  s.losses = fx().reg_losses;
  s.covariates = fx().reg_covs;
  s.covariate_names = {"x", "z"};
  lf::RegressionSpec spec;
  spec.sigma_columns = {"x"};
  spec.b_columns = {"z"};
  const lf::FitResult ref = lf::fit_regression(spec, s);

  const char* names[] = {"sigma:(Intercept)", "sigma:x", "b:(Intercept)",
                         "b:z", "log_a"};
  for (int i = 0; i < 5; ++i) {
    REQUIRE(fit["estimates"].contains(names[i]));
    CHECK(fit["estimates"][names[i]].get<double>() ==
          doctest::Approx(ref.estimates[i]).epsilon(1e-12));
  }
  CHECK(fit["log_likelihood"].get<double>() ==
        doctest::Approx(ref.log_likelihood).epsilon(1e-12));
  CHECK(j["residuals"]["n_clamped"].is_number());
}

TEST_CASE("cli: regress failure modes") {
  // Two distinct columns with identical values: estimation fails, exit 2,
  // and the message names the problem.
  const CmdResult r = run_cli("regress --input " + fx().dup_csv +
                                  " --sigma-cols x,x2 --b-cols z",
                              /*merge_stderr=*/true);
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("rank deficient") != std::string::npos);

  // The same column listed twice in one link is a configuration error.
  CHECK(run_cli("regress --input " + fx().reg_csv + " --sigma-cols x,x")
            .exit_code == 1);
  // Unknown covariate column.
  CHECK(run_cli("regress --input " + fx().reg_csv + " --sigma-cols nope")
            .exit_code == 1);
}

TEST_CASE("cli: risk reproduces the library's quantiles and tail measures") {
  const CmdResult r = run_cli(
      "risk --sigma 0.2 --a 1.5 --b 1 --levels 0.9,0.99 "
      "--retentions 1,5 --deterministic");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.output);
  CHECK(j["family"] == "glmga");
  CHECK(j["params"]["sigma"] == 0.2);
  CHECK(j["params"]["a"] == 1.5);
  CHECK(j["params"]["b"] == 1.0);

  const lf::GlmgaParams p{0.2, 1.5, 1.0};
  REQUIRE(j["levels"].size() == 2);
  const double lv[] = {0.9, 0.99};
  for (int i = 0; i < 2; ++i) {
    const json& row = j["levels"][i];
    CHECK(row["level"] == lv[i]);
    CHECK(row["var"].get<double>() ==
          doctest::Approx(lf::glmga::quantile(p, lv[i])).epsilon(1e-12));
    CHECK(row["tvar"].get<double>() ==
          doctest::Approx(lf::glmga::tvar(p, lv[i])).epsilon(1e-12));
    CHECK(row["tvar"].get<double>() > row["var"].get<double>());
  }

  REQUIRE(j["retentions"].size() == 2);
  const double rv[] = {1.0, 5.0};
  for (int i = 0; i < 2; ++i) {
    const json& row = j["retentions"][i];
    CHECK(row["retention"] == rv[i]);
    CHECK(row["stop_loss"].get<double>() ==
          doctest::Approx(lf::glmga::stop_loss_premium(p, rv[i]))
              .epsilon(1e-12));
    CHECK(row["mean_excess"].get<double>() ==
          doctest::Approx(lf::glmga::mean_excess(p, rv[i])).epsilon(1e-12));
  }
}

TEST_CASE("cli: risk reports nonexistent tail expectations as null") {
  // sigma = 0.6 puts the mean out of existence: VaR stays finite, every
  // expectation-based measure degrades to null instead of failing the run.
  const CmdResult r = run_cli(
      "risk --sigma 0.6 --a 1 --b 1 --levels 0.95 --retentions 2 "
      "--deterministic");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.output);
  CHECK(j["levels"][0]["var"].get<double>() > 0.0);
  CHECK(j["levels"][0]["tvar"].is_null());
  CHECK(j["retentions"][0]["stop_loss"].is_null());
  CHECK(j["retentions"][0]["mean_excess"].is_null());
}

TEST_CASE("cli: risk for a comparator family emits var rows only") {
  const CmdResult r = run_cli(
      "risk --family lognormal --params 0,1 --levels 0.5 --deterministic");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.output);
  CHECK(j["family"] == "lognormal");
  REQUIRE(j["levels"].size() == 1);
  // Median of a standard lognormal is exactly 1.
  CHECK(j["levels"][0]["var"].get<double>() == doctest::Approx(1.0));
  CHECK(!j["levels"][0].contains("tvar"));
}

TEST_CASE("cli: risk misuse exits 1") {
  // Stop-loss / mean excess are defined only for the primary family.
  CHECK(run_cli("risk --family lognormal --params 0,1 --retentions 1")
            .exit_code == 1);
  // Wrong --params arity.
  CHECK(run_cli("risk --family lognormal --params 1").exit_code == 1);
  // Primary family with no parameters at all.
  CHECK(run_cli("risk --levels 0.9").exit_code == 1);
  // Unparsable level token.
  CHECK(run_cli("risk --sigma 0.2 --a 1 --b 1 --levels 0.9x").exit_code == 1);
  // risk takes no --seed (it consumes no randomness).
  CHECK(run_cli("risk --sigma 0.2 --a 1 --b 1 --seed 5").exit_code == 1);
}

TEST_CASE("cli: gof reports statistics, bootstrap p-values and seed") {
  const CmdResult r = run_cli("gof --input " + fx().glmga_csv +
                              " --bootstrap-B 19 --seed 99 --deterministic");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.output);
  CHECK(j["metadata"]["seed"] == 99);
  const json& g = j["gof"];
  for (const char* k : {"ks", "cvm", "ad"}) {
    CHECK(g["statistics"][k].get<double>() > 0.0);
    const double p = g["p_values"][k].get<double>();
    CHECK(p > 0.0);
    CHECK(p <= 1.0);
  }
  CHECK(g["bootstrap"]["requested"] == 19);
  CHECK(g["bootstrap"]["seed"] == 99);
  CHECK(g["bootstrap"]["dropped"].get<int>() >= 0);
  CHECK(g["bootstrap"]["reliable"].is_boolean());
  CHECK(g["qq_correlation"].get<double>() > 0.95);
  CHECK(g["ad_clamp_count"].get<int>() >= 0);
  CHECK(j.contains("fit"));
}

TEST_CASE("cli: gof with B=0 reports statistics but null p-values") {
  const CmdResult r = run_cli("gof --input " + fx().glmga_csv +
                              " --bootstrap-B 0 --deterministic");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.output);
  for (const char* k : {"ks", "cvm", "ad"}) {
    CHECK(j["gof"]["statistics"][k].is_number());
    CHECK(j["gof"]["p_values"][k].is_null());
  }
}

TEST_CASE("cli: gof emits heavy-tail QQ data, ungrouped and grouped") {
  // Ungrouped: one group labeled "all" covering every loss.
  const std::string qq1 = fx().dir + "/qq1.json";
  CHECK(run_cli("gof --input " + fx().glmga_csv +
                " --bootstrap-B 0 --deterministic --emit-pareto-qq " + qq1)
            .exit_code == 0);
  const json p1 = json::parse(read_file(qq1));
  CHECK(p1.contains("metadata"));
  REQUIRE(p1["pareto_qq"].size() == 1);
  const json& g = p1["pareto_qq"][0];
  CHECK(g["group"] == "all");
  REQUIRE(g["log_loss"].size() == 400);
  REQUIRE(g["neg_log_survival"].size() == 400);
  for (std::size_t i = 1; i < 400; ++i) {
    CHECK(g["log_loss"][i].get<double>() >=
          g["log_loss"][i - 1].get<double>());
  }
  CHECK(g["neg_log_survival"][0].get<double>() ==
        doctest::Approx(-std::log(1.0 - 1.0 / 401.0)).epsilon(1e-12));
  CHECK(g["neg_log_survival"][399].get<double>() ==
        doctest::Approx(std::log(401.0)).epsilon(1e-12));

  // Grouped by a covariate column with unit bin width: two bins, 25 + 15.
  const std::string qq2 = fx().dir + "/qq2.json";
  CHECK(run_cli("gof --input " + fx().region_csv +
                " --family lognormal --bootstrap-B 0 --deterministic" +
                " --emit-pareto-qq " + qq2 +
                " --pareto-bin-col region --pareto-bin-width 1.0")
            .exit_code == 0);
  const json p2 = json::parse(read_file(qq2));
  REQUIRE(p2["pareto_qq"].size() == 2);
  CHECK(p2["pareto_qq"][0]["group"] == "0");
  CHECK(p2["pareto_qq"][0]["log_loss"].size() == 25);
  CHECK(p2["pareto_qq"][1]["group"] == "1");
  CHECK(p2["pareto_qq"][1]["log_loss"].size() == 15);
}

TEST_CASE("cli: compare ranks univariate families with a VaR backtest") {
  const CmdResult r = run_cli(
      "compare --input " + fx().glmga_csv +
      " --families glmga,lognormal,gamma --levels 0.9 --deterministic");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.output);
  CHECK(j["mode"] == "univariate");
  REQUIRE(j["models"].size() == 3);
  for (const char* name : {"glmga", "lognormal", "gamma"}) {
    REQUIRE(j["models"].contains(name));
    CHECK(j["models"][name].contains("fit"));
    CHECK(j["models"][name].contains("gof"));
    // compare defaults to statistics-only (B = 0): p-values are null.
    CHECK(j["models"][name]["gof"]["p_values"]["ks"].is_null());
  }

  REQUIRE(j["rankings"].size() == 3);
  std::set<std::string> ranked_names;
  for (std::size_t i = 0; i < 3; ++i) {
    const json& row = j["rankings"][i];
    CHECK(row["aic_rank"] == static_cast<int>(i + 1));  // sorted by AIC rank
    CHECK(row["n_params"].get<int>() >= 2);
    ranked_names.insert(row["model"].get<std::string>());
  }
  CHECK(ranked_names == std::set<std::string>{"glmga", "lognormal", "gamma"});

  REQUIRE(j["var_backtest"].size() == 3);  // one level x three models
  std::set<int> ranks;
  for (const json& row : j["var_backtest"]) {
    CHECK(row["level"] == 0.9);
    CHECK(row["extrapolated"] == false);
    CHECK(row["empirical_var"].get<double>() > 0.0);
    CHECK(row["fitted_var"].get<double>() > 0.0);
    ranks.insert(row["rank"].get<int>());
  }
  CHECK(ranks == std::set<int>{1, 2, 3});
}

TEST_CASE("cli: compare defaults to the full family set") {
  const CmdResult r = run_cli("compare --input " + fx().big_csv +
                              " --deterministic");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.output);
  REQUIRE(j["models"].size() == 8);
  for (const char* name : {"glmga", "glogm", "gb2", "lomax", "loggamma",
                           "frechet", "lognormal", "gamma"}) {
    CHECK(j["models"].contains(name));
  }
  CHECK(j["rankings"].size() == 8);
}

TEST_CASE("cli: compare regression mode ranks linked fits") {
  const CmdResult r = run_cli("compare --input " + fx().reg_csv +
                              " --sigma-cols x --b-cols z --deterministic");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.output);
  CHECK(j["mode"] == "regression");
  REQUIRE(j["models"].size() == 5);
  for (const char* name : {"glmga", "glogm", "gb2", "lognormal", "gamma"}) {
    REQUIRE(j["models"].contains(name));
    CHECK(j["models"][name].contains("fit"));
    CHECK(j["models"][name].contains("residuals"));
    CHECK(!j["models"][name].contains("gof"));
    CHECK(j["models"][name]["fit"]["model"] == "regression");
  }
  CHECK(j["models"]["glmga"]["fit"]["converged"] == true);
  CHECK(j["models"]["glmga"]["fit"]["n_params"] == 5);
  CHECK(j["models"]["glmga"]["residuals"]["qq_correlation"].get<double>() >
        0.9);

  // On this fixture the four-shape comparator collapses to a parameter
  // boundary: its fit is reported (flagged) and its residual diagnostics
  // degrade to null rather than failing the whole comparison.
  CHECK(j["models"]["gb2"]["fit"]["boundary"] == true);
  CHECK(j["models"]["gb2"]["residuals"].is_null());
  for (const char* name : {"glogm", "lognormal", "gamma"}) {
    CHECK(j["models"][name]["residuals"].is_object());
  }
  CHECK(j["rankings"].size() == 5);
  CHECK(!j.contains("var_backtest"));  // needs a common univariate quantile
}

TEST_CASE("cli: simulate reports summaries and writes the CSV twin") {
  const std::string csv = fx().dir + "/sim.csv";
  const std::string args =
      "simulate --sizes 60,100 --reps 4 --seed 7 --deterministic --csv " + csv;
  const CmdResult r = run_cli(args);
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.output);

  const json& cfg = j["simulation"]["config"];
  CHECK(cfg["sample_sizes"] == json::array({60, 100}));
  CHECK(cfg["n_replications"] == 4);
  CHECK(cfg["seed"] == 7);
  CHECK(cfg["truth"]["beta"] == json::array({-1.0, 0.5}));
  CHECK(cfg["truth"]["alpha"] == json::array({1.0, 0.5}));
  CHECK(cfg["truth"]["eta"] == 0.0);

  const json& sums = j["simulation"]["summaries"];
  REQUIRE(sums.size() == 10);  // two sizes x five coefficients
  std::set<std::pair<std::string, int>> seen;
  for (const json& row : sums) {
    seen.emplace(row["parameter"].get<std::string>(), row["n"].get<int>());
    CHECK(row["n_failed"].get<int>() + row["n_boundary"].get<int>() +
              row["n_used"].get<int>() ==
          4);
    CHECK(row["truth"].is_number());
  }
  for (const char* p : {"sigma:(Intercept)", "sigma:x1", "b:(Intercept)",
                        "b:x2", "log_a"}) {
    for (int n : {60, 100}) {
      CHECK(seen.count({p, n}) == 1);
    }
  }
  CHECK(j["simulation"]["boxplots"].is_array());

  const std::vector<std::string> lines = split_lines(read_file(csv));
  REQUIRE(lines.size() == 11);
  CHECK(lines[0] ==
        "parameter,n,truth,bias,relative_bias,mse,variance_ratio,"
        "n_failed,n_boundary,n_used,n_outliers");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    CHECK(std::count(lines[i].begin(), lines[i].end(), ',') == 10);
  }

  // Same seed, same bytes.
  CHECK(run_cli(args).output == r.output);
}

TEST_CASE("cli: simulate rejects bad study shapes") {
  CHECK(run_cli("simulate --sizes 60 --reps 0").exit_code == 1);
  CHECK(run_cli("simulate --sizes 5 --reps 4").exit_code == 1);
  CHECK(run_cli("simulate --sizes 60x80 --reps 4").exit_code == 1);
}

TEST_CASE("cli: sample reproduces the library samplers byte for byte") {
  const auto parse_values = [](const CmdResult& r) {
    const std::vector<std::string> lines = split_lines(r.output);
    REQUIRE(!lines.empty());
    CHECK(lines[0] == "value");
    std::vector<double> v;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      v.push_back(std::stod(lines[i]));
    }
    return v;
  };

  const lf::GlmgaParams p{0.3, 1.0, 1.0};
  const CmdResult r =
      run_cli("sample --sigma 0.3 --a 1 --b 1 -n 6 --seed 42");
  CHECK(r.exit_code == 0);
  const std::vector<double> got = parse_values(r);
  const Eigen::VectorXd want = lf::glmga::sample(p, 6, 42);
  REQUIRE(got.size() == 6);
  for (int i = 0; i < 6; ++i) CHECK(got[i] == want[i]);  // exact round-trip

  // Determinism and seed sensitivity.
  CHECK(run_cli("sample --sigma 0.3 --a 1 --b 1 -n 6 --seed 42").output ==
        r.output);
  CHECK(run_cli("sample --sigma 0.3 --a 1 --b 1 -n 6 --seed 43").output !=
        r.output);

  // Alternative samplers draw different streams but the same law.
  for (const auto& [name, method] :
       {std::pair<const char*, lf::glmga::SampleMethod>{
            "gamma_mixture", lf::glmga::SampleMethod::gamma_mixture},
        {"half_normal", lf::glmga::SampleMethod::half_normal}}) {
    const CmdResult rm = run_cli(
        std::string("sample --sigma 0.3 --a 1 --b 1 -n 4 --seed 9 "
                    "--method ") +
        name);
    CHECK(rm.exit_code == 0);
    const std::vector<double> gm = parse_values(rm);
    const Eigen::VectorXd wm = lf::glmga::sample(p, 4, 9, method);
    REQUIRE(gm.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(gm[i] == wm[i]);
  }

  // Comparator families draw by quantile inversion of the shared stream.
  const CmdResult rl =
      run_cli("sample --family lomax --params 2,3 -n 5 --seed 1");
  CHECK(rl.exit_code == 0);
  const std::vector<double> gl = parse_values(rl);
  const lf::FamilyOps& ops = lf::family_ops(lf::Family::lomax);
  lf::Rng rng(1);
  const Eigen::Vector2d lp{2.0, 3.0};
  REQUIRE(gl.size() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(gl[i] == ops.quantile(lp, rng.uniform()));
  }
}

TEST_CASE("cli: sample edge cases") {
  // Zero draws: header only.
  const CmdResult r0 =
      run_cli("sample --sigma 0.3 --a 1 --b 1 -n 0 --seed 1");
  CHECK(r0.exit_code == 0);
  CHECK(r0.output == "value\n");

  // Negative count, unknown sampler, missing parameters: all exit 1.
  CHECK(run_cli("sample --sigma 0.3 --a 1 --b 1 -n -3 --seed 1").exit_code ==
        1);
  CHECK(run_cli("sample --sigma 0.3 --a 1 --b 1 -n 2 --method warp")
            .exit_code == 1);
  CHECK(run_cli("sample -n 2").exit_code == 1);

  // --out writes the draws to a file and keeps stdout quiet.
  const std::string out = fx().dir + "/draws.csv";
  const CmdResult rf = run_cli(
      "sample --sigma 0.3 --a 1 --b 1 -n 3 --seed 5 --out " + out);
  CHECK(rf.exit_code == 0);
  CHECK(rf.output.empty());
  CHECK(split_lines(read_file(out)).size() == 4);
}
