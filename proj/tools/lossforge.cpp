// Command-line front end: fit, regress, risk, gof, compare, simulate,
// sample.  All reports are JSON with a metadata header; --deterministic
// drops the timestamp so identical runs produce identical bytes.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lossforge/data.hpp"
#include "lossforge/errors.hpp"
#include "lossforge/families.hpp"
#include "lossforge/gb2.hpp"
#include "lossforge/glmga.hpp"
#include "lossforge/glogm.hpp"
#include "lossforge/gof.hpp"
#include "lossforge/inference.hpp"
#include "lossforge/report.hpp"
#include "lossforge/rng.hpp"
#include "lossforge/simlab.hpp"
#include "lossforge/version.hpp"

namespace lf = lossforge;

namespace {

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::string tok;
  std::istringstream is(csv);
  while (std::getline(is, tok, ',')) {
    const auto b = tok.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = tok.find_last_not_of(" \t");
    out.push_back(tok.substr(b, e - b + 1));
  }
  return out;
}

std::vector<double> split_doubles(const std::string& csv, const char* what) {
  std::vector<double> out;
  for (const std::string& tok : split_list(csv)) {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size() || !std::isfinite(v)) {
        throw std::invalid_argument("trailing characters");
      }
      out.push_back(v);
    } catch (...) {
      throw lf::ConfigError(std::string("bad ") + what + " value '" + tok +
                            "'");
    }
  }
  return out;
}

// Shortest round-trip decimal representation.
std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

lf::LossSample load_sample(const std::string& input,
                           const std::string& loss_col,
                           const std::vector<std::string>& covariates,
                           lf::IngestReport* ingest = nullptr) {
  return lf::ingest_csv(input, loss_col, covariates, ingest);
}

lf::ordered_json ingest_json(const lf::IngestReport& rep) {
  lf::ordered_json j;
  j["rows_kept"] = rep.n_parsed;
  j["rows_rejected"] = rep.rejected_lines.size();
  j["rejected_lines"] = rep.rejected_lines;
  return j;
}

// Per-family parameter vector from either the dedicated glmga flags or the
// generic ordered --params list.
Eigen::VectorXd parse_params(lf::Family family, const std::string& params_csv,
                             double sigma, double a, double b) {
  const lf::FamilyOps& ops = lf::family_ops(family);
  if (!params_csv.empty()) {
    const std::vector<double> vals = split_doubles(params_csv, "--params");
    if (static_cast<int>(vals.size()) != ops.n_params) {
      throw lf::ConfigError("--params needs " + std::to_string(ops.n_params) +
                            " values for " + lf::family_name(family));
    }
    Eigen::VectorXd v(ops.n_params);
    for (int i = 0; i < ops.n_params; ++i) v[i] = vals[static_cast<std::size_t>(i)];
    return v;
  }
  if (family == lf::Family::glmga) {
    if (!(sigma > 0.0) || !(a > 0.0) || !(b > 0.0)) {
      throw lf::ConfigError(
          "glmga needs --sigma, --a, --b (all positive) or --params");
    }
    return Eigen::Vector3d{sigma, a, b};
  }
  throw lf::ConfigError(std::string("family ") + lf::family_name(family) +
                        " needs --params with " +
                        std::to_string(ops.n_params) + " values");
}

struct CommonOut {
  std::string out;
  bool deterministic = false;
  std::uint64_t seed = 0;
};

// ---- subcommand bodies -----------------------------------------------------

int cmd_fit(const std::string& input, const std::string& loss_col,
            const std::string& family_name, const CommonOut& com) {
  const lf::Family family = lf::family_from_string(family_name);
  lf::IngestReport ingest;
  const lf::LossSample sample = load_sample(input, loss_col, {}, &ingest);
  const lf::FitResult fit = lf::fit_univariate(family, sample);

  lf::ordered_json j;
  j["metadata"] = lf::metadata_json(com.seed, com.deterministic);
  j["input"] = ingest_json(ingest);
  j["fit"] = lf::fit_to_json(fit);
  {
    const lf::QuantileResiduals qr = lf::quantile_residuals(fit, sample);
    j["residuals"] = {{"qq_correlation", lf::qq_correlation(qr.values)},
                      {"n_clamped", qr.n_clamped}};
  }
  lf::write_json(j, com.out);
  return fit.converged ? 0 : 2;
}

int cmd_regress(const std::string& input, const std::string& loss_col,
                const std::string& sigma_cols, const std::string& b_cols,
                bool no_sigma_intercept, bool no_b_intercept,
                const CommonOut& com) {
  lf::RegressionSpec spec;
  spec.sigma_columns = split_list(sigma_cols);
  spec.b_columns = split_list(b_cols);
  spec.sigma_intercept = !no_sigma_intercept;
  spec.b_intercept = !no_b_intercept;
  spec.validate();

  std::vector<std::string> covs;
  {
    std::set<std::string> seen;
    for (const std::string& c : spec.sigma_columns) {
      if (seen.insert(c).second) covs.push_back(c);
    }
    for (const std::string& c : spec.b_columns) {
      if (seen.insert(c).second) covs.push_back(c);
    }
  }
  lf::IngestReport ingest;
  const lf::LossSample sample = load_sample(input, loss_col, covs, &ingest);
  const lf::FitResult fit = lf::fit_regression(spec, sample);

  lf::ordered_json j;
  j["metadata"] = lf::metadata_json(com.seed, com.deterministic);
  j["input"] = ingest_json(ingest);
  j["fit"] = lf::fit_to_json(fit);
  {
    const lf::QuantileResiduals qr = lf::quantile_residuals(fit, sample);
    j["residuals"] = {{"qq_correlation", lf::qq_correlation(qr.values)},
                      {"n_clamped", qr.n_clamped}};
  }
  lf::write_json(j, com.out);
  return fit.converged ? 0 : 2;
}

int cmd_risk(const std::string& family_name, const std::string& params_csv,
             double sigma, double a, double b, const std::string& levels_csv,
             const std::string& retentions_csv, const CommonOut& com) {
  const lf::Family family = lf::family_from_string(family_name);
  const Eigen::VectorXd params =
      parse_params(family, params_csv, sigma, a, b);
  const std::vector<double> levels = split_doubles(levels_csv, "--levels");
  const std::vector<double> retentions =
      retentions_csv.empty() ? std::vector<double>{}
                             : split_doubles(retentions_csv, "--retentions");

  lf::ordered_json j;
  j["metadata"] = lf::metadata_json(com.seed, com.deterministic);
  j["family"] = lf::family_name(family);
  {
    const lf::FamilyOps& ops = lf::family_ops(family);
    lf::ordered_json pj;
    for (int i = 0; i < ops.n_params; ++i) {
      pj[ops.param_names[static_cast<std::size_t>(i)]] = params[i];
    }
    j["params"] = pj;
  }

  lf::ordered_json rows = lf::ordered_json::array();
  const lf::FamilyOps& ops = lf::family_ops(family);
  for (const double level : levels) {
    lf::ordered_json row;
    row["level"] = level;
    row["var"] = ops.quantile(params, level);
    if (family == lf::Family::glmga) {
      const lf::GlmgaParams p{params[0], params[1], params[2]};
      try {
        row["tvar"] = lf::glmga::tvar(p, level);
      } catch (const lf::NonexistenceError&) {
        row["tvar"] = nullptr;
      }
    }
    rows.push_back(std::move(row));
  }
  j["levels"] = rows;

  if (!retentions.empty()) {
    if (family != lf::Family::glmga) {
      throw lf::ConfigError(
          "--retentions (stop-loss / mean excess) requires --family glmga");
    }
    const lf::GlmgaParams p{params[0], params[1], params[2]};
    lf::ordered_json rrows = lf::ordered_json::array();
    for (const double r : retentions) {
      lf::ordered_json row;
      row["retention"] = r;
      try {
        row["stop_loss"] = lf::glmga::stop_loss_premium(p, r);
        row["mean_excess"] = lf::glmga::mean_excess(p, r);
      } catch (const lf::NonexistenceError&) {
        row["stop_loss"] = nullptr;
        row["mean_excess"] = nullptr;
      }
      rrows.push_back(std::move(row));
    }
    j["retentions"] = rrows;
  }
  lf::write_json(j, com.out);
  return 0;
}

int cmd_gof(const std::string& input, const std::string& loss_col,
            const std::string& family_name, int bootstrap_b,
            const std::string& pareto_path, const std::string& pareto_bin_col,
            double pareto_bin_width, const CommonOut& com) {
  const lf::Family family = lf::family_from_string(family_name);
  std::vector<std::string> covs;
  if (!pareto_bin_col.empty()) covs.push_back(pareto_bin_col);
  lf::IngestReport ingest;
  const lf::LossSample sample =
      load_sample(input, loss_col, covs, &ingest);
  const lf::FitResult fit = lf::fit_univariate(family, sample);
  const lf::GofReport gof =
      lf::bootstrap_gof(sample.losses, fit, bootstrap_b, com.seed);

  lf::ordered_json j;
  j["metadata"] = lf::metadata_json(com.seed, com.deterministic);
  j["input"] = ingest_json(ingest);
  j["fit"] = lf::fit_to_json(fit);
  j["gof"] = lf::gof_to_json(gof);
  lf::write_json(j, com.out);

  if (!pareto_path.empty()) {
    const Eigen::VectorXd bins =
        pareto_bin_col.empty() ? Eigen::VectorXd()
                               : sample.column(pareto_bin_col);
    const auto groups =
        lf::pareto_qq_groups(sample.losses, bins, pareto_bin_width);
    lf::ordered_json pq;
    pq["metadata"] = lf::metadata_json(com.seed, com.deterministic);
    pq["pareto_qq"] = lf::pareto_qq_to_json(groups);
    lf::write_json(pq, pareto_path);
  }
  return fit.converged ? 0 : 2;
}

int cmd_compare(const std::string& input, const std::string& loss_col,
                const std::string& families_csv, const std::string& levels_csv,
                int bootstrap_b, const std::string& sigma_cols,
                const std::string& b_cols, const std::string& covariates_csv,
                const CommonOut& com) {
  const std::vector<double> levels = split_doubles(levels_csv, "--levels");

  // Regression comparison mode: GLMGA two-link regression against the
  // single-link comparator families on the same covariates.
  if (!sigma_cols.empty() || !b_cols.empty()) {
    lf::RegressionSpec spec;
    spec.sigma_columns = split_list(sigma_cols);
    spec.b_columns = split_list(b_cols);
    spec.validate();

    std::vector<std::string> linked =
        covariates_csv.empty() ? std::vector<std::string>{}
                               : split_list(covariates_csv);
    std::vector<std::string> covs;
    {
      std::set<std::string> seen;
      for (const std::string& c : spec.sigma_columns) {
        if (seen.insert(c).second) covs.push_back(c);
      }
      for (const std::string& c : spec.b_columns) {
        if (seen.insert(c).second) covs.push_back(c);
      }
      if (linked.empty()) linked = covs;
      for (const std::string& c : linked) {
        if (seen.insert(c).second) covs.push_back(c);
      }
    }
    lf::IngestReport ingest;
    const lf::LossSample sample = load_sample(input, loss_col, covs, &ingest);

    std::vector<std::pair<std::string, lf::FitResult>> fits;
    fits.emplace_back("glmga", lf::fit_regression(spec, sample));
    for (const lf::Family f :
         {lf::Family::glogm, lf::Family::gb2, lf::Family::lognormal,
          lf::Family::gamma}) {
      fits.emplace_back(lf::family_name(f),
                        lf::fit_linked_regression(f, sample, linked));
    }

    std::vector<std::pair<std::string, const lf::FitResult*>> refs;
    for (const auto& [name, fit] : fits) refs.emplace_back(name, &fit);
    const auto rankings = lf::rank_models(refs);

    lf::ordered_json j;
    j["metadata"] = lf::metadata_json(com.seed, com.deterministic);
    j["input"] = ingest_json(ingest);
    j["mode"] = "regression";
    lf::ordered_json models;
    for (const auto& [name, fit] : fits) {
      lf::ordered_json m;
      m["fit"] = lf::fit_to_json(fit);
      // A comparator that collapsed to a parameter boundary can make its
      // residual diagnostics incomputable; keep the comparison alive and
      // report null for that model instead of failing the whole run.
      try {
        const lf::QuantileResiduals qr = lf::quantile_residuals(fit, sample);
        m["residuals"] = {{"qq_correlation", lf::qq_correlation(qr.values)},
                          {"n_clamped", qr.n_clamped}};
      } catch (const lf::DomainError&) {
        m["residuals"] = nullptr;
      } catch (const lf::NumericError&) {
        m["residuals"] = nullptr;
      }
      models[name] = std::move(m);
    }
    j["models"] = models;
    j["rankings"] = lf::rankings_to_json(rankings);
    lf::write_json(j, com.out);
    return 0;
  }

  // Univariate comparison across families.
  std::vector<lf::Family> families;
  if (families_csv.empty()) {
    families = lf::all_families();
  } else {
    for (const std::string& name : split_list(families_csv)) {
      families.push_back(lf::family_from_string(name));
    }
  }

  lf::IngestReport ingest;
  const lf::LossSample sample = load_sample(input, loss_col, {}, &ingest);

  std::vector<std::pair<std::string, lf::FitResult>> fits;
  for (const lf::Family f : families) {
    fits.emplace_back(lf::family_name(f), lf::fit_univariate(f, sample));
  }

  std::vector<std::pair<std::string, const lf::FitResult*>> refs;
  for (const auto& [name, fit] : fits) refs.emplace_back(name, &fit);
  const auto rankings = lf::rank_models(refs);

  std::vector<std::pair<std::string, std::function<double(double)>>> quants;
  for (const auto& [name, fit] : fits) {
    const lf::FamilyOps& ops = lf::family_ops(fit.family);
    const Eigen::VectorXd params = fit.estimates;
    quants.emplace_back(name, [&ops, params](double p) {
      return ops.quantile(params, p);
    });
  }
  const auto backtest = lf::var_backtest(sample.losses, quants, levels);

  lf::ordered_json j;
  j["metadata"] = lf::metadata_json(com.seed, com.deterministic);
  j["input"] = ingest_json(ingest);
  j["mode"] = "univariate";
  lf::ordered_json models;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    const auto& [name, fit] = fits[i];
    lf::ordered_json m;
    m["fit"] = lf::fit_to_json(fit);
    // Same degradation policy as regression mode: a model whose fitted cdf
    // is unusable gets a null diagnostic block, not a fatal error.
    try {
      const lf::GofReport gof = lf::bootstrap_gof(
          sample.losses, fit, bootstrap_b,
          lf::derive_seed(com.seed, 42, static_cast<std::uint64_t>(i)));
      m["gof"] = lf::gof_to_json(gof);
    } catch (const lf::DomainError&) {
      m["gof"] = nullptr;
    } catch (const lf::NumericError&) {
      m["gof"] = nullptr;
    }
    models[name] = std::move(m);
  }
  j["models"] = models;
  j["rankings"] = lf::rankings_to_json(rankings);
  j["var_backtest"] = lf::backtest_to_json(backtest);
  lf::write_json(j, com.out);
  return 0;
}

int cmd_simulate(const std::string& sizes_csv, int reps, double beta0,
                 double beta1, double alpha0, double alpha1, double log_a,
                 const std::string& csv_path, const CommonOut& com) {
  lf::SimConfig cfg;
  cfg.truth.beta = Eigen::Vector2d{beta0, beta1};
  cfg.truth.alpha = Eigen::Vector2d{alpha0, alpha1};
  cfg.truth.eta = log_a;
  cfg.n_replications = reps;
  cfg.seed = com.seed;
  cfg.sample_sizes.clear();
  for (const double v : split_doubles(sizes_csv, "--sizes")) {
    cfg.sample_sizes.push_back(static_cast<long>(v));
  }

  const lf::SimReport rep = lf::run_simulation(cfg);

  lf::ordered_json j;
  j["metadata"] = lf::metadata_json(com.seed, com.deterministic);
  j["simulation"] = lf::sim_report_to_json(rep);
  lf::write_json(j, com.out);

  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw lf::ConfigError("cannot write to '" + csv_path + "'");
    out << "parameter,n,truth,bias,relative_bias,mse,variance_ratio,"
           "n_failed,n_boundary,n_used,n_outliers\n";
    for (const lf::ParamSummary& s : rep.summaries) {
      out << s.name << ',' << s.sample_size << ',' << format_double(s.truth)
          << ',' << format_double(s.bias) << ','
          << format_double(s.relative_bias) << ',' << format_double(s.mse)
          << ',' << format_double(s.variance_ratio) << ',' << s.n_failed
          << ',' << s.n_boundary << ',' << s.n_used << ',' << s.n_outliers
          << '\n';
    }
  }
  return 0;
}

int cmd_sample(const std::string& family_name, const std::string& params_csv,
               double sigma, double a, double b, long n,
               const std::string& method, const CommonOut& com) {
  const lf::Family family = lf::family_from_string(family_name);
  const Eigen::VectorXd params = parse_params(family, params_csv, sigma, a, b);
  if (n < 0) throw lf::ConfigError("-n must be >= 0");

  Eigen::VectorXd draws;
  if (family == lf::Family::glmga) {
    lf::glmga::SampleMethod m = lf::glmga::SampleMethod::two_gamma;
    if (method == "gamma_mixture") {
      m = lf::glmga::SampleMethod::gamma_mixture;
    } else if (method == "half_normal") {
      m = lf::glmga::SampleMethod::half_normal;
    } else if (method != "two_gamma") {
      throw lf::ConfigError("--method must be two_gamma, gamma_mixture, or "
                            "half_normal");
    }
    draws = lf::glmga::sample(lf::GlmgaParams{params[0], params[1], params[2]},
                              n, com.seed, m);
  } else {
    const lf::FamilyOps& ops = lf::family_ops(family);
    lf::Rng rng(com.seed);
    draws.resize(n);
    for (long i = 0; i < n; ++i) {
      draws[i] = ops.quantile(params, rng.uniform());
    }
  }

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!com.out.empty() && com.out != "-") {
    file.open(com.out);
    if (!file) throw lf::ConfigError("cannot write to '" + com.out + "'");
    os = &file;
  }
  *os << "value\n";
  for (long i = 0; i < n; ++i) *os << format_double(draws[i]) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heavy-tailed loss distribution toolkit"};
  app.set_version_flag("--version", lossforge::kVersion);
  app.require_subcommand(1);

  CommonOut com;
  std::string input, loss_col = "loss", family = "glmga";
  std::string sigma_cols, b_cols, covariates, families_csv;
  std::string levels = "0.95,0.99";
  std::string params_csv, retentions, method = "two_gamma";
  std::string pareto_path, pareto_bin_col, csv_path, sizes = "100,200,500,1000";
  bool no_sigma_intercept = false, no_b_intercept = false;
  int bootstrap_b = 1000;
  double sigma = 0.0, a = 0.0, b = 0.0;
  double beta0 = -1.0, beta1 = 0.5, alpha0 = 1.0, alpha1 = 0.5, log_a = 0.0;
  double pareto_bin_width = 1.0;
  long n_draws = 0;
  int reps = 200;

  auto add_common = [&](CLI::App* cmd, bool with_seed = true) {
    cmd->add_option("--out", com.out, "output path ('-' = stdout, default)");
    cmd->add_flag("--deterministic", com.deterministic,
                  "omit timestamps so identical runs match byte for byte");
    if (with_seed) cmd->add_option("--seed", com.seed, "RNG seed");
  };

  int rc = 0;

  CLI::App* fit = app.add_subcommand("fit", "fit one family to a loss column");
  fit->add_option("--input", input, "CSV file")->required();
  fit->add_option("--loss-col", loss_col, "loss column name");
  fit->add_option("--family", family, "distribution family");
  add_common(fit);
  fit->callback([&]() { rc = cmd_fit(input, loss_col, family, com); });

  CLI::App* reg = app.add_subcommand(
      "regress", "fit the covariate-linked heavy-tail regression");
  reg->add_option("--input", input, "CSV file")->required();
  reg->add_option("--loss-col", loss_col, "loss column name");
  reg->add_option("--sigma-cols", sigma_cols,
                  "comma-separated covariates for the tail link");
  reg->add_option("--b-cols", b_cols,
                  "comma-separated covariates for the scale link");
  reg->add_flag("--no-sigma-intercept", no_sigma_intercept,
                "drop the tail link intercept");
  reg->add_flag("--no-b-intercept", no_b_intercept,
                "drop the scale link intercept");
  add_common(reg);
  reg->callback([&]() {
    rc = cmd_regress(input, loss_col, sigma_cols, b_cols, no_sigma_intercept,
                     no_b_intercept, com);
  });

  CLI::App* risk = app.add_subcommand(
      "risk", "risk measures at given parameters (no data needed)");
  risk->add_option("--family", family, "distribution family");
  risk->add_option("--params", params_csv,
                   "comma-separated parameter values (family order)");
  risk->add_option("--sigma", sigma, "glmga tail parameter");
  risk->add_option("--a", a, "glmga mixing shape");
  risk->add_option("--b", b, "glmga mixing rate");
  risk->add_option("--levels", levels, "comma-separated VaR levels");
  risk->add_option("--retentions", retentions,
                   "comma-separated retentions for stop-loss / mean excess");
  add_common(risk, false);
  risk->callback([&]() {
    rc = cmd_risk(family, params_csv, sigma, a, b, levels, retentions, com);
  });

  CLI::App* gof = app.add_subcommand(
      "gof", "fit + bootstrap goodness-of-fit for one family");
  gof->add_option("--input", input, "CSV file")->required();
  gof->add_option("--loss-col", loss_col, "loss column name");
  gof->add_option("--family", family, "distribution family");
  gof->add_option("--bootstrap-B", bootstrap_b, "bootstrap replicates");
  gof->add_option("--emit-pareto-qq", pareto_path,
                  "also write Pareto QQ plot data to this path");
  gof->add_option("--pareto-bin-col", pareto_bin_col,
                  "covariate column to group the Pareto QQ by");
  gof->add_option("--pareto-bin-width", pareto_bin_width,
                  "bin width for the grouping column");
  add_common(gof);
  gof->callback([&]() {
    rc = cmd_gof(input, loss_col, family, bootstrap_b, pareto_path,
                 pareto_bin_col, pareto_bin_width, com);
  });

  CLI::App* cmp = app.add_subcommand(
      "compare", "fit several models to one dataset and rank them");
  cmp->add_option("--input", input, "CSV file")->required();
  cmp->add_option("--loss-col", loss_col, "loss column name");
  cmp->add_option("--families", families_csv,
                  "families to compare (default: all)");
  cmp->add_option("--levels", levels, "VaR backtest levels");
  cmp->add_option("--bootstrap-B", bootstrap_b,
                  "bootstrap replicates per model (0 = statistics only)")
      ->default_val(0);
  cmp->add_option("--sigma-cols", sigma_cols,
                  "tail-link covariates (switches to regression mode)");
  cmp->add_option("--b-cols", b_cols, "scale-link covariates");
  cmp->add_option("--covariates", covariates,
                  "covariates for single-link comparator fits "
                  "(default: union of the link columns)");
  add_common(cmp);
  cmp->callback([&]() {
    rc = cmd_compare(input, loss_col, families_csv, levels, bootstrap_b,
                     sigma_cols, b_cols, covariates, com);
  });

  CLI::App* sim = app.add_subcommand(
      "simulate", "Monte Carlo study of the regression estimator");
  sim->add_option("--sizes", sizes, "comma-separated sample sizes");
  sim->add_option("--reps", reps, "replications per sample size");
  sim->add_option("--beta0", beta0, "true tail-link intercept");
  sim->add_option("--beta1", beta1, "true tail-link slope");
  sim->add_option("--alpha0", alpha0, "true scale-link intercept");
  sim->add_option("--alpha1", alpha1, "true scale-link slope");
  sim->add_option("--log-a", log_a, "true log mixing shape");
  sim->add_option("--csv", csv_path, "also write summaries as CSV");
  add_common(sim);
  sim->callback([&]() {
    rc = cmd_simulate(sizes, reps, beta0, beta1, alpha0, alpha1, log_a,
                      csv_path, com);
  });

  CLI::App* smp = app.add_subcommand("sample", "draw random losses");
  smp->add_option("--family", family, "distribution family");
  smp->add_option("--params", params_csv,
                  "comma-separated parameter values (family order)");
  smp->add_option("--sigma", sigma, "glmga tail parameter");
  smp->add_option("--a", a, "glmga mixing shape");
  smp->add_option("--b", b, "glmga mixing rate");
  smp->add_option("-n", n_draws, "number of draws")->required();
  smp->add_option("--method", method,
                  "glmga sampler: two_gamma, gamma_mixture, half_normal");
  add_common(smp);
  smp->callback([&]() {
    rc = cmd_sample(family, params_csv, sigma, a, b, n_draws, method, com);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const lf::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const lf::IngestionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
