#include "lossforge/report.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "lossforge/errors.hpp"
#include "lossforge/version.hpp"

namespace lossforge {

namespace {

// JSON has no NaN/inf; represent them as null explicitly (nlohmann would
// otherwise serialize the literal token "null" too, but being explicit keeps
// the intent visible and the output stable).
ordered_json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

ordered_json vec_to_json(const Eigen::VectorXd& v) {
  ordered_json arr = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(num(v[i]));
  return arr;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace

ordered_json metadata_json(std::uint64_t seed, bool deterministic) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool_version"] = kVersion;
  j["seed"] = seed;
  if (!deterministic) j["created"] = utc_timestamp();
  return j;
}

ordered_json fit_to_json(const FitResult& fit) {
  ordered_json j;
  j["family"] = family_name(fit.family);
  j["model"] = fit.is_regression ? "regression" : "univariate";
  ordered_json est;
  for (std::size_t i = 0; i < fit.param_names.size(); ++i) {
    est[fit.param_names[i]] = num(fit.estimates[static_cast<Eigen::Index>(i)]);
  }
  j["estimates"] = est;
  if (fit.se_available) {
    ordered_json se;
    for (std::size_t i = 0; i < fit.param_names.size(); ++i) {
      se[fit.param_names[i]] =
          num(fit.std_errors[static_cast<Eigen::Index>(i)]);
    }
    j["std_errors"] = se;
  } else {
    j["std_errors"] = nullptr;
  }
  j["log_likelihood"] = num(fit.log_likelihood);
  j["aic"] = num(fit.aic);
  j["bic"] = num(fit.bic);
  j["n_obs"] = fit.n_obs;
  j["n_params"] = fit.n_params;
  j["converged"] = fit.converged;
  j["boundary"] = fit.boundary;
  j["se_available"] = fit.se_available;
  j["n_restarts_used"] = fit.n_restarts_used;
  j["n_evals"] = fit.n_evals;
  j["final_simplex_size"] = num(fit.final_simplex_size);
  return j;
}

ordered_json gof_to_json(const GofReport& rep) {
  ordered_json j;
  j["statistics"] = {{"ks", num(rep.ks)},
                     {"cvm", num(rep.cvm)},
                     {"ad", num(rep.ad)}};
  j["p_values"] = {{"ks", num(rep.p_ks)},
                   {"cvm", num(rep.p_cvm)},
                   {"ad", num(rep.p_ad)}};
  j["qq_correlation"] = num(rep.qq_correlation);
  j["bootstrap"] = {{"requested", rep.n_bootstrap},
                    {"dropped", rep.n_dropped},
                    {"reliable", rep.reliable},
                    {"seed", rep.seed}};
  j["ad_clamp_count"] = rep.ad_clamp_count;
  return j;
}

ordered_json backtest_to_json(const std::vector<VarBacktestRow>& rows) {
  ordered_json arr = ordered_json::array();
  for (const VarBacktestRow& r : rows) {
    ordered_json j;
    j["model"] = r.model;
    j["level"] = r.level;
    j["empirical_var"] = num(r.empirical);
    j["fitted_var"] = num(r.fitted);
    j["diff_pct"] = num(r.diff_pct);
    j["rank"] = r.rank;
    j["extrapolated"] = r.extrapolated;
    arr.push_back(std::move(j));
  }
  return arr;
}

ordered_json rankings_to_json(const std::vector<ModelRanking>& rows) {
  ordered_json arr = ordered_json::array();
  for (const ModelRanking& r : rows) {
    ordered_json j;
    j["model"] = r.name;
    j["log_likelihood"] = num(r.log_likelihood);
    j["aic"] = num(r.aic);
    j["bic"] = num(r.bic);
    j["n_params"] = r.n_params;
    j["aic_rank"] = r.aic_rank;
    j["bic_rank"] = r.bic_rank;
    arr.push_back(std::move(j));
  }
  return arr;
}

ordered_json sim_report_to_json(const SimReport& rep) {
  ordered_json j;
  ordered_json cfg;
  cfg["sample_sizes"] = rep.config.sample_sizes;
  cfg["n_replications"] = rep.config.n_replications;
  cfg["seed"] = rep.config.seed;
  cfg["truth"] = {{"beta", vec_to_json(rep.config.truth.beta)},
                  {"alpha", vec_to_json(rep.config.truth.alpha)},
                  {"eta", num(rep.config.truth.eta)}};
  j["config"] = cfg;

  ordered_json sums = ordered_json::array();
  for (const ParamSummary& s : rep.summaries) {
    ordered_json row;
    row["parameter"] = s.name;
    row["n"] = s.sample_size;
    row["truth"] = num(s.truth);
    row["bias"] = num(s.bias);
    row["relative_bias"] = num(s.relative_bias);
    row["mse"] = num(s.mse);
    row["variance_ratio"] = num(s.variance_ratio);
    row["n_replications"] = s.n_replications;
    row["n_failed"] = s.n_failed;
    row["n_boundary"] = s.n_boundary;
    row["n_used"] = s.n_used;
    row["n_outliers"] = s.n_outliers;
    sums.push_back(std::move(row));
  }
  j["summaries"] = sums;

  ordered_json boxes = ordered_json::array();
  for (const auto& [n, est] : rep.estimates) {
    for (Eigen::Index c = 0; c < est.cols(); ++c) {
      if (est.rows() == 0) continue;
      const BoxplotSummary b = boxplot_summary(est.col(c));
      ordered_json row;
      row["parameter"] = rep.param_names[static_cast<std::size_t>(c)];
      row["n"] = n;
      row["whisker_lo"] = num(b.whisker_lo);
      row["q1"] = num(b.q1);
      row["median"] = num(b.median);
      row["q3"] = num(b.q3);
      row["whisker_hi"] = num(b.whisker_hi);
      row["mean"] = num(b.mean);
      row["n_converged"] = b.n;
      row["n_outliers_iqr"] = b.n_outliers_iqr;
      boxes.push_back(std::move(row));
    }
  }
  j["boxplots"] = boxes;
  return j;
}

void write_json(const ordered_json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write to '" + path + "'");
  out << text;
}

std::vector<ParetoQqGroup> pareto_qq_groups(const Eigen::VectorXd& losses,
                                            const Eigen::VectorXd& bin_values,
                                            double bin_width) {
  if (losses.size() == 0) throw DomainError("pareto_qq_groups: empty input");
  if (bin_values.size() != 0 && bin_values.size() != losses.size()) {
    throw DomainError("pareto_qq_groups: bin column length mismatch");
  }
  if (!(bin_width > 0.0)) throw DomainError("pareto_qq_groups: bad bin width");

  std::map<long, std::vector<double>> bins;
  for (Eigen::Index i = 0; i < losses.size(); ++i) {
    if (!(losses[i] > 0.0)) {
      throw DomainError("pareto_qq_groups requires positive losses");
    }
    const long key =
        bin_values.size() == 0
            ? 0
            : static_cast<long>(std::llround(bin_values[i] / bin_width));
    bins[key].push_back(std::log(losses[i]));
  }

  std::vector<ParetoQqGroup> out;
  for (auto& [key, vals] : bins) {
    std::sort(vals.begin(), vals.end());
    ParetoQqGroup g;
    if (bin_values.size() == 0) {
      g.label = "all";
    } else {
      std::ostringstream os;
      os << key * bin_width;
      g.label = os.str();
    }
    const Eigen::Index m = static_cast<Eigen::Index>(vals.size());
    g.log_losses = Eigen::Map<Eigen::VectorXd>(vals.data(), m);
    g.neg_log_survival.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      g.neg_log_survival[i] =
          -std::log(1.0 - static_cast<double>(i + 1) / (m + 1.0));
    }
    out.push_back(std::move(g));
  }
  return out;
}

ordered_json pareto_qq_to_json(const std::vector<ParetoQqGroup>& groups) {
  ordered_json arr = ordered_json::array();
  for (const ParetoQqGroup& g : groups) {
    ordered_json j;
    j["group"] = g.label;
    j["log_loss"] = vec_to_json(g.log_losses);
    j["neg_log_survival"] = vec_to_json(g.neg_log_survival);
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace lossforge
