#include "lossforge/simlab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lossforge/errors.hpp"
#include "lossforge/gof.hpp"
#include "lossforge/parallel.hpp"
#include "lossforge/rng.hpp"

namespace lossforge {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// One synthetic dataset: covariates x1 (tail link) and x2 (scale link) are
// independent standard normals; losses come from the two-gamma
// representation with per-row sigma_i, b_i.
LossSample simulate_dataset(const RegressionCoefficients& truth, long n,
                            Rng& rng) {
  if (truth.beta.size() != 2 || truth.alpha.size() != 2) {
    throw ConfigError(
        "simulation truth must have intercept+slope in both links");
  }
  LossSample s;
  s.losses.resize(n);
  s.covariates.resize(n, 2);
  s.covariate_names = {"x1", "x2"};
  const double a = std::exp(truth.eta);
  for (long i = 0; i < n; ++i) {
    const double x1 = rng.normal();
    const double x2 = rng.normal();
    const double sigma = std::exp(truth.beta[0] + truth.beta[1] * x1);
    const double b = std::exp(truth.alpha[0] + truth.alpha[1] * x2);
    const double gh = rng.gamma(0.5);
    const double ga = rng.gamma(a);
    s.covariates(i, 0) = x1;
    s.covariates(i, 1) = x2;
    s.losses[i] =
        std::exp(sigma * (std::log(ga) - std::log(2.0 * b) - std::log(gh)));
  }
  return s;
}

}  // namespace

SimReport run_simulation(const SimConfig& cfg) {
  if (cfg.n_replications < 1) {
    throw ConfigError("run_simulation requires n_replications >= 1");
  }
  if (cfg.sample_sizes.empty()) {
    throw ConfigError("run_simulation requires at least one sample size");
  }
  for (long n : cfg.sample_sizes) {
    if (n < 10) throw ConfigError("simulation sample sizes must be >= 10");
  }
  if (cfg.truth.beta.size() != 2 || cfg.truth.alpha.size() != 2) {
    throw ConfigError(
        "simulation truth must have intercept+slope in both links");
  }

  RegressionSpec spec;
  spec.sigma_columns = {"x1"};
  spec.b_columns = {"x2"};

  SimReport rep;
  rep.config = cfg;
  rep.param_names = {"sigma:(Intercept)", "sigma:x1", "b:(Intercept)",
                     "b:x2", "log_a"};
  const int k = 5;
  Eigen::VectorXd truth_vec(k);
  truth_vec << cfg.truth.beta[0], cfg.truth.beta[1], cfg.truth.alpha[0],
      cfg.truth.alpha[1], cfg.truth.eta;

  for (std::size_t size_idx = 0; size_idx < cfg.sample_sizes.size();
       ++size_idx) {
    const long n = cfg.sample_sizes[size_idx];
    const int reps = cfg.n_replications;

    Eigen::MatrixXd est(reps, k);
    Eigen::MatrixXd var(reps, k);
    std::vector<int> outcome(reps, 0);  // 0 failed, 1 ok, 2 boundary

    parallel_for(reps, [&](long r) {
      Rng rng(derive_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(size_idx),
                          static_cast<std::uint64_t>(r)));
      try {
        const LossSample data = simulate_dataset(cfg.truth, n, rng);
        const FitResult fit = fit_regression(spec, data, cfg.fit);
        if (!fit.converged) return;
        est.row(r) = fit.estimates.transpose();
        if (fit.se_available) {
          var.row(r) =
              fit.std_errors.array().square().matrix().transpose();
        } else {
          var.row(r).setConstant(kNaN);
        }
        outcome[r] = fit.boundary ? 2 : 1;
      } catch (...) {
        // leave outcome 0: failed replicate
      }
    });

    // Pack converged rows (boundary included) for the raw-estimate matrix.
    int n_conv = 0;
    for (int r = 0; r < reps; ++r) n_conv += outcome[r] != 0;
    Eigen::MatrixXd est_kept(n_conv, k);
    Eigen::MatrixXd var_kept(n_conv, k);
    {
      int w = 0;
      for (int r = 0; r < reps; ++r) {
        if (outcome[r] == 0) continue;
        est_kept.row(w) = est.row(r);
        var_kept.row(w) = var.row(r);
        ++w;
      }
    }
    rep.estimates[n] = est_kept;
    rep.model_variances[n] = var_kept;

    for (int j = 0; j < k; ++j) {
      ParamSummary ps;
      ps.name = rep.param_names[static_cast<std::size_t>(j)];
      ps.sample_size = n;
      ps.truth = truth_vec[j];
      ps.n_replications = reps;

      double sum = 0.0, sum_sq_err = 0.0;
      double var_sum = 0.0;
      int n_used = 0, n_var = 0, n_fail = 0, n_bound = 0, n_out = 0;
      for (int r = 0; r < reps; ++r) {
        if (outcome[r] == 0) {
          ++n_fail;
          continue;
        }
        const double e = est(r, j);
        if (std::fabs(e - truth_vec[j]) >
            cfg.outlier_cap * std::max(1.0, std::fabs(truth_vec[j]))) {
          ++n_out;
        }
        if (outcome[r] == 2) {
          ++n_bound;
          continue;
        }
        ++n_used;
        sum += e;
        const double d = e - truth_vec[j];
        sum_sq_err += d * d;
        if (std::isfinite(var(r, j))) {
          var_sum += var(r, j);
          ++n_var;
        }
      }
      ps.n_failed = n_fail;
      ps.n_boundary = n_bound;
      ps.n_used = n_used;
      ps.n_outliers = n_out;
      if (n_used > 0) {
        const double mean_est = sum / n_used;
        ps.bias = mean_est - truth_vec[j];
        ps.relative_bias =
            (truth_vec[j] != 0.0) ? ps.bias / truth_vec[j] : kNaN;
        ps.mse = sum_sq_err / n_used;
        double sample_var = 0.0;
        if (n_used > 1) {
          for (int r = 0; r < reps; ++r) {
            if (outcome[r] != 1) continue;
            const double d = est(r, j) - mean_est;
            sample_var += d * d;
          }
          sample_var /= (n_used - 1);
        }
        ps.variance_ratio =
            (n_var > 0 && var_sum > 0.0) ? sample_var / (var_sum / n_var)
                                         : kNaN;
      } else {
        ps.bias = ps.relative_bias = ps.mse = ps.variance_ratio = kNaN;
      }
      rep.summaries.push_back(std::move(ps));
    }
  }
  return rep;
}

double doksum_band_halfwidth_pct(Eigen::Index n) {
  if (n < 1) throw DomainError("doksum band requires n >= 1");
  const double s = std::sqrt(static_cast<double>(n));
  return 89.5 / (s * (1.0 - 0.01 / s + 0.85 / static_cast<double>(n)));
}

EstimatorQq estimator_qq_data(const Eigen::VectorXd& estimates) {
  const Eigen::Index n = estimates.size();
  if (n < 3) throw DomainError("estimator_qq_data requires n >= 3");
  Eigen::VectorXd s = estimates;
  std::sort(s.data(), s.data() + s.size());
  const double mean = s.mean();
  double var = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    var += (s[i] - mean) * (s[i] - mean);
  }
  var /= static_cast<double>(n - 1);
  if (!(var > 0.0)) {
    throw NumericError("estimator_qq_data: degenerate (constant) estimates");
  }
  const double sd = std::sqrt(var);
  EstimatorQq qq;
  qq.positions.resize(n);
  qq.standardized.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    qq.positions[i] = (i + 1 - 0.375) / (n + 0.25);
    qq.standardized[i] = (s[i] - mean) / sd;
  }
  qq.band_halfwidth_pct = doksum_band_halfwidth_pct(n);
  return qq;
}

BoxplotSummary boxplot_summary(const Eigen::VectorXd& values,
                               double display_cap) {
  const Eigen::Index n = values.size();
  if (n == 0) throw DomainError("boxplot_summary: empty input");
  Eigen::VectorXd s = values;
  std::sort(s.data(), s.data() + s.size());

  BoxplotSummary b;
  b.n = n;
  b.q1 = empirical_quantile(s, 0.25);
  b.median = empirical_quantile(s, 0.5);
  b.q3 = empirical_quantile(s, 0.75);
  b.mean = s.mean();
  const double iqr = b.q3 - b.q1;
  const double lo_fence = b.q1 - 1.5 * iqr;
  const double hi_fence = b.q3 + 1.5 * iqr;
  b.whisker_lo = s[n - 1];
  b.whisker_hi = s[0];
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = s[i];
    if (v >= lo_fence && v < b.whisker_lo) b.whisker_lo = v;
    if (v <= hi_fence && v > b.whisker_hi) b.whisker_hi = v;
    if (v < lo_fence || v > hi_fence) ++b.n_outliers_iqr;
    if (std::fabs(v) > display_cap) ++b.n_beyond_cap;
  }
  // All-equal input: fences collapse onto the data, whiskers = the value.
  if (b.whisker_lo > b.whisker_hi) b.whisker_lo = b.whisker_hi = b.median;
  return b;
}

}  // namespace lossforge
