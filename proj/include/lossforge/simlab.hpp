#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "lossforge/inference.hpp"

namespace lossforge {

// Monte Carlo study of the regression estimator: draw standard-normal
// covariates, generate losses from known coefficients, refit, aggregate.
struct SimConfig {
  RegressionCoefficients truth;  // beta (intercept+slope), alpha, eta = ln a
  std::vector<long> sample_sizes = {100, 200, 500, 1000};
  int n_replications = 200;
  std::uint64_t seed = 1;
  // Estimates farther than this from the truth (absolute, relative to
  // max(1,|truth|)) are reported as outliers.
  double outlier_cap = 5.0;
  FitOptions fit;
};

// Per coefficient and sample size.  Moment summaries (bias, relative bias,
// mse, variance ratio) cover converged non-boundary fits only; the failure
// and exclusion counts say how many replicates fell outside that.
struct ParamSummary {
  std::string name;
  long sample_size = 0;
  double truth = 0.0;
  int n_replications = 0;
  int n_failed = 0;     // refit did not converge (or threw)
  int n_boundary = 0;   // converged on a likelihood boundary, excluded
  int n_used = 0;       // included in the moment summaries
  int n_outliers = 0;   // beyond outlier_cap among converged fits
  double bias = 0.0;
  double relative_bias = 0.0;
  double mse = 0.0;
  // Monte Carlo variance over mean model-based variance; near 1 when the
  // information-matrix standard errors are trustworthy.
  double variance_ratio = 0.0;
};

struct SimReport {
  SimConfig config;
  std::vector<ParamSummary> summaries;  // ordered by sample size, then coef
  // Raw per-replicate estimates for plotting: one row per converged
  // replicate (boundary fits included -- they are real outcomes).
  std::map<long, Eigen::MatrixXd> estimates;
  // Model-based variances for the same rows (NaN where unavailable).
  std::map<long, Eigen::MatrixXd> model_variances;
  std::vector<std::string> param_names;
};

SimReport run_simulation(const SimConfig& cfg);

// Normal QQ data for a vector of estimates: sorted standardized values,
// Blom plotting positions, and the 99% simultaneous band half-width (in
// probability scale, percent) of Doksum's form 89.5 / (sqrt(n) (1 -
// 0.01/sqrt(n) + 0.85/n)).
struct EstimatorQq {
  Eigen::VectorXd positions;     // plotting positions in (0,1)
  Eigen::VectorXd standardized;  // sorted, centered, scaled
  double band_halfwidth_pct = 0.0;
};
EstimatorQq estimator_qq_data(const Eigen::VectorXd& estimates);

double doksum_band_halfwidth_pct(Eigen::Index n);

// Five-number boxplot summary (type-7 quartiles, 1.5 IQR whiskers), with
// outlier counts both by the IQR rule and beyond a display cap.
struct BoxplotSummary {
  double whisker_lo = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double whisker_hi = 0.0;
  double mean = 0.0;
  long n = 0;
  long n_outliers_iqr = 0;
  long n_beyond_cap = 0;
};
BoxplotSummary boxplot_summary(const Eigen::VectorXd& values,
                               double display_cap =
                                   std::numeric_limits<double>::infinity());

}  // namespace lossforge
