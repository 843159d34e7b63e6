#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "lossforge/data.hpp"
#include "lossforge/families.hpp"
#include "lossforge/nelder_mead.hpp"

namespace lossforge {

// Covariate layout of the heavy-tail regression: log sigma_i = x_i' beta
// (tail link) and log b_i = z_i' alpha (scale link), with the mixing shape
// a = exp(eta) common to all rows.
struct RegressionSpec {
  std::vector<std::string> sigma_columns;
  std::vector<std::string> b_columns;
  bool sigma_intercept = true;
  bool b_intercept = true;

  int n_sigma_coefs() const {
    return static_cast<int>(sigma_columns.size()) + (sigma_intercept ? 1 : 0);
  }
  int n_b_coefs() const {
    return static_cast<int>(b_columns.size()) + (b_intercept ? 1 : 0);
  }
  int n_params() const { return n_sigma_coefs() + n_b_coefs() + 1; }

  // Throws ConfigError on duplicate columns within a link or an empty link
  // (no intercept and no columns).
  void validate() const;
};

struct RegressionCoefficients {
  Eigen::VectorXd beta;   // tail link coefficients
  Eigen::VectorXd alpha;  // scale link coefficients
  double eta = 0.0;       // log of the mixing shape a
};

struct FitOptions {
  NelderMeadOptions nm;
  // A fit whose shape-like parameters run beyond this magnitude on the
  // optimizer's log scale is flagged as a boundary fit: the data do not pin
  // the parameter down and the usual asymptotics are suspect.
  double boundary_threshold = 11.0;
};

struct FitResult {
  Family family = Family::glmga;
  bool is_regression = false;

  // Natural-scale parameters (univariate) or link coefficients (regression).
  Eigen::VectorXd estimates;
  std::vector<std::string> param_names;
  Eigen::VectorXd std_errors;  // NaN-filled when !se_available
  bool se_available = false;

  double log_likelihood = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  long n_obs = 0;
  int n_params = 0;

  bool converged = false;
  bool boundary = false;
  int n_restarts_used = 0;
  long n_evals = 0;
  double final_simplex_size = 0.0;

  // Optimizer-space optimum and covariance (valid iff se_available), kept
  // for downstream reuse (delta method, simulation summaries).
  Eigen::VectorXd t_hat;
  Eigen::MatrixXd cov_unconstrained;

  // How to rebuild per-row distributions: the regression layout for GLMGA
  // fits, or the single linked parameter's columns for comparator fits.
  RegressionSpec reg_spec;
  std::vector<std::string> linked_columns;
  bool linked_intercept = true;
};

// Negative log-likelihood of the regression model.  Computed purely from
// the linear predictors, so it is finite for any finite coefficient vector
// (it returns +inf only when exp(eta) overflows or a density is exactly
// zero); it never returns NaN and never throws for finite inputs.
double neg_log_likelihood(const RegressionSpec& spec,
                          const RegressionCoefficients& coeffs,
                          const LossSample& sample);

FitResult fit_univariate(Family family, const LossSample& sample,
                         const FitOptions& opts = {});

FitResult fit_regression(const RegressionSpec& spec, const LossSample& sample,
                         const FitOptions& opts = {});

// Comparator regressions where a single parameter carries the covariates:
// glogm (log sigma_i), gb2 (log mu_i), lognormal (mu_i, identity link),
// gamma (log scale_i).  Other families throw ConfigError.
FitResult fit_linked_regression(Family family, const LossSample& sample,
                                const std::vector<std::string>& columns,
                                bool intercept = true,
                                const FitOptions& opts = {});

// Splits a regression estimate vector back into link coefficients.
RegressionCoefficients unpack_coefficients(const RegressionSpec& spec,
                                           const Eigen::VectorXd& estimates);

// Normal-score transform of the fitted per-observation cdf values;
// cdf values are clamped to [1e-12, 1 - 1e-12] and clamps counted.
struct QuantileResiduals {
  Eigen::VectorXd values;
  int n_clamped = 0;
};
QuantileResiduals quantile_residuals(const FitResult& fit,
                                     const LossSample& sample);

// Observed information: central-difference Hessian of nll at x, with step
// cbrt(machine eps) * max(1, |x_j|) per coordinate.  Symmetric by
// construction.
Eigen::MatrixXd information_matrix(
    const std::function<double(const Eigen::VectorXd&)>& nll,
    const Eigen::VectorXd& x);

}  // namespace lossforge
