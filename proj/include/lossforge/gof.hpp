#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lossforge/inference.hpp"

namespace lossforge {

// Classical EDF statistics against a fully specified cdf.  The sample must
// be sorted ascending; cdf values are computed once and shared.
double ks_statistic(const Eigen::VectorXd& sorted,
                    const std::function<double(double)>& cdf);
double cvm_statistic(const Eigen::VectorXd& sorted,
                     const std::function<double(double)>& cdf);
// Anderson-Darling; cdf values are clamped to [1e-12, 1-1e-12] before the
// logs and the number of clamped values is added to *n_clamped if given.
double ad_statistic(const Eigen::VectorXd& sorted,
                    const std::function<double(double)>& cdf,
                    int* n_clamped = nullptr);

// Asymptotic two-sided KS critical value c(alpha)/sqrt(n),
// c(alpha) = sqrt(-ln(alpha/2)/2).
double ks_critical_value(double alpha, Eigen::Index n);
// Two-sample version: c(alpha) * sqrt((n+m)/(n*m)).
double ks_two_sample_critical_value(double alpha, Eigen::Index n,
                                    Eigen::Index m);
double ks_two_sample_statistic(const Eigen::VectorXd& sorted_a,
                               const Eigen::VectorXd& sorted_b);

enum class GofStatKind { ks, cvm, ad };

// Parametric bootstrap with refitting: simulate from the fitted model,
// refit the same family, recompute the statistic.  Replicates whose refit
// does not converge are dropped and counted; with more than 10% dropped the
// p-values are flagged unreliable.  p = (1 + #{T* >= T}) / (B_kept + 1).
struct GofReport {
  double ks = 0.0, cvm = 0.0, ad = 0.0;
  double p_ks = 1.0, p_cvm = 1.0, p_ad = 1.0;
  double qq_correlation = 0.0;
  int n_bootstrap = 0;      // requested B
  int n_dropped = 0;
  bool reliable = true;
  int ad_clamp_count = 0;
  std::uint64_t seed = 0;
};

// Full report for a univariate fit (statistics, bootstrap p-values, and
// the normal QQ correlation of the quantile residuals).  B = 0 skips the
// bootstrap (p-values are NaN).
GofReport bootstrap_gof(const Eigen::VectorXd& losses, const FitResult& fit,
                        int n_bootstrap, std::uint64_t seed,
                        const FitOptions& opts = {});

// Single-statistic convenience wrapper over the same machinery (identical
// replicate stream, so its p-value matches the corresponding field above).
double bootstrap_pvalue(GofStatKind kind, const Eigen::VectorXd& losses,
                        const FitResult& fit, int n_bootstrap,
                        std::uint64_t seed, const FitOptions& opts = {});

// Pearson correlation between sorted values and normal plotting positions
// Phi^{-1}((i - 0.375)/(n + 0.25)).  Requires n >= 3 and non-constant input.
double qq_correlation(const Eigen::VectorXd& values);

// Type-7 (linear interpolation) empirical quantile of a sorted sample.
double empirical_quantile(const Eigen::VectorXd& sorted, double p);

// Empirical-vs-model VaR comparison at several levels.  Models closer to
// the empirical quantile rank better (rank 1 = best) per level.
struct VarBacktestRow {
  std::string model;
  double level = 0.0;
  double empirical = 0.0;
  double fitted = 0.0;
  double diff_pct = 0.0;  // 100 * (fitted - empirical) / empirical
  int rank = 0;
  bool extrapolated = false;  // level beyond what n observations support
};
std::vector<VarBacktestRow> var_backtest(
    const Eigen::VectorXd& losses,
    const std::vector<std::pair<std::string, std::function<double(double)>>>&
        model_quantiles,
    const std::vector<double>& levels);

// AIC/BIC ranking across fitted models; ties broken by fewer parameters,
// then by name.
struct ModelRanking {
  std::string name;
  double log_likelihood = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  int n_params = 0;
  int aic_rank = 0;
  int bic_rank = 0;
};
std::vector<ModelRanking> rank_models(
    const std::vector<std::pair<std::string, const FitResult*>>& fits);

}  // namespace lossforge
