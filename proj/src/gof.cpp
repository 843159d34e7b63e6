#include "lossforge/gof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lossforge/errors.hpp"
#include "lossforge/parallel.hpp"
#include "lossforge/rng.hpp"
#include "lossforge/specfun.hpp"

namespace lossforge {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_sorted_nonempty(const Eigen::VectorXd& s, const char* who) {
  if (s.size() == 0) throw DomainError(std::string(who) + ": empty sample");
  for (Eigen::Index i = 1; i < s.size(); ++i) {
    if (s[i] < s[i - 1]) {
      throw DomainError(std::string(who) + ": sample is not sorted");
    }
  }
}

Eigen::VectorXd cdf_values(const Eigen::VectorXd& sorted,
                           const std::function<double(double)>& cdf) {
  Eigen::VectorXd u(sorted.size());
  for (Eigen::Index i = 0; i < sorted.size(); ++i) u[i] = cdf(sorted[i]);
  return u;
}

}  // namespace

double ks_statistic(const Eigen::VectorXd& sorted,
                    const std::function<double(double)>& cdf) {
  require_sorted_nonempty(sorted, "ks_statistic");
  const Eigen::Index n = sorted.size();
  const Eigen::VectorXd u = cdf_values(sorted, cdf);
  double d = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double fn_hi = static_cast<double>(i + 1) / n;
    const double fn_lo = static_cast<double>(i) / n;
    d = std::max(d, std::max(fn_hi - u[i], u[i] - fn_lo));
  }
  return d;
}

double cvm_statistic(const Eigen::VectorXd& sorted,
                     const std::function<double(double)>& cdf) {
  require_sorted_nonempty(sorted, "cvm_statistic");
  const Eigen::Index n = sorted.size();
  const Eigen::VectorXd u = cdf_values(sorted, cdf);
  double acc = 1.0 / (12.0 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = u[i] - (2.0 * i + 1.0) / (2.0 * n);
    acc += d * d;
  }
  return acc;
}

double ad_statistic(const Eigen::VectorXd& sorted,
                    const std::function<double(double)>& cdf,
                    int* n_clamped) {
  require_sorted_nonempty(sorted, "ad_statistic");
  const Eigen::Index n = sorted.size();
  Eigen::VectorXd u = cdf_values(sorted, cdf);
  constexpr double kClamp = 1e-12;
  int clamped = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (u[i] < kClamp) {
      u[i] = kClamp;
      ++clamped;
    } else if (u[i] > 1.0 - kClamp) {
      u[i] = 1.0 - kClamp;
      ++clamped;
    }
  }
  if (n_clamped != nullptr) *n_clamped += clamped;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    acc += (2.0 * i + 1.0) *
           (std::log(u[i]) + std::log1p(-u[n - 1 - i]));
  }
  return -static_cast<double>(n) - acc / static_cast<double>(n);
}

double ks_critical_value(double alpha, Eigen::Index n) {
  if (!(alpha > 0.0 && alpha < 1.0) || n <= 0) {
    throw DomainError("ks_critical_value requires alpha in (0,1), n >= 1");
  }
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) /
         std::sqrt(static_cast<double>(n));
}

double ks_two_sample_critical_value(double alpha, Eigen::Index n,
                                    Eigen::Index m) {
  if (!(alpha > 0.0 && alpha < 1.0) || n <= 0 || m <= 0) {
    throw DomainError("ks_two_sample_critical_value: bad arguments");
  }
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) *
         std::sqrt(static_cast<double>(n + m) /
                   (static_cast<double>(n) * static_cast<double>(m)));
}

double ks_two_sample_statistic(const Eigen::VectorXd& a,
                               const Eigen::VectorXd& b) {
  require_sorted_nonempty(a, "ks_two_sample_statistic");
  require_sorted_nonempty(b, "ks_two_sample_statistic");
  const Eigen::Index n = a.size(), m = b.size();
  double d = 0.0;
  Eigen::Index i = 0, j = 0;
  while (i < n && j < m) {
    // Advance past every copy of the smallest pending value in both samples
    // at once: the EDF gap is only observable between jumps, and evaluating
    // it mid-jump would overstate D when the samples share a value.
    const double v = std::min(a[i], b[j]);
    while (i < n && a[i] == v) ++i;
    while (j < m && b[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / n -
                              static_cast<double>(j) / m));
  }
  return d;
}

namespace {

struct StatTriple {
  double ks = 0.0, cvm = 0.0, ad = 0.0;
};

StatTriple all_statistics(const Eigen::VectorXd& sorted,
                          const std::function<double(double)>& cdf,
                          int* ad_clamps = nullptr) {
  StatTriple t;
  t.ks = ks_statistic(sorted, cdf);
  t.cvm = cvm_statistic(sorted, cdf);
  t.ad = ad_statistic(sorted, cdf, ad_clamps);
  return t;
}

}  // namespace

GofReport bootstrap_gof(const Eigen::VectorXd& losses, const FitResult& fit,
                        int n_bootstrap, std::uint64_t seed,
                        const FitOptions& opts) {
  if (losses.size() == 0) throw DomainError("bootstrap_gof: empty sample");
  if (n_bootstrap < 0) throw DomainError("bootstrap_gof: B must be >= 0");
  if (fit.is_regression) {
    throw ConfigError("bootstrap_gof handles univariate fits only");
  }
  const FamilyOps& ops = family_ops(fit.family);
  const Eigen::Index n = losses.size();

  Eigen::VectorXd sorted = losses;
  std::sort(sorted.data(), sorted.data() + sorted.size());

  GofReport rep;
  rep.n_bootstrap = n_bootstrap;
  rep.seed = seed;

  const Eigen::VectorXd theta = fit.estimates;
  auto cdf_at = [&](const Eigen::VectorXd& params) {
    return [&ops, params](double y) { return ops.cdf(params, y); };
  };
  const StatTriple obs = all_statistics(sorted, cdf_at(theta),
                                        &rep.ad_clamp_count);
  rep.ks = obs.ks;
  rep.cvm = obs.cvm;
  rep.ad = obs.ad;

  {
    QuantileResiduals qr = quantile_residuals(fit,
        LossSample{losses, Eigen::MatrixXd(losses.size(), 0), {}, ""});
    rep.qq_correlation = qq_correlation(qr.values);
  }

  if (n_bootstrap == 0) {
    rep.p_ks = rep.p_cvm = rep.p_ad = kNaN;
    return rep;
  }

  // Each replicate: simulate n points from the fitted model by inverse
  // transform, refit, recompute the statistics under the refitted model.
  // Seeds are derived per replicate, so the stream is independent of the
  // worker count and of which statistics the caller wants.
  std::vector<int> status(n_bootstrap, 0);  // 0 drop, 1 kept
  std::vector<StatTriple> stats(n_bootstrap);

  parallel_for(n_bootstrap, [&](long r) {
    Rng rng(derive_seed(seed, 7001, static_cast<std::uint64_t>(r)));
    Eigen::VectorXd sim(n);
    try {
      for (Eigen::Index i = 0; i < n; ++i) {
        sim[i] = ops.quantile(theta, rng.uniform());
      }
      LossSample s;
      s.losses = sim;
      s.covariates.resize(n, 0);
      const FitResult refit = fit_univariate(fit.family, s, opts);
      if (!refit.converged) return;
      Eigen::VectorXd ss = sim;
      std::sort(ss.data(), ss.data() + ss.size());
      stats[r] = all_statistics(ss, cdf_at(refit.estimates));
      status[r] = 1;
    } catch (...) {
      // fit or simulation failure: drop this replicate
    }
  });

  int kept = 0, ge_ks = 0, ge_cvm = 0, ge_ad = 0;
  for (int r = 0; r < n_bootstrap; ++r) {
    if (status[r] != 1) continue;
    ++kept;
    if (stats[r].ks >= rep.ks) ++ge_ks;
    if (stats[r].cvm >= rep.cvm) ++ge_cvm;
    if (stats[r].ad >= rep.ad) ++ge_ad;
  }
  rep.n_dropped = n_bootstrap - kept;
  rep.reliable = rep.n_dropped <= 0.10 * n_bootstrap;
  rep.p_ks = (1.0 + ge_ks) / (kept + 1.0);
  rep.p_cvm = (1.0 + ge_cvm) / (kept + 1.0);
  rep.p_ad = (1.0 + ge_ad) / (kept + 1.0);
  return rep;
}

double bootstrap_pvalue(GofStatKind kind, const Eigen::VectorXd& losses,
                        const FitResult& fit, int n_bootstrap,
                        std::uint64_t seed, const FitOptions& opts) {
  const GofReport rep = bootstrap_gof(losses, fit, n_bootstrap, seed, opts);
  switch (kind) {
    case GofStatKind::ks: return rep.p_ks;
    case GofStatKind::cvm: return rep.p_cvm;
    case GofStatKind::ad: return rep.p_ad;
  }
  throw DomainError("invalid statistic kind");
}

double qq_correlation(const Eigen::VectorXd& values) {
  const Eigen::Index n = values.size();
  if (n < 3) throw DomainError("qq_correlation requires n >= 3");
  Eigen::VectorXd s = values;
  std::sort(s.data(), s.data() + s.size());
  Eigen::VectorXd q(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    q[i] = specfun::std_normal_quantile((i + 1 - 0.375) / (n + 0.25));
  }
  const double ms = s.mean(), mq = q.mean();
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    sxy += (s[i] - ms) * (q[i] - mq);
    sxx += (s[i] - ms) * (s[i] - ms);
    syy += (q[i] - mq) * (q[i] - mq);
  }
  if (sxx <= 0.0 || syy <= 0.0) {
    throw NumericError("qq_correlation undefined for constant input");
  }
  return sxy / std::sqrt(sxx * syy);
}

double empirical_quantile(const Eigen::VectorXd& sorted, double p) {
  require_sorted_nonempty(sorted, "empirical_quantile");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("empirical_quantile requires p in [0,1]");
  }
  const Eigen::Index n = sorted.size();
  const double h = p * static_cast<double>(n - 1);
  const Eigen::Index lo = static_cast<Eigen::Index>(h);
  if (lo + 1 >= n) return sorted[n - 1];
  return sorted[lo] + (h - lo) * (sorted[lo + 1] - sorted[lo]);
}

std::vector<VarBacktestRow> var_backtest(
    const Eigen::VectorXd& losses,
    const std::vector<std::pair<std::string, std::function<double(double)>>>&
        model_quantiles,
    const std::vector<double>& levels) {
  if (losses.size() == 0) throw DomainError("var_backtest: empty sample");
  Eigen::VectorXd sorted = losses;
  std::sort(sorted.data(), sorted.data() + sorted.size());
  const double n = static_cast<double>(sorted.size());

  std::vector<VarBacktestRow> rows;
  for (const double level : levels) {
    if (!(level > 0.0 && level < 1.0)) {
      throw DomainError("var_backtest level must be in (0,1)");
    }
    const double emp = empirical_quantile(sorted, level);
    // Beyond 1 - 1/(2n) the empirical quantile is pinned to the maximum;
    // comparisons there say little.
    const bool extrapolated = level > 1.0 - 0.5 / n || level < 0.5 / n;

    std::vector<std::size_t> idx;
    std::vector<VarBacktestRow> batch;
    for (const auto& [name, q] : model_quantiles) {
      VarBacktestRow row;
      row.model = name;
      row.level = level;
      row.empirical = emp;
      row.fitted = q(level);
      row.diff_pct = 100.0 * (row.fitted - emp) / emp;
      row.extrapolated = extrapolated;
      batch.push_back(std::move(row));
    }
    idx.resize(batch.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
      const double di = std::fabs(batch[i].diff_pct);
      const double dj = std::fabs(batch[j].diff_pct);
      if (di != dj) return di < dj;
      return batch[i].model < batch[j].model;
    });
    for (std::size_t r = 0; r < idx.size(); ++r) {
      batch[idx[r]].rank = static_cast<int>(r) + 1;
    }
    for (VarBacktestRow& row : batch) rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ModelRanking> rank_models(
    const std::vector<std::pair<std::string, const FitResult*>>& fits) {
  std::vector<ModelRanking> rows;
  rows.reserve(fits.size());
  for (const auto& [name, fit] : fits) {
    if (fit == nullptr) throw ConfigError("rank_models: null fit");
    ModelRanking r;
    r.name = name;
    r.log_likelihood = fit->log_likelihood;
    r.aic = fit->aic;
    r.bic = fit->bic;
    r.n_params = fit->n_params;
    rows.push_back(std::move(r));
  }
  auto assign_rank = [&](auto key, int ModelRanking::*rank_field) {
    std::vector<std::size_t> idx(rows.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
      const double ki = key(rows[i]);
      const double kj = key(rows[j]);
      if (ki != kj) return ki < kj;
      if (rows[i].n_params != rows[j].n_params) {
        return rows[i].n_params < rows[j].n_params;
      }
      return rows[i].name < rows[j].name;
    });
    for (std::size_t r = 0; r < idx.size(); ++r) {
      rows[idx[r]].*rank_field = static_cast<int>(r) + 1;
    }
  };
  assign_rank([](const ModelRanking& m) { return m.aic; },
              &ModelRanking::aic_rank);
  assign_rank([](const ModelRanking& m) { return m.bic; },
              &ModelRanking::bic_rank);
  std::sort(rows.begin(), rows.end(),
            [](const ModelRanking& a, const ModelRanking& b) {
              return a.aic_rank < b.aic_rank;
            });
  return rows;
}

}  // namespace lossforge
