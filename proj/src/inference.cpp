#include "lossforge/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "lossforge/errors.hpp"
#include "lossforge/gb2.hpp"
#include "lossforge/glmga.hpp"
#include "lossforge/glogm.hpp"
#include "lossforge/specfun.hpp"

namespace lossforge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double clampd(double x, double lo, double hi) {
  return std::min(hi, std::max(lo, x));
}

// Design matrix for one link: optional intercept column of ones, then the
// named covariates in order.
Eigen::MatrixXd design_matrix(const LossSample& sample,
                              const std::vector<std::string>& columns,
                              bool intercept) {
  const Eigen::Index n = sample.n();
  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(columns.size()) +
                           (intercept ? 1 : 0));
  Eigen::Index j = 0;
  if (intercept) x.col(j++).setOnes();
  for (const std::string& c : columns) x.col(j++) = sample.column(c);
  return x;
}

void require_full_rank(const Eigen::MatrixXd& x,
                       const std::vector<std::string>& columns,
                       bool intercept, const char* link) {
  if (x.cols() == 0) return;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() == x.cols()) return;
  // The pivots beyond the numerical rank name the dependent columns.
  std::string bad;
  const auto perm = qr.colsPermutation().indices();
  for (Eigen::Index k = qr.rank(); k < x.cols(); ++k) {
    const Eigen::Index col = perm[k];
    const Eigen::Index shift = intercept ? 1 : 0;
    if (!bad.empty()) bad += ", ";
    bad += (intercept && col == 0)
               ? "(intercept)"
               : columns[static_cast<std::size_t>(col - shift)];
  }
  throw EstimationError(std::string(link) +
                        " design matrix is rank deficient; dependent "
                        "columns: " + bad);
}

// log(e^u + e^v) with the usual max trick, tolerating u = +-inf.
double log_add_exp(double u, double v) {
  if (u == -kInf) return v;
  if (v == -kInf) return u;
  const double d = u - v;
  if (d > 36.0) return u;
  if (d < -36.0) return v;
  return v + std::log1p(std::exp(d));
}

// Core regression NLL on prebuilt design matrices.  Returns +inf instead
// of throwing so optimizers can probe anywhere.
double regression_nll(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& xb,
                      const Eigen::VectorXd& ln_y,
                      const Eigen::VectorXd& beta,
                      const Eigen::VectorXd& alpha, double eta) {
  if (!beta.allFinite() || !alpha.allFinite() || !std::isfinite(eta)) {
    return kInf;
  }
  const double a = std::exp(eta);
  if (!std::isfinite(a) || a <= 0.0) return kInf;
  const Eigen::VectorXd t1 = xs * beta;  // ln sigma_i
  const Eigen::VectorXd t2 = xb * alpha; // ln b_i
  const double ln_beta_a =
      std::lgamma(a) + std::lgamma(0.5) - std::lgamma(a + 0.5);
  const double ah = a + 0.5;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < ln_y.size(); ++i) {
    const double ly = ln_y[i];
    const double s1 = t1[i];
    const double s2 = t2[i];
    // ln[(1/2) y^{-1/sigma} + b] with everything kept on the log scale:
    // exp(-s1) is 1/sigma_i, which may overflow for very negative s1 --
    // log_add_exp absorbs the resulting infinities correctly.
    const double u1 = -std::numbers::ln2 - std::exp(-s1) * ly;
    const double lse = log_add_exp(u1, s2);
    acc += a * s2 - 0.5 * std::numbers::ln2 - s1 - ln_beta_a -
           (0.5 * std::exp(-s1) + 1.0) * ly - ah * lse;
  }
  return std::isfinite(acc) ? -acc : kInf;
}

struct SeResult {
  Eigen::VectorXd se;           // optimizer scale
  Eigen::MatrixXd cov;          // optimizer scale
  bool available = false;
};

// Invert the observed information, requiring positive definiteness.
SeResult standard_errors(const std::function<double(const Eigen::VectorXd&)>& nll,
                         const Eigen::VectorXd& t_hat) {
  SeResult out;
  const Eigen::Index k = t_hat.size();
  out.se = Eigen::VectorXd::Constant(k, kNaN);
  out.cov = Eigen::MatrixXd::Constant(k, k, kNaN);

  Eigen::MatrixXd h;
  try {
    h = information_matrix(nll, t_hat);
  } catch (...) {
    return out;
  }
  if (!h.allFinite()) return out;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) return out;
  const Eigen::VectorXd ev = es.eigenvalues();
  const double max_ev = ev.cwiseAbs().maxCoeff();
  if (!(ev.minCoeff() > 1e-10 * std::max(1.0, max_ev))) return out;

  const Eigen::MatrixXd cov = es.eigenvectors() *
                              ev.cwiseInverse().asDiagonal() *
                              es.eigenvectors().transpose();
  if (!cov.allFinite() || (cov.diagonal().array() <= 0.0).any()) return out;
  out.cov = cov;
  out.se = cov.diagonal().cwiseSqrt();
  out.available = true;
  return out;
}

void common_fit_fields(FitResult& fit, const NelderMeadResult& nm, long n,
                       int k) {
  fit.log_likelihood = -nm.value;
  fit.aic = 2.0 * k - 2.0 * fit.log_likelihood;
  fit.bic = k * std::log(static_cast<double>(n)) - 2.0 * fit.log_likelihood;
  fit.n_obs = n;
  fit.n_params = k;
  fit.converged = nm.converged;
  fit.n_restarts_used = nm.n_restarts_used;
  fit.n_evals = nm.n_evals;
  fit.final_simplex_size = nm.final_simplex_size;
  fit.t_hat = nm.x;
}

void check_sample_for_fit(const LossSample& sample, int n_params) {
  sample.validate();
  if (sample.n() < n_params + 1) {
    throw EstimationError("need at least " + std::to_string(n_params + 1) +
                          " observations to fit " + std::to_string(n_params) +
                          " parameters, got " + std::to_string(sample.n()));
  }
  if (sample.losses.maxCoeff() - sample.losses.minCoeff() <= 0.0) {
    throw EstimationError("degenerate sample: all losses are equal");
  }
}

// Which optimizer-scale parameters are shape-like, i.e. unit-free, so that
// a huge magnitude genuinely signals a degenerate fit rather than a data
// scale.  Scale parameters (b, theta, mu, lognormal location, ...) are
// exempt.
std::vector<bool> shape_mask_univariate(Family f) {
  switch (f) {
    case Family::glmga: return {true, true, false};
    case Family::glogm: return {true, false};
    case Family::gb2: return {false, true, true, true};
    case Family::lomax: return {true, false};
    case Family::loggamma: return {true, false};
    case Family::frechet: return {true, false};
    case Family::lognormal: return {false, true};
    case Family::gamma: return {true, false};
  }
  return {};
}

bool beyond_boundary(const Eigen::VectorXd& t, const std::vector<bool>& mask,
                     double threshold) {
  for (Eigen::Index j = 0; j < t.size(); ++j) {
    if (mask[static_cast<std::size_t>(j)] && std::fabs(t[j]) > threshold) {
      return true;
    }
  }
  return false;
}

}  // namespace

void RegressionSpec::validate() const {
  auto check = [](const std::vector<std::string>& cols, bool intercept,
                  const char* link) {
    std::set<std::string> seen;
    for (const std::string& c : cols) {
      if (!seen.insert(c).second) {
        throw ConfigError(std::string("duplicate column '") + c + "' in " +
                          link + " link");
      }
    }
    if (cols.empty() && !intercept) {
      throw ConfigError(std::string(link) +
                        " link has no intercept and no columns");
    }
  };
  check(sigma_columns, sigma_intercept, "sigma");
  check(b_columns, b_intercept, "b");
}

double neg_log_likelihood(const RegressionSpec& spec,
                          const RegressionCoefficients& coeffs,
                          const LossSample& sample) {
  spec.validate();
  sample.validate();
  if (coeffs.beta.size() != spec.n_sigma_coefs() ||
      coeffs.alpha.size() != spec.n_b_coefs()) {
    throw ConfigError("coefficient lengths do not match the regression spec");
  }
  const Eigen::MatrixXd xs =
      design_matrix(sample, spec.sigma_columns, spec.sigma_intercept);
  const Eigen::MatrixXd xb =
      design_matrix(sample, spec.b_columns, spec.b_intercept);
  const Eigen::VectorXd ln_y = sample.losses.array().log().matrix();
  return regression_nll(xs, xb, ln_y, coeffs.beta, coeffs.alpha, coeffs.eta);
}

Eigen::MatrixXd information_matrix(
    const std::function<double(const Eigen::VectorXd&)>& nll,
    const Eigen::VectorXd& x) {
  const Eigen::Index k = x.size();
  const double cbrt_eps = std::cbrt(std::numeric_limits<double>::epsilon());
  Eigen::VectorXd h(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    h[j] = cbrt_eps * std::max(1.0, std::fabs(x[j]));
  }

  Eigen::MatrixXd hess(k, k);
  const double f0 = nll(x);
  for (Eigen::Index i = 0; i < k; ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += h[i];
    xm[i] -= h[i];
    hess(i, i) = (nll(xp) - 2.0 * f0 + nll(xm)) / (h[i] * h[i]);
    for (Eigen::Index j = i + 1; j < k; ++j) {
      Eigen::VectorXd xpp = x, xpm = x, xmp = x, xmm = x;
      xpp[i] += h[i]; xpp[j] += h[j];
      xpm[i] += h[i]; xpm[j] -= h[j];
      xmp[i] -= h[i]; xmp[j] += h[j];
      xmm[i] -= h[i]; xmm[j] -= h[j];
      const double v =
          (nll(xpp) - nll(xpm) - nll(xmp) + nll(xmm)) / (4.0 * h[i] * h[j]);
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  return hess;
}

FitResult fit_univariate(Family family, const LossSample& sample,
                         const FitOptions& opts) {
  const FamilyOps& ops = family_ops(family);
  check_sample_for_fit(sample, ops.n_params);

  Eigen::VectorXd sorted = sample.losses;
  std::sort(sorted.data(), sorted.data() + sorted.size());

  const Eigen::VectorXd init = ops.initial_estimate(sorted);
  const Eigen::VectorXd t0 = ops.to_unconstrained(init);

  const Eigen::VectorXd& y = sample.losses;
  const Eigen::VectorXd ln_y = y.array().log().matrix();
  auto f = [&](const Eigen::VectorXd& t) {
    return ops.nll(ops.from_unconstrained(t), y, ln_y);
  };

  const NelderMeadResult nm = nelder_mead(f, t0, opts.nm);

  FitResult fit;
  fit.family = family;
  fit.is_regression = false;
  fit.param_names = ops.param_names;
  fit.estimates = ops.from_unconstrained(nm.x);
  common_fit_fields(fit, nm, sample.n(), ops.n_params);
  fit.boundary =
      beyond_boundary(nm.x, shape_mask_univariate(family),
                      opts.boundary_threshold);

  const SeResult se = standard_errors(f, nm.x);
  fit.cov_unconstrained = se.cov;
  fit.se_available = se.available;
  if (se.available) {
    // Delta method back to the natural scale: d(natural)/d(optimizer).
    Eigen::VectorXd jac(nm.x.size());
    if (family == Family::lognormal) {
      jac << 1.0, std::exp(nm.x[1]);
    } else {
      jac = fit.estimates;
    }
    fit.std_errors = (se.se.array() * jac.array().abs()).matrix();
  } else {
    fit.std_errors = Eigen::VectorXd::Constant(ops.n_params, kNaN);
  }
  return fit;
}

RegressionCoefficients unpack_coefficients(const RegressionSpec& spec,
                                           const Eigen::VectorXd& estimates) {
  if (estimates.size() != spec.n_params()) {
    throw ConfigError("estimate vector does not match the regression spec");
  }
  RegressionCoefficients c;
  c.beta = estimates.head(spec.n_sigma_coefs());
  c.alpha = estimates.segment(spec.n_sigma_coefs(), spec.n_b_coefs());
  c.eta = estimates[spec.n_params() - 1];
  return c;
}

FitResult fit_regression(const RegressionSpec& spec, const LossSample& sample,
                         const FitOptions& opts) {
  spec.validate();
  check_sample_for_fit(sample, spec.n_params());

  const Eigen::MatrixXd xs =
      design_matrix(sample, spec.sigma_columns, spec.sigma_intercept);
  const Eigen::MatrixXd xb =
      design_matrix(sample, spec.b_columns, spec.b_intercept);
  require_full_rank(xs, spec.sigma_columns, spec.sigma_intercept, "sigma");
  require_full_rank(xb, spec.b_columns, spec.b_intercept, "b");

  const int k1 = spec.n_sigma_coefs();
  const int k2 = spec.n_b_coefs();
  const int k = spec.n_params();

  // Start from the no-covariate fit: intercepts carry the univariate
  // optimum (clamped away from degenerate corners), slopes start at zero.
  Eigen::VectorXd t0 = Eigen::VectorXd::Zero(k);
  {
    const FitResult uni = fit_univariate(Family::glmga, sample, opts);
    if (spec.sigma_intercept) {
      t0[0] = clampd(std::log(uni.estimates[0]), -8.0, 8.0);
    }
    if (spec.b_intercept) {
      t0[k1] = clampd(std::log(uni.estimates[2]), -30.0, 30.0);
    }
    t0[k - 1] = clampd(std::log(uni.estimates[1]), -5.0, 5.0);
  }

  const Eigen::VectorXd ln_y = sample.losses.array().log().matrix();
  auto f = [&](const Eigen::VectorXd& t) {
    return regression_nll(xs, xb, ln_y, t.head(k1), t.segment(k1, k2),
                          t[k - 1]);
  };

  const NelderMeadResult nm = nelder_mead(f, t0, opts.nm);

  FitResult fit;
  fit.family = Family::glmga;
  fit.is_regression = true;
  fit.reg_spec = spec;
  fit.estimates = nm.x;
  common_fit_fields(fit, nm, sample.n(), k);

  fit.param_names.reserve(k);
  auto link_names = [&](const char* link, const std::vector<std::string>& cols,
                        bool intercept) {
    if (intercept) fit.param_names.push_back(std::string(link) + ":(Intercept)");
    for (const std::string& c : cols) {
      fit.param_names.push_back(std::string(link) + ":" + c);
    }
  };
  link_names("sigma", spec.sigma_columns, spec.sigma_intercept);
  link_names("b", spec.b_columns, spec.b_intercept);
  fit.param_names.push_back("log_a");

  // Boundary screen: tail-link coefficients and the shape log a are
  // unit-free; the scale-link intercept is data-scale and exempt.
  std::vector<bool> mask(k, true);
  if (spec.b_intercept) mask[k1] = false;
  fit.boundary = beyond_boundary(nm.x, mask, opts.boundary_threshold);

  const SeResult se = standard_errors(f, nm.x);
  fit.cov_unconstrained = se.cov;
  fit.se_available = se.available;
  fit.std_errors =
      se.available ? se.se : Eigen::VectorXd::Constant(k, kNaN);
  return fit;
}

FitResult fit_linked_regression(Family family, const LossSample& sample,
                                const std::vector<std::string>& columns,
                                bool intercept, const FitOptions& opts) {
  if (family == Family::glmga) {
    throw ConfigError(
        "use fit_regression for the glmga family (two linked parameters)");
  }
  if (family != Family::glogm && family != Family::gb2 &&
      family != Family::lognormal && family != Family::gamma) {
    throw ConfigError(std::string("covariate regression not implemented for "
                                  "family ") + family_name(family));
  }
  {
    std::set<std::string> seen;
    for (const std::string& c : columns) {
      if (!seen.insert(c).second) {
        throw ConfigError("duplicate column '" + c + "' in linked regression");
      }
    }
    if (columns.empty() && !intercept) {
      throw ConfigError("linked regression has no intercept and no columns");
    }
  }

  const Eigen::MatrixXd x = design_matrix(sample, columns, intercept);
  require_full_rank(x, columns, intercept, "linked");
  const int kc = static_cast<int>(x.cols());

  // Which packed parameter carries the link, and whether the link is
  // identity (lognormal location) or log (everything else).
  const FamilyOps& ops = family_ops(family);
  int linked_idx = 0;
  bool log_link = true;
  switch (family) {
    case Family::glogm: linked_idx = 0; break;          // sigma
    case Family::gb2: linked_idx = 0; break;            // mu
    case Family::lognormal: linked_idx = 0; log_link = false; break;
    case Family::gamma: linked_idx = 1; break;          // scale
    default: break;
  }
  const int n_other = ops.n_params - 1;
  const int k = kc + n_other;
  check_sample_for_fit(sample, k);

  const Eigen::VectorXd& y = sample.losses;
  const Eigen::VectorXd ln_y = y.array().log().matrix();

  // Per-row objective: replace the linked parameter by its per-row value,
  // keep the remaining parameters global (optimizer scale = log).
  auto f = [&](const Eigen::VectorXd& t) -> double {
    if (!t.allFinite()) return kInf;
    const Eigen::VectorXd coefs = t.head(kc);
    const Eigen::VectorXd lin = x * coefs;
    Eigen::VectorXd params(ops.n_params);
    {
      int j = 0;
      for (int q = 0; q < ops.n_params; ++q) {
        if (q == linked_idx) continue;
        // Globals mirror the family's optimizer transform: log scale except
        // the lognormal location (which is not a global here anyway).
        params[q] = std::exp(t[kc + j]);
        ++j;
      }
    }
    double acc = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      params[linked_idx] = log_link ? std::exp(lin[i]) : lin[i];
      if (log_link && !(params[linked_idx] > 0.0 &&
                        std::isfinite(params[linked_idx]))) {
        return kInf;
      }
      double lp;
      try {
        lp = ops.log_pdf(params, y[i]);
      } catch (...) {
        return kInf;
      }
      acc += lp;
    }
    return std::isfinite(acc) ? -acc : kInf;
  };

  // Start at the univariate optimum; slopes at zero.
  Eigen::VectorXd t0 = Eigen::VectorXd::Zero(k);
  {
    const FitResult uni = fit_univariate(family, sample, opts);
    const double linked_hat = uni.estimates[linked_idx];
    if (intercept) {
      t0[0] = log_link ? clampd(std::log(linked_hat), -30.0, 30.0)
                       : clampd(linked_hat, -1e6, 1e6);
    }
    int j = 0;
    for (int q = 0; q < ops.n_params; ++q) {
      if (q == linked_idx) continue;
      t0[kc + j] = clampd(std::log(uni.estimates[q]), -8.0, 8.0);
      ++j;
    }
  }

  const NelderMeadResult nm = nelder_mead(f, t0, opts.nm);

  FitResult fit;
  fit.family = family;
  fit.is_regression = true;
  fit.linked_columns = columns;
  fit.linked_intercept = intercept;
  fit.estimates = nm.x;
  common_fit_fields(fit, nm, sample.n(), k);

  const std::string linked_name = ops.param_names[linked_idx];
  if (intercept) fit.param_names.push_back(linked_name + ":(Intercept)");
  for (const std::string& c : columns) {
    fit.param_names.push_back(linked_name + ":" + c);
  }
  for (int q = 0; q < ops.n_params; ++q) {
    if (q != linked_idx) fit.param_names.push_back("log_" + ops.param_names[q]);
  }

  // Slopes and global shapes are unit-free; the linked intercept is not.
  std::vector<bool> mask(k, true);
  if (intercept) mask[0] = false;
  {
    const std::vector<bool> uni_mask = shape_mask_univariate(family);
    int j = 0;
    for (int q = 0; q < ops.n_params; ++q) {
      if (q == linked_idx) continue;
      mask[kc + j] = uni_mask[static_cast<std::size_t>(q)];
      ++j;
    }
  }
  fit.boundary = beyond_boundary(nm.x, mask, opts.boundary_threshold);

  const SeResult se = standard_errors(f, nm.x);
  fit.cov_unconstrained = se.cov;
  fit.se_available = se.available;
  fit.std_errors = se.available ? se.se : Eigen::VectorXd::Constant(k, kNaN);
  return fit;
}

QuantileResiduals quantile_residuals(const FitResult& fit,
                                     const LossSample& sample) {
  sample.validate();
  const Eigen::Index n = sample.n();
  QuantileResiduals out;
  out.values.resize(n);

  const FamilyOps& ops = family_ops(fit.family);
  constexpr double kClamp = 1e-12;

  auto push = [&](Eigen::Index i, double u) {
    if (u < kClamp) {
      u = kClamp;
      ++out.n_clamped;
    } else if (u > 1.0 - kClamp) {
      u = 1.0 - kClamp;
      ++out.n_clamped;
    }
    out.values[i] = specfun::std_normal_quantile(u);
  };

  if (!fit.is_regression) {
    for (Eigen::Index i = 0; i < n; ++i) {
      push(i, ops.cdf(fit.estimates, sample.losses[i]));
    }
    return out;
  }

  if (fit.family == Family::glmga) {
    const RegressionSpec& spec = fit.reg_spec;
    const RegressionCoefficients c = unpack_coefficients(spec, fit.estimates);
    const Eigen::MatrixXd xs =
        design_matrix(sample, spec.sigma_columns, spec.sigma_intercept);
    const Eigen::MatrixXd xb =
        design_matrix(sample, spec.b_columns, spec.b_intercept);
    const Eigen::VectorXd t1 = xs * c.beta;
    const Eigen::VectorXd t2 = xb * c.alpha;
    const double a = std::exp(c.eta);
    for (Eigen::Index i = 0; i < n; ++i) {
      const GlmgaParams p{std::exp(t1[i]), a, std::exp(t2[i])};
      push(i, glmga::cdf(p, sample.losses[i]));
    }
    return out;
  }

  // Single-link comparator regression.
  const Eigen::MatrixXd x =
      design_matrix(sample, fit.linked_columns, fit.linked_intercept);
  const int kc = static_cast<int>(x.cols());
  int linked_idx = (fit.family == Family::gamma) ? 1 : 0;
  const bool log_link = fit.family != Family::lognormal;
  const Eigen::VectorXd lin = x * fit.estimates.head(kc);
  Eigen::VectorXd params(ops.n_params);
  {
    int j = 0;
    for (int q = 0; q < ops.n_params; ++q) {
      if (q == linked_idx) continue;
      params[q] = std::exp(fit.estimates[kc + j]);
      ++j;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    params[linked_idx] = log_link ? std::exp(lin[i]) : lin[i];
    push(i, ops.cdf(params, sample.losses[i]));
  }
  return out;
}

}  // namespace lossforge
