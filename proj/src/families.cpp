#include "lossforge/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lossforge/errors.hpp"
#include "lossforge/gb2.hpp"
#include "lossforge/glmga.hpp"
#include "lossforge/glogm.hpp"
#include "lossforge/specfun.hpp"

namespace lossforge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool pos(double x) { return std::isfinite(x) && x > 0.0; }

double clampd(double x, double lo, double hi) {
  if (!std::isfinite(x)) return lo;
  return std::min(hi, std::max(lo, x));
}

double sorted_median(const Eigen::VectorXd& s) {
  const Eigen::Index n = s.size();
  if (n == 0) throw DomainError("median of empty sample");
  const double h = 0.5 * static_cast<double>(n - 1);
  const Eigen::Index lo = static_cast<Eigen::Index>(h);
  if (lo + 1 >= n) return s[n - 1];
  return s[lo] + (h - lo) * (s[lo + 1] - s[lo]);
}

// ---- packed-parameter adapters -------------------------------------------

GlmgaParams glmga_unpack(const Eigen::VectorXd& v) {
  return GlmgaParams{v[0], v[1], v[2]};
}
GlogMParams glogm_unpack(const Eigen::VectorXd& v) {
  return GlogMParams{v[0], v[1]};
}
Gb2Params gb2_unpack(const Eigen::VectorXd& v) {
  return Gb2Params{v[0], v[1], v[2], v[3]};
}

// ---- fast negative log-likelihoods ---------------------------------------

double glmga_nll(const Eigen::VectorXd& v, const Eigen::VectorXd&,
                 const Eigen::VectorXd& ln_y) {
  const double sigma = v[0], a = v[1], b = v[2];
  if (!pos(sigma) || !pos(a) || !pos(b)) return kInf;
  const double ln_b = std::log(b);
  const double ln_beta = std::lgamma(a) + std::lgamma(0.5) - std::lgamma(a + 0.5);
  const double c0 = a * ln_b - 0.5 * std::numbers::ln2 - std::log(sigma) -
                    ln_beta;
  const double c1 = 0.5 / sigma + 1.0;
  const double inv_sigma = 1.0 / sigma;
  const double ah = a + 0.5;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < ln_y.size(); ++i) {
    const double ly = ln_y[i];
    // ln(y^{-1/sigma}/2 + b) = lnb + log1p(e^d), d the log ratio of terms.
    const double u1 = -ly * inv_sigma - std::numbers::ln2;
    const double d = u1 - ln_b;
    double lse;
    if (d > 36.0) {
      lse = u1;
    } else if (d < -36.0) {
      lse = ln_b;
    } else {
      lse = ln_b + std::log1p(std::exp(d));
    }
    acc += c0 - c1 * ly - ah * lse;
  }
  return std::isfinite(acc) ? -acc : kInf;
}

double glogm_nll(const Eigen::VectorXd& v, const Eigen::VectorXd&,
                 const Eigen::VectorXd& ln_y) {
  const double sigma = v[0], theta = v[1];
  if (!pos(sigma) || !pos(theta)) return kInf;
  const double ln_t2 = std::log(theta) - std::numbers::ln2;
  const double c0 = 0.5 * ln_t2 - 0.5 * std::log(std::numbers::pi) -
                    std::log(sigma);
  const double c1 = 0.5 / sigma + 1.0;
  const double inv_sigma = 1.0 / sigma;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < ln_y.size(); ++i) {
    const double ly = ln_y[i];
    const double ln_arg = ln_t2 - ly * inv_sigma;
    if (ln_arg > 700.0) return kInf;  // density underflows to zero
    acc += c0 - c1 * ly - std::exp(ln_arg);
  }
  return std::isfinite(acc) ? -acc : kInf;
}

double gb2_nll(const Eigen::VectorXd& v, const Eigen::VectorXd&,
               const Eigen::VectorXd& ln_y) {
  const double mu = v[0], p = v[1], nu = v[2], tau = v[3];
  if (!pos(mu) || !std::isfinite(p) || p == 0.0 || !pos(nu) || !pos(tau)) {
    return kInf;
  }
  const double ln_mu = std::log(mu);
  const double c0 = std::log(std::fabs(p)) -
                    (std::lgamma(nu) + std::lgamma(tau) - std::lgamma(nu + tau));
  const double nt = nu + tau;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < ln_y.size(); ++i) {
    const double ly = ln_y[i];
    const double s = p * (ly - ln_mu);
    double sp;  // log(1 + e^s)
    if (s > 36.0) {
      sp = s;
    } else if (s < -36.0) {
      sp = std::exp(s);
    } else {
      sp = std::log1p(std::exp(s));
    }
    acc += c0 - ly + nu * s - nt * sp;
  }
  return std::isfinite(acc) ? -acc : kInf;
}

double lomax_nll(const Eigen::VectorXd& v, const Eigen::VectorXd& y,
                 const Eigen::VectorXd&) {
  const double shape = v[0], scale = v[1];
  if (!pos(shape) || !pos(scale)) return kInf;
  const double c0 = std::log(shape) - std::log(scale);
  const double s1 = shape + 1.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    acc += c0 - s1 * std::log1p(y[i] / scale);
  }
  return std::isfinite(acc) ? -acc : kInf;
}

double loggamma_nll(const Eigen::VectorXd& v, const Eigen::VectorXd&,
                    const Eigen::VectorXd& ln_y) {
  const double shape = v[0], rate = v[1];
  if (!pos(shape) || !pos(rate)) return kInf;
  const double c0 = shape * std::log(rate) - std::lgamma(shape);
  const double r1 = rate + 1.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < ln_y.size(); ++i) {
    const double ly = ln_y[i];
    if (ly <= 0.0) return kInf;  // support is y > 1
    acc += c0 + (shape - 1.0) * std::log(ly) - r1 * ly;
  }
  return std::isfinite(acc) ? -acc : kInf;
}

double frechet_nll(const Eigen::VectorXd& v, const Eigen::VectorXd&,
                   const Eigen::VectorXd& ln_y) {
  const double shape = v[0], scale = v[1];
  if (!pos(shape) || !pos(scale)) return kInf;
  const double ln_b = std::log(scale);
  const double c0 = std::log(shape) + shape * ln_b;
  const double s1 = shape + 1.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < ln_y.size(); ++i) {
    const double e = -shape * (ln_y[i] - ln_b);
    if (e > 700.0) return kInf;  // density underflows near the origin
    acc += c0 - s1 * ln_y[i] - std::exp(e);
  }
  return std::isfinite(acc) ? -acc : kInf;
}

double lognormal_nll(const Eigen::VectorXd& v, const Eigen::VectorXd&,
                     const Eigen::VectorXd& ln_y) {
  const double mu = v[0], sigma = v[1];
  if (!std::isfinite(mu) || !pos(sigma)) return kInf;
  const double c0 = -std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
  const double inv2s2 = 0.5 / (sigma * sigma);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < ln_y.size(); ++i) {
    const double d = ln_y[i] - mu;
    acc += c0 - ln_y[i] - d * d * inv2s2;
  }
  return std::isfinite(acc) ? -acc : kInf;
}

double gamma_nll(const Eigen::VectorXd& v, const Eigen::VectorXd& y,
                 const Eigen::VectorXd& ln_y) {
  const double shape = v[0], scale = v[1];
  if (!pos(shape) || !pos(scale)) return kInf;
  const double c0 = -std::lgamma(shape) - shape * std::log(scale);
  const double inv_scale = 1.0 / scale;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    acc += c0 + (shape - 1.0) * ln_y[i] - y[i] * inv_scale;
  }
  return std::isfinite(acc) ? -acc : kInf;
}

// ---- simple-family pointwise functions -----------------------------------

double lomax_log_pdf(const Eigen::VectorXd& v, double y) {
  if (!pos(y)) throw DomainError("lomax log_pdf requires y > 0");
  if (!pos(v[0]) || !pos(v[1])) throw DomainError("lomax requires shape, scale > 0");
  return std::log(v[0]) - std::log(v[1]) -
         (v[0] + 1.0) * std::log1p(y / v[1]);
}
double lomax_cdf(const Eigen::VectorXd& v, double y) {
  if (!pos(y)) throw DomainError("lomax cdf requires y > 0");
  if (!pos(v[0]) || !pos(v[1])) throw DomainError("lomax requires shape, scale > 0");
  return -std::expm1(-v[0] * std::log1p(y / v[1]));
}
double lomax_quantile(const Eigen::VectorXd& v, double u) {
  if (!std::isfinite(u) || u <= 0.0 || u >= 1.0) {
    throw DomainError("lomax quantile requires u in (0,1)");
  }
  if (!pos(v[0]) || !pos(v[1])) throw DomainError("lomax requires shape, scale > 0");
  return v[1] * std::expm1(-std::log1p(-u) / v[0]);
}

double loggamma_log_pdf(const Eigen::VectorXd& v, double y) {
  if (!pos(y)) throw DomainError("loggamma log_pdf requires y > 0");
  if (!pos(v[0]) || !pos(v[1])) throw DomainError("loggamma requires shape, rate > 0");
  if (y <= 1.0) return -kInf;
  const double ly = std::log(y);
  return v[0] * std::log(v[1]) - std::lgamma(v[0]) +
         (v[0] - 1.0) * std::log(ly) - (v[1] + 1.0) * ly;
}
double loggamma_cdf(const Eigen::VectorXd& v, double y) {
  if (!pos(y)) throw DomainError("loggamma cdf requires y > 0");
  if (!pos(v[0]) || !pos(v[1])) throw DomainError("loggamma requires shape, rate > 0");
  if (y <= 1.0) return 0.0;
  return specfun::reg_inc_gamma_lower(v[0], v[1] * std::log(y));
}
double loggamma_quantile(const Eigen::VectorXd& v, double u) {
  if (!std::isfinite(u) || u <= 0.0 || u >= 1.0) {
    throw DomainError("loggamma quantile requires u in (0,1)");
  }
  if (!pos(v[0]) || !pos(v[1])) throw DomainError("loggamma requires shape, rate > 0");
  return std::exp(specfun::inv_reg_inc_gamma_lower(v[0], u) / v[1]);
}

double frechet_log_pdf(const Eigen::VectorXd& v, double y) {
  if (!pos(y)) throw DomainError("frechet log_pdf requires y > 0");
  if (!pos(v[0]) || !pos(v[1])) throw DomainError("frechet requires shape, scale > 0");
  const double e = -v[0] * (std::log(y) - std::log(v[1]));
  if (e > 700.0) return -kInf;
  return std::log(v[0]) + v[0] * std::log(v[1]) -
         (v[0] + 1.0) * std::log(y) - std::exp(e);
}
double frechet_cdf(const Eigen::VectorXd& v, double y) {
  if (!pos(y)) throw DomainError("frechet cdf requires y > 0");
  if (!pos(v[0]) || !pos(v[1])) throw DomainError("frechet requires shape, scale > 0");
  const double e = -v[0] * (std::log(y) - std::log(v[1]));
  if (e > 700.0) return 0.0;
  return std::exp(-std::exp(e));
}
double frechet_quantile(const Eigen::VectorXd& v, double u) {
  if (!std::isfinite(u) || u <= 0.0 || u >= 1.0) {
    throw DomainError("frechet quantile requires u in (0,1)");
  }
  if (!pos(v[0]) || !pos(v[1])) throw DomainError("frechet requires shape, scale > 0");
  return v[1] * std::exp(-std::log(-std::log(u)) / v[0]);
}

double lognormal_log_pdf(const Eigen::VectorXd& v, double y) {
  if (!pos(y)) throw DomainError("lognormal log_pdf requires y > 0");
  if (!std::isfinite(v[0]) || !pos(v[1])) {
    throw DomainError("lognormal requires finite mu and sigma > 0");
  }
  const double d = (std::log(y) - v[0]) / v[1];
  return -std::log(v[1]) - 0.5 * std::log(2.0 * std::numbers::pi) -
         std::log(y) - 0.5 * d * d;
}
double lognormal_cdf(const Eigen::VectorXd& v, double y) {
  if (!pos(y)) throw DomainError("lognormal cdf requires y > 0");
  if (!std::isfinite(v[0]) || !pos(v[1])) {
    throw DomainError("lognormal requires finite mu and sigma > 0");
  }
  return specfun::std_normal_cdf((std::log(y) - v[0]) / v[1]);
}
double lognormal_quantile(const Eigen::VectorXd& v, double u) {
  if (!std::isfinite(v[0]) || !pos(v[1])) {
    throw DomainError("lognormal requires finite mu and sigma > 0");
  }
  return std::exp(v[0] + v[1] * specfun::std_normal_quantile(u));
}

double gamma_log_pdf(const Eigen::VectorXd& v, double y) {
  if (!pos(y)) throw DomainError("gamma log_pdf requires y > 0");
  if (!pos(v[0]) || !pos(v[1])) throw DomainError("gamma requires shape, scale > 0");
  return -std::lgamma(v[0]) - v[0] * std::log(v[1]) +
         (v[0] - 1.0) * std::log(y) - y / v[1];
}
double gamma_cdf(const Eigen::VectorXd& v, double y) {
  if (!pos(y)) throw DomainError("gamma cdf requires y > 0");
  if (!pos(v[0]) || !pos(v[1])) throw DomainError("gamma requires shape, scale > 0");
  return specfun::reg_inc_gamma_lower(v[0], y / v[1]);
}
double gamma_quantile(const Eigen::VectorXd& v, double u) {
  if (!pos(v[0]) || !pos(v[1])) throw DomainError("gamma requires shape, scale > 0");
  return v[1] * specfun::inv_reg_inc_gamma_lower(v[0], u);
}

// ---- initial estimates -----------------------------------------------------

Eigen::VectorXd glmga_init(const Eigen::VectorXd& s) {
  const double xi = hill_index(s);
  const double sigma0 = clampd(0.5 * xi, 0.05, 2.0);
  const double med = sorted_median(s);
  // Match the median with a = 1, where the beta inverse is exact:
  // I_{1/2,1}(x) = sqrt(x), so the median's v is 1/4 and
  // b = 1.5 * med^{-1/sigma}.
  const double b0 = clampd(1.5 * std::exp(-std::log(med) / sigma0), 1e-8, 1e8);
  return Eigen::Vector3d{sigma0, 1.0, b0};
}

Eigen::VectorXd glogm_init(const Eigen::VectorXd& s) {
  const double xi = hill_index(s);
  const double sigma0 = clampd(0.5 * xi, 0.05, 2.0);
  const double med = sorted_median(s);
  const double ei = specfun::erfc_inv(0.5);
  const double theta0 =
      clampd(2.0 * ei * ei * std::exp(std::log(med) / sigma0), 1e-8, 1e8);
  return Eigen::Vector2d{sigma0, theta0};
}

Eigen::VectorXd gb2_init(const Eigen::VectorXd& s) {
  const double xi = hill_index(s);
  const double p0 = 2.0;
  const double tau0 = clampd(1.0 / (p0 * xi), 0.1, 20.0);
  const double mu0 = clampd(sorted_median(s), 1e-8, 1e12);
  Eigen::VectorXd v(4);
  v << mu0, p0, 1.0, tau0;
  return v;
}

Eigen::VectorXd lomax_init(const Eigen::VectorXd& s) {
  const double xi = hill_index(s);
  const double shape0 = clampd(1.0 / xi, 0.2, 20.0);
  const double med = sorted_median(s);
  const double scale0 =
      clampd(med / std::expm1(std::numbers::ln2 / shape0), 1e-8, 1e12);
  return Eigen::Vector2d{shape0, scale0};
}

Eigen::VectorXd loggamma_init(const Eigen::VectorXd& s) {
  // Moment-match ln Y ~ Gamma(shape, rate); clamp logs away from the y <= 1
  // boundary so a few small observations cannot produce garbage starts.
  const Eigen::Index n = s.size();
  double m = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) m += std::max(std::log(s[i]), 1e-6);
  m /= static_cast<double>(n);
  double v = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = std::max(std::log(s[i]), 1e-6) - m;
    v += d * d;
  }
  v = std::max(v / std::max<double>(1, n - 1), 1e-12);
  return Eigen::Vector2d{clampd(m * m / v, 0.05, 1e4),
                         clampd(m / v, 1e-4, 1e4)};
}

Eigen::VectorXd frechet_init(const Eigen::VectorXd& s) {
  const double xi = hill_index(s);
  const double shape0 = clampd(1.0 / xi, 0.2, 50.0);
  const double med = sorted_median(s);
  const double scale0 =
      clampd(med * std::exp(std::log(std::numbers::ln2) / shape0), 1e-8, 1e12);
  return Eigen::Vector2d{shape0, scale0};
}

Eigen::VectorXd lognormal_init(const Eigen::VectorXd& s) {
  const Eigen::Index n = s.size();
  double m = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) m += std::log(s[i]);
  m /= static_cast<double>(n);
  double v = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = std::log(s[i]) - m;
    v += d * d;
  }
  v /= std::max<double>(1, n - 1);
  return Eigen::Vector2d{m, std::max(std::sqrt(v), 1e-3)};
}

Eigen::VectorXd gamma_init(const Eigen::VectorXd& s) {
  const double m = s.mean();
  double v = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double d = s[i] - m;
    v += d * d;
  }
  v = std::max(v / std::max<double>(1, s.size() - 1), 1e-12);
  return Eigen::Vector2d{clampd(m * m / v, 1e-3, 1e6),
                         clampd(v / m, 1e-12, 1e12)};
}

// ---- transforms ------------------------------------------------------------

Eigen::VectorXd log_all(const Eigen::VectorXd& v) {
  return v.array().log().matrix();
}
Eigen::VectorXd exp_all(const Eigen::VectorXd& t) {
  return t.array().exp().matrix();
}
// Lognormal: location is already unconstrained.
Eigen::VectorXd lognormal_to_u(const Eigen::VectorXd& v) {
  return Eigen::Vector2d{v[0], std::log(v[1])};
}
Eigen::VectorXd lognormal_from_u(const Eigen::VectorXd& t) {
  return Eigen::Vector2d{t[0], std::exp(t[1])};
}

const FamilyOps kOpsTable[] = {
    {Family::glmga,
     3,
     {"sigma", "a", "b"},
     [](const Eigen::VectorXd& v, double y) {
       return glmga::log_pdf(glmga_unpack(v), y);
     },
     [](const Eigen::VectorXd& v, double y) {
       return glmga::cdf(glmga_unpack(v), y);
     },
     [](const Eigen::VectorXd& v, double u) {
       return glmga::quantile(glmga_unpack(v), u);
     },
     glmga_nll, glmga_init, log_all, exp_all},
    {Family::glogm,
     2,
     {"sigma", "theta"},
     [](const Eigen::VectorXd& v, double y) {
       return glogm::log_pdf(glogm_unpack(v), y);
     },
     [](const Eigen::VectorXd& v, double y) {
       return glogm::cdf(glogm_unpack(v), y);
     },
     [](const Eigen::VectorXd& v, double u) {
       return glogm::quantile(glogm_unpack(v), u);
     },
     glogm_nll, glogm_init, log_all, exp_all},
    {Family::gb2,
     4,
     {"mu", "p", "nu", "tau"},
     [](const Eigen::VectorXd& v, double y) {
       return gb2::log_pdf(gb2_unpack(v), y);
     },
     [](const Eigen::VectorXd& v, double y) {
       return gb2::cdf(gb2_unpack(v), y);
     },
     [](const Eigen::VectorXd& v, double u) {
       return gb2::quantile(gb2_unpack(v), u);
     },
     gb2_nll, gb2_init, log_all, exp_all},
    {Family::lomax,
     2,
     {"shape", "scale"},
     lomax_log_pdf, lomax_cdf, lomax_quantile,
     lomax_nll, lomax_init, log_all, exp_all},
    {Family::loggamma,
     2,
     {"shape", "rate"},
     loggamma_log_pdf, loggamma_cdf, loggamma_quantile,
     loggamma_nll, loggamma_init, log_all, exp_all},
    {Family::frechet,
     2,
     {"shape", "scale"},
     frechet_log_pdf, frechet_cdf, frechet_quantile,
     frechet_nll, frechet_init, log_all, exp_all},
    {Family::lognormal,
     2,
     {"mu", "sigma"},
     lognormal_log_pdf, lognormal_cdf, lognormal_quantile,
     lognormal_nll, lognormal_init, lognormal_to_u, lognormal_from_u},
    {Family::gamma,
     2,
     {"shape", "scale"},
     gamma_log_pdf, gamma_cdf, gamma_quantile,
     gamma_nll, gamma_init, log_all, exp_all},
};

}  // namespace

Family family_from_string(const std::string& name) {
  for (const FamilyOps& ops : kOpsTable) {
    if (name == family_name(ops.family)) return ops.family;
  }
  throw ConfigError("unknown family '" + name +
                    "' (expected one of: glmga glogm gb2 lomax loggamma "
                    "frechet lognormal gamma)");
}

const char* family_name(Family f) {
  switch (f) {
    case Family::glmga: return "glmga";
    case Family::glogm: return "glogm";
    case Family::gb2: return "gb2";
    case Family::lomax: return "lomax";
    case Family::loggamma: return "loggamma";
    case Family::frechet: return "frechet";
    case Family::lognormal: return "lognormal";
    case Family::gamma: return "gamma";
  }
  throw ConfigError("invalid family enum value");
}

const std::vector<Family>& all_families() {
  static const std::vector<Family> v = {
      Family::glmga,  Family::glogm,   Family::gb2,       Family::lomax,
      Family::loggamma, Family::frechet, Family::lognormal, Family::gamma};
  return v;
}

const FamilyOps& family_ops(Family f) {
  for (const FamilyOps& ops : kOpsTable) {
    if (ops.family == f) return ops;
  }
  throw ConfigError("invalid family enum value");
}

double hill_index(const Eigen::VectorXd& sorted) {
  const Eigen::Index n = sorted.size();
  if (n < 10) return 0.5;
  const Eigen::Index k = std::max<Eigen::Index>(5, n / 10);
  const double ln_thresh = std::log(sorted[n - 1 - k]);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    acc += std::log(sorted[n - 1 - i]) - ln_thresh;
  }
  const double xi = acc / static_cast<double>(k);
  return (std::isfinite(xi) && xi > 1e-3) ? xi : 0.5;
}

}  // namespace lossforge
