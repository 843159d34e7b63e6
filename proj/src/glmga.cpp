#include "lossforge/glmga.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lossforge/errors.hpp"
#include "lossforge/rng.hpp"
#include "lossforge/specfun.hpp"

namespace lossforge {

void GlmgaParams::validate() const {
  if (!std::isfinite(sigma) || sigma <= 0.0 || !std::isfinite(a) || a <= 0.0 ||
      !std::isfinite(b) || b <= 0.0) {
    throw DomainError("GlmgaParams requires finite sigma, a, b > 0; got "
                      "sigma=" + std::to_string(sigma) +
                      " a=" + std::to_string(a) + " b=" + std::to_string(b));
  }
}

namespace glmga {

namespace {

void require_loss(double y, const char* who) {
  if (!std::isfinite(y) || y <= 0.0) {
    throw DomainError(std::string(who) + " requires y > 0, got " +
                      std::to_string(y));
  }
}

// The cdf routes everything through v(y) = z/(z + 2b) with z = y^{-1/sigma}:
// survival S(y) = I_{1/2, a}(v).  t is the logit of v; sigmoid(t) and
// sigmoid(-t) give v and 1 - v, each with full relative accuracy on its
// small side.
double logit_v(const GlmgaParams& p, double y) {
  return -std::log(y) / p.sigma - std::log(2.0 * p.b);
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

double log_pdf(const GlmgaParams& p, double y) {
  p.validate();
  require_loss(y, "log_pdf");
  const double ln_y = std::log(y);
  const double ln_b = std::log(p.b);
  // ln(y^{-1/sigma}/2 + b) by log-sum-exp, so neither term can overflow.
  const double u1 = -std::numbers::ln2 - ln_y / p.sigma;
  const double m = std::max(u1, ln_b);
  const double lse = m + std::log(std::exp(u1 - m) + std::exp(ln_b - m));
  return p.a * ln_b - 0.5 * std::numbers::ln2 - std::log(p.sigma) -
         specfun::log_beta(p.a, 0.5) - (0.5 / p.sigma + 1.0) * ln_y -
         (p.a + 0.5) * lse;
}

double pdf(const GlmgaParams& p, double y) { return std::exp(log_pdf(p, y)); }

double cdf(const GlmgaParams& p, double y) {
  p.validate();
  require_loss(y, "cdf");
  const double t = logit_v(p, y);
  if (t >= 0.0) {
    // Small y: F = I_{a,1/2}(1 - v), with 1 - v computed stably.
    return specfun::reg_inc_beta(p.a, 0.5, sigmoid(-t));
  }
  return 1.0 - specfun::reg_inc_beta(0.5, p.a, sigmoid(t));
}

double survival(const GlmgaParams& p, double y) {
  p.validate();
  require_loss(y, "survival");
  const double t = logit_v(p, y);
  if (t >= 0.0) {
    return 1.0 - specfun::reg_inc_beta(p.a, 0.5, sigmoid(-t));
  }
  return specfun::reg_inc_beta(0.5, p.a, sigmoid(t));
}

double quantile(const GlmgaParams& p, double u) {
  p.validate();
  if (!std::isfinite(u) || u <= 0.0 || u >= 1.0) {
    throw DomainError("quantile requires u in (0,1), got " +
                      std::to_string(u));
  }
  // Invert S(y) = I_{1/2,a}(v): v = I^{-1}_{1/2,a}(1-u), then
  // y = (2b)^{-sigma} * (v/(1-v))^{-sigma}, assembled in log space.
  const double v = specfun::inv_reg_inc_beta(0.5, p.a, 1.0 - u);
  if (v <= 0.0 || v >= 1.0) {
    throw NumericError("quantile: beta inverse hit the boundary");
  }
  return std::exp(-p.sigma *
                  (std::log(2.0 * p.b) + std::log(v) - std::log1p(-v)));
}

Eigen::VectorXd sample(const GlmgaParams& p, Eigen::Index n,
                       std::uint64_t seed, SampleMethod method) {
  p.validate();
  if (n < 0) throw DomainError("sample requires n >= 0");
  Eigen::VectorXd out(n);
  Rng rng(seed);
  const double ln_2b = std::log(2.0 * p.b);
  switch (method) {
    case SampleMethod::two_gamma:
      // Y = (G_a / (2 b G_h))^sigma with G_h ~ Gamma(1/2), G_a ~ Gamma(a).
      for (Eigen::Index i = 0; i < n; ++i) {
        const double gh = rng.gamma(0.5);
        const double ga = rng.gamma(p.a);
        out[i] = std::exp(p.sigma * (std::log(ga) - ln_2b - std::log(gh)));
      }
      break;
    case SampleMethod::gamma_mixture:
      // theta ~ Gamma(a, rate b), then Y | theta = (theta / (2 G_h))^sigma.
      for (Eigen::Index i = 0; i < n; ++i) {
        const double theta = rng.gamma(p.a) / p.b;
        const double gh = rng.gamma(0.5);
        out[i] = std::exp(
            p.sigma * (std::log(theta) - std::numbers::ln2 - std::log(gh)));
      }
      break;
    case SampleMethod::half_normal:
      // Y = (G_a / (b X^2))^sigma with X ~ |N(0,1)|; X^2 ~ 2 Gamma(1/2).
      for (Eigen::Index i = 0; i < n; ++i) {
        const double x = std::fabs(rng.normal());
        const double ga = rng.gamma(p.a);
        out[i] = std::exp(p.sigma * (std::log(ga) - std::log(p.b) -
                                     2.0 * std::log(x)));
      }
      break;
  }
  return out;
}

double moment(const GlmgaParams& p, double r) {
  p.validate();
  if (!std::isfinite(r) || r < 0.0) {
    throw DomainError("moment requires r >= 0");
  }
  if (r == 0.0) return 1.0;
  if (!(r * p.sigma < 0.5)) {
    throw NonexistenceError("E(Y^" + std::to_string(r) +
                            ") does not exist: r*sigma >= 1/2");
  }
  // E(Y^r) = (2b)^{-r sigma} B(1/2 - r sigma, a + r sigma) / B(1/2, a).
  return std::exp(-p.sigma * r * std::log(2.0 * p.b) +
                  specfun::log_beta(0.5 - r * p.sigma, p.a + r * p.sigma) -
                  specfun::log_beta(0.5, p.a));
}

double mean(const GlmgaParams& p) { return moment(p, 1.0); }

double variance(const GlmgaParams& p) {
  const double m2 = moment(p, 2.0);  // throws unless sigma < 1/4
  const double m1 = moment(p, 1.0);
  return m2 - m1 * m1;
}

double incomplete_moment(const GlmgaParams& p, double r, double u, Side side) {
  p.validate();
  require_loss(u, "incomplete_moment");
  if (!std::isfinite(r) || r <= 0.0) {
    throw DomainError("incomplete_moment requires r > 0");
  }
  if (!(r * p.sigma < 0.5)) {
    throw NonexistenceError("incomplete moment of order " + std::to_string(r) +
                            " does not exist: r*sigma >= 1/2");
  }
  const double m = 0.5 - r * p.sigma;
  const double nn = p.a + r * p.sigma;
  const double ey_r = moment(p, r);
  const double t = logit_v(p, u);
  if (side == Side::upper) {
    // Both incomplete betas evaluated at v; their tiny-v regime is the deep
    // tail, where each retains relative accuracy.
    const double v = sigmoid(t);
    return ey_r * specfun::reg_inc_beta(m, nn, v) /
           specfun::reg_inc_beta(0.5, p.a, v);
  }
  // Lower side via the symmetric complements at 1 - v.
  const double vc = sigmoid(-t);
  return ey_r * specfun::reg_inc_beta(nn, m, vc) /
         specfun::reg_inc_beta(p.a, 0.5, vc);
}

double mode(const GlmgaParams& p) {
  p.validate();
  if (!(p.a > p.sigma)) {
    throw DomainError(
        "mode: requires a > sigma (density is monotone otherwise)");
  }
  // Stationary point of log f: y0 = (b (1 + 2 sigma)/(a - sigma))^{-sigma}.
  return std::exp(-p.sigma *
                  std::log(p.b * (1.0 + 2.0 * p.sigma) / (p.a - p.sigma)));
}

TailExpansion tail_expansion(const GlmgaParams& p) {
  p.validate();
  TailExpansion t;
  t.c = 2.0 * std::exp(-0.5 * std::log(2.0 * p.b) -
                       specfun::log_beta(p.a, 0.5));
  t.d = -(2.0 * p.a + 1.0) / (12.0 * p.b);
  t.xi = 2.0 * p.sigma;
  return t;
}

double var_risk(const GlmgaParams& p, double level) {
  return quantile(p, level);
}

double tvar(const GlmgaParams& p, double level) {
  p.validate();
  if (!std::isfinite(level) || level <= 0.0 || level >= 1.0) {
    throw DomainError("tvar requires level in (0,1)");
  }
  if (!(p.sigma < 0.5)) {
    throw NonexistenceError("tvar does not exist: sigma >= 1/2");
  }
  // TVaR_p = E(Y) I_{1/2-sigma, a+sigma}(v) / (1-p) with v the beta inverse
  // that defines the p-quantile.
  const double v = specfun::inv_reg_inc_beta(0.5, p.a, 1.0 - level);
  return mean(p) * specfun::reg_inc_beta(0.5 - p.sigma, p.a + p.sigma, v) /
         (1.0 - level);
}

double stop_loss_premium(const GlmgaParams& p, double retention) {
  p.validate();
  require_loss(retention, "stop_loss_premium");
  if (!(p.sigma < 0.5)) {
    throw NonexistenceError("stop-loss premium does not exist: sigma >= 1/2");
  }
  // E[(Y-R)_+] = E(Y) I_{1/2-sigma, a+sigma}(v_R) - R I_{1/2, a}(v_R).
  const double v = sigmoid(logit_v(p, retention));
  const double val =
      mean(p) * specfun::reg_inc_beta(0.5 - p.sigma, p.a + p.sigma, v) -
      retention * specfun::reg_inc_beta(0.5, p.a, v);
  return std::max(0.0, val);
}

double mean_excess(const GlmgaParams& p, double u) {
  p.validate();
  require_loss(u, "mean_excess");
  if (!(p.sigma < 0.5)) {
    throw NonexistenceError("mean excess does not exist: sigma >= 1/2");
  }
  const double v = sigmoid(logit_v(p, u));
  return mean(p) * specfun::reg_inc_beta(0.5 - p.sigma, p.a + p.sigma, v) /
             specfun::reg_inc_beta(0.5, p.a, v) -
         u;
}

double limiting_density(double sigma, double phi, double y) {
  if (!std::isfinite(sigma) || sigma <= 0.0 || !std::isfinite(phi) ||
      phi <= 0.0) {
    throw DomainError("limiting_density requires sigma, phi > 0");
  }
  require_loss(y, "limiting_density");
  const double ln_py = std::log(phi) + std::log(y);
  const double z = -ln_py / sigma;  // ln((phi y)^{-1/sigma})
  const double log_f = -std::log(sigma) -
                       0.5 * std::log(std::numbers::pi) -
                       (0.5 / sigma) * std::log(phi) -
                       (0.5 / sigma + 1.0) * std::log(y) -
                       ((z > 700.0) ? std::numeric_limits<double>::infinity()
                                    : std::exp(z));
  return std::exp(log_f);
}

}  // namespace glmga
}  // namespace lossforge
