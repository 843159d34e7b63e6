#include "lossforge/glogm.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lossforge/errors.hpp"
#include "lossforge/rng.hpp"
#include "lossforge/specfun.hpp"

namespace lossforge {

void GlogMParams::validate() const {
  if (!std::isfinite(sigma) || sigma <= 0.0 || !std::isfinite(theta) ||
      theta <= 0.0) {
    throw DomainError("GlogMParams requires finite sigma, theta > 0");
  }
}

namespace glogm {

namespace {

void require_loss(double y, const char* who) {
  if (!std::isfinite(y) || y <= 0.0) {
    throw DomainError(std::string(who) + " requires y > 0");
  }
}

}  // namespace

double log_pdf(const GlogMParams& p, double y) {
  p.validate();
  require_loss(y, "log_pdf");
  const double ln_y = std::log(y);
  // (theta/2) y^{-1/sigma}, in log form so tiny y degrades to -inf cleanly.
  const double ln_arg =
      std::log(p.theta) - std::numbers::ln2 - ln_y / p.sigma;
  const double tail = (ln_arg > 700.0)
                          ? std::numeric_limits<double>::infinity()
                          : std::exp(ln_arg);
  return 0.5 * (std::log(p.theta) - std::numbers::ln2) -
         0.5 * std::log(std::numbers::pi) - std::log(p.sigma) -
         (0.5 / p.sigma + 1.0) * ln_y - tail;
}

double pdf(const GlogMParams& p, double y) { return std::exp(log_pdf(p, y)); }

double cdf(const GlogMParams& p, double y) {
  p.validate();
  require_loss(y, "cdf");
  // F(y) = erfc( sqrt(theta/2) y^{-1/(2 sigma)} ).
  const double s = std::exp(0.5 * (std::log(p.theta) - std::numbers::ln2) -
                            std::log(y) / (2.0 * p.sigma));
  return specfun::erfc(s);
}

double quantile(const GlogMParams& p, double u) {
  p.validate();
  if (!std::isfinite(u) || u <= 0.0 || u >= 1.0) {
    throw DomainError("quantile requires u in (0,1)");
  }
  const double s = specfun::erfc_inv(u);
  // y = (theta / (2 s^2))^sigma.
  return std::exp(p.sigma * (std::log(p.theta) - std::numbers::ln2 -
                             2.0 * std::log(s)));
}

Eigen::VectorXd sample(const GlogMParams& p, Eigen::Index n,
                       std::uint64_t seed) {
  p.validate();
  if (n < 0) throw DomainError("sample requires n >= 0");
  Eigen::VectorXd out(n);
  Rng rng(seed);
  // Y = (theta / (2 G))^sigma with G ~ Gamma(1/2, 1).
  const double ln_t2 = std::log(p.theta) - std::numbers::ln2;
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i] = std::exp(p.sigma * (ln_t2 - std::log(rng.gamma(0.5))));
  }
  return out;
}

double moment(const GlogMParams& p, double r) {
  p.validate();
  if (!std::isfinite(r) || r < 0.0) throw DomainError("moment requires r >= 0");
  if (r == 0.0) return 1.0;
  if (!(r * p.sigma < 0.5)) {
    throw NonexistenceError("GlogM moment does not exist: r*sigma >= 1/2");
  }
  // E(Y^r) = (theta/2)^{r sigma} Gamma(1/2 - r sigma) / Gamma(1/2).
  return std::exp(r * p.sigma * (std::log(p.theta) - std::numbers::ln2) +
                  specfun::log_gamma(0.5 - r * p.sigma) -
                  specfun::log_gamma(0.5));
}

double display_mu(const GlogMParams& p) {
  p.validate();
  return std::exp(p.sigma * (std::log(p.theta) - std::numbers::ln2));
}

}  // namespace glogm
}  // namespace lossforge
