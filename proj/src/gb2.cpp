#include "lossforge/gb2.hpp"

#include <cmath>
#include <string>

#include "lossforge/errors.hpp"
#include "lossforge/rng.hpp"
#include "lossforge/specfun.hpp"

namespace lossforge {

void Gb2Params::validate() const {
  if (!std::isfinite(mu) || mu <= 0.0 || !std::isfinite(p) || p == 0.0 ||
      !std::isfinite(nu) || nu <= 0.0 || !std::isfinite(tau) || tau <= 0.0) {
    throw DomainError("Gb2Params requires mu, nu, tau > 0 and p != 0");
  }
}

namespace gb2 {

namespace {

void require_loss(double y, const char* who) {
  if (!std::isfinite(y) || y <= 0.0) {
    throw DomainError(std::string(who) + " requires y > 0");
  }
}

// log(1 + e^s) without overflow.
double softplus(double s) {
  if (s > 36.0) return s;
  if (s < -36.0) return std::exp(s);
  return std::log1p(std::exp(s));
}

double sigmoid(double s) {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

}  // namespace

double log_pdf(const Gb2Params& q, double y) {
  q.validate();
  require_loss(y, "log_pdf");
  // With s = p (ln y - ln mu):  ln f = ln|p| - ln B(nu,tau) - ln y
  //                                    + nu s - (nu + tau) ln(1 + e^s).
  const double s = q.p * (std::log(y) - std::log(q.mu));
  return std::log(std::fabs(q.p)) - specfun::log_beta(q.nu, q.tau) -
         std::log(y) + q.nu * s - (q.nu + q.tau) * softplus(s);
}

double pdf(const Gb2Params& q, double y) { return std::exp(log_pdf(q, y)); }

double cdf(const Gb2Params& q, double y) {
  q.validate();
  require_loss(y, "cdf");
  // w = (y/mu)^p / (1 + (y/mu)^p) = sigmoid(s); F = I_{nu,tau}(w) for p > 0,
  // its reflection for p < 0.  Evaluate whichever of w, 1-w is small
  // directly so both tails keep relative accuracy.
  const double s = q.p * (std::log(y) - std::log(q.mu));
  if (q.p > 0.0) {
    return (s <= 0.0) ? specfun::reg_inc_beta(q.nu, q.tau, sigmoid(s))
                      : 1.0 - specfun::reg_inc_beta(q.tau, q.nu, sigmoid(-s));
  }
  return (s <= 0.0) ? 1.0 - specfun::reg_inc_beta(q.nu, q.tau, sigmoid(s))
                    : specfun::reg_inc_beta(q.tau, q.nu, sigmoid(-s));
}

double quantile(const Gb2Params& q, double u) {
  q.validate();
  if (!std::isfinite(u) || u <= 0.0 || u >= 1.0) {
    throw DomainError("quantile requires u in (0,1)");
  }
  const double w = (q.p > 0.0) ? specfun::inv_reg_inc_beta(q.nu, q.tau, u)
                               : specfun::inv_reg_inc_beta(q.nu, q.tau, 1.0 - u);
  if (w <= 0.0 || w >= 1.0) {
    throw NumericError("gb2 quantile: beta inverse hit the boundary");
  }
  // y = mu (w/(1-w))^{1/p}.
  return std::exp(std::log(q.mu) +
                  (std::log(w) - std::log1p(-w)) / q.p);
}

Eigen::VectorXd sample(const Gb2Params& q, Eigen::Index n,
                       std::uint64_t seed) {
  q.validate();
  if (n < 0) throw DomainError("sample requires n >= 0");
  Eigen::VectorXd out(n);
  Rng rng(seed);
  // Ratio-of-gammas representation of the beta prime core:
  // y = mu (G_nu / G_tau)^{1/p}.
  for (Eigen::Index i = 0; i < n; ++i) {
    const double gn = rng.gamma(q.nu);
    const double gt = rng.gamma(q.tau);
    out[i] = std::exp(std::log(q.mu) +
                      (std::log(gn) - std::log(gt)) / q.p);
  }
  return out;
}

Gb2Params mirrored(const Gb2Params& q) {
  return Gb2Params{q.mu, -q.p, q.tau, q.nu};
}

}  // namespace gb2
}  // namespace lossforge
