#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace lossforge {

// Generalized beta of the second kind: scale mu > 0, power p != 0, shapes
// nu, tau > 0.  Density |p| y^{p nu - 1} mu^{p tau} / (B(nu,tau)
// (y^p + mu^p)^{nu+tau}).  The GLMGA family with parameters (sigma, a, b)
// is the slice (mu, p, nu, tau) = ((2b)^{-sigma}, -1/sigma, 1/2, a).
struct Gb2Params {
  double mu = 0.0;
  double p = 0.0;
  double nu = 0.0;
  double tau = 0.0;

  void validate() const;
};

namespace gb2 {

double pdf(const Gb2Params& p, double y);
double log_pdf(const Gb2Params& p, double y);
double cdf(const Gb2Params& p, double y);
double quantile(const Gb2Params& p, double u);
Eigen::VectorXd sample(const Gb2Params& p, Eigen::Index n, std::uint64_t seed);

// The mirror image (mu, -p, tau, nu) describes the same distribution; fits
// can therefore restrict to p > 0 without loss.
Gb2Params mirrored(const Gb2Params& p);

}  // namespace gb2
}  // namespace lossforge
