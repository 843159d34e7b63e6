#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace lossforge {

// Generalized log-Moyal distribution, parameterized by tail parameter
// sigma > 0 and scale-like theta > 0 (theta = mu^{1/sigma} in the location
// form; the GLMGA family is this distribution with theta given a gamma
// mixing law).
struct GlogMParams {
  double sigma = 0.0;
  double theta = 0.0;

  void validate() const;
};

namespace glogm {

double pdf(const GlogMParams& p, double y);
double log_pdf(const GlogMParams& p, double y);
double cdf(const GlogMParams& p, double y);
double quantile(const GlogMParams& p, double u);
Eigen::VectorXd sample(const GlogMParams& p, Eigen::Index n,
                       std::uint64_t seed);

// E(Y^r), defined iff r * sigma < 1/2.
double moment(const GlogMParams& p, double r);

// The scale parameter in location form, mu = (theta/2)^sigma.
double display_mu(const GlogMParams& p);

}  // namespace glogm
}  // namespace lossforge
