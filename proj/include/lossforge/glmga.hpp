#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace lossforge {

// Parameters of the generalized log-Moyal gamma family on (0, infinity):
// sigma > 0 controls the tail (extreme value index 2*sigma), a > 0 is the
// mixing gamma shape, b > 0 the mixing gamma rate.
struct GlmgaParams {
  double sigma = 0.0;
  double a = 0.0;
  double b = 0.0;

  // Throws DomainError unless all three are finite and positive.
  void validate() const;
};

namespace glmga {

// First-order Pareto-type tail: S(y) ~ C * y^{-1/(2 sigma)} * (1 + D *
// y^{-1/sigma} + o(y^{-1/sigma})), with extreme value index xi = 2 sigma.
struct TailExpansion {
  double c = 0.0;
  double d = 0.0;
  double xi = 0.0;
};

enum class Side { lower, upper };

// The three exact stochastic representations of the family.  All produce
// the same distribution; two_gamma (a ratio of two gamma variates) is the
// cheapest and is the default everywhere.
enum class SampleMethod { two_gamma, gamma_mixture, half_normal };

double pdf(const GlmgaParams& p, double y);
double log_pdf(const GlmgaParams& p, double y);
double cdf(const GlmgaParams& p, double y);
// 1 - cdf, computed directly so the deep tail keeps relative accuracy.
double survival(const GlmgaParams& p, double y);
double quantile(const GlmgaParams& p, double u);

Eigen::VectorXd sample(const GlmgaParams& p, Eigen::Index n,
                       std::uint64_t seed,
                       SampleMethod method = SampleMethod::two_gamma);

// E(Y^r), defined iff r * sigma < 1/2; NonexistenceError otherwise.
double moment(const GlmgaParams& p, double r);
double mean(const GlmgaParams& p);
// Defined iff sigma < 1/4.
double variance(const GlmgaParams& p);

// E(Y^r | Y <= u) (lower) or E(Y^r | Y > u) (upper).
double incomplete_moment(const GlmgaParams& p, double r, double u, Side side);

// Interior mode; requires a > sigma (otherwise the density is monotone and
// the mode sits at the support boundary -- DomainError).
double mode(const GlmgaParams& p);

TailExpansion tail_expansion(const GlmgaParams& p);

// Value-at-risk (the p-quantile), tail value-at-risk, stop-loss premium
// E[(Y - r)_+], and mean excess E[Y - u | Y > u].  The expectation-based
// measures require sigma < 1/2.
double var_risk(const GlmgaParams& p, double level);
double tvar(const GlmgaParams& p, double level);
double stop_loss_premium(const GlmgaParams& p, double retention);
double mean_excess(const GlmgaParams& p, double u);

// Density of the a -> infinity limit with phi = (2b/a)^sigma held fixed
// (equivalently b = a phi^{1/sigma} / 2): f(y) = phi^{-1/(2 sigma)} /
// (sigma sqrt(pi)) * y^{-(1/(2 sigma)+1)} * exp(-(phi y)^{-1/sigma}).
double limiting_density(double sigma, double phi, double y);

}  // namespace glmga
}  // namespace lossforge
