#pragma once

namespace lossforge::specfun {

// Tolerances for the iterative inverses below.
struct SpecFunConfig {
  double rel_tol = 1e-12;
  int max_iter = 200;
};

// Shapes below this are rejected: the incomplete beta/gamma machinery loses
// all accuracy long before the underlying function stops existing.
inline constexpr double kMinShape = 1e-8;

// ln Gamma(x), x > 0.
double log_gamma(double x);

// ln B(m, n) = ln Gamma(m) + ln Gamma(n) - ln Gamma(m + n).
double log_beta(double m, double n);

// Regularized incomplete beta I_{m,n}(x) = B(x; m, n) / B(m, n) for
// x in [0,1], m, n >= kMinShape.  Continued fraction (modified Lentz),
// switched to the symmetric complement when x > (m+1)/(m+n+2) so the
// fraction always converges fast; the prefactor is assembled in log space.
double reg_inc_beta(double m, double n, double x);

// Inverse of the above in x for u in [0,1]: Newton from an asymptotic
// initial guess, safeguarded by a maintained bracket; flank steps are
// taken in log space so roots at 1e-300 converge.  Near-degenerate shapes
// put quantiles between adjacent doubles (or between 1-eps and 1); the
// result is then the representable point of the bracketing pair, the best
// double precision admits.
double inv_reg_inc_beta(double m, double n, double u,
                        const SpecFunConfig& cfg = {});

// Lower regularized incomplete gamma P(a, x) = gamma(a, x) / Gamma(a),
// a >= kMinShape, x >= 0.  Series for x < a + 1, continued fraction above.
double reg_inc_gamma_lower(double a, double x);

// Inverse of P(a, .) in x for u in [0, 1).  Same safeguarded Newton scheme.
double inv_reg_inc_gamma_lower(double a, double u,
                               const SpecFunConfig& cfg = {});

// Complementary error function and its inverse (u in (0,2)).
double erfc(double x);
double erfc_inv(double u);

// Standard normal cdf and quantile.  The quantile is Wichura's PPND16
// rational minimax approximation, accurate to ~1e-16 over (0,1).
double std_normal_cdf(double x);
double std_normal_quantile(double u);

}  // namespace lossforge::specfun
