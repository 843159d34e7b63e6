#include "lossforge/specfun.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "lossforge/errors.hpp"

namespace lossforge::specfun {

namespace {

void require_shape(double s, const char* name) {
  if (!std::isfinite(s) || s < kMinShape) {
    throw DomainError(std::string(name) + " must be finite and >= 1e-8, got " +
                      std::to_string(s));
  }
}

// Continued fraction for the incomplete beta, evaluated by the modified
// Lentz method.  Valid (fast-converging) for x < (m+1)/(m+n+2); the caller
// applies the symmetry switch.
double beta_cf(double m, double n, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = m + n;
  const double qap = m + 1.0;
  const double qam = m - 1.0;

  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;

  for (int i = 1; i <= kMaxIter; ++i) {
    const double i2 = 2.0 * i;
    // Even step.
    double aa = i * (n - i) * x / ((qam + i2) * (m + i2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    // Odd step.
    aa = -(m + i) * (qab + i) * x / ((m + i2) * (qap + i2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw NumericError("incomplete beta continued fraction failed to converge");
}

}  // namespace

double log_gamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError("log_gamma requires x > 0, got " + std::to_string(x));
  }
  return std::lgamma(x);
}

double log_beta(double m, double n) {
  if (!std::isfinite(m) || m <= 0.0 || !std::isfinite(n) || n <= 0.0) {
    throw DomainError("log_beta requires positive arguments");
  }
  return std::lgamma(m) + std::lgamma(n) - std::lgamma(m + n);
}

double reg_inc_beta(double m, double n, double x) {
  require_shape(m, "beta shape m");
  require_shape(n, "beta shape n");
  if (!std::isfinite(x) || x < 0.0 || x > 1.0) {
    throw DomainError("reg_inc_beta requires x in [0,1], got " +
                      std::to_string(x));
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  // log of x^m (1-x)^n / B(m,n); log1p keeps accuracy for small x.
  const double log_front = m * std::log(x) + n * std::log1p(-x) -
                           log_beta(m, n);

  if (x < (m + 1.0) / (m + n + 2.0)) {
    return std::exp(log_front) * beta_cf(m, n, x) / m;
  }
  return 1.0 - std::exp(log_front) * beta_cf(n, m, 1.0 - x) / n;
}

double inv_reg_inc_beta(double m, double n, double u,
                        const SpecFunConfig& cfg) {
  require_shape(m, "beta shape m");
  require_shape(n, "beta shape n");
  if (!std::isfinite(u) || u < 0.0 || u > 1.0) {
    throw DomainError("inv_reg_inc_beta requires u in [0,1], got " +
                      std::to_string(u));
  }
  if (u == 0.0) return 0.0;
  if (u == 1.0) return 1.0;

  // Initial guess: normal-score expansion for m, n >= 1 (Abramowitz &
  // Stegun 26.5.22), crude tail split otherwise.
  double x;
  if (m >= 1.0 && n >= 1.0) {
    const double pp = (u < 0.5) ? u : 1.0 - u;
    const double t = std::sqrt(-2.0 * std::log(pp));
    double z = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) -
               t;
    if (u < 0.5) z = -z;
    const double al = (z * z - 3.0) / 6.0;
    const double h = 2.0 / (1.0 / (2.0 * m - 1.0) + 1.0 / (2.0 * n - 1.0));
    const double w =
        z * std::sqrt(al + h) / h -
        (1.0 / (2.0 * n - 1.0) - 1.0 / (2.0 * m - 1.0)) *
            (al + 5.0 / 6.0 - 2.0 / (3.0 * h));
    x = m / (m + n * std::exp(2.0 * w));
  } else {
    const double lna = std::log(m / (m + n));
    const double lnb = std::log(n / (m + n));
    const double t = std::exp(m * lna) / m;
    const double s = std::exp(n * lnb) / n;
    const double w = t + s;
    if (u < t / w) {
      x = std::pow(m * w * u, 1.0 / m);
    } else {
      x = 1.0 - std::pow(n * w * (1.0 - u), 1.0 / n);
    }
  }
  if (!(x > 0.0)) x = 1e-300;
  if (!(x < 1.0)) x = 1.0 - 1e-16;

  // Safeguarded Newton on a bracket [lo, hi] with I(lo) < u < I(hi).  On
  // the flanks the step is taken in log x (resp. log(1-x)), where I is
  // nearly log-linear, so roots at 1e-300 are reached in a few jumps; a
  // plain step covers the middle.  Steps leaving the bracket fall back to
  // a geometric (flank) or arithmetic (middle) bracket midpoint.
  double lo = 0.0;
  double hi = 1.0;
  const double log_b = log_beta(m, n);
  const double f_tol = std::max(1e-15, cfg.rel_tol * u);

  double x_prev = -1.0;
  double f_prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < cfg.max_iter; ++it) {
    const double f = reg_inc_beta(m, n, x) - u;
    if (std::fabs(f) <= f_tol) return x;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    // Derivative of I in x, assembled in log space.
    const double log_df =
        (m - 1.0) * std::log(x) + (n - 1.0) * std::log1p(-x) - log_b;
    auto clamp_step = [](double w) {
      return std::max(-40.0, std::min(40.0, w));
    };
    double x_new;
    if (x < 0.02) {
      x_new = x * std::exp(clamp_step(-f * std::exp(-log_df) / x));
    } else if (x > 0.98) {
      const double xc = 1.0 - x;
      x_new = 1.0 - xc * std::exp(clamp_step(f * std::exp(-log_df) / xc));
    } else {
      x_new = x - f * std::exp(-log_df);
    }
    if (!(x_new > lo) || !(x_new < hi) || !std::isfinite(x_new)) {
      if (f > 0.0 && hi <= 0.02) {
        // Geometric mean of [lo, x], in logs to dodge underflow.
        x_new = (lo > 0.0) ? std::exp(0.5 * (std::log(lo) + std::log(x)))
                           : x * 1e-4;
      } else if (f < 0.0 && lo >= 0.98) {
        const double xc = 1.0 - x;
        const double hic = 1.0 - hi;
        x_new = (hic > 0.0)
                    ? 1.0 - std::exp(0.5 * (std::log(hic) + std::log(xc)))
                    : 1.0 - xc * 1e-4;
      } else {
        x_new = 0.5 * (lo + hi);
      }
    }
    // Keep iterates strictly inside (0,1): a step can underflow to 0 or
    // round up to 1 when the true root is unrepresentably extreme.
    x_new = std::min(std::max(x_new, std::numeric_limits<double>::denorm_min()),
                     std::nextafter(1.0, 0.0));
    // x_new == x: the root is pinched between adjacent doubles (or against
    // an endpoint); x_new == x_prev: the bracket is two adjacent doubles
    // and the midpoint ping-pongs.  No representable value can do better.
    if (x_new == x) return x;
    if (x_new == x_prev) return (std::fabs(f_prev) <= std::fabs(f)) ? x_prev : x;
    x_prev = x;
    f_prev = f;
    x = x_new;
  }
  throw NumericError("inv_reg_inc_beta failed to converge");
}

double reg_inc_gamma_lower(double a, double x) {
  require_shape(a, "gamma shape a");
  if (!std::isfinite(x) || x < 0.0) {
    throw DomainError("reg_inc_gamma_lower requires x >= 0, got " +
                      std::to_string(x));
  }
  if (x == 0.0) return 0.0;

  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    // Series: P(a,x) = x^a e^{-x} / Gamma(a) * sum_k x^k / (a)_{k+1}.
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-16) {
        return sum * std::exp(-x + a * std::log(x) - gln);
      }
    }
    throw NumericError("incomplete gamma series failed to converge");
  }
  // Continued fraction for the upper function Q(a,x), Lentz method.
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) {
      return 1.0 - std::exp(-x + a * std::log(x) - gln) * h;
    }
  }
  throw NumericError("incomplete gamma continued fraction failed to converge");
}

double inv_reg_inc_gamma_lower(double a, double u, const SpecFunConfig& cfg) {
  require_shape(a, "gamma shape a");
  if (!std::isfinite(u) || u < 0.0 || u >= 1.0) {
    throw DomainError("inv_reg_inc_gamma_lower requires u in [0,1), got " +
                      std::to_string(u));
  }
  if (u == 0.0) return 0.0;

  const double gln = std::lgamma(a);
  // Initial guess: Wilson-Hilferty for a > 1, small-shape split otherwise.
  double x;
  if (a > 1.0) {
    const double pp = (u < 0.5) ? u : 1.0 - u;
    const double t = std::sqrt(-2.0 * std::log(pp));
    double z = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) -
               t;
    if (u < 0.5) z = -z;
    const double w = 1.0 - 1.0 / (9.0 * a) - z / (3.0 * std::sqrt(a));
    x = std::max(1e-3, a * w * w * w);
  } else {
    const double t = 1.0 - a * (0.253 + a * 0.12);
    if (u < t) {
      x = std::pow(u / t, 1.0 / a);
    } else {
      x = 1.0 - std::log1p(-(u - t) / (1.0 - t));
    }
  }
  if (!(x > 0.0) || !std::isfinite(x)) x = 1e-6;

  // Establish an upper bracket, then safeguarded Newton.
  double lo = 0.0;
  double hi = std::max(4.0 * x, a + 10.0);
  for (int i = 0; i < 400 && reg_inc_gamma_lower(a, hi) < u; ++i) hi *= 2.0;
  if (x >= hi) x = 0.5 * hi;

  const double f_tol = std::max(1e-15, cfg.rel_tol * u);
  double x_prev = -1.0;
  double f_prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < cfg.max_iter; ++it) {
    const double f = reg_inc_gamma_lower(a, x) - u;
    if (std::fabs(f) <= f_tol) return x;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double log_df = -x + (a - 1.0) * std::log(x) - gln;
    double x_new;
    if (x < 1e-2 * std::min(1.0, a)) {
      // Log-space step: P is nearly log-linear near 0, where tiny-shape
      // roots (1e-300 and below) live.
      const double w =
          std::max(-40.0, std::min(40.0, -f * std::exp(-log_df) / x));
      x_new = x * std::exp(w);
    } else {
      x_new = x - f * std::exp(-log_df);
    }
    if (!(x_new > lo) || !(x_new < hi) || !std::isfinite(x_new)) {
      if (f > 0.0 && hi <= 1e-2 * std::min(1.0, a)) {
        x_new = (lo > 0.0) ? std::exp(0.5 * (std::log(lo) + std::log(x)))
                           : x * 1e-4;
      } else {
        x_new = 0.5 * (lo + hi);
      }
    }
    if (x_new == x) return x;
    if (x_new == x_prev) return (std::fabs(f_prev) <= std::fabs(f)) ? x_prev : x;
    x_prev = x;
    f_prev = f;
    x = x_new;
  }
  throw NumericError("inv_reg_inc_gamma_lower failed to converge");
}

double erfc(double x) {
  if (!std::isfinite(x)) throw DomainError("erfc requires finite x");
  return std::erfc(x);
}

double std_normal_cdf(double x) {
  if (!std::isfinite(x)) throw DomainError("std_normal_cdf requires finite x");
  return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

double std_normal_quantile(double u) {
  if (!std::isfinite(u) || u <= 0.0 || u >= 1.0) {
    throw DomainError("std_normal_quantile requires u in (0,1), got " +
                      std::to_string(u));
  }
  // Wichura's PPND16: central rational approximation for |u - 1/2| <= 0.425,
  // two tail approximations in r = sqrt(-log(min(u, 1-u))).
  const double q = u - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
              6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
            1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
          1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
    const double den =
        (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
              3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
            5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
          4.2313330701600911252e+1) * r + 1.0);
    return q * num / den;
  }
  double r = (q < 0.0) ? u : 1.0 - u;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
            3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
          4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
          2.05319162663775882187e+0) * r + 1.0);
    val = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
          5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
    val = num / den;
  }
  return (q < 0.0) ? -val : val;
}

double erfc_inv(double u) {
  if (!std::isfinite(u) || u <= 0.0 || u >= 2.0) {
    throw DomainError("erfc_inv requires u in (0,2), got " +
                      std::to_string(u));
  }
  // erfc(x) = u  <=>  x = -Phi^{-1}(u/2) / sqrt(2).
  return -std_normal_quantile(0.5 * u) * 0.7071067811865475244;
}

}  // namespace lossforge::specfun
