#include "lossforge/rng.hpp"

#include <cmath>

#include "lossforge/errors.hpp"
#include "lossforge/specfun.hpp"

namespace lossforge {

double Rng::normal() { return specfun::std_normal_quantile(uniform()); }

double Rng::gamma(double shape) {
  if (!std::isfinite(shape) || shape <= 0.0) {
    throw DomainError("gamma variate requires shape > 0");
  }
  if (shape < 1.0) {
    // Boost: if G ~ Gamma(shape+1), U uniform, then G * U^{1/shape} has
    // shape `shape`.
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  // Marsaglia-Tsang: squeeze on the cube of a shifted normal.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / (3.0 * std::sqrt(d));
  for (;;) {
    double x;
    double v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t index) {
  // splitmix64 finalizer applied to a combination of the three inputs;
  // passes through distinct (stream, index) pairs to distinct states.
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1) +
                    0xbf58476d1ce4e5b9ULL * (index + 1);
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace lossforge
