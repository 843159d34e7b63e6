#pragma once

#include <cstdint>
#include <random>

namespace lossforge {

// Deterministic random source.  All stochastic code in the library draws
// through this class so that a run is reproducible from its seed alone,
// across platforms and standard-library versions.  std::mt19937_64 has a
// portable, fully specified output sequence; the variate transforms below
// are pinned here instead of using std::*_distribution, whose algorithms
// are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on (0,1), never returning an endpoint: take the top 53 bits and
  // centre them in the cell, ((k + 0.5) / 2^53 with k in [0, 2^53)).
  double uniform() {
    const std::uint64_t k = engine_() >> 11;
    return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via the inverse cdf applied to uniform().  Slower than
  // ziggurat-style rejection but branch-free in distribution: the draw
  // consumes exactly one engine step, which keeps sample streams aligned.
  double normal();

  // Gamma(shape, 1) by Marsaglia-Tsang squeeze (shape >= 1), with the
  // standard power boost for shape < 1.  Consumes a variable number of
  // engine steps.
  double gamma(double shape);

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Mixes (master, stream, index) into an independent child seed.  Used to
// give every replicate of a simulation or bootstrap its own Rng so that
// results do not depend on scheduling or on how many replicates ran before.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t index);

}  // namespace lossforge
