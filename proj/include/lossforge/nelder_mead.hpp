#pragma once

#include <Eigen/Dense>
#include <functional>

namespace lossforge {

struct NelderMeadOptions {
  // Initial vertex displacement along axis i: step * max(1, |x0_i|).
  double initial_step = 0.1;
  // Converged when the simplex diameter relative to max(1, |x_best|) falls
  // below this.
  double rel_tol = 1e-8;
  // Function-evaluation cap per run (scaled by dimension inside).
  int max_evals_per_run = 800;
  // After a run converges (or stalls) the search restarts from the best
  // point with a fresh full-size simplex, up to this many times; restarts
  // stop early once two consecutive runs agree.
  int max_restarts = 5;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  bool converged = false;
  int n_restarts_used = 0;
  long n_evals = 0;
  // Relative diameter of the final simplex, the convergence measure.
  double final_simplex_size = 0.0;
};

// Derivative-free simplex minimization (reflection 1, expansion 2,
// contraction 1/2, shrink 1/2).  Deterministic: no randomness anywhere, so
// identical inputs give bit-identical results.  Non-finite objective values
// are treated as +infinity.
NelderMeadResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x0, const NelderMeadOptions& opts = {});

}  // namespace lossforge
