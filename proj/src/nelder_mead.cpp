#include "lossforge/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "lossforge/errors.hpp"

namespace lossforge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_eval(const std::function<double(const Eigen::VectorXd&)>& f,
                 const Eigen::VectorXd& x, long& n_evals) {
  ++n_evals;
  const double v = f(x);
  return std::isfinite(v) ? v : kInf;
}

struct RunResult {
  Eigen::VectorXd x;
  double value;
  bool converged;
  double simplex_size;
};

// One simplex descent from x0.  Runs until the relative diameter drops
// below rel_tol or the evaluation budget for this run is exhausted.
RunResult run_once(const std::function<double(const Eigen::VectorXd&)>& f,
                   const Eigen::VectorXd& x0, const NelderMeadOptions& opts,
                   long& n_evals) {
  const Eigen::Index dim = x0.size();
  const int max_evals = opts.max_evals_per_run * static_cast<int>(dim);

  std::vector<Eigen::VectorXd> xs(dim + 1, x0);
  std::vector<double> fs(dim + 1);
  for (Eigen::Index i = 0; i < dim; ++i) {
    xs[i + 1][i] += opts.initial_step * std::max(1.0, std::fabs(x0[i]));
  }
  for (Eigen::Index i = 0; i <= dim; ++i) fs[i] = safe_eval(f, xs[i], n_evals);

  std::vector<int> order(dim + 1);
  int evals_this_run = static_cast<int>(dim) + 1;

  auto simplex_size = [&]() {
    const Eigen::VectorXd& best = xs[order[0]];
    double diam = 0.0;
    for (Eigen::Index i = 0; i <= dim; ++i) {
      diam = std::max(diam, (xs[i] - best).lpNorm<Eigen::Infinity>());
    }
    return diam / std::max(1.0, best.lpNorm<Eigen::Infinity>());
  };

  for (;;) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return fs[i] < fs[j]; });

    const double size = simplex_size();
    if (size < opts.rel_tol) {
      return {xs[order[0]], fs[order[0]], true, size};
    }
    if (evals_this_run >= max_evals) {
      return {xs[order[0]], fs[order[0]], false, size};
    }

    const int worst = order[dim];
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (Eigen::Index i = 0; i <= dim; ++i) {
      if (static_cast<int>(i) != worst) centroid += xs[i];
    }
    centroid /= static_cast<double>(dim);

    const double f_best = fs[order[0]];
    const double f_second_worst = fs[order[dim - 1]];
    const double f_worst = fs[worst];

    const Eigen::VectorXd xr = centroid + (centroid - xs[worst]);
    const double fr = safe_eval(f, xr, n_evals);
    ++evals_this_run;

    if (fr < f_best) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - xs[worst]);
      const double fe = safe_eval(f, xe, n_evals);
      ++evals_this_run;
      if (fe < fr) {
        xs[worst] = xe;
        fs[worst] = fe;
      } else {
        xs[worst] = xr;
        fs[worst] = fr;
      }
      continue;
    }
    if (fr < f_second_worst) {
      xs[worst] = xr;
      fs[worst] = fr;
      continue;
    }
    // Contract toward the better of the worst vertex and its reflection.
    if (fr < f_worst) {
      const Eigen::VectorXd xc = centroid + 0.5 * (xr - centroid);
      const double fc = safe_eval(f, xc, n_evals);
      ++evals_this_run;
      if (fc <= fr) {
        xs[worst] = xc;
        fs[worst] = fc;
        continue;
      }
    } else {
      const Eigen::VectorXd xc = centroid + 0.5 * (xs[worst] - centroid);
      const double fc = safe_eval(f, xc, n_evals);
      ++evals_this_run;
      if (fc < f_worst) {
        xs[worst] = xc;
        fs[worst] = fc;
        continue;
      }
    }
    // Shrink toward the best vertex.
    const Eigen::VectorXd& xb = xs[order[0]];
    for (Eigen::Index i = 0; i <= dim; ++i) {
      if (static_cast<int>(i) == order[0]) continue;
      xs[i] = xb + 0.5 * (xs[i] - xb);
      fs[i] = safe_eval(f, xs[i], n_evals);
      ++evals_this_run;
    }
  }
}

}  // namespace

NelderMeadResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x0, const NelderMeadOptions& opts) {
  if (x0.size() == 0) throw DomainError("nelder_mead requires dim >= 1");
  if (!x0.allFinite()) throw DomainError("nelder_mead requires finite x0");

  NelderMeadResult res;
  res.n_evals = 0;

  RunResult best = run_once(f, x0, opts, res.n_evals);
  res.n_restarts_used = 0;

  // Simplex descents can collapse prematurely; restarting from the optimum
  // with a fresh full-size simplex and requiring two consecutive runs to
  // agree makes false convergence much rarer.
  for (int r = 0; r < opts.max_restarts; ++r) {
    RunResult next = run_once(f, best.x, opts, res.n_evals);
    ++res.n_restarts_used;
    const bool agreed =
        next.converged && best.converged &&
        std::fabs(next.value - best.value) <=
            1e-9 * (std::fabs(next.value) + 1.0);
    if (next.value <= best.value) best = next;
    if (agreed) break;
  }

  res.x = best.x;
  res.value = best.value;
  res.converged = best.converged;
  res.final_simplex_size = best.simplex_size;
  return res;
}

}  // namespace lossforge
