#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace lossforge {

// Every distribution the toolkit can fit to univariate loss data.
enum class Family {
  glmga,
  glogm,
  gb2,
  lomax,
  loggamma,
  frechet,
  lognormal,
  gamma,
};

Family family_from_string(const std::string& name);  // throws ConfigError
const char* family_name(Family f);
const std::vector<Family>& all_families();

// Uniform interface over the families, with parameters packed in a fixed
// order (see param_names).  Plain function pointers: the table is static
// and the nll hot path must not pay std::function dispatch.
struct FamilyOps {
  Family family;
  int n_params;
  std::vector<std::string> param_names;

  double (*log_pdf)(const Eigen::VectorXd& params, double y);
  double (*cdf)(const Eigen::VectorXd& params, double y);
  double (*quantile)(const Eigen::VectorXd& params, double u);

  // Negative log-likelihood over a sample, with per-parameter constants
  // hoisted out of the observation loop.  ln_y must be log(y) elementwise.
  // Returns +inf for parameters outside the domain or a zero-density
  // observation -- never throws, so optimizers can probe freely.
  double (*nll)(const Eigen::VectorXd& params, const Eigen::VectorXd& y,
                const Eigen::VectorXd& ln_y);

  // Moment/quantile-matching starting point from an ascending-sorted sample.
  Eigen::VectorXd (*initial_estimate)(const Eigen::VectorXd& sorted);

  // Bijection between the natural parameter space and R^k used by the
  // optimizer (componentwise log for positive parameters, identity for the
  // lognormal location).
  Eigen::VectorXd (*to_unconstrained)(const Eigen::VectorXd& params);
  Eigen::VectorXd (*from_unconstrained)(const Eigen::VectorXd& t);
};

const FamilyOps& family_ops(Family f);

// Hill estimator of the extreme value index from the top k order
// statistics (k = max(5, n/10)); used for starting values of tail shapes.
double hill_index(const Eigen::VectorXd& sorted);

}  // namespace lossforge
