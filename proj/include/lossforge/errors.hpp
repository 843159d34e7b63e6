#pragma once

#include <stdexcept>
#include <string>

namespace lossforge {

// Argument outside a function's mathematical domain (negative loss, level
// outside (0,1), non-positive shape parameter, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The requested quantity does not exist for these parameters (a diverging
// moment or tail expectation).  Distinct from DomainError: the inputs are
// legal, the object asked for is not.
class NonexistenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative numeric scheme failed: no convergence, loss of bracket,
// non-finite intermediate.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Estimation cannot proceed or did not produce a usable optimum
// (rank-deficient design, degenerate sample, too few observations).
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad run configuration: unknown column or family name, inconsistent flags.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data unusable: unreadable file, or too many rejected rows.
class IngestionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lossforge
