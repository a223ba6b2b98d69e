#ifndef SRP_ERRORS_HPP
#define SRP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace srp {

// Base for everything this library throws on purpose.
struct error : std::runtime_error {
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Bad arguments: non-SPD covariance, negative theta, malformed grids, ...
struct parameter_error : error {
  explicit parameter_error(const std::string& what) : error(what) {}
};

// The requested quantity does not exist for these inputs (wrong dimension,
// density above the critical point, r outside the disc of convergence).
struct domain_error : error {
  explicit domain_error(const std::string& what) : error(what) {}
};

// A numerical procedure could not reach its accuracy target.
struct numeric_error : error {
  explicit numeric_error(const std::string& what) : error(what) {}
};

// The model itself is degenerate (partition function vanishes).
struct undefined_model_error : error {
  explicit undefined_model_error(const std::string& what) : error(what) {}
};

// Bad experiment configuration (CLI / JSON level).
struct config_error : error {
  explicit config_error(const std::string& what) : error(what) {}
};

}  // namespace srp

#endif
