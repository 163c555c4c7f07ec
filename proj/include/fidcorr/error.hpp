#pragma once

#include <stdexcept>
#include <string>

namespace fidcorr {

enum class ErrorKind {
  config,
  invalid_spec,
  degenerate_geometry,
  unsupported_power,
  unsupported_spin,
  non_equivalent_sites,
  non_physical_moments,
  invalid_pair,
  invalid_basis,
  too_large_cluster,
  beta_too_large,
  non_physical_state,
  quadrature_too_coarse,
  integration_failure,
};

const char* to_string(ErrorKind kind);

/// Exit status used by the command-line front end for each error class:
/// 2 for bad input, 3 for guard violations, 4 for numerical failures.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fidcorr
