#include "fidcorr/spin.hpp"

#include "fidcorr/error.hpp"

#include <cmath>
#include <complex>
#include <string>

namespace fidcorr {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return "config error";
    case ErrorKind::invalid_spec: return "invalid spec";
    case ErrorKind::degenerate_geometry: return "degenerate geometry";
    case ErrorKind::unsupported_power: return "unsupported power";
    case ErrorKind::unsupported_spin: return "unsupported spin";
    case ErrorKind::non_equivalent_sites: return "non-equivalent sites";
    case ErrorKind::non_physical_moments: return "non-physical moments";
    case ErrorKind::invalid_pair: return "invalid pair";
    case ErrorKind::invalid_basis: return "invalid basis";
    case ErrorKind::too_large_cluster: return "cluster too large";
    case ErrorKind::beta_too_large: return "beta too large";
    case ErrorKind::non_physical_state: return "non-physical state";
    case ErrorKind::quadrature_too_coarse: return "quadrature too coarse";
    case ErrorKind::integration_failure: return "integration failure";
  }
  return "error";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config:
    case ErrorKind::invalid_spec:
    case ErrorKind::degenerate_geometry:
    case ErrorKind::non_physical_moments:
      return 2;
    case ErrorKind::unsupported_power:
    case ErrorKind::unsupported_spin:
    case ErrorKind::non_equivalent_sites:
    case ErrorKind::invalid_pair:
    case ErrorKind::invalid_basis:
    case ErrorKind::too_large_cluster:
    case ErrorKind::beta_too_large:
      return 3;
    case ErrorKind::non_physical_state:
    case ErrorKind::quadrature_too_coarse:
    case ErrorKind::integration_failure:
      return 4;
  }
  return 1;
}

void validate(const SpinParams& spin) {
  if (spin.two_s < 1) {
    throw Error(ErrorKind::invalid_spec, "two_s must be a positive integer, got " + std::to_string(spin.two_s));
  }
  if (!(spin.beta > 0.0) || !std::isfinite(spin.beta)) {
    throw Error(ErrorKind::invalid_spec, "beta must be positive and finite");
  }
}

TimeGrid uniform_grid(double t_max, std::size_t n_points) {
  if (!(t_max > 0.0) || n_points < 2) {
    throw Error(ErrorKind::invalid_spec, "time grid needs t_max > 0 and at least 2 points");
  }
  TimeGrid grid(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    grid[k] = t_max * static_cast<double>(k) / static_cast<double>(n_points - 1);
  }
  return grid;
}

SpinOperators build_spin_operators(int two_s) {
  if (two_s < 1) throw Error(ErrorKind::invalid_spec, "two_s must be >= 1");
  const int d = two_s + 1;
  const double s = 0.5 * two_s;
  SpinOperators ops;
  ops.sz = Eigen::MatrixXcd::Zero(d, d);
  ops.s_plus = Eigen::MatrixXcd::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const double m = s - k;
    ops.sz(k, k) = m;
    // S+ |m> = sqrt(S(S+1) - m(m+1)) |m+1>, and |m+1> sits at index k-1.
    if (k > 0) ops.s_plus(k - 1, k) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
  }
  ops.s_minus = ops.s_plus.adjoint();
  ops.sx = 0.5 * (ops.s_plus + ops.s_minus);
  ops.sy = std::complex<double>(0.0, -0.5) * (ops.s_plus - ops.s_minus);
  return ops;
}

}  // namespace fidcorr
