#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace fidcorr {

/// Spin quantum number and polarization shared by every calculation.
/// The spin is stored as 2S so half-integer values stay exact.
struct SpinParams {
  int two_s = 1;
  double beta = 1e-3;

  int dim() const { return two_s + 1; }
  double s() const { return 0.5 * two_s; }
  double casimir() const { return s() * (s() + 1.0); }

  bool operator==(const SpinParams&) const = default;
};

// Throws invalid_spec when two_s < 1 or beta is not positive and finite.
void validate(const SpinParams& spin);

using TimeGrid = std::vector<double>;

TimeGrid uniform_grid(double t_max, std::size_t n_points);

/// Single-spin operators in the |m> basis ordered m = S, S-1, ..., -S.
struct SpinOperators {
  Eigen::MatrixXcd sx;
  Eigen::MatrixXcd sy;
  Eigen::MatrixXcd sz;
  Eigen::MatrixXcd s_plus;
  Eigen::MatrixXcd s_minus;
};

SpinOperators build_spin_operators(int two_s);
inline SpinOperators build_spin_operators(const SpinParams& spin) { return build_spin_operators(spin.two_s); }

}  // namespace fidcorr
