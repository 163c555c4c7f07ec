#pragma once

#include "fidcorr/density.hpp"

#include <Eigen/Core>

#include <array>

namespace fidcorr::oracle {

/// Pair of spin-1/2 projectors (1 +/- n.sigma)/2 along a unit direction.
struct VonNeumannBasis {
  Eigen::Vector3d direction;

  /// Throws invalid_basis unless |direction| = 1 within 1e-10.
  explicit VonNeumannBasis(const Eigen::Vector3d& n);
  static VonNeumannBasis from_angles(double theta, double phi);

  std::array<Eigen::Matrix2cd, 2> projectors() const;
};

/// sum_m (P_m x 1) rho (P_m x 1) with the measured spin-1/2 as the first
/// factor and a second factor of dimension d2.
DensityMatrix von_neumann_measure(const DensityMatrix& rho12, const VonNeumannBasis& basis, int d2);
DeviationState von_neumann_measure(const DeviationState& pair, const VonNeumannBasis& basis, int d2);

struct ClassicalInfo {
  double value = 0.0;
  Eigen::Vector3d best_direction = Eigen::Vector3d::UnitZ();
};

/// Maximum over projector directions of the post-measurement mutual
/// information. A 32 x 64 (theta, phi) scan seeds alternating Brent line
/// searches, stopped once a sweep improves the value by less than 1e-10
/// relative.
ClassicalInfo classical_info_von_neumann(const DeviationState& pair, int d2);

}  // namespace fidcorr::oracle
