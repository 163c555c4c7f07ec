#pragma once

#include "fidcorr/density.hpp"
#include "fidcorr/spin.hpp"

#include <Eigen/Core>

#include <vector>

namespace fidcorr::oracle {

/// |theta, phi> = sum_m C(2S, S+m)^{1/2} cos^{S+m}(theta/2) (e^{i phi} sin(theta/2))^{S-m} |m>.
struct ScsState {
  double theta = 0.0;
  double phi = 0.0;
  Eigen::VectorXcd amplitudes;
};

ScsState scs_state(const SpinParams& spin, double theta, double phi);

struct SphereNode {
  double theta;
  double phi;
  double weight;  // integrates sin(theta) dtheta dphi; weights sum to 4 pi
};

/// Gauss-Legendre in cos(theta) times the uniform trapezoid rule in phi.
struct SphereQuadrature {
  int n_theta = 0;
  int n_phi = 0;
  std::vector<SphereNode> nodes;
};

inline constexpr int kDefaultThetaNodes = 64;
inline constexpr int kDefaultPhiNodes = 128;

SphereQuadrature sphere_quadrature(int n_theta = kDefaultThetaNodes, int n_phi = kDefaultPhiNodes);

/// Max-norm distance of (2S+1)/(4 pi) sum_w |Omega><Omega| from the identity.
double scs_completeness_check(const SpinParams& spin, const SphereQuadrature& quadrature);

inline constexpr double kCompletenessTolerance = 1e-10;

/// Classical information extracted by the coherent-state POVM on the first
/// spin of a pair state with layout (2S+1, d2), in bits:
///
///   J = H(Omega) + S(rho_2) - S_joint,
///   S_joint = -int Tr{rho_2(Omega) log2 rho_2(Omega)} dmu,
///   rho_2(Omega) = c <Omega| rho_12 |Omega>,  H(Omega) = -int p log2 p dmu.
///
/// It is evaluated in the equivalent form S(rho_2) - int p S(rho_2|Omega) dmu,
/// where both entropies become small deficits below log2 d2.
///
/// The measure is dmu = measure_scale * sin(theta) dtheta dphi with the density
/// rescaled to keep unit total weight; the result does not depend on it.
/// Throws quadrature_too_coarse when the completeness check exceeds 1e-10.
double povm_classical_info(const DeviationState& pair, const SpinParams& spin, const SphereQuadrature& quadrature,
                           double measure_scale = 1.0);
double povm_classical_info(const DensityMatrix& pair, const SpinParams& spin, const SphereQuadrature& quadrature);

}  // namespace fidcorr::oracle
