#include "fidcorr/oracle/measurement.hpp"

#include "fidcorr/error.hpp"
#include "fidcorr/oracle/entropy.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <numbers>

namespace fidcorr::oracle {

namespace {

Eigen::MatrixXcd measure_matrix(const Eigen::MatrixXcd& m, const VonNeumannBasis& basis, int d2) {
  if (m.rows() != 2 * d2) throw Error(ErrorKind::invalid_basis, "von Neumann measurement needs a spin-1/2 first factor");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m.rows(), m.cols());
  for (const auto& p : basis.projectors()) {
    // (P x 1) M (P x 1), block-wise over the 2 x 2 outer index.
    Eigen::MatrixXcd left = Eigen::MatrixXcd::Zero(m.rows(), m.cols());
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        for (int k = 0; k < 2; ++k) left.block(r * d2, c * d2, d2, d2) += p(r, k) * m.block(k * d2, c * d2, d2, d2);
      }
    }
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        for (int k = 0; k < 2; ++k) out.block(r * d2, c * d2, d2, d2) += left.block(r * d2, k * d2, d2, d2) * p(k, c);
      }
    }
  }
  return out;
}

}  // namespace

VonNeumannBasis::VonNeumannBasis(const Eigen::Vector3d& n) : direction(n) {
  if (!(std::abs(n.norm() - 1.0) <= 1e-10)) throw Error(ErrorKind::invalid_basis, "measurement direction is not a unit vector");
}

VonNeumannBasis VonNeumannBasis::from_angles(double theta, double phi) {
  return VonNeumannBasis(
      Eigen::Vector3d(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)));
}

std::array<Eigen::Matrix2cd, 2> VonNeumannBasis::projectors() const {
  using C = std::complex<double>;
  Eigen::Matrix2cd n_sigma;
  n_sigma << C(direction.z(), 0), C(direction.x(), -direction.y()), C(direction.x(), direction.y()), C(-direction.z(), 0);
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  return {0.5 * (id + n_sigma), 0.5 * (id - n_sigma)};
}

DensityMatrix von_neumann_measure(const DensityMatrix& rho12, const VonNeumannBasis& basis, int d2) {
  return DensityMatrix(measure_matrix(rho12.matrix(), basis, d2), 1e-10);
}

DeviationState von_neumann_measure(const DeviationState& pair, const VonNeumannBasis& basis, int d2) {
  // The map is linear and unital, so it acts on the deviation directly.
  return DeviationState{measure_matrix(pair.deviation, basis, d2), pair.beta};
}

ClassicalInfo classical_info_von_neumann(const DeviationState& pair, int d2) {
  auto info = [&](double theta, double phi) {
    return mutual_info_numeric(von_neumann_measure(pair, VonNeumannBasis::from_angles(theta, phi), d2), 2, d2).exact;
  };

  constexpr int n_theta = 32;
  constexpr int n_phi = 64;
  double best = -1.0;
  double best_theta = 0.0;
  double best_phi = 0.0;
  for (int i = 0; i < n_theta; ++i) {
    const double theta = std::numbers::pi * i / (n_theta - 1);
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / n_phi;
      const double v = info(theta, phi);
      if (v > best) {
        best = v;
        best_theta = theta;
        best_phi = phi;
      }
    }
  }

  using boost::math::tools::brent_find_minima;
  constexpr int bits = 40;
  const double dtheta = std::numbers::pi / (n_theta - 1);
  const double dphi = 2.0 * std::numbers::pi / n_phi;
  for (int sweep = 0; sweep < 50; ++sweep) {
    const double before = best;
    {
      const double lo = std::max(0.0, best_theta - dtheta);
      const double hi = std::min(std::numbers::pi, best_theta + dtheta);
      auto r = brent_find_minima([&](double th) { return -info(th, best_phi); }, lo, hi, bits);
      if (-r.second > best) {
        best = -r.second;
        best_theta = r.first;
      }
    }
    {
      auto r = brent_find_minima([&](double ph) { return -info(best_theta, ph); }, best_phi - dphi, best_phi + dphi, bits);
      if (-r.second > best) {
        best = -r.second;
        best_phi = r.first;
      }
    }
    if (best - before <= 1e-10 * std::abs(best)) break;
  }

  ClassicalInfo out;
  out.value = best;
  out.best_direction = VonNeumannBasis::from_angles(best_theta, best_phi).direction;
  return out;
}

}  // namespace fidcorr::oracle
