#include "fidcorr/oracle/coherent.hpp"

#include "fidcorr/error.hpp"
#include "fidcorr/oracle/entropy.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/legendre.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace fidcorr::oracle {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int m = 1; m <= k; ++m) r = r * (n - k + m) / m;
  return r;
}

}  // namespace

ScsState scs_state(const SpinParams& spin, double theta, double phi) {
  const int two_s = spin.two_s;
  const double c = std::cos(0.5 * theta);
  const std::complex<double> s = std::polar(std::sin(0.5 * theta), phi);
  ScsState out{theta, phi, Eigen::VectorXcd(two_s + 1)};
  // Index k holds m = S - k: exponents S+m = 2S-k and S-m = k.
  for (int k = 0; k <= two_s; ++k) {
    out.amplitudes(k) = std::sqrt(binomial(two_s, k)) * std::pow(c, two_s - k) * std::pow(s, k);
  }
  return out;
}

SphereQuadrature sphere_quadrature(int n_theta, int n_phi) {
  if (n_theta < 1 || n_phi < 1) throw Error(ErrorKind::invalid_spec, "quadrature orders must be positive");
  // Gauss-Legendre nodes on [-1, 1] from the nonnegative zeros of P_n.
  std::vector<double> x;
  std::vector<double> w;
  for (double z : boost::math::legendre_p_zeros<double>(n_theta)) {
    const double dp = boost::math::legendre_p_prime(n_theta, z);
    const double weight = 2.0 / ((1.0 - z * z) * dp * dp);
    x.push_back(z);
    w.push_back(weight);
    if (z != 0.0) {
      x.push_back(-z);
      w.push_back(weight);
    }
  }
  SphereQuadrature q;
  q.n_theta = n_theta;
  q.n_phi = n_phi;
  q.nodes.reserve(x.size() * static_cast<std::size_t>(n_phi));
  const double dphi = 2.0 * std::numbers::pi / n_phi;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double theta = std::acos(x[i]);
    for (int j = 0; j < n_phi; ++j) q.nodes.push_back({theta, j * dphi, w[i] * dphi});
  }
  return q;
}

double scs_completeness_check(const SpinParams& spin, const SphereQuadrature& quadrature) {
  const int d = spin.dim();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& node : quadrature.nodes) {
    const auto psi = scs_state(spin, node.theta, node.phi).amplitudes;
    acc += node.weight * psi * psi.adjoint();
  }
  acc *= d / (4.0 * std::numbers::pi);
  return (acc - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
}

double povm_classical_info(const DeviationState& pair, const SpinParams& spin, const SphereQuadrature& quadrature,
                           double measure_scale) {
  const int d1 = spin.dim();
  if (pair.dim() % d1 != 0) throw Error(ErrorKind::invalid_spec, "pair layout does not start with a spin-S factor");
  const int d2 = static_cast<int>(pair.dim() / d1);
  const double completeness = scs_completeness_check(spin, quadrature);
  if (completeness > kCompletenessTolerance) {
    throw Error(ErrorKind::quadrature_too_coarse,
                "coherent-state completeness deviates by " + std::to_string(completeness));
  }
  if (!(measure_scale > 0.0)) throw Error(ErrorKind::invalid_spec, "measure scale must be positive");

  const double beta = pair.beta;
  const double total_dim = static_cast<double>(pair.dim());
  // With X = <psi| D |psi> on the second spin, the outcome density is
  // p = c (d2 <psi|psi> + beta tr X) / D and the conditional state is
  // (1 + beta Y) / d2, Y = (d2 X - tr X) / (<psi|psi> d2 + beta tr X).
  // J = S(rho_2) - int p S(rho_2|Omega) is then an average of entropy
  // deficits, with no O(1) terms left to cancel.
  const double c = d1 / (4.0 * std::numbers::pi) / measure_scale;

  Eigen::MatrixXcd x(d2, d2);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d2, d2);
  double conditional = 0.0;
  for (const auto& node : quadrature.nodes) {
    const Eigen::VectorXcd psi = scs_state(spin, node.theta, node.phi).amplitudes;
    x.setZero();
    for (int m1 = 0; m1 < d1; ++m1) {
      for (int n1 = 0; n1 < d1; ++n1) {
        const std::complex<double> coeff = std::conj(psi(m1)) * psi(n1);
        x += coeff * pair.deviation.block(m1 * d2, n1 * d2, d2, d2);
      }
    }
    const double norm = psi.squaredNorm();
    const double tau = x.trace().real();
    const double unit = d2 * norm + beta * tau;
    const double p = c * unit / total_dim;
    const DeviationState cond{(d2 * x - tau * id) / unit, beta};
    conditional += node.weight * measure_scale * p * entropy_deficit(cond);
  }

  const std::array<int, 2> layout{d1, d2};
  const std::array<std::size_t, 1> second{1};
  const DeviationState marginal = reduce(pair, layout, second);
  return conditional - entropy_deficit(marginal);
}

double povm_classical_info(const DensityMatrix& pair, const SpinParams& spin, const SphereQuadrature& quadrature) {
  return povm_classical_info(DeviationState::from_density(pair), spin, quadrature);
}

}  // namespace fidcorr::oracle
