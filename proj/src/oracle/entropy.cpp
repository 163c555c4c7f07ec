#include "fidcorr/oracle/entropy.hpp"

#include "fidcorr/error.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <numbers>

namespace fidcorr::oracle {

namespace {

constexpr double kNegativeEigenTolerance = 1e-8;

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::non_physical_state, "eigenvalue solver failed");
  return solver.eigenvalues();
}

}  // namespace

double entropy_kernel(double x) {
  if (std::abs(x) < 1e-3) {
    // x^2/2 - x^3/6 + x^4/12 - x^5/20 + x^6/30 - x^7/42
    const double x2 = x * x;
    return x2 * (0.5 + x * (-1.0 / 6 + x * (1.0 / 12 + x * (-1.0 / 20 + x * (1.0 / 30 - x / 42)))));
  }
  if (1.0 + x <= 0.0) return -x;
  return (1.0 + x) * std::log1p(x) - x;
}

double entropy_exact(const DensityMatrix& rho) {
  const Eigen::VectorXd lambda = hermitian_eigenvalues(rho.matrix());
  double s = 0.0;
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    const double l = lambda(k);
    if (l < -kNegativeEigenTolerance) throw Error(ErrorKind::non_physical_state, "density matrix has a negative eigenvalue");
    if (l > 0.0) s -= l * std::log2(l);
  }
  return s;
}

double entropy_deficit(const DeviationState& state) {
  const Eigen::VectorXd mu = hermitian_eigenvalues(state.deviation);
  const double dim = static_cast<double>(state.dim());
  double acc = state.beta * state.deviation.trace().real();
  for (Eigen::Index k = 0; k < mu.size(); ++k) {
    const double x = state.beta * mu(k);
    if (1.0 + x < -kNegativeEigenTolerance * dim) {
      throw Error(ErrorKind::non_physical_state, "density matrix has a negative eigenvalue");
    }
    acc += entropy_kernel(x);
  }
  return acc / (dim * std::numbers::ln2);
}

double entropy(const DeviationState& state) {
  return std::log2(static_cast<double>(state.dim())) - entropy_deficit(state);
}

MutualInformation mutual_info_numeric(const DeviationState& pair, int d1, int d2) {
  const std::array<int, 2> layout{d1, d2};
  const std::array<std::size_t, 1> first{0};
  const std::array<std::size_t, 1> second{1};
  const DeviationState one = reduce(pair, layout, first);
  const DeviationState two = reduce(pair, layout, second);

  MutualInformation out;
  // log2 terms cancel between the three entropies.
  out.exact = entropy_deficit(pair) - entropy_deficit(one) - entropy_deficit(two);

  const double b2 = pair.beta * pair.beta;
  out.trace_form = b2 / (2.0 * std::numbers::ln2) *
                   (pair.deviation.cwiseAbs2().sum() / (d1 * d2) - one.deviation.cwiseAbs2().sum() / d1 -
                    two.deviation.cwiseAbs2().sum() / d2);
  return out;
}

double mutual_info_exact(const DensityMatrix& pair, int d1, int d2) {
  return mutual_info_numeric(DeviationState::from_density(pair), d1, d2).exact;
}

}  // namespace fidcorr::oracle
