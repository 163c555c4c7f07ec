#include "fidcorr/oracle/hamiltonian.hpp"

#include "fidcorr/error.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <complex>
#include <string>

namespace fidcorr::oracle {

namespace {

Eigen::Index checked_dim(const SpinParams& spin, std::size_t n_sites) {
  Eigen::Index dim = 1;
  for (std::size_t k = 0; k < n_sites; ++k) {
    dim *= spin.dim();
    if (dim > kMaxHilbertDim) {
      throw Error(ErrorKind::too_large_cluster, "d^N exceeds " + std::to_string(kMaxHilbertDim) + " (d = " +
                                                    std::to_string(spin.dim()) + ", N = " + std::to_string(n_sites) + ")");
    }
  }
  return dim;
}

// Base-d digits of a product-basis index, site 0 most significant.
// Digit k stands for m = S - k.
std::vector<int> digits_of(Eigen::Index index, int d, std::size_t n) {
  std::vector<int> digits(n);
  for (std::size_t s = n; s-- > 0;) {
    digits[s] = static_cast<int>(index % d);
    index /= d;
  }
  return digits;
}

Eigen::Index stride_of(int d, std::size_t n, std::size_t site) {
  Eigen::Index stride = 1;
  for (std::size_t s = site + 1; s < n; ++s) stride *= d;
  return stride;
}

Eigen::MatrixXd sx_on_sites(const SpinParams& spin, std::size_t n, std::size_t first, std::size_t last) {
  const Eigen::Index dim = checked_dim(spin, n);
  const int d = spin.dim();
  const double s = spin.s();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const auto digits = digits_of(col, d, n);
    for (std::size_t site = first; site < last; ++site) {
      const int k = digits[site];
      const double m = s - k;
      const Eigen::Index stride = stride_of(d, n, site);
      // Sx = (S+ + S-)/2; S+ lowers the digit, S- raises it.
      if (k > 0) out(col - stride, col) += 0.5 * std::sqrt(s * (s + 1) - m * (m + 1));
      if (k < d - 1) out(col + stride, col) += 0.5 * std::sqrt(s * (s + 1) - m * (m - 1));
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd build_hamiltonian(const SpinParams& spin, const lattice::CouplingTable& table, CouplingMode mode) {
  const std::size_t n = table.n_sites();
  const Eigen::Index dim = checked_dim(spin, n);
  const int d = spin.dim();
  const double s = spin.s();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const auto digits = digits_of(col, d, n);
    double diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const auto ii = static_cast<Eigen::Index>(i);
        const auto jj = static_cast<Eigen::Index>(j);
        diag += table.b(ii, jj) * (s - digits[i]) * (s - digits[j]);
        if (mode == CouplingMode::ising) continue;
        const double a = table.a(ii, jj);
        // a S+_i S-_j: raise m_i, lower m_j.
        if (a == 0.0 || digits[i] == 0 || digits[j] == d - 1) continue;
        const double mi = s - digits[i];
        const double mj = s - digits[j];
        const double amp = a * std::sqrt(s * (s + 1) - mi * (mi + 1)) * std::sqrt(s * (s + 1) - mj * (mj - 1));
        const Eigen::Index row = col - stride_of(d, n, i) + stride_of(d, n, j);
        h(row, col) += amp;
      }
    }
    h(col, col) = diag;
  }
  return h;
}

Eigen::MatrixXd total_sx(const SpinParams& spin, std::size_t n_sites) { return sx_on_sites(spin, n_sites, 0, n_sites); }

Eigen::MatrixXd site_sx(const SpinParams& spin, std::size_t n_sites, std::size_t site) {
  if (site >= n_sites) throw Error(ErrorKind::invalid_pair, "site index out of range");
  return sx_on_sites(spin, n_sites, site, site + 1);
}

DiagonalizedHamiltonian::DiagonalizedHamiltonian(const SpinParams& spin, const lattice::CouplingTable& table,
                                                 CouplingMode mode)
    : spin_(spin), n_sites_(table.n_sites()), layout_(uniform_layout(table.n_sites(), spin.dim())) {
  const Eigen::MatrixXd h = build_hamiltonian(spin, table, mode);
  const Eigen::MatrixXd off = h - Eigen::MatrixXd(h.diagonal().asDiagonal());
  diagonal_ = off.cwiseAbs().maxCoeff() == 0.0;
  if (diagonal_) {
    energies_ = h.diagonal();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success) throw Error(ErrorKind::non_physical_state, "Hamiltonian diagonalization failed");
    energies_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
  }
  const Eigen::MatrixXd sx = total_sx(spin, n_sites_);
  sx_eigen_ = diagonal_ ? sx : Eigen::MatrixXd(vectors_.transpose() * sx * vectors_);
  sx_norm_ = sx.cwiseAbs2().sum();
}

double DiagonalizedHamiltonian::fid(double t) const {
  const Eigen::Index dim = energies_.size();
  double acc = 0.0;
  for (Eigen::Index n = 0; n < dim; ++n) {
    for (Eigen::Index m = 0; m < dim; ++m) {
      const double w = sx_eigen_(m, n);
      if (w == 0.0) continue;
      acc += w * w * std::cos((energies_(m) - energies_(n)) * t);
    }
  }
  return acc / sx_norm_;
}

std::vector<double> DiagonalizedHamiltonian::site_fid(std::size_t site, const TimeGrid& grid) const {
  const Eigen::MatrixXd sxi = site_sx(spin_, n_sites_, site);
  const Eigen::MatrixXd sxi_eigen = diagonal_ ? sxi : Eigen::MatrixXd(vectors_.transpose() * sxi * vectors_);
  const double norm = sxi.cwiseAbs2().sum();
  const Eigen::Index dim = energies_.size();
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double acc = 0.0;
    for (Eigen::Index n = 0; n < dim; ++n) {
      for (Eigen::Index m = 0; m < dim; ++m) {
        const double w = sxi_eigen(n, m) * sx_eigen_(m, n);
        if (w == 0.0) continue;
        acc += w * std::cos((energies_(m) - energies_(n)) * grid[k]);
      }
    }
    out[k] = acc / norm;
  }
  return out;
}

DeviationState DiagonalizedHamiltonian::evolved_state(double t, double beta) const {
  const Eigen::Index dim = energies_.size();
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index n = 0; n < dim; ++n) {
    for (Eigen::Index r = 0; r < dim; ++r) m(r, n) = sx_eigen_(r, n) * std::polar(1.0, -(energies_(r) - energies_(n)) * t);
  }
  DeviationState state;
  state.beta = beta;
  if (diagonal_) {
    state.deviation = std::move(m);
  } else {
    const Eigen::MatrixXcd v = vectors_.cast<std::complex<double>>();
    state.deviation = v * m * v.adjoint();
  }
  return state;
}

double DiagonalizedHamiltonian::spectral_moment(int k) const {
  if (k % 2 != 0) return 0.0;
  const Eigen::Index dim = energies_.size();
  double acc = 0.0;
  for (Eigen::Index n = 0; n < dim; ++n) {
    for (Eigen::Index m = 0; m < dim; ++m) {
      const double w = sx_eigen_(m, n);
      if (w != 0.0) acc += w * w * std::pow(energies_(m) - energies_(n), k);
    }
  }
  return acc / sx_norm_;
}

std::vector<double> evolve_and_measure_fid(const SpinParams& spin, const lattice::CouplingTable& table,
                                           CouplingMode mode, const TimeGrid& grid) {
  const DiagonalizedHamiltonian h(spin, table, mode);
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) out[k] = h.fid(grid[k]);
  return out;
}

DeviationState build_initial_state(const SpinParams& spin, std::size_t n_sites) {
  if (!(spin.beta * spin.s() * static_cast<double>(n_sites) < 1.0)) {
    throw Error(ErrorKind::beta_too_large, "1 + beta Sx is not positive; need beta S N < 1");
  }
  DeviationState state;
  state.beta = spin.beta;
  state.deviation = total_sx(spin, n_sites).cast<std::complex<double>>();
  return state;
}

DensityMatrix build_initial_density(const SpinParams& spin, std::size_t n_sites) {
  return build_initial_state(spin, n_sites).density();
}

DensityMatrix reduce_to_pair(const DensityMatrix& rho, std::size_t i, std::size_t j, const SiteLayout& layout) {
  if (i == j) throw Error(ErrorKind::invalid_pair, "pair needs two distinct sites");
  const std::array<std::size_t, 2> keep{i, j};
  return reduce(rho, layout, keep);
}

DeviationState reduce_to_pair(const DeviationState& state, std::size_t i, std::size_t j, const SiteLayout& layout) {
  if (i == j) throw Error(ErrorKind::invalid_pair, "pair needs two distinct sites");
  const std::array<std::size_t, 2> keep{i, j};
  return reduce(state, layout, keep);
}

}  // namespace fidcorr::oracle
