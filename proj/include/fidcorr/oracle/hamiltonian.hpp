#pragma once

#include "fidcorr/density.hpp"
#include "fidcorr/lattice.hpp"
#include "fidcorr/spin.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <vector>

// Exact small-cluster dynamics used to check the closed-form results.
namespace fidcorr::oracle {

enum class CouplingMode { ising, dipolar };

inline constexpr Eigen::Index kMaxHilbertDim = 4096;

/// H = sum_{i != j} [ b_ij Sz_i Sz_j + a_ij S+_i S-_j ] over ordered pairs,
/// so each pair enters twice. The Ising mode drops the a_ij terms. The matrix
/// is real in the product |m> basis.
Eigen::MatrixXd build_hamiltonian(const SpinParams& spin, const lattice::CouplingTable& table, CouplingMode mode);

/// Total Sx (or a single site's Sx) on the product space; real.
Eigen::MatrixXd total_sx(const SpinParams& spin, std::size_t n_sites);
Eigen::MatrixXd site_sx(const SpinParams& spin, std::size_t n_sites, std::size_t site);

/// Hamiltonian diagonalized once; all time evaluations are const and can run
/// concurrently.
class DiagonalizedHamiltonian {
 public:
  DiagonalizedHamiltonian(const SpinParams& spin, const lattice::CouplingTable& table, CouplingMode mode);

  std::size_t n_sites() const { return n_sites_; }
  const SiteLayout& layout() const { return layout_; }
  const Eigen::VectorXd& energies() const { return energies_; }

  /// Tr{Sx Sx(t)} / Tr{Sx^2} for the total transverse magnetization.
  double fid(double t) const;

  /// Probe-site FID Tr{Sx_site Sx(t)} / Tr{Sx_site^2} over a grid.
  std::vector<double> site_fid(std::size_t site, const TimeGrid& grid) const;

  /// Deviation Sx(t) = U Sx U^dagger of rho(t) = (1 + beta Sx(t)) / Z.
  DeviationState evolved_state(double t, double beta) const;

  /// Spectral moment sum |Sx_mn|^2 (E_m - E_n)^k / Tr{Sx^2}; zero for odd k.
  double spectral_moment(int k) const;

 private:
  SpinParams spin_;
  std::size_t n_sites_;
  SiteLayout layout_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXd vectors_;
  Eigen::MatrixXd sx_eigen_;  // V^T Sx V
  double sx_norm_ = 0.0;      // Tr{Sx^2}
  bool diagonal_ = false;
};

std::vector<double> evolve_and_measure_fid(const SpinParams& spin, const lattice::CouplingTable& table,
                                           CouplingMode mode, const TimeGrid& grid);

/// (1 + beta sum_i Sx_i) / d^N. Requires beta S N < 1.
DeviationState build_initial_state(const SpinParams& spin, std::size_t n_sites);
DensityMatrix build_initial_density(const SpinParams& spin, std::size_t n_sites);

/// Partial trace of an N-site state onto the ordered pair (i, j).
DensityMatrix reduce_to_pair(const DensityMatrix& rho, std::size_t i, std::size_t j, const SiteLayout& layout);
DeviationState reduce_to_pair(const DeviationState& state, std::size_t i, std::size_t j, const SiteLayout& layout);

}  // namespace fidcorr::oracle
