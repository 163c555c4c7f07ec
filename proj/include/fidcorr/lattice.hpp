#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <string>
#include <vector>

namespace fidcorr::lattice {

using Vec3 = Eigen::Vector3d;

/// Finite set of spin sites and the static field direction (the z axis).
struct LatticeSpec {
  std::vector<Vec3> site_positions;
  Vec3 field_direction = Vec3::UnitZ();
  double coupling_scale = 1.0;  // gamma^2 hbar, angular frequency x length^3
};

/// Secular dipolar constants: b couples Sz Sz, a couples the flip-flop terms.
struct CouplingTable {
  Eigen::MatrixXd b;
  Eigen::MatrixXd a;

  std::size_t n_sites() const { return static_cast<std::size_t>(b.rows()); }
};

/// b_ij = scale (1 - 3 cos^2 theta_ij) / (2 r_ij^3), a_ij = -b_ij / 2.
CouplingTable build_couplings(const LatticeSpec& spec);

/// Table from an explicit symmetric b matrix with zero diagonal; a = -b/2.
CouplingTable couplings_from_matrix(const Eigen::MatrixXd& b);

/// Sum over j != probe of b[probe][j]^p, p even.
double lattice_sum(const CouplingTable& table, std::size_t probe, int p);

/// Couplings b[probe][j] for all j != probe, in site order.
std::vector<double> neighbor_couplings(const CouplingTable& table, std::size_t probe);

/// True when every site sees the same multiset of couplings.
bool equivalent_sites_check(const CouplingTable& table, double tolerance = 1e-12);

enum class Shell { chain, simple_cubic, fcc };

/// Probe at the origin (site 0) surrounded by its nearest-neighbor shell
/// (2, 6 or 12 sites at unit distance).
LatticeSpec neighbor_shell(Shell shell, const Vec3& field_direction);

/// Rows "i,j,b" for every ordered pair, 17 significant digits.
std::string to_csv(const CouplingTable& table);

}  // namespace fidcorr::lattice
