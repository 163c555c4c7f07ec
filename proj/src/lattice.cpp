#include "fidcorr/lattice.hpp"

#include "fidcorr/csv.hpp"
#include "fidcorr/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fidcorr::lattice {

CouplingTable build_couplings(const LatticeSpec& spec) {
  const std::size_t n = spec.site_positions.size();
  if (n < 2) throw Error(ErrorKind::invalid_spec, "need at least 2 sites, got " + std::to_string(n));
  const double field_norm = spec.field_direction.norm();
  if (!(field_norm > 1e-12) || !std::isfinite(field_norm)) {
    throw Error(ErrorKind::invalid_spec, "field_direction has zero length");
  }
  const Vec3 z = spec.field_direction / field_norm;

  CouplingTable table;
  table.b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec3 r = spec.site_positions[j] - spec.site_positions[i];
      const double dist = r.norm();
      if (!(dist > 1e-12)) {
        throw Error(ErrorKind::degenerate_geometry,
                    "sites " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      }
      const double cos_theta = r.dot(z) / dist;
      const double value = spec.coupling_scale * (1.0 - 3.0 * cos_theta * cos_theta) / (2.0 * dist * dist * dist);
      table.b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
      table.b(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = value;
    }
  }
  table.a = -0.5 * table.b;
  return table;
}

CouplingTable couplings_from_matrix(const Eigen::MatrixXd& b) {
  if (b.rows() != b.cols() || b.rows() < 2) {
    throw Error(ErrorKind::invalid_spec, "b_matrix must be square with at least 2 sites");
  }
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    if (b(i, i) != 0.0) throw Error(ErrorKind::invalid_spec, "b_matrix diagonal entry " + std::to_string(i) + " is nonzero");
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      if (!std::isfinite(b(i, j))) throw Error(ErrorKind::invalid_spec, "b_matrix has a non-finite entry");
      if (b(i, j) != b(j, i)) {
        throw Error(ErrorKind::invalid_spec,
                    "b_matrix is not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  return CouplingTable{b, -0.5 * b};
}

double lattice_sum(const CouplingTable& table, std::size_t probe, int p) {
  if (p <= 0 || p % 2 != 0) throw Error(ErrorKind::unsupported_power, "lattice sums need a positive even power, got " + std::to_string(p));
  if (probe >= table.n_sites()) throw Error(ErrorKind::invalid_pair, "probe site " + std::to_string(probe) + " out of range");
  double sum = 0.0;
  for (double b : neighbor_couplings(table, probe)) sum += std::pow(b, p);
  return sum;
}

std::vector<double> neighbor_couplings(const CouplingTable& table, std::size_t probe) {
  if (probe >= table.n_sites()) throw Error(ErrorKind::invalid_pair, "probe site " + std::to_string(probe) + " out of range");
  std::vector<double> out;
  out.reserve(table.n_sites() - 1);
  for (std::size_t j = 0; j < table.n_sites(); ++j) {
    if (j != probe) out.push_back(table.b(static_cast<Eigen::Index>(probe), static_cast<Eigen::Index>(j)));
  }
  return out;
}

bool equivalent_sites_check(const CouplingTable& table, double tolerance) {
  if (table.n_sites() < 2) return true;
  auto sorted = [&](std::size_t i) {
    auto c = neighbor_couplings(table, i);
    std::sort(c.begin(), c.end());
    return c;
  };
  const auto reference = sorted(0);
  for (std::size_t i = 1; i < table.n_sites(); ++i) {
    const auto other = sorted(i);
    for (std::size_t k = 0; k < reference.size(); ++k) {
      if (std::abs(other[k] - reference[k]) > tolerance) return false;
    }
  }
  return true;
}

LatticeSpec neighbor_shell(Shell shell, const Vec3& field_direction) {
  LatticeSpec spec;
  spec.field_direction = field_direction;
  spec.site_positions.push_back(Vec3::Zero());
  switch (shell) {
    case Shell::chain:
      spec.site_positions.push_back(Vec3(1, 0, 0));
      spec.site_positions.push_back(Vec3(-1, 0, 0));
      break;
    case Shell::simple_cubic:
      for (int axis = 0; axis < 3; ++axis) {
        for (int sign : {1, -1}) {
          Vec3 r = Vec3::Zero();
          r[axis] = sign;
          spec.site_positions.push_back(r);
        }
      }
      break;
    case Shell::fcc: {
      const double h = 1.0 / std::sqrt(2.0);
      for (int skip = 0; skip < 3; ++skip) {
        for (int s1 : {1, -1}) {
          for (int s2 : {1, -1}) {
            Vec3 r = Vec3::Zero();
            const int a1 = (skip + 1) % 3;
            const int a2 = (skip + 2) % 3;
            r[a1] = s1 * h;
            r[a2] = s2 * h;
            spec.site_positions.push_back(r);
          }
        }
      }
      break;
    }
  }
  return spec;
}

std::string to_csv(const CouplingTable& table) {
  std::string out = "i,j,b\n";
  for (std::size_t i = 0; i < table.n_sites(); ++i) {
    for (std::size_t j = 0; j < table.n_sites(); ++j) {
      if (i == j) continue;
      out += std::to_string(i) + "," + std::to_string(j) + "," +
             format_double(table.b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) + "\n";
    }
  }
  return out;
}

}  // namespace fidcorr::lattice
