#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

namespace fidcorr {

/// Local dimension of every factor of a tensor-product space, most
/// significant factor first.
using SiteLayout = std::vector<int>;

SiteLayout uniform_layout(std::size_t n_sites, int site_dim);
Eigen::Index layout_dim(std::span<const int> layout);

/// Dense Hermitian matrix with unit trace. Construction checks Hermiticity
/// and trace; positivity is checked where entropies are taken.
class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd entries, double tolerance = 1e-12);

  const Eigen::MatrixXcd& matrix() const { return entries_; }
  Eigen::Index dim() const { return entries_.rows(); }

 private:
  Eigen::MatrixXcd entries_;
};

/// High-temperature form rho = (1 + beta * deviation) / dim.
///
/// Every oracle state is carried this way so entropies can be expanded
/// around the maximally mixed state without cancellation. Any density matrix
/// fits the form with beta = 1 and deviation = dim * rho - 1.
struct DeviationState {
  Eigen::MatrixXcd deviation;
  double beta = 0.0;

  Eigen::Index dim() const { return deviation.rows(); }
  DensityMatrix density() const;

  static DeviationState from_density(const DensityMatrix& rho);
};

/// Partial trace keeping the listed factors; the output factor order follows
/// `keep`.
Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd& m, std::span<const int> layout,
                               std::span<const std::size_t> keep);

DensityMatrix reduce(const DensityMatrix& rho, std::span<const int> layout, std::span<const std::size_t> keep);
DeviationState reduce(const DeviationState& state, std::span<const int> layout, std::span<const std::size_t> keep);

}  // namespace fidcorr
