#include "fidcorr/density.hpp"

#include "fidcorr/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fidcorr {

SiteLayout uniform_layout(std::size_t n_sites, int site_dim) { return SiteLayout(n_sites, site_dim); }

Eigen::Index layout_dim(std::span<const int> layout) {
  Eigen::Index dim = 1;
  for (int d : layout) dim *= d;
  return dim;
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries, double tolerance) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw Error(ErrorKind::non_physical_state, "density matrix must be square and nonempty");
  }
  const double asym = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tolerance) {
    throw Error(ErrorKind::non_physical_state, "density matrix is not Hermitian (deviation " + std::to_string(asym) + ")");
  }
  const double trace_err = std::abs(entries_.trace() - 1.0);
  if (trace_err > tolerance) {
    throw Error(ErrorKind::non_physical_state, "density matrix trace differs from 1 by " + std::to_string(trace_err));
  }
}

DensityMatrix DeviationState::density() const {
  const auto n = dim();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(n, n) + beta * deviation;
  rho /= static_cast<double>(n);
  return DensityMatrix(std::move(rho), 1e-10);
}

DeviationState DeviationState::from_density(const DensityMatrix& rho) {
  const auto n = rho.dim();
  DeviationState state;
  state.beta = 1.0;
  state.deviation = static_cast<double>(n) * rho.matrix() - Eigen::MatrixXcd::Identity(n, n);
  return state;
}

namespace {

// Flat offsets of every multi-index over `factors`, first factor most
// significant, using the strides of the full layout.
std::vector<Eigen::Index> offsets_for(std::span<const int> layout, const std::vector<std::size_t>& factors) {
  std::vector<Eigen::Index> strides(layout.size());
  Eigen::Index stride = 1;
  for (std::size_t k = layout.size(); k-- > 0;) {
    strides[k] = stride;
    stride *= layout[k];
  }
  std::vector<Eigen::Index> offsets{0};
  for (std::size_t f : factors) {
    std::vector<Eigen::Index> next;
    next.reserve(offsets.size() * static_cast<std::size_t>(layout[f]));
    for (Eigen::Index base : offsets) {
      for (int digit = 0; digit < layout[f]; ++digit) next.push_back(base + digit * strides[f]);
    }
    offsets = std::move(next);
  }
  return offsets;
}

}  // namespace

Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd& m, std::span<const int> layout,
                               std::span<const std::size_t> keep) {
  if (m.rows() != layout_dim(layout) || m.cols() != m.rows()) {
    throw Error(ErrorKind::invalid_spec, "matrix size does not match the site layout");
  }
  std::vector<std::size_t> kept(keep.begin(), keep.end());
  std::vector<bool> is_kept(layout.size(), false);
  for (std::size_t f : kept) {
    if (f >= layout.size()) throw Error(ErrorKind::invalid_pair, "site index " + std::to_string(f) + " out of range");
    if (is_kept[f]) throw Error(ErrorKind::invalid_pair, "site " + std::to_string(f) + " listed twice");
    is_kept[f] = true;
  }
  std::vector<std::size_t> traced;
  for (std::size_t f = 0; f < layout.size(); ++f) {
    if (!is_kept[f]) traced.push_back(f);
  }
  const auto keep_off = offsets_for(layout, kept);
  const auto trace_off = offsets_for(layout, traced);
  const auto n = static_cast<Eigen::Index>(keep_off.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      std::complex<double> acc = 0.0;
      for (Eigen::Index r : trace_off) acc += m(keep_off[a] + r, keep_off[b] + r);
      out(a, b) = acc;
    }
  }
  return out;
}

DensityMatrix reduce(const DensityMatrix& rho, std::span<const int> layout, std::span<const std::size_t> keep) {
  return DensityMatrix(partial_trace(rho.matrix(), layout, keep), 1e-10);
}

DeviationState reduce(const DeviationState& state, std::span<const int> layout, std::span<const std::size_t> keep) {
  DeviationState out;
  out.beta = state.beta;
  out.deviation = partial_trace(state.deviation, layout, keep);
  // Tr_rest(1 + beta*D)/D_full = (1 + beta*Tr_rest(D)/D_rest)/D_keep.
  const double rest_dim = static_cast<double>(state.dim()) / static_cast<double>(out.deviation.rows());
  out.deviation /= rest_dim;
  return out;
}

}  // namespace fidcorr
