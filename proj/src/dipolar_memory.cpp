#include "fidcorr/dipolar_memory.hpp"

#include "fidcorr/csv.hpp"
#include "fidcorr/error.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fidcorr::dipolar {

namespace odeint = boost::numeric::odeint;

void validate(const MomentSet& m) {
  if (!(m.m2 > 0.0) || !std::isfinite(m.m2)) throw Error(ErrorKind::non_physical_moments, "m2 must be positive");
  if (!std::isfinite(m.m4) || !std::isfinite(m.m6)) throw Error(ErrorKind::non_physical_moments, "moments must be finite");
  const double scale4 = m.m2 * m.m2;
  if (m.m4 < scale4 * (1.0 - 1e-12)) throw Error(ErrorKind::non_physical_moments, "m4 < m2^2");
  const double scale6 = m.m4 * m.m4;
  if (m.m2 * m.m6 < scale6 * (1.0 - 1e-12)) throw Error(ErrorKind::non_physical_moments, "m2 m6 < m4^2");
}

double second_moment(const SpinParams& spin, double sum_b2) { return 3.0 * spin.casimir() * sum_b2; }

MomentSet gaussian_moments(double m2) { return {m2, 3.0 * m2 * m2, 15.0 * m2 * m2 * m2}; }

Hierarchy vk_from_moments(const MomentSet& m) {
  validate(m);
  Hierarchy h;
  const double spread = m.m4 - m.m2 * m.m2;
  if (spread <= 1e-12 * m.m2 * m.m2) {
    h.vk2 = {m.m2, 0.0};
    h.closure = Closure::truncate_zero;
    return h;
  }
  const double v1 = spread / m.m2;
  const double v2 = std::max(0.0, (m.m2 * m.m6 - m.m4 * m.m4) / (spread * m.m2));
  h.vk2 = {m.m2, v1, v2};
  return h;
}

std::vector<double> effective_chain(const Hierarchy& h) {
  if (h.vk2.size() < 2) throw Error(ErrorKind::invalid_spec, "hierarchy needs K >= 1");
  for (double v : h.vk2) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorKind::non_physical_moments, "chain coefficients must be >= 0");
  }
  std::vector<double> chain = h.vk2;
  if (h.closure == Closure::gaussian_tail) {
    const int K = h.order();
    const double last = h.vk2[static_cast<std::size_t>(K)];
    const double slope = last - h.vk2[static_cast<std::size_t>(K - 1)];
    for (int k = K + 1; k <= h.k_ext; ++k) chain.push_back(std::max(0.0, last + (k - K) * slope));
  }
  // A zero coefficient decouples everything above it.
  for (std::size_t k = 1; k < chain.size(); ++k) {
    if (chain[k] == 0.0) {
      chain.resize(k + 1);
      break;
    }
  }
  return chain;
}

AmplitudeSolution solve_amplitudes(const Hierarchy& h, const TimeGrid& grid, SolverTolerances tol) {
  if (grid.empty() || grid.front() != 0.0) throw Error(ErrorKind::invalid_spec, "amplitude grid must start at t = 0");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) throw Error(ErrorKind::invalid_spec, "amplitude grid must be strictly increasing");
  }
  const std::vector<double> chain = effective_chain(h);
  const std::size_t levels = chain.size();  // A_0 .. A_{levels-1}; A_{levels} = 0

  using State = std::vector<double>;
  auto rhs = [&chain, levels](const State& x, State& dx, double /*t*/) {
    dx[0] = -chain[0] * (levels > 1 ? x[1] : 0.0);
    for (std::size_t k = 1; k < levels; ++k) {
      const double up = k + 1 < levels ? x[k + 1] : 0.0;
      dx[k] = x[k - 1] - chain[k] * up;
    }
  };

  AmplitudeSolution sol;
  sol.times = grid;
  sol.v0_squared = chain[0];
  sol.a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(levels), static_cast<Eigen::Index>(grid.size()));

  State x(levels, 0.0);
  x[0] = 1.0;
  std::size_t column = 0;
  auto observer = [&](const State& state, double /*t*/) {
    for (std::size_t k = 0; k < levels; ++k) sol.a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(column)) = state[k];
    ++column;
  };

  const double rate = std::sqrt(*std::max_element(chain.begin(), chain.end()));
  const double dt0 = 1e-3 / std::max(rate, 1e-300);
  auto stepper = odeint::make_controlled(tol.absolute, tol.relative, odeint::runge_kutta_fehlberg78<State>());
  try {
    odeint::integrate_times(stepper, rhs, x, grid.begin(), grid.end(), dt0, observer, odeint::max_step_checker(1000000));
  } catch (const std::exception& e) {
    std::ostringstream msg;
    msg << "step control failed after " << column << " of " << grid.size() << " output times (chain length " << levels
        << "): " << e.what();
    throw Error(ErrorKind::integration_failure, msg.str());
  }
  if (column != grid.size() || !sol.a.allFinite()) {
    std::ostringstream msg;
    msg << "solver produced " << column << " of " << grid.size() << " outputs or non-finite amplitudes";
    throw Error(ErrorKind::integration_failure, msg.str());
  }
  return sol;
}

std::vector<double> fid_dipolar(const AmplitudeSolution& sol) {
  std::vector<double> out(sol.times.size());
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = sol.a(0, static_cast<Eigen::Index>(n));
  return out;
}

std::vector<double> fid_derivative(const AmplitudeSolution& sol) {
  std::vector<double> out(sol.times.size(), 0.0);
  if (sol.a.rows() < 2) return out;
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = -sol.v0_squared * sol.a(1, static_cast<Eigen::Index>(n));
  return out;
}

DipolarMutualInfo mutual_info_dipolar_forms(const SpinParams& spin, double b_ij, double m2, double fid_derivative) {
  if (!(m2 > 0.0)) throw Error(ErrorKind::non_physical_moments, "m2 must be positive");
  const double beta2 = spin.beta * spin.beta;
  const double c = spin.casimir();
  DipolarMutualInfo out;
  out.from_fid_derivative = beta2 * b_ij * b_ij / (m2 * m2 * std::numbers::ln2) * std::pow(c * fid_derivative, 2);
  const double a1 = -fid_derivative / m2;
  const double big_b = -3.0 * b_ij;
  out.from_amplitude = beta2 / (9.0 * std::numbers::ln2) * std::pow(c * big_b * a1, 2);
  return out;
}

double mutual_info_dipolar(const SpinParams& spin, double b_ij, double m2, double fid_derivative) {
  const auto forms = mutual_info_dipolar_forms(spin, b_ij, m2, fid_derivative);
  const double scale = std::max(std::abs(forms.from_fid_derivative), std::abs(forms.from_amplitude));
  if (std::abs(forms.from_fid_derivative - forms.from_amplitude) > 1e-12 * scale) {
    throw Error(ErrorKind::integration_failure, "the two forms of the pair information disagree");
  }
  return forms.from_fid_derivative;
}

double total_information(const SpinParams& spin, double a0) {
  if (!(std::abs(a0) <= 1.0 + 1e-9)) throw Error(ErrorKind::non_physical_state, "|A0| exceeds 1");
  return spin.beta * spin.beta / (3.0 * std::numbers::ln2) * spin.casimir() * (1.0 - a0 * a0);
}

double discord_half(double mutual_info) { return 0.5 * mutual_info; }

double quantum_part(const SpinParams& spin, double mutual_info) { return mutual_info / (spin.s() + 1.0); }

DensityMatrix reduced_pair_matrix_dipolar(const SpinParams& spin, double a0, double a1, double b_ij) {
  const auto ops = build_spin_operators(spin);
  const Eigen::Index d = spin.dim();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  auto kron = [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      for (Eigen::Index c = 0; c < a.cols(); ++c) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    }
    return out;
  };
  const double big_b = -3.0 * b_ij;
  const Eigen::MatrixXcd dev = a0 * (kron(ops.sx, id) + kron(id, ops.sx)) +
                               a1 * big_b * (kron(ops.sy, ops.sz) + kron(ops.sz, ops.sy));
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(d * d, d * d) + spin.beta * dev;
  rho /= static_cast<double>(d * d);
  return DensityMatrix(std::move(rho));
}

DipolarSeries dipolar_series(const SpinParams& spin, double b_ij, const AmplitudeSolution& sol) {
  DipolarSeries s;
  s.times = sol.times;
  s.a0 = fid_dipolar(sol);
  const auto deriv = fid_derivative(sol);
  const std::size_t n = sol.times.size();
  s.a1.resize(n);
  s.mutual_info.resize(n);
  s.total_info.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    s.a1[k] = sol.a.rows() > 1 ? sol.a(1, static_cast<Eigen::Index>(k)) : 0.0;
    s.mutual_info[k] = mutual_info_dipolar(spin, b_ij, sol.v0_squared, deriv[k]);
    s.total_info[k] = total_information(spin, s.a0[k]);
  }
  return s;
}

std::string to_csv(const DipolarSeries& s) {
  CsvTable table;
  table.header = {"t", "A0", "A1", "I_dipolar", "T_total"};
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    table.rows.push_back({s.times[k], s.a0[k], s.a1[k], s.mutual_info[k], s.total_info[k]});
  }
  return table.to_string();
}

}  // namespace fidcorr::dipolar
