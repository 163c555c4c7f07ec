#pragma once

#include "fidcorr/density.hpp"
#include "fidcorr/spin.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

// FID and pair correlations of the full secular dipolar Hamiltonian through the
// chain of orthogonal-operator amplitudes A_k(t).
//
// Sign convention of the chain:
//   dA_0/dt = -v_0^2 A_1,   dA_k/dt = A_{k-1} - v_k^2 A_{k+1}   (k >= 1),
// so A_0 = 1 - v_0^2 t^2 / 2 + ... and A_1 = t + ... . The pair information
// depends on A_1^2 only.

namespace fidcorr::dipolar {

/// Second, fourth and sixth moments of the absorption line.
struct MomentSet {
  double m2 = 0.0;
  double m4 = 0.0;
  double m6 = 0.0;
};

/// Throws non_physical_moments unless m2 > 0, m4 >= m2^2 and m2 m6 >= m4^2.
void validate(const MomentSet& moments);

/// Van Vleck second moment 3 S(S+1) sum_j b_ij^2.
double second_moment(const SpinParams& spin, double sum_b2);

/// Moments of a Gaussian line with the given m2: m4 = 3 m2^2, m6 = 15 m2^3.
MomentSet gaussian_moments(double m2);

enum class Closure { truncate_zero, gaussian_tail };

inline constexpr int kDefaultChainLength = 64;

struct Hierarchy {
  std::vector<double> vk2;  // v_0^2 ... v_K^2
  Closure closure = Closure::gaussian_tail;
  int k_ext = kDefaultChainLength;

  int order() const { return static_cast<int>(vk2.size()) - 1; }
};

/// v_0^2, v_1^2, v_2^2 from the moments (K = 2). A delta-like line with
/// m4 = m2^2 terminates the chain after A_1 (K = 1, v_1^2 = 0).
Hierarchy vk_from_moments(const MomentSet& moments);

/// Chain coefficients actually integrated: the given ones for truncate_zero,
/// or extended linearly in k up to k_ext for gaussian_tail (negative
/// extrapolations are clipped to zero, which terminates the chain).
std::vector<double> effective_chain(const Hierarchy& h);

struct SolverTolerances {
  double relative = 1e-10;
  double absolute = 1e-12;
};

struct AmplitudeSolution {
  TimeGrid times;
  Eigen::MatrixXd a;  // a(k, n) = A_k(times[n])
  double v0_squared = 0.0;
};

AmplitudeSolution solve_amplitudes(const Hierarchy& h, const TimeGrid& grid, SolverTolerances tol = {});

/// F(t) = A_0(t).
std::vector<double> fid_dipolar(const AmplitudeSolution& sol);

/// dF/dt = -v_0^2 A_1(t), read from the solver state.
std::vector<double> fid_derivative(const AmplitudeSolution& sol);

struct DipolarMutualInfo {
  double from_fid_derivative = 0.0;
  double from_amplitude = 0.0;  // beta^2/(9 ln2) [S(S+1) B_ij A_1]^2, B_ij = -3 b_ij
};

DipolarMutualInfo mutual_info_dipolar_forms(const SpinParams& spin, double b_ij, double m2, double fid_derivative);

/// Pair mutual information from the FID derivative. Both printed forms are
/// evaluated and must agree to 1e-12 relative.
double mutual_info_dipolar(const SpinParams& spin, double b_ij, double m2, double fid_derivative);

/// Per-spin total information beta^2/(3 ln2) S(S+1) [1 - A_0^2].
double total_information(const SpinParams& spin, double a0);

/// Discord (S = 1/2) and POVM quantum part that accompany a pair mutual
/// information in the dipolar case: I/2 and I/(S+1).
double discord_half(double mutual_info);
double quantum_part(const SpinParams& spin, double mutual_info);

/// Reduced pair matrix built from A_0, A_1 and B_ij = -3 b_ij.
DensityMatrix reduced_pair_matrix_dipolar(const SpinParams& spin, double a0, double a1, double b_ij);

struct DipolarSeries {
  TimeGrid times;
  std::vector<double> a0;
  std::vector<double> a1;
  std::vector<double> mutual_info;
  std::vector<double> total_info;
};

DipolarSeries dipolar_series(const SpinParams& spin, double b_ij, const AmplitudeSolution& sol);

/// Header t,A0,A1,I_dipolar,T_total.
std::string to_csv(const DipolarSeries& series);

}  // namespace fidcorr::dipolar
