#pragma once

#include "fidcorr/lattice.hpp"
#include "fidcorr/spin.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

// Closed-form results for the Ising-only Hamiltonian (flip-flop terms off).
// All information quantities are in bits and carry the explicit beta^2.
namespace fidcorr::ising {

/// sin(d x) / (d sin x), continued through the removable singularities.
double sin_ratio(int d, double x);

/// FID of a probe spin: product over its couplings of sin(d b t)/(d sin(b t)).
double fid_zz(const SpinParams& spin, std::span<const double> couplings, double t);

/// exp(-M2 t^2 / 2) with M2 = (4/3) S(S+1) sum_b2.
double fid_gaussian(const SpinParams& spin, double sum_b2, double t);

struct ZzMoments {
  double m2 = 0.0;
  double m4 = 0.0;
  double m4_gauss = 0.0;  // 3 m2^2
};

ZzMoments moments_zz(const SpinParams& spin, double sum_b2, double sum_b4);

/// g_ij(t): the single-coupling factor of the FID.
double pair_g(const SpinParams& spin, double b_ij, double t);

/// A chosen pair (i, j) and the couplings each of them has to the rest.
struct PairContext {
  SpinParams spin;
  double b_ij = 0.0;
  std::vector<double> other_couplings_i;
  std::vector<double> other_couplings_j;

  /// Both spins see the same multiset of outside couplings, so G_i(j) = G_j(i).
  bool equivalent(double tolerance = 1e-12) const;
};

PairContext make_pair_context(const SpinParams& spin, const lattice::CouplingTable& table, std::size_t i,
                              std::size_t j);

/// G_ij(t), the product of g over the outside couplings. Throws
/// non_equivalent_sites unless the pair is equivalent.
double pair_G(const PairContext& ctx, double t);

/// f_ij(t) = sum_{n=0}^{2S} C(2S,n) (2n)!!/(2n+1)!! (-1)^n sin^{2n}(b t).
double pair_f(const SpinParams& spin, double b_ij, double t);

double mutual_info_ising(const PairContext& ctx, double t);

struct VonNeumannSplit {
  double classical = 0.0;
  double discord = 0.0;
};

/// C = D = I/2, spin-1/2 only.
VonNeumannSplit split_von_neumann_half(const PairContext& ctx, double t);

struct PovmSplit {
  double classical = 0.0;
  double quantum = 0.0;
};

/// Classical part from the coherent-state measurement and the remaining
/// quantum part, both in closed form.
PovmSplit split_povm(const PairContext& ctx, double t);

inline constexpr double kSmallTimeWarning = 0.3;

struct SmallTimeLimits {
  double mutual_info = 0.0;
  double quantum = 0.0;
  double quantum_share = 0.0;  // 1 / (S + 1)
  bool outside_small_time = false;  // |b_ij t| > kSmallTimeWarning
};

SmallTimeLimits small_time_expansions(const PairContext& ctx, double t);

/// Deviation of the reduced pair matrix, rho_ij = (1 + beta * D) / d^2, with
/// spin i as the first tensor factor.
Eigen::MatrixXcd reduced_pair_deviation(const PairContext& ctx, double t);

enum class SplitMode { von_neumann, povm };

struct CorrelationSeries {
  SplitMode mode = SplitMode::povm;
  TimeGrid times;
  std::vector<double> fid;
  std::vector<double> mutual_info;
  std::vector<double> classical;
  std::vector<double> quantum;
};

CorrelationSeries correlation_series(const PairContext& ctx, const TimeGrid& grid, SplitMode mode);

/// Header t,fid,I,C,Q (von Neumann) or t,fid,I,J,Q (POVM).
std::string to_csv(const CorrelationSeries& series);

}  // namespace fidcorr::ising
