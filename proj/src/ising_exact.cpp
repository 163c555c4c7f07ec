#include "fidcorr/ising_exact.hpp"

#include "fidcorr/csv.hpp"
#include "fidcorr/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace fidcorr::ising {

namespace {

// U_{n}(c) by the three-term recurrence.
double chebyshev_u(int n, double c) {
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 2.0 * c;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * c * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int m = 1; m <= k; ++m) r = r * (n - k + m) / m;
  return r;
}

Eigen::MatrixXcd phase_of_sz(const SpinOperators& ops, double angle) {
  // exp(-i angle Sz), diagonal in the |m> basis.
  const auto d = ops.sz.rows();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) out(k, k) = std::polar(1.0, -angle * ops.sz(k, k).real());
  return out;
}

// 1 - sin(d x)/(d sin x) = (2/d) sum_j sin^2((d-1-2j) x/2), free of cancellation.
double one_minus_ratio(int d, double x) {
  double sum = 0.0;
  for (int j = 0; j < d; ++j) sum += std::pow(std::sin(0.5 * (d - 1 - 2 * j) * x), 2);
  return 2.0 * sum / d;
}

// g^2 has period pi, so reduce to |y| <= pi/2 where 1 + g stays away from 0.
double one_minus_g2(const SpinParams& spin, double x) {
  const double y = std::remainder(x, std::numbers::pi);
  const double u = one_minus_ratio(spin.dim(), y);
  return u * (2.0 - u);
}

// 1 - f, summed from n = 1 so small sin^2 keeps full relative accuracy.
double one_minus_f(const SpinParams& spin, double x) {
  const double s2 = std::pow(std::sin(x), 2);
  double sum = 0.0;
  double dfact_ratio = 1.0;
  double power = -1.0;
  for (int n = 1; n <= spin.two_s; ++n) {
    dfact_ratio *= (2.0 * n) / (2.0 * n + 1.0);
    power *= -s2;
    sum += binomial(spin.two_s, n) * dfact_ratio * power;
  }
  return sum;
}

}  // namespace

double sin_ratio(int d, double x) {
  const double s = std::sin(x);
  if (std::abs(s) < 1e-6) return chebyshev_u(d - 1, std::cos(x)) / d;
  return std::sin(d * x) / (d * s);
}

double fid_zz(const SpinParams& spin, std::span<const double> couplings, double t) {
  double f = 1.0;
  for (double b : couplings) f *= sin_ratio(spin.dim(), b * t);
  return f;
}

double fid_gaussian(const SpinParams& spin, double sum_b2, double t) {
  const double m2 = 4.0 / 3.0 * spin.casimir() * sum_b2;
  return std::exp(-0.5 * m2 * t * t);
}

ZzMoments moments_zz(const SpinParams& spin, double sum_b2, double sum_b4) {
  const double c = 4.0 / 3.0 * spin.casimir();
  ZzMoments m;
  m.m2 = c * sum_b2;
  m.m4_gauss = 3.0 * m.m2 * m.m2;
  m.m4 = m.m4_gauss - 0.6 * c * c * (2.0 + 1.0 / spin.casimir()) * sum_b4;
  return m;
}

double pair_g(const SpinParams& spin, double b_ij, double t) { return sin_ratio(spin.dim(), b_ij * t); }

bool PairContext::equivalent(double tolerance) const {
  if (other_couplings_i.size() != other_couplings_j.size()) return false;
  auto a = other_couplings_i;
  auto b = other_couplings_j;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k] - b[k]) > tolerance) return false;
  }
  return true;
}

PairContext make_pair_context(const SpinParams& spin, const lattice::CouplingTable& table, std::size_t i,
                              std::size_t j) {
  const std::size_t n = table.n_sites();
  if (i >= n || j >= n) throw Error(ErrorKind::invalid_pair, "pair index out of range");
  if (i == j) throw Error(ErrorKind::invalid_pair, "pair needs two distinct sites");
  PairContext ctx;
  ctx.spin = spin;
  ctx.b_ij = table.b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  for (std::size_t f = 0; f < n; ++f) {
    if (f == i || f == j) continue;
    ctx.other_couplings_i.push_back(table.b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(f)));
    ctx.other_couplings_j.push_back(table.b(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(f)));
  }
  return ctx;
}

double pair_G(const PairContext& ctx, double t) {
  if (!ctx.equivalent()) {
    throw Error(ErrorKind::non_equivalent_sites,
                "the pair sees different outside couplings; the symmetric pair formulas do not apply");
  }
  return fid_zz(ctx.spin, ctx.other_couplings_i, t);
}

double pair_f(const SpinParams& spin, double b_ij, double t) {
  const double s2 = std::pow(std::sin(t * b_ij), 2);
  double sum = 0.0;
  double dfact_ratio = 1.0;  // (2n)!! / (2n+1)!!
  double power = 1.0;
  for (int n = 0; n <= spin.two_s; ++n) {
    if (n > 0) {
      dfact_ratio *= (2.0 * n) / (2.0 * n + 1.0);
      power *= -s2;
    }
    sum += binomial(spin.two_s, n) * dfact_ratio * power;
  }
  return sum;
}

double mutual_info_ising(const PairContext& ctx, double t) {
  const double bg = ctx.spin.beta * pair_G(ctx, t);
  return bg * bg / (3.0 * std::numbers::ln2) * ctx.spin.casimir() * one_minus_g2(ctx.spin, ctx.b_ij * t);
}

VonNeumannSplit split_von_neumann_half(const PairContext& ctx, double t) {
  if (ctx.spin.two_s != 1) {
    throw Error(ErrorKind::unsupported_spin, "the von Neumann split is only available for S = 1/2");
  }
  const double bg = ctx.spin.beta * pair_G(ctx, t);
  const double half = bg * bg / (8.0 * std::numbers::ln2) * std::pow(std::sin(t * ctx.b_ij), 2);
  return {half, half};
}

PovmSplit split_povm(const PairContext& ctx, double t) {
  const double bg = ctx.spin.beta * pair_G(ctx, t);
  const double h = one_minus_g2(ctx.spin, ctx.b_ij * t);  // 1 - g^2
  const double e = one_minus_f(ctx.spin, ctx.b_ij * t);   // 1 - f
  const double s = ctx.spin.s();
  const double c = ctx.spin.casimir();
  const double pref = bg * bg / (6.0 * std::numbers::ln2);
  PovmSplit out;
  out.classical = pref * (c * (h - e) + s * s * h);
  out.quantum = pref * (c * e + s * h);
  return out;
}

SmallTimeLimits small_time_expansions(const PairContext& ctx, double t) {
  const double bg = ctx.spin.beta * pair_G(ctx, t);
  const double s = ctx.spin.s();
  const double x = ctx.b_ij * t;
  const double pref = bg * bg / (9.0 * std::numbers::ln2);
  SmallTimeLimits out;
  out.mutual_info = pref * 4.0 * std::pow(ctx.spin.casimir() * x, 2);
  out.quantum = pref * 4.0 * std::pow(s * x, 2) * (s + 1.0);
  out.quantum_share = 1.0 / (s + 1.0);
  out.outside_small_time = std::abs(x) > kSmallTimeWarning;
  return out;
}

Eigen::MatrixXcd reduced_pair_deviation(const PairContext& ctx, double t) {
  const auto ops = build_spin_operators(ctx.spin);
  const double G = pair_G(ctx, t);
  const double angle = 2.0 * ctx.b_ij * t;
  const Eigen::MatrixXcd forward = phase_of_sz(ops, angle);
  const Eigen::MatrixXcd backward = forward.adjoint();
  auto kron = [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      for (Eigen::Index c = 0; c < a.cols(); ++c) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    }
    return out;
  };
  Eigen::MatrixXcd dev = kron(ops.s_plus, forward) + kron(ops.s_minus, backward) + kron(forward, ops.s_plus) +
                         kron(backward, ops.s_minus);
  return 0.5 * G * dev;
}

CorrelationSeries correlation_series(const PairContext& ctx, const TimeGrid& grid, SplitMode mode) {
  if (mode == SplitMode::von_neumann && ctx.spin.two_s != 1) {
    throw Error(ErrorKind::unsupported_spin, "the von Neumann split is only available for S = 1/2");
  }
  CorrelationSeries series;
  series.mode = mode;
  series.times = grid;
  const std::size_t n = grid.size();
  series.fid.resize(n);
  series.mutual_info.resize(n);
  series.classical.resize(n);
  series.quantum.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = grid[k];
    series.fid[k] = pair_g(ctx.spin, ctx.b_ij, t) * fid_zz(ctx.spin, ctx.other_couplings_i, t);
    series.mutual_info[k] = mutual_info_ising(ctx, t);
    if (mode == SplitMode::von_neumann) {
      const auto split = split_von_neumann_half(ctx, t);
      series.classical[k] = split.classical;
      series.quantum[k] = split.discord;
    } else {
      const auto split = split_povm(ctx, t);
      series.classical[k] = split.classical;
      series.quantum[k] = split.quantum;
    }
  }
  return series;
}

std::string to_csv(const CorrelationSeries& series) {
  CsvTable table;
  table.header = {"t", "fid", "I", series.mode == SplitMode::von_neumann ? "C" : "J", "Q"};
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    table.rows.push_back({series.times[k], series.fid[k], series.mutual_info[k], series.classical[k], series.quantum[k]});
  }
  return table.to_string();
}

}  // namespace fidcorr::ising
