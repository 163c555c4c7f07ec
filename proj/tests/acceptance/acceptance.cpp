// Acceptance checks: one PASS/FAIL line each. `--only NAME` runs a single check.

#include "fidcorr/dipolar_memory.hpp"
#include "fidcorr/ising_exact.hpp"
#include "fidcorr/lattice.hpp"
#include "fidcorr/oracle/coherent.hpp"
#include "fidcorr/oracle/entropy.hpp"
#include "fidcorr/oracle/hamiltonian.hpp"
#include "fidcorr/oracle/measurement.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace fidcorr;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const char* spin_label(int two_s) {
  static const char* labels[] = {"0", "1/2", "1", "3/2", "2"};
  return labels[two_s];
}

// Pair (0, 1) with b = 1 and a third spin coupled by 0.5 to both.
lattice::CouplingTable pair_with_neighbor() {
  Eigen::MatrixXd b(3, 3);
  b << 0, 1, 0.5, 1, 0, 0.5, 0.5, 0.5, 0;
  return lattice::couplings_from_matrix(b);
}

ising::PairContext isolated(int two_s, double b, double beta) {
  ising::PairContext ctx;
  ctx.spin = {two_s, beta};
  ctx.b_ij = b;
  return ctx;
}

Outcome fid_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240611);
  const auto grid = uniform_grid(10.0, 1001);
  double worst_site = 0.0, worst_total = 0.0;
  int clusters = 0;
  for (int n = 2; n <= 4; ++n) {
    for (int two_s = 1; two_s <= 3; ++two_s) {
      for (int trial = 0; trial < 3; ++trial, ++clusters) {
        const auto table = lattice::couplings_from_matrix(test::random_couplings(rng, n));
        const SpinParams spin{two_s, 1e-3};
        const oracle::DiagonalizedHamiltonian h(spin, table, oracle::CouplingMode::ising);
        std::vector<double> average(grid.size(), 0.0);
        for (int s = 0; s < n; ++s) {
          const auto nb = lattice::neighbor_couplings(table, static_cast<std::size_t>(s));
          const auto oracle_fid = h.site_fid(static_cast<std::size_t>(s), grid);
          for (std::size_t k = 0; k < grid.size(); ++k) {
            const double f = ising::fid_zz(spin, nb, grid[k]);
            average[k] += f / n;
            worst_site = std::max(worst_site, std::abs(oracle_fid[k] - f));
          }
        }
        for (std::size_t k = 0; k < grid.size(); ++k) worst_total = std::max(worst_total, std::abs(h.fid(grid[k]) - average[k]));
      }
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst_site < 1e-10 && worst_total < 1e-10 && seconds < 60.0,
          fmt("%d clusters, max site dev %.2e, max total dev %.2e, %.2f s", clusters, worst_site, worst_total, seconds)};
}

Outcome info_high_t() {
  const auto table = pair_with_neighbor();
  const double betas[] = {1e-2, 1e-3, 1e-4};
  double disc[3];
  bool bounded = true;
  std::string detail;
  for (int b = 0; b < 3; ++b) {
    const SpinParams spin{1, betas[b]};
    const oracle::DiagonalizedHamiltonian h(spin, table, oracle::CouplingMode::ising);
    const auto ctx = ising::make_pair_context(spin, table, 0, 1);
    disc[b] = 0.0;
    for (double t = 0.25; t <= 5.0 + 1e-12; t += 0.25) {
      const auto pair = oracle::reduce_to_pair(h.evolved_state(t, spin.beta), 0, 1, h.layout());
      const double exact = oracle::mutual_info_numeric(pair, 2, 2).exact;
      disc[b] = std::max(disc[b], std::abs(exact / ising::mutual_info_ising(ctx, t) - 1.0));
    }
    bounded = bounded && disc[b] < 10 * betas[b];
    detail += fmt("beta=%.0e: %.3e; ", betas[b], disc[b]);
  }
  // least-squares slope of log(disc) against log(beta)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int b = 0; b < 3; ++b) {
    const double x = std::log(betas[b]), y = std::log(disc[b]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  const double order = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
  detail += fmt("bound 10 beta %s; measured order %.3f (required 1.0 +/- 0.2)", bounded ? "met" : "violated", order);
  return {bounded && std::abs(order - 1.0) <= 0.2, detail};
}

Outcome von_neumann_split() {
  const auto table = pair_with_neighbor();
  const SpinParams spin{1, 1e-3};
  const oracle::DiagonalizedHamiltonian h(spin, table, oracle::CouplingMode::ising);
  double worst = 0.0;
  std::string detail;
  for (double t : {0.3, 0.7, 1.1}) {
    const auto pair = oracle::reduce_to_pair(h.evolved_state(t, spin.beta), 0, 1, h.layout());
    const double info = oracle::mutual_info_numeric(pair, 2, 2).exact;
    const double c = oracle::classical_info_von_neumann(pair, 2).value;
    worst = std::max(worst, std::abs(c / info - 0.5));
    detail += fmt("t=%.1f C/I=%.8f; ", t, c / info);
  }
  detail += fmt("max |C/I - 1/2| %.2e", worst);
  return {worst < 1e-3, detail};
}

Outcome povm_ratio() {
  const auto q = oracle::sphere_quadrature();
  bool pass = true;
  std::string detail;
  for (int two_s = 1; two_s <= 3; ++two_s) {
    const auto ctx = isolated(two_s, 1.0, 1e-3);
    double ratio[2];
    const double ts[2] = {0.05, 0.1};
    for (int n = 0; n < 2; ++n) {
      const DeviationState st{ising::reduced_pair_deviation(ctx, ts[n]), ctx.spin.beta};
      const double info = oracle::mutual_info_numeric(st, two_s + 1, two_s + 1).exact;
      ratio[n] = 1.0 - oracle::povm_classical_info(st, ctx.spin, q) / info;
    }
    const double limit = (4 * ratio[0] - ratio[1]) / 3;
    const double target = 1.0 / (ctx.spin.s() + 1.0);
    pass = pass && std::abs(limit - target) < 5e-3;
    detail += fmt("S=%s Q/I(bt=0.05)=%.5f, t->0 %.5f vs %.5f; ", spin_label(two_s), ratio[0], limit, target);
  }
  const auto half = isolated(1, 1.0, 1e-3);
  double worst = 0.0;
  for (double t : uniform_grid(10.0, 1001)) {
    const double info = ising::mutual_info_ising(half, t);
    if (info == 0.0) continue;
    worst = std::max(worst, std::abs(ising::split_povm(half, t).quantum / info - 2.0 / 3.0));
  }
  detail += fmt("S=1/2 analytic max |Q/I - 2/3| %.2e", worst);
  return {pass && worst < 1e-12, detail};
}

Outcome additivity() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> spin(1, 4);
  std::uniform_real_distribution<double> coupling(-1.0, 1.0), time(0.0, 10.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto ctx = isolated(spin(rng), coupling(rng), 1e-3);
    const double t = time(rng);
    const auto split = ising::split_povm(ctx, t);
    const double info = ising::mutual_info_ising(ctx, t);
    worst = std::max(worst, std::abs(split.classical + split.quantum - info) / info);
  }
  return {worst < 1e-12, fmt("1000 samples, max |J + Q - I| / I = %.2e", worst)};
}

struct MomentCheck {
  double m2_rel, m4_rel, m2, m4;
};

MomentCheck numeric_moments(const SpinParams& spin, const std::vector<double>& nb) {
  double s2 = 0, s4 = 0;
  for (double b : nb) s2 += b * b, s4 += b * b * b * b;
  const auto m = ising::moments_zz(spin, s2, s4);
  auto f = [&](double t) { return ising::fid_zz(spin, nb, t); };
  const double h0 = 0.2 / std::sqrt(m.m2);
  const double m2 = -test::richardson_even_derivative(f, 2, h0, 5);
  const double m4 = test::richardson_even_derivative(f, 4, h0, 4);
  return {std::abs(m2 / m.m2 - 1), std::abs(m4 / m.m4 - 1), m2, m4};
}

Outcome moments() {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> spin(1, 4), count(1, 8);
  std::uniform_real_distribution<double> coupling(-1.0, 1.0);
  double worst2 = 0, worst4 = 0;
  for (int k = 0; k < 20; ++k) {
    std::vector<double> nb(static_cast<std::size_t>(count(rng)));
    for (double& b : nb) b = coupling(rng);
    const auto r = numeric_moments({spin(rng), 1e-3}, nb);
    worst2 = std::max(worst2, r.m2_rel);
    worst4 = std::max(worst4, r.m4_rel);
  }
  const double b = 0.73;
  const auto closed = ising::moments_zz({1, 1e-3}, b * b, std::pow(b, 4));
  const auto cosine = numeric_moments({1, 1e-3}, {b});
  const double single = std::max(std::abs(closed.m2 / (b * b) - 1), std::abs(closed.m4 / std::pow(b, 4) - 1));
  return {worst2 < 1e-6 && worst4 < 1e-6 && single < 1e-14 && cosine.m4_rel < 1e-6,
          fmt("20 configs: max rel err M2 %.2e, M4 %.2e; single neighbor closed form %.1e, from cos(bt) %.2e", worst2,
              worst4, single, cosine.m4_rel)};
}

Outcome shell_moments() {
  const std::pair<lattice::Shell, int> shells[] = {
      {lattice::Shell::chain, 2}, {lattice::Shell::simple_cubic, 6}, {lattice::Shell::fcc, 12}};
  const SpinParams spin{1, 1e-3};
  double previous = INFINITY;
  bool monotone = true, accurate = true;
  std::string detail;
  for (auto [shell, v] : shells) {
    const auto table = lattice::build_couplings(lattice::neighbor_shell(shell, lattice::Vec3::UnitZ()));
    const auto nb = lattice::neighbor_couplings(table, 0);
    const auto r = numeric_moments(spin, nb);
    accurate = accurate && r.m4_rel < 1e-6;
    const double rel = (3 * r.m2 * r.m2 - r.m4) / r.m4;
    monotone = monotone && rel < previous;
    previous = rel;
    detail += fmt("V=%d: dM4/M4=%.6f (V*ratio %.3f); ", v, rel, v * rel);
  }
  detail += monotone ? "shrinking" : "not shrinking";
  return {monotone && accurate, detail};
}

Outcome hierarchy() {
  const double m2 = 2.3;
  const auto h = dipolar::vk_from_moments(dipolar::gaussian_moments(m2));
  const auto chain = dipolar::effective_chain(h);
  bool linear = chain.size() == static_cast<std::size_t>(dipolar::kDefaultChainLength) + 1;
  for (std::size_t k = 0; k < chain.size(); ++k) linear = linear && std::abs(chain[k] / ((k + 1) * m2) - 1) < 1e-12;
  const auto grid = uniform_grid(3.0 / std::sqrt(m2), 301);
  const auto sol = dipolar::solve_amplitudes(h, grid);
  double gauss = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) gauss = std::max(gauss, std::abs(sol.a(0, static_cast<Eigen::Index>(k)) - std::exp(-0.5 * m2 * grid[k] * grid[k])));

  const dipolar::Hierarchy two{{m2, 0.0}, dipolar::Closure::truncate_zero, dipolar::kDefaultChainLength};
  const auto grid2 = uniform_grid(30.0 / std::sqrt(m2), 1001);
  const auto sol2 = dipolar::solve_amplitudes(two, grid2);
  double cosine = 0;
  for (std::size_t k = 0; k < grid2.size(); ++k) cosine = std::max(cosine, std::abs(sol2.a(0, static_cast<Eigen::Index>(k)) - std::cos(std::sqrt(m2) * grid2[k])));
  return {linear && gauss < 1e-6 && cosine < 1e-10,
          fmt("chain v_k^2=(k+1)v_0^2 to k=%zu %s; max |A0 - Gaussian| %.2e; K=1 max |A0 - cos| %.2e", chain.size() - 1,
              linear ? "ok" : "wrong", gauss, cosine)};
}

Outcome dipolar_info() {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> spin(1, 4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto forms = dipolar::mutual_info_dipolar_forms({spin(rng), 1e-3}, u(rng), std::abs(u(rng)) + 1e-3, u(rng));
    worst = std::max(worst, std::abs(forms.from_fid_derivative - forms.from_amplitude) / forms.from_amplitude);
  }
  double end_zero = 0, end_full = 0;
  for (int two_s = 1; two_s <= 4; ++two_s) {
    const SpinParams s{two_s, 1e-3};
    end_zero = std::max(end_zero, std::abs(dipolar::total_information(s, 1.0)));
    const double expect = s.beta * s.beta * s.s() * (s.s() + 1) / (3 * std::numbers::ln2);
    end_full = std::max(end_full, std::abs(dipolar::total_information(s, 0.0) / expect - 1));
  }
  return {worst < 1e-12 && end_zero == 0.0 && end_full <= 4.5e-16,
          fmt("1000 samples, max rel form diff %.2e; T(A0=1)=%.1e, |T(A0=0)/target - 1| %.1e", worst, end_zero, end_full)};
}

Outcome scs_completeness() {
  const auto q = oracle::sphere_quadrature();
  double worst = 0;
  std::string detail;
  for (int two_s = 1; two_s <= 4; ++two_s) {
    const double d = oracle::scs_completeness_check({two_s, 1e-3}, q);
    worst = std::max(worst, d);
    detail += fmt("S=%s %.2e; ", spin_label(two_s), d);
  }
  detail += fmt("grid %dx%d", q.n_theta, q.n_phi);
  return {worst < 1e-10, detail};
}

struct Check {
  const char* name;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const Check checks[] = {
      {"fid_equivalence", "oracle vs product-formula FID, N in {2,3,4}, S <= 3/2", fid_equivalence},
      {"info_high_t", "pair information high-temperature consistency", info_high_t},
      {"von_neumann_split", "von Neumann split C/I = 1/2 (S = 1/2)", von_neumann_split},
      {"povm_ratio", "coherent-state POVM small-t Q/I = 1/(S+1)", povm_ratio},
      {"additivity", "J + Q = I", additivity},
      {"moments", "FID derivatives reproduce M2, M4", moments},
      {"hierarchy", "memory-function chain: Gaussian and two-level limits", hierarchy},
      {"dipolar_info", "dipolar pair-information forms and total-information endpoints", dipolar_info},
      {"scs_completeness", "coherent-state completeness at 64x128", scs_completeness},
      {"shell_moments", "dM4/M4 shrinks over neighbor shells V = 2, 6, 12", shell_moments},
  };
  const char* only = nullptr;
  for (int k = 1; k < argc; ++k) {
    if (std::strcmp(argv[k], "--only") == 0 && k + 1 < argc) only = argv[++k];
  }
  int failures = 0, ran = 0;
  for (const auto& c : checks) {
    if (only && std::strcmp(only, c.name) != 0) continue;
    ++ran;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %-18s %s | %s\n", o.pass ? "PASS" : "FAIL", c.name, c.title, o.detail.c_str());
    failures += o.pass ? 0 : 1;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no check named %s\n", only ? only : "");
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
