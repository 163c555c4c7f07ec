#include "fidcorr/dipolar_memory.hpp"
#include "fidcorr/error.hpp"
#include "fidcorr/ising_exact.hpp"
#include "fidcorr/oracle/coherent.hpp"
#include "fidcorr/oracle/entropy.hpp"
#include "fidcorr/oracle/hamiltonian.hpp"
#include "fidcorr/oracle/measurement.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace fidcorr;
using namespace fidcorr::oracle;

namespace {

lattice::CouplingTable table_of(const Eigen::MatrixXd& b) { return lattice::couplings_from_matrix(b); }

Eigen::MatrixXd pair_matrix(double b) {
  Eigen::MatrixXd m(2, 2);
  m << 0, b, b, 0;
  return m;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::config;
}

}  // namespace

TEST_CASE("Hamiltonian of a spin-1/2 pair") {
  const auto t = table_of(pair_matrix(1.0));
  const Eigen::MatrixXd ising = build_hamiltonian({1, 1e-3}, t, CouplingMode::ising);
  CHECK(ising.isApprox(Eigen::Vector4d(0.5, -0.5, -0.5, 0.5).asDiagonal().toDenseMatrix()));
  const Eigen::MatrixXd dip = build_hamiltonian({1, 1e-3}, t, CouplingMode::dipolar);
  CHECK(dip(1, 2) == doctest::Approx(-0.5));
  CHECK(dip(2, 1) == doctest::Approx(-0.5));
}

TEST_CASE("Hamiltonian against the dense reference") {
  std::mt19937_64 rng(2);
  for (int two_s : {1, 2, 3}) {
    const Eigen::MatrixXd b = test::random_couplings(rng, 3);
    for (auto [mode, flip] : {std::pair{CouplingMode::ising, 0.0}, std::pair{CouplingMode::dipolar, 1.0}}) {
      const Eigen::MatrixXd h = build_hamiltonian({two_s, 1e-3}, table_of(b), mode);
      const Eigen::MatrixXcd ref = test::reference_hamiltonian(two_s, b, flip);
      CHECK((h.cast<std::complex<double>>() - ref).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("cluster size guard") {
  Eigen::MatrixXd b = Eigen::MatrixXd::Constant(7, 7, 0.3);
  b.diagonal().setZero();
  CHECK(kind_of([&] { build_hamiltonian({3, 1e-3}, table_of(b), CouplingMode::ising); }) == ErrorKind::too_large_cluster);
}

TEST_CASE("dipolar FID against the matrix exponential") {
  std::mt19937_64 rng(8);
  for (int two_s : {1, 2}) {
    const Eigen::MatrixXd b = test::random_couplings(rng, 3);
    const DiagonalizedHamiltonian h({two_s, 1e-3}, table_of(b), CouplingMode::dipolar);
    const Eigen::MatrixXcd ref_h = test::reference_hamiltonian(two_s, b, 1.0);
    const test::RefSpin sp(two_s);
    Eigen::MatrixXcd sx = Eigen::MatrixXcd::Zero(ref_h.rows(), ref_h.cols());
    for (int s = 0; s < 3; ++s) sx += test::embed(sp.x, two_s + 1, 3, s);
    const Eigen::MatrixXcd sx1 = test::embed(sp.x, two_s + 1, 3, 1);
    const auto site = h.site_fid(1, {0.0, 0.8, 2.9});
    int k = 0;
    for (double t : {0.0, 0.8, 2.9}) {
      CHECK(h.fid(t) == doctest::Approx(test::correlation_by_expm(ref_h, sx, sx, t)).epsilon(1e-11));
      CHECK(site[k++] == doctest::Approx(test::correlation_by_expm(ref_h, sx1, sx, t)).epsilon(1e-11));
    }
  }
}

TEST_CASE("second moments from the spectrum") {
  std::mt19937_64 rng(4);
  for (int two_s : {1, 2}) {
    const SpinParams spin{two_s, 1e-3};
    const Eigen::MatrixXd b = test::random_couplings(rng, 3);
    const auto table = table_of(b);
    double site_avg = 0.0;
    for (std::size_t i = 0; i < 3; ++i) site_avg += lattice::lattice_sum(table, i, 2) / 3.0;
    const DiagonalizedHamiltonian dip(spin, table, CouplingMode::dipolar);
    CHECK(dip.spectral_moment(2) == doctest::Approx(dipolar::second_moment(spin, site_avg)).epsilon(1e-12));
    const DiagonalizedHamiltonian zz(spin, table, CouplingMode::ising);
    CHECK(zz.spectral_moment(2) == doctest::Approx(ising::moments_zz(spin, site_avg, 0.0).m2).epsilon(1e-12));
    CHECK(zz.spectral_moment(3) == 0.0);
  }
}

TEST_CASE("initial state and reductions") {
  const SpinParams spin{1, 1e-2};
  const auto st = build_initial_state(spin, 3);
  CHECK(st.dim() == 8);
  CHECK(kind_of([] { build_initial_state({1, 0.9}, 3); }) == ErrorKind::beta_too_large);
  const auto rho = build_initial_density(spin, 3);
  CHECK(rho.matrix().trace().real() == doctest::Approx(1.0));
  const SiteLayout layout = uniform_layout(3, 2);
  const auto pair = reduce_to_pair(st, 0, 2, layout);
  const test::RefSpin sp(1);
  const Eigen::MatrixXcd expect = test::kron(sp.x, Eigen::MatrixXcd::Identity(2, 2)) + test::kron(Eigen::MatrixXcd::Identity(2, 2), sp.x);
  CHECK((pair.deviation - expect).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(kind_of([&] { reduce_to_pair(st, 1, 1, layout); }) == ErrorKind::invalid_pair);

  std::mt19937_64 rng(1);
  const Eigen::MatrixXd b = test::random_couplings(rng, 3);
  const DiagonalizedHamiltonian h(spin, table_of(b), CouplingMode::dipolar);
  CHECK((h.evolved_state(0.0, spin.beta).deviation - st.deviation).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("entropy of a weakly polarized state") {
  for (double beta : {1e-2, 1e-5, 1e-8}) {
    Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(2, 2);
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    const DeviationState st{z, beta};
    const long double ref = 1.0L - test::entropy_of_spectrum({beta, -beta}, 2);
    CHECK(entropy_deficit(st) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-12));
    CHECK(entropy(st) == doctest::Approx(entropy_exact(st.density())).epsilon(1e-14));
  }
  CHECK(entropy_kernel(1e-5) == doctest::Approx(0.5e-10 - 1e-15 / 6).epsilon(1e-12));
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(2, 2);
  bad(1, 1) = -0.1;
  bad(0, 0) = 1.1;
  CHECK(kind_of([&] { entropy_exact(DensityMatrix(bad)); }) == ErrorKind::non_physical_state);
}

TEST_CASE("mutual information of correlated and product states") {
  const test::RefSpin sp(1);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);
  // (1 + beta Z)(1 + beta X) / 4
  const DeviationState product{test::kron(sp.z, id) + test::kron(id, sp.x) + 1e-3 * test::kron(sp.z, sp.x), 1e-3};
  CHECK(std::abs(mutual_info_numeric(product, 2, 2).exact) < 1e-18);
  const DeviationState zz{4.0 * test::kron(sp.z, sp.z), 1e-3};
  const auto mi = mutual_info_numeric(zz, 2, 2);
  // 2 - S(rho) for the spectrum (1 +/- beta)/4, twice each
  const long double ref = 2.0L - test::entropy_of_spectrum({1e-3, 1e-3, -1e-3, -1e-3}, 4);
  CHECK(mi.exact == doctest::Approx(static_cast<double>(ref)).epsilon(1e-12));
  CHECK(mi.trace_form == doctest::Approx(1e-6 / (2 * std::numbers::ln2)).epsilon(1e-12));
  CHECK(mutual_info_exact(zz.density(), 2, 2) == doctest::Approx(mi.exact).epsilon(1e-6));
}

TEST_CASE("von Neumann measurement") {
  CHECK(kind_of([] { VonNeumannBasis(Eigen::Vector3d(1, 1, 0)); }) == ErrorKind::invalid_basis);
  const auto basis = VonNeumannBasis::from_angles(0.7, 2.1);
  const auto p = basis.projectors();
  CHECK((p[0] + p[1] - Eigen::Matrix2cd::Identity()).norm() < 1e-15);
  CHECK((p[0] * p[0] - p[0]).norm() < 1e-15);

  const test::RefSpin sp(1);
  const DeviationState zz{4.0 * test::kron(sp.z, sp.z) + test::kron(sp.x, sp.x), 1e-3};
  const auto measured = von_neumann_measure(zz, basis, 2);
  const auto measured_rho = von_neumann_measure(zz.density(), basis, 2);
  CHECK((measured.density().matrix() - measured_rho.matrix()).cwiseAbs().maxCoeff() < 1e-15);

  const DeviationState classical{4.0 * test::kron(sp.z, sp.z), 1e-3};
  const auto best = classical_info_von_neumann(classical, 2);
  CHECK(best.value == doctest::Approx(mutual_info_numeric(classical, 2, 2).exact).epsilon(1e-9));
  CHECK(std::abs(best.best_direction.z()) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("spin coherent states") {
  for (int two_s = 1; two_s <= 4; ++two_s) {
    const SpinParams spin{two_s, 1e-3};
    const test::RefSpin sp(two_s);
    const auto st = scs_state(spin, 1.1, -0.4);
    CHECK(st.amplitudes.norm() == doctest::Approx(1.0));
    const auto v = st.amplitudes;
    CHECK((v.adjoint() * sp.z * v)(0).real() == doctest::Approx(spin.s() * std::cos(1.1)));
    CHECK((v.adjoint() * sp.x * v)(0).real() == doctest::Approx(spin.s() * std::sin(1.1) * std::cos(-0.4)));
    CHECK((v.adjoint() * sp.y * v)(0).real() == doctest::Approx(spin.s() * std::sin(1.1) * std::sin(-0.4)));
  }
}

TEST_CASE("sphere quadrature") {
  const auto q = sphere_quadrature();
  CHECK(q.nodes.size() == 64u * 128u);
  double w = 0.0;
  for (const auto& n : q.nodes) w += n.weight;
  CHECK(w == doctest::Approx(4 * std::numbers::pi).epsilon(1e-14));
  for (int two_s = 1; two_s <= 4; ++two_s) CHECK(scs_completeness_check({two_s, 1e-3}, q) < kCompletenessTolerance);
  CHECK(scs_completeness_check({4, 1e-3}, sphere_quadrature(2, 3)) > 1e-3);
}

TEST_CASE("coherent-state POVM information") {
  const auto q = sphere_quadrature();
  const test::RefSpin sp(2);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(3, 3);
  const SpinParams spin{2, 1e-3};
  const DeviationState product{test::kron(sp.z, id) + test::kron(id, sp.x) + 1e-3 * test::kron(sp.z, sp.x), 1e-3};
  CHECK(std::abs(povm_classical_info(product, spin, q)) < 1e-16);

  ising::PairContext ctx;
  ctx.spin = spin;
  ctx.b_ij = 0.9;
  const DeviationState pair{ising::reduced_pair_deviation(ctx, 0.7), spin.beta};
  const double j = povm_classical_info(pair, spin, q);
  CHECK(j > 0.0);
  CHECK(j < mutual_info_numeric(pair, 3, 3).exact);
  CHECK(povm_classical_info(pair, spin, q, 7.0) == doctest::Approx(j).epsilon(1e-10));
  CHECK(povm_classical_info(pair.density(), spin, q) == doctest::Approx(j).epsilon(1e-6));
  CHECK(j == doctest::Approx(ising::split_povm(ctx, 0.7).classical).epsilon(1e-3));
  CHECK(kind_of([&] { povm_classical_info(pair, spin, sphere_quadrature(1, 1)); }) == ErrorKind::quadrature_too_coarse);
}
