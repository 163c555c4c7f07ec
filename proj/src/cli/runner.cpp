#include "fidcorr/cli/runner.hpp"

#include "fidcorr/csv.hpp"
#include "fidcorr/error.hpp"
#include "fidcorr/oracle/coherent.hpp"
#include "fidcorr/oracle/entropy.hpp"
#include "fidcorr/oracle/hamiltonian.hpp"
#include "fidcorr/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <string>
#include <thread>

namespace fidcorr::cli {

unsigned thread_count() {
  if (const char* env = std::getenv("FIDCORR_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1 && n <= 1024) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

constexpr double kSmallBt[2] = {0.05, 0.1};

double max_abs(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

std::string sibling_name(const std::string& output, const std::string& suffix) {
  std::filesystem::path p(output);
  return (p.parent_path() / (p.stem().string() + suffix + p.extension().string())).string();
}

void write_output(RunResults& res, const std::filesystem::path& dir, const std::string& name, const std::string& text) {
  const auto path = dir / name;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  write_file_atomic(path, text);
  res.outputs.push_back(name);
}

ising::PairContext isolated_pair(const SpinParams& spin, double b) {
  ising::PairContext ctx;
  ctx.spin = spin;
  ctx.b_ij = b;
  return ctx;
}

void run_ising_analytic(const RunConfig& cfg, const std::filesystem::path& dir, RunResults& res) {
  const auto table = build_table(cfg.lattice);
  const auto [i, j] = cfg.pair;
  const auto ctx = ising::make_pair_context(cfg.spin, table, i, j);
  const auto grid = uniform_grid(cfg.grid.t_max, cfg.grid.n_points);
  const auto mode = cfg.effective_split();
  const auto series = ising::correlation_series(ctx, grid, mode);

  std::vector<double> split_sum(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) split_sum[k] = series.classical[k] + series.quantum[k];
  const auto m = ising::moments_zz(cfg.spin, lattice::lattice_sum(table, i, 2), lattice::lattice_sum(table, i, 4));

  res.metrics.push_back({"M2_zz", m.m2, ""});
  res.metrics.push_back({"M4_zz", m.m4, ""});
  res.metrics.push_back({"(M4_gauss - M4)/M4", (m.m4_gauss - m.m4) / m.m4, ""});
  res.metrics.push_back({"max I", *std::max_element(series.mutual_info.begin(), series.mutual_info.end()), "bits"});
  res.metrics.push_back({"max |split sum - I|", max_abs(split_sum, series.mutual_info), "target 0"});

  for (int two_s : cfg.spin_sweep) {
    const SpinParams spin{two_s, cfg.spin.beta};
    const auto pair = isolated_pair(spin, ctx.b_ij);
    double q[2];
    for (int n = 0; n < 2; ++n) {
      const double t = kSmallBt[n] / std::abs(ctx.b_ij);
      q[n] = ising::split_povm(pair, t).quantum / ising::mutual_info_ising(pair, t);
    }
    res.ratios.push_back({two_s, q[0], (4.0 * q[0] - q[1]) / 3.0, 1.0 / (spin.s() + 1.0)});
  }

  write_output(res, dir, cfg.output_name(), ising::to_csv(series));
  write_output(res, dir, sibling_name(cfg.output_name(), "_couplings"), lattice::to_csv(table));
}

void run_oracle_compare(const RunConfig& cfg, const std::filesystem::path& dir, RunResults& res) {
  const auto table = build_table(cfg.lattice);
  const std::size_t n = table.n_sites();
  const auto grid = uniform_grid(cfg.grid.t_max, cfg.grid.n_points);
  const oracle::DiagonalizedHamiltonian h(cfg.spin, table, oracle::CouplingMode::ising);

  std::vector<double> f_oracle(grid.size()), f_analytic(grid.size(), 0.0);
  parallel_for(grid.size(), thread_count(), [&](std::size_t k) { f_oracle[k] = h.fid(grid[k]); });
  double site_dev = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const auto couplings = lattice::neighbor_couplings(table, s);
    const auto sf = h.site_fid(s, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double f = ising::fid_zz(cfg.spin, couplings, grid[k]);
      f_analytic[k] += f / static_cast<double>(n);
      site_dev = std::max(site_dev, std::abs(sf[k] - f));
    }
  }
  res.metrics.push_back({"max |F_oracle - F_analytic|", max_abs(f_oracle, f_analytic), "target < 1e-10"});
  res.metrics.push_back({"max site |F_i - F_i analytic|", site_dev, "target < 1e-10"});

  CsvTable csv;
  csv.header = {"t", "fid_oracle", "fid_analytic"};
  const auto [i, j] = cfg.pair;
  const auto ctx = ising::make_pair_context(cfg.spin, table, i, j);
  const bool with_info = ctx.equivalent();
  std::vector<double> i_oracle(grid.size()), i_analytic(grid.size());
  if (with_info) {
    csv.header.insert(csv.header.end(), {"I_oracle", "I_analytic"});
    const int d = cfg.spin.dim();
    auto oracle_info = [&](double t, double beta) {
      const auto pair = oracle::reduce_to_pair(h.evolved_state(t, beta), i, j, h.layout());
      return oracle::mutual_info_numeric(pair, d, d).exact;
    };
    parallel_for(grid.size(), thread_count(), [&](std::size_t k) {
      i_oracle[k] = oracle_info(grid[k], cfg.spin.beta);
      i_analytic[k] = ising::mutual_info_ising(ctx, grid[k]);
    });
    const double peak = *std::max_element(i_analytic.begin(), i_analytic.end());
    double rel = 0.0;
    std::size_t at = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (i_analytic[k] > 1e-6 * peak) {
        const double r = std::abs(i_oracle[k] / i_analytic[k] - 1.0);
        if (r >= rel) {
          rel = r;
          at = k;
        }
      }
    }
    res.metrics.push_back({"max |I_oracle/I_analytic - 1|", rel, "high-T bound 10 beta = " + std::to_string(10 * cfg.spin.beta)});
    if (peak > 0.0) {
      const double t = grid[at];
      SpinParams cooler = cfg.spin;
      cooler.beta /= 10.0;
      const double rel_cool = std::abs(oracle_info(t, cooler.beta) / ising::mutual_info_ising({cooler, ctx.b_ij, ctx.other_couplings_i, ctx.other_couplings_j}, t) - 1.0);
      if (rel > 0.0 && rel_cool > 0.0) res.metrics.push_back({"beta order of I discrepancy", std::log10(rel / rel_cool), "beta vs beta/10"});
    }
  } else {
    res.metrics.push_back({"pair information", 0.0, "skipped: pair sites are not equivalent"});
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::vector<double> row{grid[k], f_oracle[k], f_analytic[k]};
    if (with_info) row.insert(row.end(), {i_oracle[k], i_analytic[k]});
    csv.rows.push_back(std::move(row));
  }
  write_output(res, dir, cfg.output_name(), csv.to_string());
}

void run_dipolar(const RunConfig& cfg, const std::filesystem::path& dir, RunResults& res) {
  const auto table = build_table(cfg.lattice);
  const auto [i, j] = cfg.pair;
  dipolar::MomentSet moments;
  if (cfg.moments.m2) {
    moments.m2 = *cfg.moments.m2;
  } else {
    moments.m2 = dipolar::second_moment(cfg.spin, lattice::lattice_sum(table, i, 2));
  }
  const auto gauss = dipolar::gaussian_moments(moments.m2);
  moments.m4 = cfg.moments.m4.value_or(gauss.m4);
  // m4 without m6 only fixes v_0 and v_1, so the chain stops at K = 1.
  const bool m6_known = cfg.moments.m6 || !cfg.moments.m4;
  moments.m6 = cfg.moments.m6.value_or(m6_known ? gauss.m6 : moments.m4 * moments.m4 / moments.m2);
  const int order = m6_known ? cfg.hierarchy.order : 1;

  auto h = dipolar::vk_from_moments(moments);
  if (h.closure != dipolar::Closure::truncate_zero) {
    h.closure = cfg.hierarchy.closure;
    if (static_cast<int>(h.vk2.size()) > order + 1) h.vk2.resize(static_cast<std::size_t>(order) + 1);
  }
  h.k_ext = cfg.hierarchy.k_ext;

  const auto grid = uniform_grid(cfg.grid.t_max, cfg.grid.n_points);
  const auto sol = dipolar::solve_amplitudes(h, grid);
  const double b_ij = table.b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  const auto series = dipolar::dipolar_series(cfg.spin, b_ij, sol);

  double gauss_dev = 0.0, cos_dev = 0.0, form_dev = 0.0;
  const double v0 = std::sqrt(moments.m2);
  const auto deriv = dipolar::fid_derivative(sol);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    gauss_dev = std::max(gauss_dev, std::abs(series.a0[k] - std::exp(-0.5 * moments.m2 * t * t)));
    cos_dev = std::max(cos_dev, std::abs(series.a0[k] - std::cos(v0 * t)));
    const auto forms = dipolar::mutual_info_dipolar_forms(cfg.spin, b_ij, moments.m2, deriv[k]);
    const double scale = std::max(std::abs(forms.from_fid_derivative), 1e-300);
    form_dev = std::max(form_dev, std::abs(forms.from_fid_derivative - forms.from_amplitude) / scale);
  }
  for (std::size_t k = 0; k < h.vk2.size(); ++k) res.metrics.push_back({"v" + std::to_string(k) + "^2", h.vk2[k], ""});
  res.metrics.push_back({"integrated chain length", static_cast<double>(dipolar::effective_chain(h).size()), ""});
  res.metrics.push_back({"max |A0 - exp(-m2 t^2/2)|", gauss_dev, "Gaussian reference"});
  res.metrics.push_back({"max |A0 - cos(sqrt(m2) t)|", cos_dev, "two-level reference"});
  res.metrics.push_back({"max rel diff of pair-information forms", form_dev, "target < 1e-12"});
  res.metrics.push_back({"max I_dipolar", *std::max_element(series.mutual_info.begin(), series.mutual_info.end()), "bits"});
  res.metrics.push_back({"T_total at t_max", series.total_info.back(), "bits"});
  write_output(res, dir, cfg.output_name(), dipolar::to_csv(series));
}

void run_povm_validate(const RunConfig& cfg, const std::filesystem::path& dir, RunResults& res) {
  const auto table = build_table(cfg.lattice);
  const auto [i, j] = cfg.pair;
  const double b = table.b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  if (b == 0.0) throw Error(ErrorKind::invalid_pair, "the chosen pair has zero coupling");
  const auto quadrature = oracle::sphere_quadrature(cfg.quadrature.n_theta, cfg.quadrature.n_phi);

  struct Sample {
    double bt, info, j_oracle, j_closed, completeness;
  };
  const std::size_t n_spins = cfg.spin_sweep.size();
  std::vector<std::array<Sample, 2>> samples(n_spins);
  parallel_for(n_spins, thread_count(), [&](std::size_t s) {
    const SpinParams spin{cfg.spin_sweep[s], cfg.spin.beta};
    validate(spin);
    const auto pair = isolated_pair(spin, b);
    const double completeness = oracle::scs_completeness_check(spin, quadrature);
    for (int n = 0; n < 2; ++n) {
      const double t = kSmallBt[n] / std::abs(b);
      const DeviationState state{ising::reduced_pair_deviation(pair, t), spin.beta};
      const double info = oracle::mutual_info_numeric(state, spin.dim(), spin.dim()).exact;
      const double jo = oracle::povm_classical_info(state, spin, quadrature);
      samples[s][static_cast<std::size_t>(n)] = {kSmallBt[n], info, jo, ising::split_povm(pair, t).classical, completeness};
    }
  });

  CsvTable csv;
  csv.header = {"two_s", "bt", "I", "J_oracle", "J_closed", "Q_over_I", "target", "completeness"};
  double worst_completeness = 0.0, worst_ratio = 0.0;
  for (std::size_t s = 0; s < n_spins; ++s) {
    const int two_s = cfg.spin_sweep[s];
    const double target = 2.0 / (two_s + 2.0);
    double q[2];
    for (int n = 0; n < 2; ++n) {
      const auto& x = samples[s][static_cast<std::size_t>(n)];
      q[n] = (x.info - x.j_oracle) / x.info;
      csv.rows.push_back({static_cast<double>(two_s), x.bt, x.info, x.j_oracle, x.j_closed, q[n], target, x.completeness});
      worst_completeness = std::max(worst_completeness, x.completeness);
    }
    const double extrapolated = (4.0 * q[0] - q[1]) / 3.0;
    worst_ratio = std::max(worst_ratio, std::abs(extrapolated - target));
    res.ratios.push_back({two_s, q[0], extrapolated, target});
  }
  res.metrics.push_back({"max completeness deviation", worst_completeness, "target < 1e-10"});
  res.metrics.push_back({"max |Q/I(t->0) - 1/(S+1)|", worst_ratio, "target < 5e-3"});
  write_output(res, dir, cfg.output_name(), csv.to_string());
}

/// One "key.path = value" line per leaf setting, arrays kept inline.
std::string flatten_settings(const RunConfig& cfg) {
  std::string out;
  auto walk = [&out](auto&& self, const nlohmann::json& node, const std::string& path) -> void {
    if (node.is_object() && !node.empty()) {
      for (auto it = node.begin(); it != node.end(); ++it) self(self, it.value(), path.empty() ? it.key() : path + "." + it.key());
      return;
    }
    out += path + " = " + node.dump() + "\n";
  };
  walk(walk, nlohmann::json::parse(serialize_config(cfg)), "");
  return out;
}

}  // namespace

RunResults execute(const RunConfig& cfg, const std::filesystem::path& out_dir) {
  validate(cfg.spin);
  RunResults res;
  res.mode = to_string(cfg.mode);
  res.config_echo = flatten_settings(cfg);
  switch (cfg.mode) {
    case RunMode::ising_analytic: run_ising_analytic(cfg, out_dir, res); break;
    case RunMode::ising_oracle_compare: run_oracle_compare(cfg, out_dir, res); break;
    case RunMode::dipolar_memory: run_dipolar(cfg, out_dir, res); break;
    case RunMode::povm_validate: run_povm_validate(cfg, out_dir, res); break;
  }
  return res;
}

int run(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& report, std::ostream& diag) {
  try {
    report << emit_summary(execute(cfg, out_dir));
    return 0;
  } catch (const Error& e) {
    diag << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    diag << "error (config): " << e.what() << "\n";
    return exit_code(ErrorKind::config);
  }
}

}  // namespace fidcorr::cli
