#pragma once

#include "fidcorr/dipolar_memory.hpp"
#include "fidcorr/ising_exact.hpp"
#include "fidcorr/lattice.hpp"
#include "fidcorr/spin.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fidcorr::cli {

enum class RunMode { ising_analytic, ising_oracle_compare, dipolar_memory, povm_validate };

const char* to_string(RunMode mode);
std::optional<RunMode> parse_mode(std::string_view text);

/// Either explicit site geometry or a prebuilt b matrix.
struct LatticeInput {
  std::vector<std::array<double, 3>> sites;
  std::array<double, 3> field_direction{0.0, 0.0, 1.0};
  double coupling_scale = 1.0;
  std::vector<std::vector<double>> b_matrix;

  bool uses_matrix() const { return !b_matrix.empty(); }
  bool operator==(const LatticeInput&) const = default;
};

struct GridSpec {
  double t_max = 10.0;
  std::size_t n_points = 201;
  bool operator==(const GridSpec&) const = default;
};

struct HierarchyOptions {
  int order = 2;  // K
  dipolar::Closure closure = dipolar::Closure::gaussian_tail;
  int k_ext = dipolar::kDefaultChainLength;
  bool operator==(const HierarchyOptions&) const = default;
};

struct MomentOverrides {
  std::optional<double> m2;
  std::optional<double> m4;
  std::optional<double> m6;
  bool operator==(const MomentOverrides&) const = default;
};

struct QuadratureOptions {
  int n_theta = 64;
  int n_phi = 128;
  bool operator==(const QuadratureOptions&) const = default;
};

struct RunConfig {
  RunMode mode = RunMode::ising_analytic;
  SpinParams spin;
  LatticeInput lattice;
  std::array<std::size_t, 2> pair{0, 1};
  GridSpec grid;
  std::optional<ising::SplitMode> split;  // default: von Neumann for S = 1/2, POVM otherwise
  HierarchyOptions hierarchy;
  MomentOverrides moments;
  QuadratureOptions quadrature;
  std::vector<int> spin_sweep{1, 2, 3, 4};  // 2S values of the ratio table
  std::string output;                      // empty: "<mode>.csv"

  bool operator==(const RunConfig&) const = default;

  ising::SplitMode effective_split() const;
  std::string output_name() const;
};

/// Parses and validates a JSON run configuration. Every problem is reported
/// with its key path; all of them are collected into one config error.
RunConfig validate_config(std::string_view text);

/// JSON text that validate_config maps back to an equal RunConfig.
std::string serialize_config(const RunConfig& config);

lattice::CouplingTable build_table(const LatticeInput& input);

}  // namespace fidcorr::cli
