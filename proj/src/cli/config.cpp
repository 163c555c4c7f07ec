#include "fidcorr/cli/config.hpp"

#include "fidcorr/error.hpp"

#include <json.hpp>

#include <cmath>
#include <set>
#include <sstream>

namespace fidcorr::cli {

using nlohmann::json;

const char* to_string(RunMode mode) {
  switch (mode) {
    case RunMode::ising_analytic: return "ising_analytic";
    case RunMode::ising_oracle_compare: return "ising_oracle_compare";
    case RunMode::dipolar_memory: return "dipolar_memory";
    case RunMode::povm_validate: return "povm_validate";
  }
  return "?";
}

std::optional<RunMode> parse_mode(std::string_view text) {
  for (RunMode m : {RunMode::ising_analytic, RunMode::ising_oracle_compare, RunMode::dipolar_memory,
                    RunMode::povm_validate}) {
    if (text == to_string(m)) return m;
  }
  return std::nullopt;
}

ising::SplitMode RunConfig::effective_split() const {
  if (split) return *split;
  return spin.two_s == 1 ? ising::SplitMode::von_neumann : ising::SplitMode::povm;
}

std::string RunConfig::output_name() const { return output.empty() ? std::string(to_string(mode)) + ".csv" : output; }

namespace {

class Validator {
 public:
  void fail(const std::string& path, const std::string& message) { errors_.push_back(path + ": " + message); }
  bool ok() const { return errors_.empty(); }

  std::string report() const {
    std::ostringstream out;
    out << errors_.size() << " problem(s) in config";
    for (const auto& e : errors_) out << "\n  " << e;
    return out.str();
  }

  void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!allowed.count(it.key())) fail(join(path, it.key()), "unknown key");
    }
  }

  const json* object(const json& parent, const std::string& path, const std::string& key) {
    if (!parent.contains(key)) return nullptr;
    const json& v = parent.at(key);
    if (!v.is_object()) {
      fail(join(path, key), "expected an object");
      return nullptr;
    }
    return &v;
  }

  std::optional<double> number(const json& parent, const std::string& path, const std::string& key) {
    if (!parent.contains(key)) return std::nullopt;
    const json& v = parent.at(key);
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
      fail(join(path, key), "expected a finite number");
      return std::nullopt;
    }
    return v.get<double>();
  }

  std::optional<long long> integer(const json& parent, const std::string& path, const std::string& key) {
    if (!parent.contains(key)) return std::nullopt;
    const json& v = parent.at(key);
    if (!v.is_number_integer()) {
      fail(join(path, key), "expected an integer");
      return std::nullopt;
    }
    return v.get<long long>();
  }

  std::optional<std::string> string(const json& parent, const std::string& path, const std::string& key) {
    if (!parent.contains(key)) return std::nullopt;
    const json& v = parent.at(key);
    if (!v.is_string()) {
      fail(join(path, key), "expected a string");
      return std::nullopt;
    }
    return v.get<std::string>();
  }

  std::optional<std::array<double, 3>> vec3(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3) {
      fail(path, "expected an array of 3 numbers");
      return std::nullopt;
    }
    std::array<double, 3> out{};
    for (std::size_t k = 0; k < 3; ++k) {
      if (!v[k].is_number() || !std::isfinite(v[k].get<double>())) {
        fail(path + "[" + std::to_string(k) + "]", "expected a finite number");
        return std::nullopt;
      }
      out[k] = v[k].get<double>();
    }
    return out;
  }

  static std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

 private:
  std::vector<std::string> errors_;
};

void parse_lattice(Validator& v, const json& node, LatticeInput& out) {
  const std::string path = "lattice";
  v.check_keys(node, path, {"sites", "field_direction", "coupling_scale", "b_matrix"});
  const bool has_sites = node.contains("sites");
  const bool has_matrix = node.contains("b_matrix");
  if (has_sites == has_matrix) {
    v.fail(path, "give exactly one of 'sites' or 'b_matrix'");
    return;
  }
  if (has_sites) {
    const json& sites = node.at("sites");
    if (!sites.is_array() || sites.size() < 2) {
      v.fail(path + ".sites", "expected an array of at least 2 positions");
    } else {
      for (std::size_t k = 0; k < sites.size(); ++k) {
        if (auto p = v.vec3(sites[k], path + ".sites[" + std::to_string(k) + "]")) out.sites.push_back(*p);
      }
    }
    if (node.contains("field_direction")) {
      if (auto f = v.vec3(node.at("field_direction"), path + ".field_direction")) {
        if (std::hypot((*f)[0], (*f)[1], (*f)[2]) <= 1e-12) {
          v.fail(path + ".field_direction", "must be a non-zero vector");
        } else {
          out.field_direction = *f;
        }
      }
    }
    if (auto s = v.number(node, path, "coupling_scale")) {
      if (*s <= 0.0) v.fail(path + ".coupling_scale", "must be positive");
      out.coupling_scale = *s;
    }
    return;
  }
  if (node.contains("field_direction") || node.contains("coupling_scale")) {
    v.fail(path, "'field_direction' and 'coupling_scale' only apply with 'sites'");
  }
  const json& m = node.at("b_matrix");
  const std::string mpath = path + ".b_matrix";
  if (!m.is_array() || m.size() < 2) {
    v.fail(mpath, "expected a square array of at least 2 rows");
    return;
  }
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::string rpath = mpath + "[" + std::to_string(i) + "]";
    if (!m[i].is_array() || m[i].size() != n) {
      v.fail(rpath, "expected a row of " + std::to_string(n) + " numbers");
      continue;
    }
    std::vector<double> row;
    for (std::size_t j = 0; j < n; ++j) {
      if (!m[i][j].is_number() || !std::isfinite(m[i][j].get<double>())) {
        v.fail(rpath + "[" + std::to_string(j) + "]", "expected a finite number");
        row.push_back(0.0);
      } else {
        row.push_back(m[i][j].get<double>());
      }
    }
    out.b_matrix.push_back(std::move(row));
  }
  if (out.b_matrix.size() != n) return;
  for (std::size_t i = 0; i < n; ++i) {
    if (out.b_matrix[i][i] != 0.0) v.fail(mpath + "[" + std::to_string(i) + "][" + std::to_string(i) + "]", "diagonal must be zero");
    for (std::size_t j = i + 1; j < n; ++j) {
      if (out.b_matrix[i][j] != out.b_matrix[j][i]) {
        v.fail(mpath + "[" + std::to_string(i) + "][" + std::to_string(j) + "]", "matrix must be symmetric");
      }
    }
  }
}

std::size_t site_count(const LatticeInput& l) { return l.uses_matrix() ? l.b_matrix.size() : l.sites.size(); }

}  // namespace

RunConfig validate_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::config, std::string("cannot parse config: ") + e.what());
  }
  Validator v;
  RunConfig cfg;
  if (!root.is_object()) throw Error(ErrorKind::config, "config root must be an object");
  v.check_keys(root, "", {"mode", "spin", "lattice", "pair", "grid", "split", "hierarchy", "moments", "quadrature",
                          "spin_sweep", "output"});

  if (auto mode = v.string(root, "", "mode")) {
    if (auto m = parse_mode(*mode)) {
      cfg.mode = *m;
    } else {
      v.fail("mode", "unknown mode '" + *mode + "'");
    }
  } else if (!root.contains("mode")) {
    v.fail("mode", "missing required key");
  }

  if (const json* spin = v.object(root, "", "spin")) {
    v.check_keys(*spin, "spin", {"two_s", "beta"});
    if (auto two_s = v.integer(*spin, "spin", "two_s")) {
      if (*two_s < 1 || *two_s > 40) v.fail("spin.two_s", "must be an integer in [1, 40]");
      cfg.spin.two_s = static_cast<int>(*two_s);
    }
    if (auto beta = v.number(*spin, "spin", "beta")) {
      if (*beta <= 0.0) v.fail("spin.beta", "must be positive");
      cfg.spin.beta = *beta;
    }
  }

  if (const json* lattice = v.object(root, "", "lattice")) {
    parse_lattice(v, *lattice, cfg.lattice);
  } else if (!root.contains("lattice")) {
    v.fail("lattice", "missing required key");
  }

  if (root.contains("pair")) {
    const json& p = root.at("pair");
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_unsigned() || !p[1].is_number_unsigned()) {
      v.fail("pair", "expected two non-negative site indices");
    } else {
      cfg.pair = {p[0].get<std::size_t>(), p[1].get<std::size_t>()};
    }
  }
  const std::size_t n_sites = site_count(cfg.lattice);
  if (cfg.pair[0] == cfg.pair[1]) v.fail("pair", "sites must differ");
  if (n_sites >= 2 && (cfg.pair[0] >= n_sites || cfg.pair[1] >= n_sites)) v.fail("pair", "site index out of range");

  if (const json* grid = v.object(root, "", "grid")) {
    v.check_keys(*grid, "grid", {"t_max", "n_points"});
    if (auto t = v.number(*grid, "grid", "t_max")) {
      if (*t <= 0.0) v.fail("grid.t_max", "must be positive");
      cfg.grid.t_max = *t;
    }
    if (auto n = v.integer(*grid, "grid", "n_points")) {
      if (*n < 2) v.fail("grid.n_points", "must be at least 2");
      else cfg.grid.n_points = static_cast<std::size_t>(*n);
    }
  }

  if (auto split = v.string(root, "", "split")) {
    if (*split == "von_neumann") cfg.split = ising::SplitMode::von_neumann;
    else if (*split == "povm") cfg.split = ising::SplitMode::povm;
    else v.fail("split", "expected 'von_neumann' or 'povm'");
  }
  if (cfg.split == ising::SplitMode::von_neumann && cfg.spin.two_s != 1) {
    v.fail("split", "the von Neumann split needs spin.two_s = 1");
  }

  if (const json* h = v.object(root, "", "hierarchy")) {
    v.check_keys(*h, "hierarchy", {"K", "closure", "K_ext"});
    if (auto k = v.integer(*h, "hierarchy", "K")) {
      if (*k < 1 || *k > 2) v.fail("hierarchy.K", "must be 1 or 2 (moments up to m6)");
      cfg.hierarchy.order = static_cast<int>(*k);
    }
    if (auto c = v.string(*h, "hierarchy", "closure")) {
      if (*c == "truncate_zero") cfg.hierarchy.closure = dipolar::Closure::truncate_zero;
      else if (*c == "gaussian_tail") cfg.hierarchy.closure = dipolar::Closure::gaussian_tail;
      else v.fail("hierarchy.closure", "expected 'truncate_zero' or 'gaussian_tail'");
    }
    if (auto k = v.integer(*h, "hierarchy", "K_ext")) {
      if (*k < 2 || *k > 4096) v.fail("hierarchy.K_ext", "must be in [2, 4096]");
      cfg.hierarchy.k_ext = static_cast<int>(*k);
    }
  }

  if (const json* m = v.object(root, "", "moments")) {
    v.check_keys(*m, "moments", {"m2", "m4", "m6"});
    cfg.moments.m2 = v.number(*m, "moments", "m2");
    cfg.moments.m4 = v.number(*m, "moments", "m4");
    cfg.moments.m6 = v.number(*m, "moments", "m6");
    if (cfg.moments.m2 && *cfg.moments.m2 <= 0.0) v.fail("moments.m2", "must be positive");
    if ((cfg.moments.m4 || cfg.moments.m6) && !cfg.moments.m2) v.fail("moments", "m4/m6 need m2");
    if (cfg.moments.m6 && !cfg.moments.m4) v.fail("moments.m6", "needs m4");
  }

  if (const json* q = v.object(root, "", "quadrature")) {
    v.check_keys(*q, "quadrature", {"n_theta", "n_phi"});
    if (auto n = v.integer(*q, "quadrature", "n_theta")) {
      if (*n < 1 || *n > 1024) v.fail("quadrature.n_theta", "must be in [1, 1024]");
      cfg.quadrature.n_theta = static_cast<int>(*n);
    }
    if (auto n = v.integer(*q, "quadrature", "n_phi")) {
      if (*n < 1 || *n > 4096) v.fail("quadrature.n_phi", "must be in [1, 4096]");
      cfg.quadrature.n_phi = static_cast<int>(*n);
    }
  }

  if (root.contains("spin_sweep")) {
    const json& s = root.at("spin_sweep");
    if (!s.is_array() || s.empty()) {
      v.fail("spin_sweep", "expected a non-empty array of 2S values");
    } else {
      cfg.spin_sweep.clear();
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (!s[k].is_number_integer() || s[k].get<long long>() < 1 || s[k].get<long long>() > 40) {
          v.fail("spin_sweep[" + std::to_string(k) + "]", "expected an integer 2S in [1, 40]");
        } else {
          cfg.spin_sweep.push_back(s[k].get<int>());
        }
      }
    }
  }

  if (auto out = v.string(root, "", "output")) {
    if (out->empty()) v.fail("output", "must not be empty");
    cfg.output = *out;
  }

  if (!v.ok()) throw Error(ErrorKind::config, v.report());
  return cfg;
}

std::string serialize_config(const RunConfig& c) {
  json root;
  root["mode"] = to_string(c.mode);
  root["spin"] = {{"two_s", c.spin.two_s}, {"beta", c.spin.beta}};
  json lattice;
  if (c.lattice.uses_matrix()) {
    lattice["b_matrix"] = c.lattice.b_matrix;
  } else {
    lattice["sites"] = c.lattice.sites;
    lattice["field_direction"] = c.lattice.field_direction;
    lattice["coupling_scale"] = c.lattice.coupling_scale;
  }
  root["lattice"] = lattice;
  root["pair"] = c.pair;
  root["grid"] = {{"t_max", c.grid.t_max}, {"n_points", c.grid.n_points}};
  if (c.split) root["split"] = *c.split == ising::SplitMode::von_neumann ? "von_neumann" : "povm";
  root["hierarchy"] = {{"K", c.hierarchy.order},
                       {"closure", c.hierarchy.closure == dipolar::Closure::truncate_zero ? "truncate_zero" : "gaussian_tail"},
                       {"K_ext", c.hierarchy.k_ext}};
  json moments = json::object();
  if (c.moments.m2) moments["m2"] = *c.moments.m2;
  if (c.moments.m4) moments["m4"] = *c.moments.m4;
  if (c.moments.m6) moments["m6"] = *c.moments.m6;
  root["moments"] = moments;
  root["quadrature"] = {{"n_theta", c.quadrature.n_theta}, {"n_phi", c.quadrature.n_phi}};
  root["spin_sweep"] = c.spin_sweep;
  if (!c.output.empty()) root["output"] = c.output;
  return root.dump(2);
}

lattice::CouplingTable build_table(const LatticeInput& input) {
  if (input.uses_matrix()) {
    const auto n = static_cast<Eigen::Index>(input.b_matrix.size());
    Eigen::MatrixXd b(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) b(i, j) = input.b_matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return lattice::couplings_from_matrix(b);
  }
  lattice::LatticeSpec spec;
  for (const auto& p : input.sites) spec.site_positions.emplace_back(p[0], p[1], p[2]);
  spec.field_direction = lattice::Vec3(input.field_direction[0], input.field_direction[1], input.field_direction[2]);
  spec.coupling_scale = input.coupling_scale;
  return lattice::build_couplings(spec);
}

}  // namespace fidcorr::cli
