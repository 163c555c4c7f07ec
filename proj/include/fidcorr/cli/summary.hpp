#pragma once

#include <string>
#include <vector>

namespace fidcorr::cli {

struct Metric {
  std::string name;
  double value = 0.0;
  std::string note;  // target or comment, may be empty
};

struct RatioRow {
  int two_s = 1;
  double measured = 0.0;      // Q/I at the smallest sampled time
  double extrapolated = 0.0;  // t -> 0 estimate
  double target = 0.0;        // 1/(S+1)
};

struct RunResults {
  std::string mode;
  std::string config_echo;  // every setting, defaults included
  std::vector<Metric> metrics;
  std::vector<RatioRow> ratios;
  std::vector<std::string> outputs;

  bool empty() const { return metrics.empty() && ratios.empty(); }
};

/// Plain-text report; identical results give byte-identical text.
std::string emit_summary(const RunResults& results);

}  // namespace fidcorr::cli
