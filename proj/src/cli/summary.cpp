#include "fidcorr/cli/summary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace fidcorr::cli {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string spin_label(int two_s) { return two_s % 2 == 0 ? std::to_string(two_s / 2) : std::to_string(two_s) + "/2"; }

}  // namespace

std::string emit_summary(const RunResults& r) {
  std::ostringstream out;
  out << "fidcorr summary";
  if (!r.mode.empty()) out << " [" << r.mode << "]";
  out << "\n";
  if (r.empty()) {
    out << "no data\n";
    return out.str();
  }
  if (!r.config_echo.empty()) {
    out << "\nsettings\n";
    std::istringstream lines(r.config_echo);
    for (std::string line; std::getline(lines, line);) out << "  " << line << "\n";
  }
  if (!r.metrics.empty()) {
    std::size_t width = 0;
    for (const auto& m : r.metrics) width = std::max(width, m.name.size());
    out << "\nmetrics\n";
    for (const auto& m : r.metrics) {
      out << "  " << m.name << std::string(width - m.name.size() + 2, ' ') << sci(m.value);
      if (!m.note.empty()) out << "  (" << m.note << ")";
      out << "\n";
    }
  }
  if (!r.ratios.empty()) {
    out << "\nQ/I small-t ratio\n";
    out << "  S       measured    t->0        1/(S+1)     |t->0 - target|\n";
    for (const auto& row : r.ratios) {
      std::string s = spin_label(row.two_s);
      s.resize(std::max<std::size_t>(s.size(), 6), ' ');
      out << "  " << s << "  " << fixed(row.measured) << "    " << fixed(row.extrapolated) << "    " << fixed(row.target)
          << "    " << sci(std::abs(row.extrapolated - row.target)) << "\n";
    }
  }
  if (!r.outputs.empty()) {
    out << "\noutputs\n";
    for (const auto& o : r.outputs) out << "  " << o << "\n";
  }
  return out.str();
}

}  // namespace fidcorr::cli
