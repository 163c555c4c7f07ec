#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fidcorr {

/// Shortest-safe text for a double: 17 significant digits, so a parse of the
/// output reproduces the value bit for bit.
std::string format_double(double value);

/// Column-oriented numeric table serialized as comma-separated text.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string to_string() const;
  static CsvTable parse(std::string_view text);
};

/// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace fidcorr
