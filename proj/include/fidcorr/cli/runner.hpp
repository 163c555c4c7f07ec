#pragma once

#include "fidcorr/cli/config.hpp"
#include "fidcorr/cli/summary.hpp"

#include <filesystem>
#include <iosfwd>

namespace fidcorr::cli {

/// Worker count from FIDCORR_THREADS, else the hardware concurrency.
unsigned thread_count();

/// Runs one configuration, writing CSV files under out_dir. Throws
/// fidcorr::Error on validation, guard or numerical failures.
RunResults execute(const RunConfig& config, const std::filesystem::path& out_dir);

/// execute() plus the summary on `report` and diagnostics on `diag`.
/// Returns the process exit status (0, 2, 3 or 4).
int run(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& report, std::ostream& diag);

}  // namespace fidcorr::cli
