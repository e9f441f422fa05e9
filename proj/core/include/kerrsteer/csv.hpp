#pragma once

// CSV emission with fixed schemas. Reals use %.12e; complex quantities are split into
// re_/im_ columns followed by their standard errors.
//
//   moments   time, re_a1, im_a1, se_re_a1, se_im_a1, re_a2, ..., re_n1, ..., re_n2, ...
//   spectrum  omega, epr_12, epr_21, duan_simon_scaled
//   report    min_epr_12, omega_12, theta_12, min_epr_21, omega_21, theta_21,
//             min_duan_simon_scaled, omega_ds, theta_ds, classification
//   sweep     axis1, axis2, value, status, min_epr_12, min_epr_21,
//             min_duan_simon_scaled, classification
//   summary   quantity, estimate, reference, standard_error, z

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "kerrsteer/pipeline.hpp"

namespace kerrsteer {

std::string format_real(double x);

const std::vector<std::string>& moments_columns();
const std::vector<std::string>& spectrum_columns();
const std::vector<std::string>& report_columns();
const std::vector<std::string>& sweep_columns();
const std::vector<std::string>& summary_columns();

std::string moments_csv(const MomentSeries& series);
std::string spectrum_csv(const std::vector<SpectrumRow>& rows);
std::string report_csv(const SteeringReport& report);
std::string sweep_csv(const SweepGrid& grid);
std::string summary_csv(const SimulationSummary& summary);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws std::out_of_range if absent.
  [[nodiscard]] std::size_t column(std::string_view name) const;
};

/// Plain comma-separated reader (no quoting), enough for the files written here.
CsvTable parse_csv(std::string_view text);

/// Writes `content` to `path`, creating parent directories. Throws Error on failure.
void write_file(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

}  // namespace kerrsteer
