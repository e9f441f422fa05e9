#include "kerrsteer/csv.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "kerrsteer/errors.hpp"

namespace kerrsteer {

namespace {

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  out += '\n';
  return out;
}

void append_estimate(std::vector<std::string>& row, const Estimate& e) {
  row.push_back(format_real(e.value.real()));
  row.push_back(format_real(e.value.imag()));
  row.push_back(format_real(e.se_re));
  row.push_back(format_real(e.se_im));
}

}  // namespace

std::string format_real(double x) { return fmt::format("{:.12e}", x); }

const std::vector<std::string>& moments_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c{"time"};
    for (const char* q : {"a1", "a2", "n1", "n2"}) {
      for (const char* part : {"re_", "im_", "se_re_", "se_im_"}) c.push_back(std::string(part) + q);
    }
    return c;
  }();
  return cols;
}

const std::vector<std::string>& spectrum_columns() {
  static const std::vector<std::string> cols{"omega", "epr_12", "epr_21", "duan_simon_scaled"};
  return cols;
}

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols{"min_epr_12", "omega_12", "theta_12", "min_epr_21",
                                             "omega_21", "theta_21", "min_duan_simon_scaled", "omega_ds",
                                             "theta_ds", "classification"};
  return cols;
}

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols{"axis1", "axis2", "value", "status", "min_epr_12",
                                             "min_epr_21", "min_duan_simon_scaled", "classification"};
  return cols;
}

const std::vector<std::string>& summary_columns() {
  static const std::vector<std::string> cols{"quantity", "estimate", "reference", "standard_error", "z"};
  return cols;
}

std::string moments_csv(const MomentSeries& s) {
  std::string out = join(moments_columns());
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    std::vector<std::string> row{format_real(s.times[i])};
    append_estimate(row, s.mean_a1[i]);
    append_estimate(row, s.mean_a2[i]);
    append_estimate(row, s.n1[i]);
    append_estimate(row, s.n2[i]);
    out += join(row);
  }
  return out;
}

std::string spectrum_csv(const std::vector<SpectrumRow>& rows) {
  std::string out = join(spectrum_columns());
  for (const auto& r : rows) {
    out += join({format_real(r.omega), format_real(r.epr_12), format_real(r.epr_21), format_real(r.duan_simon_scaled)});
  }
  return out;
}

std::string report_csv(const SteeringReport& r) {
  return join(report_columns()) +
         join({format_real(r.epr_12.value), format_real(r.epr_12.omega), format_real(r.epr_12.theta),
               format_real(r.epr_21.value), format_real(r.epr_21.omega), format_real(r.epr_21.theta),
               format_real(r.duan_simon.value), format_real(r.duan_simon.omega), format_real(r.duan_simon.theta),
               std::string(to_string(r.classification))});
}

std::string sweep_csv(const SweepGrid& g) {
  std::string out = join(sweep_columns());
  for (const auto& c : g.cells) {
    const bool ok = c.status == CellStatus::Ok;
    auto real_or_nan = [ok](double v) { return ok ? format_real(v) : std::string("nan"); };
    out += join({format_real(c.x1), format_real(c.x2), real_or_nan(c.value), std::string(to_string(c.status)),
                 real_or_nan(c.report.epr_12.value), real_or_nan(c.report.epr_21.value),
                 real_or_nan(c.report.duan_simon.value),
                 ok ? std::string(to_string(c.report.classification)) : std::string()});
  }
  return out;
}

std::string summary_csv(const SimulationSummary& s) {
  std::string out = join(summary_columns());
  for (const auto& c : s.components) {
    out += join({c.name, format_real(c.estimate), format_real(c.reference), format_real(c.standard_error),
                 format_real(c.z)});
  }
  return out;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::out_of_range(fmt::format("no CSV column '{}'", name));
}

CsvTable parse_csv(std::string_view text) {
  CsvTable t;
  std::istringstream in{std::string(text)};
  bool first = true;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (std::size_t pos; (pos = line.find(',', start)) != std::string::npos; start = pos + 1) {
      cells.push_back(line.substr(start, pos - start));
    }
    cells.push_back(line.substr(start));
    if (first) t.header = std::move(cells);
    else t.rows.push_back(std::move(cells));
    first = false;
  }
  return t;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot read '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace kerrsteer
