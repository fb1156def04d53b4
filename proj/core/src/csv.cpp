#include "qfluct/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "qfluct/error.hpp"

namespace qfluct::csv {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell) {
  if (cell.empty()) throw PreconditionError("empty CSV cell");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size()) throw PreconditionError("unparsable CSV cell '" + cell + "'");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write(std::ostream& out, const NumericTable& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

NumericTable read(std::istream& in) {
  NumericTable table;
  std::string line;
  if (!std::getline(in, line)) throw PreconditionError("CSV input is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.header = split(line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != table.header.size()) throw PreconditionError("ragged CSV row: " + line);
    std::vector<double> row;
    row.reserve(cells.size());
    for (const std::string& c : cells) row.push_back(parse_cell(c));
    table.rows.push_back(std::move(row));
  }
  return table;
}

NumericTable to_table(const SweepResult& result) {
  NumericTable t{kSweepHeader, {}};
  t.rows.reserve(result.rows.size());
  for (const SweepRow& r : result.rows)
    t.rows.push_back({r.t0, r.c_analytic, r.f_shift, r.c_simulated, r.std_error,
                      static_cast<double>(r.n_steps)});
  return t;
}

NumericTable to_table(const WalkEnsembleResult& result) {
  NumericTable t{kWalkHeader, {}};
  t.rows.reserve(result.msd.size());
  for (const MsdPoint& p : result.msd) t.rows.push_back({static_cast<double>(p.n), p.msd, p.std_error});
  return t;
}

NumericTable to_table(const MonteCarloTable& table) {
  NumericTable t{kCalibrationHeader, {}};
  for (const CalibrationRow& r : table.rows())
    t.rows.push_back({r.f, r.c_estimate, r.std_error, static_cast<double>(r.n_steps)});
  return t;
}

NumericTable to_table(const VerificationReport& report) {
  NumericTable t{kVerificationHeader, {}};
  for (const VerificationRow& r : report.rows)
    t.rows.push_back({r.t0, r.quad_value, r.closed_form, r.abs_dev, r.err_bound, r.alpha});
  return t;
}

MonteCarloTable calibration_from_table(const NumericTable& table, SamplerMode mode, double sigma2) {
  if (table.header != kCalibrationHeader) throw PreconditionError("not a calibration table (header mismatch)");
  std::vector<CalibrationRow> rows;
  rows.reserve(table.rows.size());
  for (const auto& r : table.rows)
    rows.push_back({r[0], r[1], r[2], static_cast<std::uint64_t>(r[3])});
  return MonteCarloTable(std::move(rows), mode, sigma2);
}

}  // namespace qfluct::csv
