#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qfluct/calibration.hpp"
#include "qfluct/smearing.hpp"
#include "qfluct/sweep.hpp"
#include "qfluct/walker.hpp"

namespace qfluct::csv {

/// 17 significant digits ("%.17g"): reading the text back gives the same double.
std::string format_double(double v);

/// A header plus rows of numeric cells. Every output format of the tool is
/// one of these, so read + write is byte-identical on any file we produced.
struct NumericTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

void write(std::ostream& out, const NumericTable& table);
/// Throws PreconditionError on ragged rows or unparsable cells.
NumericTable read(std::istream& in);

inline const std::vector<std::string> kSweepHeader = {"t0",     "c_analytic", "f_shift",
                                                     "c_simulated", "stderr", "n_steps"};
inline const std::vector<std::string> kWalkHeader = {"N", "msd", "stderr"};
inline const std::vector<std::string> kCalibrationHeader = {"f", "c_estimate", "stderr", "n_steps"};
inline const std::vector<std::string> kVerificationHeader = {"t0",      "quad_value", "closed_form",
                                                             "abs_dev", "err_bound",  "alpha"};
inline const std::vector<std::string> kKernelHeader = {"t0", "value"};

NumericTable to_table(const SweepResult& result);
NumericTable to_table(const WalkEnsembleResult& result);
NumericTable to_table(const MonteCarloTable& table);
NumericTable to_table(const VerificationReport& report);

/// Rebuilds a calibration table from its CSV (mode and base variance come
/// from the caller). Throws PreconditionError on a header mismatch.
MonteCarloTable calibration_from_table(const NumericTable& table, SamplerMode mode, double sigma2);

}  // namespace qfluct::csv
