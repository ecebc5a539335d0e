#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "lfs/analysis.hpp"
#include "lfs/bloch.hpp"
#include "lfs/field.hpp"
#include "lfs/scenario.hpp"

namespace lfs {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitInternal = 1, kExitConfig = 2, kExitNumerical = 3 };

struct Simulation {
  PolarizationTrajectory trajectory;
  Spectrum spectrum;
};

/// Atom integration followed by the mode sweep.
Simulation simulate(const ScenarioConfig& config, bool parallel = true);

/// First-order spectrum at the configured detection time (t1 = max(0, t_det - T)).
Spectrum analytic(const ScenarioConfig& config);

/// Manifest entries: every config key plus derived quantities, in a fixed order.
std::vector<std::pair<std::string, std::string>> manifest(const ScenarioConfig& config,
                                                          const PolarizationTrajectory* traj);

/// A spectrum table as read back from disk.
struct SpectrumTable {
  std::map<std::string, std::string> manifest;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> values;  ///< values[column][row]

  const std::vector<double>& column(const std::string& name) const;
  /// nu plus I_detection / I_integrated when present.
  Spectrum to_spectrum() const;
};

/// `#`-prefixed manifest lines, a header row, then one row per mode; 17 significant digits.
void write_spectrum_table(std::ostream& out, const std::string& kind, const Spectrum& spectrum,
                          const std::vector<std::pair<std::string, std::string>>& manifest,
                          Normalization normalization, bool with_integrated = true);
SpectrumTable read_spectrum_table(std::istream& in);
SpectrumTable read_spectrum_table(const std::filesystem::path& path);

struct RunFiles {
  std::filesystem::path table;
  std::filesystem::path manifest;
};

/// Writes <dir>/<name>_spectrum.csv and <dir>/<name>_manifest.ini.
RunFiles run_simulate(const ScenarioConfig& config, bool parallel = true);
/// Writes <dir>/<name>_analytic.csv.
RunFiles run_analytic(const ScenarioConfig& config);

/// Compares two tables on the same grid; writes a metric,value table.
SpectrumComparison run_compare(const std::filesystem::path& a, const std::filesystem::path& b,
                               const std::filesystem::path& out_file, SpectrumColumn which);

/// Peak table for one column of a result file. R comes from the file manifest.
LineAssignment run_peaks(const std::filesystem::path& table, const std::filesystem::path& out_file,
                         SpectrumColumn which, double rel_threshold);

void write_peak_table(std::ostream& out, const PeakSet& peaks, const LineAssignment& lines);

}  // namespace lfs
