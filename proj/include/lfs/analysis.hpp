#pragma once

#include <map>
#include <span>
#include <vector>

#include "lfs/field.hpp"

namespace lfs {

struct Peak {
  double nu_center = 0.0;
  double height = 0.0;
  double fwhm = 0.0;
  std::size_t index = 0;  ///< grid index of the discrete maximum
};

struct PeakSet {
  std::vector<Peak> peaks;
  double threshold_used = 0.0;
};

enum class SpectrumColumn { detection, integrated };

std::span<const double> column(const Spectrum& spec, SpectrumColumn which);

/// Local maxima at or above rel_threshold * global max. Centers and heights come
/// from a 3-point parabola; FWHM from linearly interpolated half-height crossings.
/// Needs >= 3 points and rel_threshold in (0, 1); a spectrum with max <= 0 yields no peaks.
PeakSet find_peaks(std::span<const double> nu, std::span<const double> values,
                   double rel_threshold = 0.02);
PeakSet find_peaks(const Spectrum& spec, double rel_threshold = 0.02,
                   SpectrumColumn which = SpectrumColumn::detection);

/// Peaks matched to Rabi multiples nu ~ 2 j R.
struct LineAssignment {
  std::map<int, double> relative_height;  ///< j -> height / tallest peak
  std::map<int, Peak> peak;               ///< j -> matched peak
  std::vector<Peak> unassigned;

  /// Number of assigned lines with j != 0.
  int sideband_count() const;
};

/// A peak is assigned to the nearest multiple 2jR when it lies within half of
/// `window` (default 0.5 * 2R) of it; when several peaks share j the tallest wins.
LineAssignment line_ratios(const PeakSet& peaks, double rabi_R, double window = 0.0);

struct SpectrumComparison {
  double max_rel_peak_diff = 0.0;  ///< max |a-b| / min(a,b) over the peaks of either spectrum
  double l2_rel = 0.0;             ///< ||a-b|| / max(||a||, ||b||)
};

/// Symmetric comparison on a shared grid; throws InvalidInput on grid mismatch.
SpectrumComparison compare_spectra(const Spectrum& a, const Spectrum& b,
                                   SpectrumColumn which = SpectrumColumn::detection,
                                   double rel_threshold = 0.02);

}  // namespace lfs
