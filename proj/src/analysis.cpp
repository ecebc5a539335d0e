#include "lfs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lfs/error.hpp"

namespace lfs {

std::span<const double> column(const Spectrum& spec, SpectrumColumn which) {
  return which == SpectrumColumn::detection ? std::span<const double>(spec.intensity_at_detection)
                                            : std::span<const double>(spec.integrated);
}

namespace {

/// Half-height crossing walking from `from` in direction `step`; returns the
/// interpolated abscissa or NaN when the edge is reached first.
double crossing(std::span<const double> nu, std::span<const double> v, std::size_t from, int step,
                double half) {
  std::size_t i = from;
  while (true) {
    if ((step < 0 && i == 0) || (step > 0 && i + 1 == v.size()))
      return std::numeric_limits<double>::quiet_NaN();
    const std::size_t j = step < 0 ? i - 1 : i + 1;
    if (v[j] < half) {
      const double f = (v[i] - half) / (v[i] - v[j]);
      return nu[i] + f * (nu[j] - nu[i]);
    }
    i = j;
  }
}

}  // namespace

PeakSet find_peaks(std::span<const double> nu, std::span<const double> v, double rel_threshold) {
  if (nu.size() != v.size()) throw InvalidInput("find_peaks: abscissa and values differ in length");
  if (v.size() < 3) throw InvalidInput("find_peaks: need at least 3 points");
  if (!(rel_threshold > 0.0 && rel_threshold < 1.0))
    throw InvalidParameter("find_peaks: rel_threshold must lie in (0, 1)");

  PeakSet out;
  const double vmax = *std::max_element(v.begin(), v.end());
  if (!(vmax > 0.0)) return out;
  out.threshold_used = rel_threshold;
  const double floor = rel_threshold * vmax;

  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (!(v[i] > v[i - 1] && v[i] >= v[i + 1] && v[i] >= floor)) continue;

    Peak p;
    p.index = i;
    // Parabola through the three samples (uniform spacing assumed locally).
    const double denom = v[i - 1] - 2.0 * v[i] + v[i + 1];
    double offset = 0.0;
    if (denom < 0.0) offset = 0.5 * (v[i - 1] - v[i + 1]) / denom;
    offset = std::clamp(offset, -0.5, 0.5);
    const double spacing = offset >= 0.0 ? nu[i + 1] - nu[i] : nu[i] - nu[i - 1];
    p.nu_center = nu[i] + offset * spacing;
    p.height = v[i] - 0.25 * (v[i - 1] - v[i + 1]) * offset;

    const double half = 0.5 * p.height;
    const double left = crossing(nu, v, i, -1, half);
    const double right = crossing(nu, v, i, +1, half);
    if (std::isnan(left) && std::isnan(right)) {
      p.fwhm = nu.back() - nu.front();
    } else if (std::isnan(left)) {
      p.fwhm = 2.0 * (right - p.nu_center);
    } else if (std::isnan(right)) {
      p.fwhm = 2.0 * (p.nu_center - left);
    } else {
      p.fwhm = right - left;
    }
    if (!(p.fwhm > 0.0)) p.fwhm = nu[i + 1] - nu[i - 1];
    out.peaks.push_back(p);
  }
  return out;
}

PeakSet find_peaks(const Spectrum& spec, double rel_threshold, SpectrumColumn which) {
  return find_peaks(spec.nu, column(spec, which), rel_threshold);
}

int LineAssignment::sideband_count() const {
  return static_cast<int>(std::count_if(peak.begin(), peak.end(),
                                        [](const auto& kv) { return kv.first != 0; }));
}

LineAssignment line_ratios(const PeakSet& peaks, double rabi_R, double window) {
  if (!(rabi_R > 0.0)) throw InvalidParameter("line_ratios: need R > 0");
  if (window <= 0.0) window = 0.5 * (2.0 * rabi_R);

  LineAssignment out;
  double tallest = 0.0;
  for (const Peak& p : peaks.peaks) tallest = std::max(tallest, p.height);

  for (const Peak& p : peaks.peaks) {
    const double x = p.nu_center / (2.0 * rabi_R);
    const int j = static_cast<int>(std::lround(x));
    if (std::abs(p.nu_center - 2.0 * rabi_R * j) > 0.5 * window) {
      out.unassigned.push_back(p);
      continue;
    }
    auto it = out.peak.find(j);
    if (it == out.peak.end()) {
      out.peak.emplace(j, p);
    } else if (p.height > it->second.height) {
      out.unassigned.push_back(it->second);
      it->second = p;
    } else {
      out.unassigned.push_back(p);
    }
  }
  for (const auto& [j, p] : out.peak)
    out.relative_height[j] = tallest > 0.0 ? p.height / tallest : 0.0;
  std::sort(out.unassigned.begin(), out.unassigned.end(),
            [](const Peak& a, const Peak& b) { return a.nu_center < b.nu_center; });
  return out;
}

SpectrumComparison compare_spectra(const Spectrum& a, const Spectrum& b, SpectrumColumn which,
                                   double rel_threshold) {
  if (a.nu.size() != b.nu.size()) throw InvalidInput("compare_spectra: grids differ in length");
  for (std::size_t i = 0; i < a.nu.size(); ++i) {
    const double tol = 1e-12 * std::max(1.0, std::abs(a.nu[i]));
    if (std::abs(a.nu[i] - b.nu[i]) > tol)
      throw InvalidInput("compare_spectra: grids differ at index " + std::to_string(i));
  }
  const auto va = column(a, which);
  const auto vb = column(b, which);

  SpectrumComparison out;
  double diff2 = 0.0, na2 = 0.0, nb2 = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    diff2 += (va[i] - vb[i]) * (va[i] - vb[i]);
    na2 += va[i] * va[i];
    nb2 += vb[i] * vb[i];
  }
  const double norm_max = std::sqrt(std::max(na2, nb2));
  out.l2_rel = norm_max > 0.0 ? std::sqrt(diff2) / norm_max : 0.0;

  std::vector<std::size_t> idx;
  if (va.size() >= 3) {
    for (const Peak& p : find_peaks(a.nu, va, rel_threshold).peaks) idx.push_back(p.index);
    for (const Peak& p : find_peaks(b.nu, vb, rel_threshold).peaks) idx.push_back(p.index);
  }
  for (std::size_t i : idx) {
    if (va[i] == vb[i]) continue;
    const double lo = std::min(va[i], vb[i]);
    const double rel = lo > 0.0 ? std::abs(va[i] - vb[i]) / lo
                                : std::numeric_limits<double>::infinity();
    out.max_rel_peak_diff = std::max(out.max_rel_peak_diff, rel);
  }
  return out;
}

}  // namespace lfs
