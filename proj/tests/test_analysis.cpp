#include <doctest.h>

#include "approx.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "lfs/analysis.hpp"
#include "lfs/analytic.hpp"
#include "lfs/config.hpp"
#include "lfs/error.hpp"
#include "lfs/runner.hpp"

using namespace lfs;
using std::numbers::pi;

namespace {

constexpr double kR = 10.0 * pi;

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = (a * (n - 1 - i) + b * i) / (n - 1);
  return x;
}

double lorentz(double x, double c, double width) {
  const double h = 0.5 * width;
  return h * h / ((x - c) * (x - c) + h * h);
}

Spectrum from(std::vector<double> nu, std::vector<double> v) {
  Spectrum s;
  s.nu = std::move(nu);
  s.intensity_at_detection = v;
  s.integrated = std::move(v);
  return s;
}

}  // namespace

TEST_CASE("find_peaks on synthetic input") {
  SUBCASE("triangular bump") {
    const std::vector<double> nu{0, 1, 2, 3, 4, 5, 6};
    const std::vector<double> v{0, 1, 2, 3, 2, 1, 0};
    const auto p = find_peaks(nu, v, 0.02);
    REQUIRE(p.peaks.size() == 1);
    CHECK(p.peaks[0].nu_center == approx_rel(3.0));
    CHECK(p.peaks[0].height == approx_rel(3.0));
    CHECK(p.peaks[0].fwhm == approx_rel(3.0));
  }
  SUBCASE("two Lorentzians of width eta") {
    const double eta = 5.0;
    const auto nu = linspace(-100.0, 100.0, 4001);
    std::vector<double> v;
    for (double x : nu) v.push_back(lorentz(x, -40.0, eta) + 0.6 * lorentz(x, 35.3, eta));
    const auto p = find_peaks(nu, v, 0.02);
    REQUIRE(p.peaks.size() == 2);
    CHECK(p.peaks[0].nu_center == approx_rel(-40.0, 1e-3));
    CHECK(p.peaks[1].nu_center == approx_rel(35.3, 1e-3));
    for (const auto& pk : p.peaks) CHECK(pk.fwhm == approx_rel(eta, 0.05));
  }
  SUBCASE("flat spectrum has no peaks") {
    const auto nu = linspace(0.0, 1.0, 11);
    CHECK(find_peaks(nu, std::vector<double>(11, 0.0), 0.5).peaks.empty());
  }
  SUBCASE("threshold drops small maxima") {
    const auto nu = linspace(-50.0, 50.0, 1001);
    std::vector<double> v;
    for (double x : nu) v.push_back(lorentz(x, -20.0, 2.0) + 0.01 * lorentz(x, 20.0, 2.0));
    CHECK(find_peaks(nu, v, 0.02).peaks.size() == 1);
    CHECK(find_peaks(nu, v, 0.005).peaks.size() == 2);
  }
  SUBCASE("errors") {
    const std::vector<double> two{0.0, 1.0};
    CHECK_THROWS_AS(find_peaks(two, two, 0.1), InvalidInput);
    const auto nu = linspace(0.0, 1.0, 5);
    CHECK_THROWS_AS(find_peaks(nu, nu, 0.0), InvalidParameter);
    CHECK_THROWS_AS(find_peaks(nu, nu, 1.0), InvalidParameter);
  }
}

TEST_CASE("find_peaks properties on random line spectra") {
  // Hand-rolled generator: random Lorentzian combs on a uniform grid.
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  const auto uniform = [&] {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return static_cast<double>(state >> 11) * 0x1.0p-53;
  };
  const auto nu = linspace(-60.0, 60.0, 601);
  const double spacing = nu[1] - nu[0];
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(nu.size(), 0.0);
    const int lines = 1 + static_cast<int>(uniform() * 6);
    for (int k = 0; k < lines; ++k) {
      const double c = -55.0 + 110.0 * uniform(), w = 0.5 + 6.0 * uniform(), h = 0.05 + uniform();
      for (std::size_t i = 0; i < nu.size(); ++i) v[i] += h * lorentz(nu[i], c, w);
    }
    const double thr = 0.01 + 0.3 * uniform();
    const auto p = find_peaks(nu, v, thr);
    const double vmax = *std::max_element(v.begin(), v.end());
    CAPTURE(trial);
    REQUIRE_FALSE(p.peaks.empty());
    for (std::size_t k = 0; k < p.peaks.size(); ++k) {
      const auto& pk = p.peaks[k];
      CHECK(pk.height >= thr * vmax);
      CHECK(pk.fwhm > 0.0);
      CHECK(std::abs(pk.nu_center - nu[pk.index]) <= spacing);
      if (k > 0) CHECK(pk.nu_center > p.peaks[k - 1].nu_center);
    }
    // uniform scaling leaves positions untouched
    std::vector<double> scaled = v;
    for (double& x : scaled) x *= 37.5;
    const auto q = find_peaks(nu, scaled, thr);
    REQUIRE(q.peaks.size() == p.peaks.size());
    for (std::size_t k = 0; k < p.peaks.size(); ++k) {
      CHECK(q.peaks[k].nu_center == approx_rel(p.peaks[k].nu_center, 1e-12));
      CHECK(q.peaks[k].fwhm == approx_rel(p.peaks[k].fwhm, 1e-12));
    }
  }
}

TEST_CASE("line_ratios") {
  SUBCASE("B = 0 analytic spectrum has only the first sidebands") {
    const auto grid = ModeGrid::uniform(-12.0 * kR, 12.0 * kR, 2001, 5.0);
    const auto s = perturbative_spectrum(grid, 0.0, kR, 1.9, 0.0, AnalyticMode::exact);
    const auto lines = line_ratios(find_peaks(s, 0.02), kR);
    REQUIRE(lines.relative_height.size() == 2);
    CHECK(lines.relative_height.at(-1) == approx_rel(1.0, 1e-9));
    CHECK(lines.relative_height.at(1) == approx_rel(1.0, 1e-9));
    CHECK(lines.unassigned.empty());
  }
  SUBCASE("mirror symmetry") {
    PeakSet a;
    a.peaks = {{-4.1 * kR, 0.2, 1.0, 0}, {-0.9 * kR, 0.3, 1.0, 1}, {0.05 * kR, 1.0, 1.0, 2},
               {1.8 * kR, 0.5, 1.0, 3}, {2.3 * kR, 0.7, 1.0, 4}, {5.95 * kR, 0.1, 1.0, 5}};
    PeakSet b;
    for (auto it = a.peaks.rbegin(); it != a.peaks.rend(); ++it) {
      Peak p = *it;
      p.nu_center = -p.nu_center;
      b.peaks.push_back(p);
    }
    const auto la = line_ratios(a, kR), lb = line_ratios(b, kR);
    REQUIRE(la.relative_height.size() == lb.relative_height.size());
    for (const auto& [j, h] : la.relative_height) CHECK(lb.relative_height.at(-j) == h);
    CHECK(la.unassigned.size() == lb.unassigned.size());
    // 1.8R and 2.3R compete for j = 1: the taller one wins, the other is reported
    CHECK(la.peak.at(1).nu_center == approx_rel(2.3 * kR));
    CHECK(la.unassigned.size() == 2);
  }
  CHECK_THROWS_AS(line_ratios(PeakSet{}, 0.0), InvalidParameter);
}

TEST_CASE("figure spectra peak structure") {
  SUBCASE("weak merging: lines at the Rabi multiples, pulled toward the center") {
    const auto cfg = preset("fig2a");
    const auto sim = simulate(cfg);
    const auto lines = line_ratios(find_peaks(sim.spectrum, 0.02), kR);
    CHECK(lines.unassigned.empty());
    for (int j : {-2, -1, 0, 1, 2}) REQUIRE(lines.peak.count(j));
    // dV/dt = 2R(1 - B sin V) has mean frequency 2R sqrt(1 - B^2)
    const double pulled = 2.0 * kR * std::sqrt(1.0 - 0.32 * 0.32);
    const double spacing = (cfg.grid.nu_max - cfg.grid.nu_min) / (cfg.grid.n_modes - 1);
    for (int j : {1, 2}) {
      CHECK(std::abs(lines.peak.at(j).nu_center) < 2.0 * j * kR);
      CHECK(std::abs(lines.peak.at(j).nu_center - j * pulled) <= 2.0 * spacing);
      CHECK(lines.peak.at(-j).nu_center == approx_rel(-lines.peak.at(j).nu_center, 1e-12));
    }
  }
  SUBCASE("strong local field leaves a single central structure") {
    const auto sim = simulate(preset("fig2d"));
    const auto lines = line_ratios(find_peaks(sim.spectrum, 0.02), kR);
    CHECK(lines.sideband_count() == 0);
  }
}

TEST_CASE("compare_spectra") {
  const auto nu = linspace(-10.0, 10.0, 201);
  std::vector<double> v;
  for (double x : nu) v.push_back(lorentz(x, -3.0, 1.0) + 0.5 * lorentz(x, 4.0, 1.0) + 1e-3);
  const auto a = from(nu, v);

  const auto same = compare_spectra(a, a);
  CHECK(same.max_rel_peak_diff == 0.0);
  CHECK(same.l2_rel == 0.0);

  std::vector<double> v4 = v;
  for (double& x : v4) x *= 4.0;
  const auto b = from(nu, v4);
  const auto ab = compare_spectra(a, b), ba = compare_spectra(b, a);
  CHECK(ab.max_rel_peak_diff == approx_rel(3.0));
  CHECK(ab.l2_rel == approx_rel(0.75));
  CHECK(ab.max_rel_peak_diff == ba.max_rel_peak_diff);
  CHECK(ab.l2_rel == ba.l2_rel);

  auto shifted = a;
  shifted.nu[7] += 1e-3;
  CHECK_THROWS_AS(compare_spectra(a, shifted), InvalidInput);
  auto shorter = a;
  shorter.nu.pop_back();
  CHECK_THROWS_AS(compare_spectra(a, shorter), InvalidInput);
}

TEST_CASE("weak local field: simulation agrees with the first-order spectrum at the default threshold") {
  const auto cfg = preset("weak");
  const auto cmp = compare_spectra(simulate(cfg).spectrum, analytic(cfg));
  CHECK(cmp.max_rel_peak_diff <= 0.10);
}

TEST_SUITE("crosscheck") {
  TEST_CASE("weak local field: second-sideband ratio follows the harmonic coefficients") {
    const auto cfg = preset("weak");
    const auto sim = simulate(cfg);
    const auto lines = line_ratios(find_peaks(sim.spectrum, 1e-3), cfg.pulse.rabi_R);
    REQUIRE(lines.peak.count(1));
    REQUIRE(lines.peak.count(2));
    const auto h = harmonic_coefficients(0.1);
    const double expected = h.power(2) / h.power(1);
    const double measured = lines.relative_height.at(2) / lines.relative_height.at(1);
    CHECK(measured == approx_rel(expected, 0.15));
  }
}
