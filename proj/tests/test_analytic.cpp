#include <doctest.h>

#include "approx.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "lfs/analysis.hpp"
#include "lfs/analytic.hpp"
#include "lfs/error.hpp"
#include "oracles.hpp"

using namespace lfs;
using std::numbers::pi;

namespace {
constexpr double kR = 10.0 * pi;
}

TEST_CASE("harmonic coefficients at B = 0") {
  const auto h = harmonic_coefficients(0.0);
  CHECK(std::abs(h(1) - cplx{0.0, -0.5}) < 1e-15);
  CHECK(std::abs(h(-1) - cplx{0.0, 0.5}) < 1e-15);
  for (int j = -h.max_order_J; j <= h.max_order_J; ++j)
    if (std::abs(j) != 1) CHECK(std::abs(h(j)) < 1e-15);
  CHECK(h.power(1) == approx_rel(0.25));
}

TEST_CASE("harmonic coefficients match the quadrature oracle") {
  for (double B : {0.05, 0.28, 0.74, 1.2}) {
    const auto h = harmonic_coefficients(B);
    double worst = 0.0, mirror = 0.0;
    for (int j = -h.max_order_J; j <= h.max_order_J; ++j) {
      const cplx q = oracle::fourier_coefficient(B, j);
      worst = std::max(worst, std::abs(h(j) - q));
      // |Y_j| = |Y_-j| holds for the oracle too
      const double oracle_mirror = std::norm(q) - std::norm(oracle::fourier_coefficient(B, -j));
      mirror = std::max(mirror, std::abs((h.power(j) - h.power(-j)) - oracle_mirror));
    }
    CAPTURE(B);
    CHECK(worst <= 1e-8);
    CHECK(mirror <= 1e-12);
    CHECK(h.total_power() == approx_rel(oracle::mean_sin2(B), 1e-12));
    CHECK(std::abs(h.total_power() - mean_sin2_phase(B)) <= 1e-8);
  }
}

TEST_CASE("small-B central coefficient") {
  for (double B : {1e-3, 1e-2}) {
    const cplx y0 = oracle::fourier_coefficient(B, 0);
    CHECK(std::abs(y0 - B / 2.0) <= B * B);
    CHECK(std::abs(harmonic_coefficient(B, 0) - y0) <= 1e-12);
  }
}

TEST_CASE("coefficients decay super-geometrically") {
  const double B = 0.32;
  const auto h = harmonic_coefficients(B, 14);
  // Log-slope of |Y_j| against the Bessel asymptote J_j(B) ~ (eB/2j)^j / sqrt(2 pi j).
  for (int j = 4; j < 12; ++j) {
    const double ratio = std::sqrt(h.power(j + 1) / h.power(j));
    CHECK(ratio < std::sqrt(h.power(j) / h.power(j - 1)));
    const auto asym = [&](int k) {
      return k * std::log(std::numbers::e * B / (2.0 * k)) - 0.5 * std::log(2.0 * pi * k);
    };
    CAPTURE(j);
    CHECK(std::log(ratio) == approx_rel(asym(j) - asym(j - 1), 0.15));
  }
}

TEST_CASE("truncation audit") {
  CHECK_THROWS_AS(harmonic_coefficients(0.64, 2), TruncationError);
  CHECK_NOTHROW(harmonic_coefficients(0.64));
  CHECK_THROWS_AS(harmonic_coefficients(-0.1), InvalidParameter);
  CHECK(default_truncation(0.1) == 8);
  CHECK(default_truncation(2.0) == 19);
  CHECK(harmonic_coefficients(1.2).tail <= 1e-10);
}

TEST_CASE("resonance factor") {
  SUBCASE("exact resonance without damping") {
    for (int m : {-2, 0, 1}) {
      const auto f = resonance_factor(m, -2.0 * m * kR, 0.0, kR, 1.9);
      CHECK(std::abs(f.value - cplx{2.0 * kR * 1.9, 0.0}) < 1e-12);
      CHECK(f.abs_squared == approx_rel(std::norm(f.value), 1e-12));
    }
  }
  SUBCASE("dimensional form is the rescaled modulus") {
    for (double nu : {-3.1 * kR, -0.4 * kR, 0.0, 2.2 * kR})
      for (double eta : {0.1, 5.0}) {
        const double T = 0.7;
        const auto f = resonance_factor(1, nu, eta, kR, T);
        CHECK(f.dimensional_abs_squared ==
              approx_rel(std::exp(-eta * T) * f.abs_squared / (4.0 * kR * kR), 1e-10));
      }
  }
  SUBCASE("long pulses approach the Lorentzian") {
    const double eta = 5.0, T = 4.0;  // eta T = 20
    for (double nu : {-2.0 * kR, -1.7 * kR, 0.3 * kR}) {
      const auto f = resonance_factor(1, nu, eta, kR, T);
      CHECK(f.dimensional_abs_squared ==
            approx_rel(long_pulse_weight(1, nu, eta, kR), 1e-3));
    }
  }
  SUBCASE("central line keeps a finite value of order T^2") {
    for (double T : {0.05, 0.1, 0.2}) {
      const auto f = resonance_factor(0, 0.0, 1e-9, kR, T);
      CHECK(f.dimensional_abs_squared == approx_rel(T * T, 1e-6));
      CHECK(f.abs_squared / (4.0 * kR * kR) == approx_rel(T * T, 1e-6));
    }
  }
  CHECK_THROWS_AS(resonance_factor(0, 0.0, 1.0, 0.0, 1.0), InvalidParameter);
}

TEST_CASE("perturbative spectrum") {
  const auto grid = ModeGrid::uniform(-12.0 * kR, 12.0 * kR, 2001, 5.0);

  SUBCASE("B = 0 gives two lines at +-2R") {
    const auto s = perturbative_spectrum(grid, 0.0, kR, 1.9, 0.0, AnalyticMode::exact);
    const auto peaks = find_peaks(s, 0.02);
    REQUIRE(peaks.peaks.size() == 2);
    CHECK(peaks.peaks[0].nu_center == approx_rel(-2.0 * kR, 1e-3));
    CHECK(peaks.peaks[1].nu_center == approx_rel(2.0 * kR, 1e-3));
  }
  SUBCASE("delay multiplies by the mode decay") {
    const auto a = perturbative_spectrum(grid, 0.32, kR, 1.9, 0.2, AnalyticMode::exact);
    const auto b = perturbative_spectrum(grid, 0.32, kR, 1.9, 0.4, AnalyticMode::exact);
    for (std::size_t i = 0; i < a.nu.size(); i += 50)
      CHECK(b.intensity_at_detection[i] ==
            approx_rel(a.intensity_at_detection[i] * std::exp(-5.0 * 0.2), 1e-12));
    CHECK(a.integrated == b.integrated);
  }
  SUBCASE("long-pulse form agrees when e^{-eta T} is negligible") {
    const double T = 5.0;  // eta T = 25
    const auto e = perturbative_spectrum(grid, 0.32, kR, T, 0.0, AnalyticMode::exact);
    const auto l = perturbative_spectrum(grid, 0.32, kR, T, 0.0, AnalyticMode::long_pulse);
    double worst = 0.0;
    for (std::size_t i = 0; i < e.nu.size(); ++i)
      worst = std::max(worst, std::abs(e.intensity_at_detection[i] / l.intensity_at_detection[i] - 1.0));
    CHECK(worst <= 0.01);
  }
  SUBCASE("short pulses: central width of order 1/T") {
    for (double T : {0.3, 0.5, 1.0}) {
      const auto g = ModeGrid::uniform(-12.0 * kR, 12.0 * kR, 4001, 0.1 / T);
      const auto s = perturbative_spectrum(g, 0.3, kR, T, 0.0, AnalyticMode::short_pulse);
      const auto peaks = find_peaks(s, 1e-4);
      const Peak* center = nullptr;
      for (const auto& p : peaks.peaks)
        if (std::abs(p.nu_center) < 0.5 * kR && (!center || p.height > center->height)) center = &p;
      REQUIRE(center);
      CAPTURE(T);
      CHECK(center->fwhm * T >= 2.0);
      CHECK(center->fwhm * T <= 9.0);
    }
  }
  SUBCASE("intensities scale with kappa^2") {
    auto g2 = grid;
    g2.coupling_kappa = 2.0;
    const auto a = perturbative_spectrum(grid, 0.5, kR, 1.9, 0.0, AnalyticMode::exact);
    const auto b = perturbative_spectrum(g2, 0.5, kR, 1.9, 0.0, AnalyticMode::exact);
    for (std::size_t i = 0; i < a.nu.size(); i += 40)
      CHECK(b.intensity_at_detection[i] == approx_rel(4.0 * a.intensity_at_detection[i], 1e-14));
  }
}

TEST_CASE("relative line intensities") {
  const std::vector<int> orders{1, 2, 3};
  const std::vector<double> Bs{0.0, 0.1, 0.32, 0.5};
  const auto rows = line_intensity_curve(Bs, orders);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].ratios == std::vector<double>{1.0, 0.0, 0.0});
  for (const auto& r : rows) {
    CAPTURE(r.B);
    CHECK(r.ratios[0] == 1.0);
    if (r.B > 0.0) {
      CHECK(r.ratios[1] < r.ratios[0]);
      CHECK(r.ratios[2] < r.ratios[1]);
    }
  }
  // |Y_2|^2 / |Y_1|^2 at B = 0.32, frozen from an independent 30-digit quadrature.
  CHECK(rows[2].ratios[1] == approx_rel(0.025552464732984413, 1e-12));
  const double q = std::norm(oracle::fourier_coefficient(0.32, 2)) /
                   std::norm(oracle::fourier_coefficient(0.32, 1));
  CHECK(rows[2].ratios[1] == approx_rel(q, 1e-10));
}
