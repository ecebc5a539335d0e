#include "lfs/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lfs/error.hpp"

namespace lfs {

namespace {

constexpr double kPi = std::numbers::pi;

cplx ipow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

/// Integer-order Bessel function of the first kind, J_{-n} = (-1)^n J_n.
double bessel_jn(int n, double x) {
  const int an = std::abs(n);
  const double v = std::cyl_bessel_j(static_cast<double>(an), x);
  return (n < 0 && (an % 2) == 1) ? -v : v;
}

/// (e^w - 1)/w
cplx phi1(cplx w) {
  if (std::abs(w) < 1e-4) return 1.0 + w * (0.5 + w * (1.0 / 6.0 + w / 24.0));
  return (std::exp(w) - 1.0) / w;
}

}  // namespace

double HarmonicCoefficients::total_power() const {
  double sum = 0.0;
  for (const cplx& y : Y) sum += std::norm(y);
  return sum;
}

cplx harmonic_coefficient(double B, int j) {
  const cplx lower = std::exp(cplx{0.0, -B}) * ipow(j - 1) * bessel_jn(j - 1, B);
  const cplx upper = std::exp(cplx{0.0, B}) * ipow(j + 1) * bessel_jn(-j - 1, B);
  return (lower - upper) / cplx{0.0, 2.0};
}

int default_truncation(double B) {
  return std::max(8, static_cast<int>(std::ceil(2.0 + 3.0 * std::numbers::e * B)));
}

HarmonicCoefficients harmonic_coefficients(double B, int J) {
  if (!std::isfinite(B) || B < 0.0) throw InvalidParameter("harmonic_coefficients: need B >= 0");
  if (J <= 0) J = default_truncation(B);

  HarmonicCoefficients hc;
  hc.B = B;
  hc.max_order_J = J;
  hc.Y.resize(static_cast<std::size_t>(2 * J + 1));
  for (int j = -J; j <= J; ++j) hc.Y[static_cast<std::size_t>(j + J)] = harmonic_coefficient(B, j);

  for (int j = J + 1; j <= J + 12; ++j)
    hc.tail += std::norm(harmonic_coefficient(B, j)) + std::norm(harmonic_coefficient(B, -j));
  if (hc.tail > 1e-10)
    throw TruncationError("harmonic_coefficients: neglected power " + std::to_string(hc.tail) +
                          " beyond J=" + std::to_string(J) + " at B=" + std::to_string(B));
  return hc;
}

double mean_sin2_phase(double B, int points) {
  double sum = 0.0;
  for (int k = 0; k < points; ++k) {
    const double u = 2.0 * kPi * (k + 0.5) / points;
    const double s = std::sin(u - B * (1.0 - std::cos(u)));
    sum += s * s;
  }
  return sum / points;
}

ResonanceFactor resonance_factor(int m, double nu, double eta, double rabi_R, double T) {
  if (!(rabi_R > 0.0) || !(T > 0.0) || !(eta >= 0.0))
    throw InvalidParameter("resonance_factor: need R > 0, T > 0, eta >= 0");
  const double Ue = 2.0 * rabi_R * T;
  const cplx eps = cplx{nu, -0.5 * eta} / (2.0 * rabi_R);
  const cplx x = eps + static_cast<double>(m);

  ResonanceFactor f;
  f.value = Ue * phi1(cplx{0.0, 1.0} * x * Ue);
  f.abs_squared = std::norm(f.value);

  const double delta = nu + 2.0 * m * rabi_R;
  const double denom = delta * delta + 0.25 * eta * eta;
  if (denom == 0.0) {
    f.dimensional_abs_squared = T * T;
  } else {
    // 1 + e^{-eta T} - 2 e^{-eta T/2} cos(delta T), rearranged to avoid cancellation
    const double half = std::exp(-0.5 * eta * T);
    const double s = std::sin(0.5 * delta * T);
    const double one_minus = -std::expm1(-0.5 * eta * T);
    f.dimensional_abs_squared = (one_minus * one_minus + 4.0 * half * s * s) / denom;
  }
  return f;
}

double long_pulse_weight(int m, double nu, double eta, double rabi_R) {
  const double delta = nu + 2.0 * m * rabi_R;
  return 1.0 / (delta * delta + 0.25 * eta * eta);
}

double short_pulse_weight(int m, double nu, double eta, double rabi_R, double T) {
  const double delta = nu + 2.0 * m * rabi_R;
  const double denom = delta * delta + 0.25 * eta * eta;
  if (denom == 0.0) return T * T;
  const double s = std::sin(0.5 * delta * T);
  return 4.0 * s * s / denom;  // 2 (1 - cos(delta T)) / denom
}

Spectrum perturbative_spectrum(const ModeGrid& grid, double B, double rabi_R, double T, double t1,
                               AnalyticMode mode, int J) {
  grid.validate();
  if (!(rabi_R > 0.0) || !(T > 0.0) || !(t1 >= 0.0))
    throw InvalidParameter("perturbative_spectrum: need R > 0, T > 0, t1 >= 0");
  const HarmonicCoefficients hc = harmonic_coefficients(B, J);
  const int Jm = hc.max_order_J;

  Spectrum out;
  out.nu = grid.nus();
  out.intensity_at_detection.resize(grid.modes.size());
  out.integrated.resize(grid.modes.size());
  out.detection_time = T + t1;
  out.t_end = T + t1;

  const double k2 = grid.coupling_kappa * grid.coupling_kappa;
  for (std::size_t i = 0; i < grid.modes.size(); ++i) {
    const Mode& md = grid.modes[i];
    double sum = 0.0;
    for (int j = -Jm; j <= Jm; ++j) {
      const double p = hc.power(j);
      if (p == 0.0) continue;
      double w = 0.0;
      switch (mode) {
        case AnalyticMode::exact:
          w = resonance_factor(j, md.nu, md.eta, rabi_R, T).dimensional_abs_squared;
          break;
        case AnalyticMode::long_pulse:
          w = long_pulse_weight(j, md.nu, md.eta, rabi_R);
          break;
        case AnalyticMode::short_pulse:
          w = short_pulse_weight(j, md.nu, md.eta, rabi_R, T);
          break;
      }
      sum += p * w;
    }
    const double at_t0 = grid.intensity_scale * md.eta * 0.25 * k2 * sum;
    out.intensity_at_detection[i] = at_t0 * std::exp(-md.eta * t1);
    out.integrated[i] = at_t0 / md.eta;
  }
  return out;
}

std::vector<LineIntensityRow> line_intensity_curve(std::span<const double> B_values,
                                                   std::span<const int> orders) {
  std::vector<LineIntensityRow> rows;
  rows.reserve(B_values.size());
  for (double B : B_values) {
    int J = default_truncation(B);
    for (int j : orders) J = std::max(J, std::abs(j));
    const HarmonicCoefficients hc = harmonic_coefficients(B, J);
    const double ref = hc.power(1);
    LineIntensityRow row;
    row.B = B;
    for (int j : orders) row.ratios.push_back(ref > 0.0 ? hc.power(j) / ref : 0.0);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace lfs
