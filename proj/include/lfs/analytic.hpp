#pragma once

#include <complex>
#include <span>
#include <vector>

#include "lfs/bloch.hpp"
#include "lfs/field.hpp"
#include "lfs/scenario.hpp"

namespace lfs {

/// Fourier coefficients Y_j of sin(u - B(1 - cos u)) = sum_j Y_j e^{iju}, |j| <= J.
struct HarmonicCoefficients {
  double B = 0.0;
  int max_order_J = 0;
  std::vector<cplx> Y;  ///< Y[j + J]
  double tail = 0.0;    ///< sum of |Y_j|^2 beyond J, estimated directly

  cplx operator()(int j) const {
    return (j < -max_order_J || j > max_order_J) ? cplx{}
                                                  : Y[static_cast<std::size_t>(j + max_order_J)];
  }
  double power(int j) const { return std::norm((*this)(j)); }
  /// sum_j |Y_j|^2
  double total_power() const;
};

/// Single coefficient from the Jacobi-Anger product e^{i(u-B)} e^{iB cos u} and its conjugate.
cplx harmonic_coefficient(double B, int j);

/// Default truncation max(8, ceil(2 + 3 e B)).
int default_truncation(double B);

/// J <= 0 selects default_truncation(B). Throws TruncationError when the
/// neglected power exceeds 1e-10 and InvalidParameter for B < 0.
HarmonicCoefficients harmonic_coefficients(double B, int J = 0);

/// Mean of sin^2(u - B(1 - cos u)) over one period by trapezoid (spectrally
/// accurate for this periodic integrand).
double mean_sin2_phase(double B, int points = 4096);

/// Resonance factor of harmonic m on one mode.
struct ResonanceFactor {
  cplx value;              ///< S in the dimensionless variable eps = (nu - i eta/2)/(2R)
  double abs_squared = 0;  ///< |S|^2
  /// (1 + e^{-eta T} - 2 e^{-eta T/2} cos((nu+2mR)T)) / ((nu+2mR)^2 + eta^2/4)
  /// = e^{-eta T} |S|^2 / (2R)^2
  double dimensional_abs_squared = 0;
};

ResonanceFactor resonance_factor(int m, double nu, double eta, double rabi_R, double T);

/// Dimensional resonance weights used by the three spectrum forms.
double long_pulse_weight(int m, double nu, double eta, double rabi_R);
double short_pulse_weight(int m, double nu, double eta, double rabi_R, double T);

/// First-order spectrum
///   I(nu) = scale * eta * kappa^2 / 4 * e^{-eta t1} * sum_j |Y_j|^2 W_j(nu)
/// with W_j the exact, long-pulse (Lorentzian) or short-pulse (modulated) weight.
/// The normalization matches the simulated I = scale * eta * |beta|^2. The
/// residual-polarization term is excluded. `integrated` holds the post-pulse
/// integral I(t1 = 0)/eta.
Spectrum perturbative_spectrum(const ModeGrid& grid, double B, double rabi_R, double T, double t1,
                               AnalyticMode mode, int J = 0);

struct LineIntensityRow {
  double B = 0.0;
  std::vector<double> ratios;  ///< |Y_j|^2 / |Y_1|^2 for each requested j
};

/// Relative line intensities versus B, normalized to the first sideband.
std::vector<LineIntensityRow> line_intensity_curve(std::span<const double> B_values,
                                                   std::span<const int> orders);

}  // namespace lfs
