#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "lfs/bloch.hpp"
#include "lfs/scenario.hpp"

namespace lfs {

struct Mode {
  double nu = 0.0;   ///< detuning of the mode from the carrier
  double eta = 1.0;  ///< mode damping, > 0
};

/// Detector modes sharing one coupling constant (lumped N g*) and one intensity
/// prefactor (lumped hbar*omega and mode-volume factors).
struct ModeGrid {
  std::vector<Mode> modes;
  double coupling_kappa = 1.0;
  double intensity_scale = 1.0;

  static ModeGrid uniform(double nu_min, double nu_max, int n_modes, double eta,
                          double kappa = 1.0, double scale = 1.0);
  static ModeGrid from_config(const ScenarioConfig& config);

  std::vector<double> nus() const;
  /// eta > 0, strictly increasing nu, kappa > 0, scale > 0. Throws InvalidParameter.
  void validate() const;
};

/// Exact mode amplitude after the pulse, for t >= t_start with s = t - t_start:
///   beta = a e^{-z s} + b e^{-w s}          (z != w)
///   beta = (a + c s) e^{-z s}               (z == w)
/// z = i nu + eta/2 is the mode rate, w = i Delta + gamma/2 + gamma2 the coherence rate.
struct RingDown {
  double t_start = 0.0;
  double horizon = 0.0;  ///< upper limit used when the continuation does not decay
  cplx z{0.0, 0.0};
  cplx w{0.0, 0.0};
  cplx a{0.0, 0.0};
  cplx b{0.0, 0.0};
  cplx c{0.0, 0.0};
  bool degenerate = false;

  cplx at(double t) const;
  /// True when |beta|^2 is integrable to infinity.
  bool decays() const;
  /// Integral of |beta|^2 from t_start to infinity (or to horizon if it does not decay).
  double norm_integral() const;
  /// Same continuation re-anchored at a later start time.
  RingDown rebased(double new_start) const;
};

struct ModeAmplitudeSeries {
  std::size_t mode_index = 0;
  double nu = 0.0;
  double eta = 1.0;
  double kappa = 1.0;
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<cplx> beta;
  std::optional<RingDown> continuation;

  double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
  double t_last() const { return time(beta.size() - 1); }
  /// Sample nearest to t inside the stored range, the continuation beyond it.
  cplx at(double t) const;
};

struct Spectrum {
  std::vector<double> nu;
  std::vector<double> intensity_at_detection;
  std::vector<double> integrated;
  double detection_time = 0.0;
  double t_end = 0.0;
  ScenarioConfig params;
};

/// Per-step weights of the exponential-time-differencing update for a
/// piecewise-linear forcing: beta' = E beta - kappa (w_prev s_n + w_next s_{n+1}).
struct EtdWeights {
  cplx decay;
  cplx w_prev;
  cplx w_next;
};
EtdWeights etd_weights(cplx z, double h);

/// Integrates d beta/dt = -(i nu + eta/2) beta - kappa sigma(t) over the trajectory,
/// starting from vacuum. Throws InvalidInput on an empty trajectory and
/// InvalidParameter when eta <= 0.
ModeAmplitudeSeries evolve_mode(const PolarizationTrajectory& traj, double nu, double eta,
                                double kappa);

enum class RingdownSampling { dense, closed_form_only };

/// Attaches the closed-form post-pulse continuation driven by
/// sigma(t) = sigma(T) e^{-(i Delta + gamma/2 + gamma2)(t - T)}. With `dense`
/// sampling the series is also filled up to t_end on its own step.
ModeAmplitudeSeries ringdown_extend(const ModeAmplitudeSeries& series, const AtomicState& final,
                                    double pulse_T, const MediumParams& medium, double detuning,
                                    double t_end,
                                    RingdownSampling sampling = RingdownSampling::dense);

/// scale * eta * |beta|^2
inline double mode_intensity(cplx beta, double eta, double scale) {
  return scale * eta * std::norm(beta);
}

/// Trapezoid over the stored samples plus the exact integral of the continuation
/// (pure free decay of the last sample when none is attached).
double integrated_intensity(const ModeAmplitudeSeries& series, double eta, double scale);

/// Intensity and integrated intensity of every grid mode, OpenMP-parallel over modes.
/// Output is independent of the thread count and bit-identical to spectrum_sweep_serial.
Spectrum spectrum_sweep(const PolarizationTrajectory& traj, const ModeGrid& grid,
                        double detection_time, double t_end);

/// Reference path: evolve_mode + ringdown_extend + intensities, one mode after another.
Spectrum spectrum_sweep_serial(const PolarizationTrajectory& traj, const ModeGrid& grid,
                               double detection_time, double t_end);

}  // namespace lfs
