#pragma once

#include <optional>
#include <string>
#include <vector>

namespace lfs {

/// Rectangular pump pulse: drive `rabi_R` on 0 <= t < duration_T, zero after.
struct PulseParams {
  double rabi_R = 0.0;      ///< Rabi frequency R (splitting is 2R)
  double duration_T = 1.0;  ///< pulse length T
  double detuning = 0.0;    ///< transition minus carrier frequency

  /// Accumulated Rabi phase 2RT.
  double area() const { return 2.0 * rabi_R * duration_T; }
  double drive_at(double t) const { return (t >= 0.0 && t < duration_T) ? rabi_R : 0.0; }

  bool operator==(const PulseParams&) const = default;
};

/// Medium parameterized by the local-field coefficient C and the two relaxation rates.
/// The dimensionless strength is B = C / (2R).
struct MediumParams {
  double local_field_C = 0.0;
  double gamma = 0.0;   ///< radiative decay of the upper level
  double gamma2 = 0.0;  ///< collisional (pure) dephasing

  double B(double rabi_R) const { return rabi_R > 0.0 ? local_field_C / (2.0 * rabi_R) : 0.0; }
  /// Total decay rate of the coherence, gamma/2 + gamma2.
  double coherence_decay() const { return 0.5 * gamma + gamma2; }

  static MediumParams from_B(double B, double rabi_R, double gamma, double gamma2) {
    return {2.0 * B * rabi_R, gamma, gamma2};
  }

  bool operator==(const MediumParams&) const = default;
};

enum class LocalFieldKind { B, C };

/// The local field as entered by the user; C is derived from B and R when needed.
struct LocalFieldSpec {
  LocalFieldKind kind = LocalFieldKind::B;
  double value = 0.0;

  bool operator==(const LocalFieldSpec&) const = default;
};

struct MediumSpec {
  LocalFieldSpec local_field;
  double gamma = 0.0;
  double gamma2 = 0.0;

  bool operator==(const MediumSpec&) const = default;
};

struct GridSpec {
  double nu_min = -1.0;
  double nu_max = 1.0;
  int n_modes = 3;
  double eta = 1.0;
  double kappa = 1.0;
  double intensity_scale = 1.0;

  bool operator==(const GridSpec&) const = default;
};

enum class AnalyticMode { exact, long_pulse, short_pulse };
enum class Normalization { raw, unit_max };

struct NumericsSpec {
  double dt = 0.0;     ///< 0 selects the automatic step
  double t_end = 0.0;  ///< 0 selects the automatic horizon
  std::optional<double> detection_time;  ///< unset means end of pulse
  int truncation_J = 0;                  ///< 0 selects the automatic order
  double halving_tol = 1e-8;
  AnalyticMode analytic_mode = AnalyticMode::exact;
  double peak_threshold = 0.02;

  bool operator==(const NumericsSpec&) const = default;
};

struct OutputSpec {
  std::string dir = ".";
  std::string name = "run";
  Normalization normalization = Normalization::raw;

  bool operator==(const OutputSpec&) const = default;
};

/// Full parameter record for one run.
struct ScenarioConfig {
  PulseParams pulse;
  MediumSpec medium_spec;
  GridSpec grid;
  NumericsSpec numerics;
  OutputSpec output;

  MediumParams medium() const;
  double B() const;

  /// Integration step, always dividing T exactly.
  double resolved_dt() const;
  int resolved_steps() const;
  double resolved_t_end() const;
  double resolved_detection_time() const;
  std::vector<double> mode_nus() const;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Largest step the atom integrator accepts: min(1/(20R), 1/(20|detuning|), T/100).
double max_atom_dt(const PulseParams& pulse);

/// Step used when none is configured; resolves the fastest of 2R, |detuning|, C
/// and the coherence decay rate with ~2.5e-3 rad per step.
double auto_atom_dt(const PulseParams& pulse, const MediumParams& medium);

}  // namespace lfs
