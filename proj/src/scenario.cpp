#include "lfs/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lfs/error.hpp"

namespace lfs {

double max_atom_dt(const PulseParams& pulse) {
  double bound = pulse.duration_T / 100.0;
  if (pulse.rabi_R > 0.0) bound = std::min(bound, 1.0 / (20.0 * pulse.rabi_R));
  bound = std::min(bound, 1.0 / (20.0 * std::abs(pulse.detuning) + 1e-300));
  return bound;
}

double auto_atom_dt(const PulseParams& pulse, const MediumParams& medium) {
  const double rate = std::max({2.0 * pulse.rabi_R, std::abs(pulse.detuning),
                                medium.local_field_C, medium.coherence_decay()});
  double target = max_atom_dt(pulse);
  if (rate > 0.0) target = std::min(target, 1.0 / (400.0 * rate));
  const double n = std::ceil(pulse.duration_T / target);
  return pulse.duration_T / n;
}

MediumParams ScenarioConfig::medium() const {
  const double C = medium_spec.local_field.kind == LocalFieldKind::C
                       ? medium_spec.local_field.value
                       : 2.0 * medium_spec.local_field.value * pulse.rabi_R;
  return {C, medium_spec.gamma, medium_spec.gamma2};
}

double ScenarioConfig::B() const {
  if (medium_spec.local_field.kind == LocalFieldKind::B) return medium_spec.local_field.value;
  return medium().B(pulse.rabi_R);
}

double ScenarioConfig::resolved_dt() const {
  if (numerics.dt > 0.0) {
    const double n = std::max(1.0, std::ceil(pulse.duration_T / numerics.dt - 1e-9));
    return pulse.duration_T / n;
  }
  return auto_atom_dt(pulse, medium());
}

int ScenarioConfig::resolved_steps() const {
  return static_cast<int>(std::lround(pulse.duration_T / resolved_dt()));
}

double ScenarioConfig::resolved_t_end() const {
  if (numerics.t_end > 0.0) return numerics.t_end;
  return pulse.duration_T + 10.0 / grid.eta +
         5.0 / std::max(medium().coherence_decay(), 1e-3);
}

double ScenarioConfig::resolved_detection_time() const {
  return numerics.detection_time.value_or(pulse.duration_T);
}

std::vector<double> ScenarioConfig::mode_nus() const {
  const int n = grid.n_modes;
  std::vector<double> nus(static_cast<std::size_t>(n));
  const double denom = static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) {
    // Written so that a symmetric range gives exactly mirrored nodes and an exact zero.
    nus[static_cast<std::size_t>(i)] =
        (grid.nu_min * static_cast<double>(n - 1 - i) + grid.nu_max * static_cast<double>(i)) /
        denom;
  }
  return nus;
}

void ScenarioConfig::validate() const {
  const auto finite = [](double v) { return std::isfinite(v); };
  const auto require = [](bool ok, const char* field, const char* what) {
    if (!ok) throw ConfigError(std::string(field) + ": " + what);
  };

  require(finite(pulse.rabi_R) && pulse.rabi_R >= 0.0, "pulse.rabi", "must be finite and >= 0");
  require(finite(pulse.duration_T) && pulse.duration_T > 0.0, "pulse.duration",
          "must be finite and > 0");
  require(finite(pulse.detuning), "pulse.detuning", "must be finite");

  const char* lf_name = medium_spec.local_field.kind == LocalFieldKind::B ? "medium.B" : "medium.C";
  require(finite(medium_spec.local_field.value) && medium_spec.local_field.value >= 0.0, lf_name,
          "must be finite and >= 0");
  require(finite(medium_spec.gamma) && medium_spec.gamma >= 0.0, "medium.gamma",
          "must be finite and >= 0");
  require(finite(medium_spec.gamma2) && medium_spec.gamma2 >= 0.0, "medium.gamma2",
          "must be finite and >= 0");

  require(finite(grid.nu_min) && finite(grid.nu_max) && grid.nu_min < grid.nu_max, "grid.nu_min",
          "must be finite and below grid.nu_max");
  require(grid.n_modes >= 3, "grid.n_modes", "must be >= 3");
  require(finite(grid.eta) && grid.eta > 0.0, "grid.eta", "must be finite and > 0");
  require(finite(grid.kappa) && grid.kappa > 0.0, "grid.kappa", "must be finite and > 0");
  require(finite(grid.intensity_scale) && grid.intensity_scale > 0.0, "grid.scale",
          "must be finite and > 0");

  require(finite(numerics.dt) && numerics.dt >= 0.0, "numerics.dt", "must be finite and >= 0");
  if (numerics.dt > 0.0)
    require(numerics.dt <= max_atom_dt(pulse) * (1.0 + 1e-12), "numerics.dt",
            "exceeds min(1/(20R), 1/(20|detuning|), T/100)");
  require(finite(numerics.t_end) && numerics.t_end >= 0.0, "numerics.t_end",
          "must be finite and >= 0");
  if (numerics.t_end > 0.0)
    require(numerics.t_end >= pulse.duration_T, "numerics.t_end", "must be >= pulse.duration");
  if (numerics.detection_time) {
    const double td = *numerics.detection_time;
    require(finite(td) && td >= 0.0 && td <= resolved_t_end(), "numerics.detection_time",
            "must lie in [0, t_end]");
  }
  require(numerics.truncation_J >= 0, "numerics.truncation_J", "must be >= 0");
  require(finite(numerics.halving_tol) && numerics.halving_tol >= 0.0, "numerics.halving_tol",
          "must be finite and >= 0");
  require(numerics.peak_threshold > 0.0 && numerics.peak_threshold < 1.0,
          "numerics.peak_threshold", "must lie in (0, 1)");

  require(!output.dir.empty(), "output.dir", "must not be empty");
  require(!output.name.empty() && output.name.find('/') == std::string::npos, "output.name",
          "must be a plain file stem");
}

}  // namespace lfs
