#pragma once

#include <complex>
#include <vector>

#include "lfs/scenario.hpp"

namespace lfs {

using cplx = std::complex<double>;

/// Two-level density matrix in the rotating frame. coherence is sigma_21 = <2|rho|1>;
/// rho_12 is its conjugate and is not stored.
struct AtomicState {
  double pop_ground = 1.0;
  double pop_excited = 0.0;
  cplx coherence{0.0, 0.0};

  static AtomicState ground() { return {}; }
  static AtomicState excited() { return {0.0, 1.0, {0.0, 0.0}}; }

  double trace() const { return pop_ground + pop_excited; }
  /// rho_11 rho_22 - |sigma|^2; zero for a pure state, positive for a mixture.
  double positivity() const { return pop_ground * pop_excited - std::norm(coherence); }
  /// Distance in the max norm over the three stored components.
  double distance(const AtomicState& other) const;

  AtomicState& operator+=(const AtomicState& o);
  friend AtomicState operator+(AtomicState a, const AtomicState& b) { return a += b; }
  friend AtomicState operator*(double s, AtomicState a) {
    a.pop_ground *= s;
    a.pop_excited *= s;
    a.coherence *= s;
    return a;
  }
};

/// Dense record of sigma_21(t) on t0 + i*dt, i = 0..samples.size()-1.
struct PolarizationTrajectory {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<cplx> samples;
  std::vector<double> excited;  ///< rho_22 on the same grid
  std::vector<double> ground;   ///< rho_11, evolved separately so the trace can be audited
  AtomicState final_state;
  std::size_t pulse_end_index = 0;  ///< first sample with t >= T
  PulseParams pulse;                ///< parameters the record was produced with
  MediumParams medium;

  double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
  double t_last() const { return time(samples.size() - 1); }
};

/// C = (3 n G lambda^3 / 8 pi^2) * gamma / 2.
double local_field_coefficient(double density_n, double geom_G, double wavelength, double gamma);

/// Drive seen by the atom once the local field is included: R - C * sigma.
inline cplx effective_drive(cplx coherence, double drive_R, double C) {
  return drive_R - C * coherence;
}

/// Right-hand side of the damped atomic equation for a fixed bare drive.
AtomicState bloch_rhs(const AtomicState& s, double drive_R, double detuning,
                      const MediumParams& medium);

/// Right-hand side at time t for the rectangular pulse.
AtomicState bloch_derivative(const AtomicState& s, double t, const PulseParams& pulse,
                             const MediumParams& medium);

struct AtomIntegration {
  double dt = 0.0;  ///< must divide duration_T; 0 selects auto_atom_dt
  AtomicState initial = AtomicState::ground();
  double halving_tol = 1e-8;  ///< max-norm tolerance of the step-halving audit; <= 0 disables it
  double invariant_tol = 1e-9;
};

/// Fixed-step RK4 over [0, T] with a step-halving audit.
/// Throws AccuracyError when the audit fails and NumericalFailure when trace or
/// positivity break beyond invariant_tol.
PolarizationTrajectory integrate_atom(const PulseParams& pulse, const MediumParams& medium,
                                      const AtomIntegration& opts = {});
PolarizationTrajectory integrate_atom(const ScenarioConfig& config);

/// Closed-form solution without local field at exact resonance.
AtomicState zero_order_state(double t, double rabi_R);

/// Same form with phase V(t) = 2Rt - B(1 - cos 2Rt).
AtomicState first_order_state(double t, double rabi_R, double B);
double first_order_phase(double t, double rabi_R, double B);

}  // namespace lfs
