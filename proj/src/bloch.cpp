#include "lfs/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lfs/error.hpp"

namespace lfs {

double AtomicState::distance(const AtomicState& o) const {
  return std::max({std::abs(pop_ground - o.pop_ground), std::abs(pop_excited - o.pop_excited),
                   std::abs(coherence - o.coherence)});
}

AtomicState& AtomicState::operator+=(const AtomicState& o) {
  pop_ground += o.pop_ground;
  pop_excited += o.pop_excited;
  coherence += o.coherence;
  return *this;
}

double local_field_coefficient(double density_n, double geom_G, double wavelength, double gamma) {
  if (!std::isfinite(density_n) || !std::isfinite(geom_G) || !std::isfinite(wavelength) ||
      !std::isfinite(gamma))
    throw InvalidParameter("local_field_coefficient: non-finite input");
  if (density_n < 0.0 || wavelength <= 0.0 || gamma < 0.0)
    throw InvalidParameter("local_field_coefficient: density and gamma must be >= 0, wavelength > 0");
  constexpr double pi = std::numbers::pi;
  return 3.0 * density_n * geom_G * wavelength * wavelength * wavelength / (8.0 * pi * pi) *
         (gamma / 2.0);
}

AtomicState bloch_rhs(const AtomicState& s, double drive_R, double detuning,
                      const MediumParams& medium) {
  const cplx omega = effective_drive(s.coherence, drive_R, medium.local_field_C);
  const double inversion = s.pop_ground - s.pop_excited;
  const cplx decay{medium.coherence_decay(), detuning};

  AtomicState d;
  d.coherence = omega * inversion - decay * s.coherence;
  d.pop_excited = 2.0 * (std::conj(omega) * s.coherence).real() - medium.gamma * s.pop_excited;
  d.pop_ground = -d.pop_excited;
  return d;
}

AtomicState bloch_derivative(const AtomicState& s, double t, const PulseParams& pulse,
                             const MediumParams& medium) {
  return bloch_rhs(s, pulse.drive_at(t), pulse.detuning, medium);
}

namespace {

AtomicState rk4_step(const AtomicState& y, double h, double drive, double detuning,
                     const MediumParams& m) {
  const AtomicState k1 = bloch_rhs(y, drive, detuning, m);
  const AtomicState k2 = bloch_rhs(y + (0.5 * h) * k1, drive, detuning, m);
  const AtomicState k3 = bloch_rhs(y + (0.5 * h) * k2, drive, detuning, m);
  const AtomicState k4 = bloch_rhs(y + h * k3, drive, detuning, m);
  AtomicState out = y;
  out += (h / 6.0) * k1;
  out += (h / 3.0) * k2;
  out += (h / 3.0) * k3;
  out += (h / 6.0) * k4;
  return out;
}

void check_invariants(const AtomicState& s, double t, double tol) {
  const auto fail = [&](const char* what) {
    std::ostringstream os;
    os.precision(17);
    os << "integrate_atom: " << what << " violated at t=" << t << " (rho11=" << s.pop_ground
       << ", rho22=" << s.pop_excited << ", |sigma|=" << std::abs(s.coherence) << ")";
    throw NumericalFailure(os.str());
  };
  if (!std::isfinite(s.pop_ground) || !std::isfinite(s.pop_excited) ||
      !std::isfinite(s.coherence.real()) || !std::isfinite(s.coherence.imag()))
    fail("finiteness");
  if (std::abs(s.trace() - 1.0) > tol) fail("trace");
  if (s.pop_ground < -tol || s.pop_ground > 1.0 + tol || s.pop_excited < -tol ||
      s.pop_excited > 1.0 + tol)
    fail("population bounds");
  if (s.positivity() < -tol) fail("positivity");
}

}  // namespace

PolarizationTrajectory integrate_atom(const PulseParams& pulse, const MediumParams& medium,
                                      const AtomIntegration& opts) {
  if (!(pulse.duration_T > 0.0) || !(pulse.rabi_R >= 0.0) || !std::isfinite(pulse.detuning))
    throw InvalidParameter("integrate_atom: need duration_T > 0, rabi_R >= 0, finite detuning");
  if (medium.local_field_C < 0.0 || medium.gamma < 0.0 || medium.gamma2 < 0.0)
    throw InvalidParameter("integrate_atom: medium parameters must be >= 0");

  const double T = pulse.duration_T;
  const double dt_req = opts.dt > 0.0 ? opts.dt : auto_atom_dt(pulse, medium);
  const auto n_steps = static_cast<std::size_t>(std::max(1.0, std::round(T / dt_req)));
  const double dt = T / static_cast<double>(n_steps);
  if (std::abs(dt - dt_req) > 1e-9 * dt_req)
    throw InvalidParameter("integrate_atom: dt must divide the pulse duration");

  check_invariants(opts.initial, 0.0, opts.invariant_tol);

  PolarizationTrajectory traj;
  traj.t0 = 0.0;
  traj.dt = dt;
  traj.samples.reserve(n_steps + 1);
  traj.excited.reserve(n_steps + 1);
  traj.ground.reserve(n_steps + 1);

  AtomicState y = opts.initial;
  traj.samples.push_back(y.coherence);
  traj.excited.push_back(y.pop_excited);
  traj.ground.push_back(y.pop_ground);
  for (std::size_t i = 0; i < n_steps; ++i) {
    const double t_mid = (static_cast<double>(i) + 0.5) * dt;
    y = rk4_step(y, dt, pulse.drive_at(t_mid), pulse.detuning, medium);
    check_invariants(y, static_cast<double>(i + 1) * dt, opts.invariant_tol);
    traj.samples.push_back(y.coherence);
    traj.excited.push_back(y.pop_excited);
    traj.ground.push_back(y.pop_ground);
  }
  traj.final_state = y;
  traj.pulse_end_index = n_steps;
  traj.pulse = pulse;
  traj.medium = medium;

  if (opts.halving_tol > 0.0) {
    // Re-run at dt/2 and compare on the coarse grid.
    const double h = 0.5 * dt;
    AtomicState z = opts.initial;
    double worst = 0.0;
    for (std::size_t i = 0; i < n_steps; ++i) {
      for (int half = 0; half < 2; ++half) {
        const double t_mid = (2.0 * static_cast<double>(i) + half + 0.5) * h;
        z = rk4_step(z, h, pulse.drive_at(t_mid), pulse.detuning, medium);
      }
      AtomicState coarse;
      coarse.pop_excited = traj.excited[i + 1];
      coarse.pop_ground = 1.0 - coarse.pop_excited;
      coarse.coherence = traj.samples[i + 1];
      worst = std::max(worst, std::max(std::abs(z.pop_excited - coarse.pop_excited),
                                       std::abs(z.coherence - coarse.coherence)));
    }
    if (worst > opts.halving_tol) {
      const double suggested = 0.5 * dt * std::pow(opts.halving_tol / worst, 0.25);
      std::ostringstream os;
      os.precision(6);
      os << "integrate_atom: step-halving discrepancy " << worst << " exceeds " << opts.halving_tol
         << " at dt=" << dt << "; try dt <= " << suggested;
      throw AccuracyError(os.str(), suggested);
    }
  }
  return traj;
}

PolarizationTrajectory integrate_atom(const ScenarioConfig& config) {
  config.validate();
  AtomIntegration opts;
  opts.dt = config.resolved_dt();
  opts.halving_tol = config.numerics.halving_tol;
  return integrate_atom(config.pulse, config.medium(), opts);
}

double first_order_phase(double t, double rabi_R, double B) {
  const double u = 2.0 * rabi_R * t;
  return u - B * (1.0 - std::cos(u));
}

AtomicState first_order_state(double t, double rabi_R, double B) {
  const double v = first_order_phase(t, rabi_R, B);
  AtomicState s;
  s.pop_excited = 0.5 * (1.0 - std::cos(v));
  s.pop_ground = 0.5 * (1.0 + std::cos(v));
  s.coherence = {0.5 * std::sin(v), 0.0};
  return s;
}

AtomicState zero_order_state(double t, double rabi_R) { return first_order_state(t, rabi_R, 0.0); }

}  // namespace lfs
