#include "lfs/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lfs/error.hpp"

namespace lfs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Integral of e^{-q s} over [0, L]; L may be infinite when Re q > 0.
cplx exp_integral(cplx q, double L) {
  if (std::isinf(L)) {
    if (q.real() <= 0.0) return {kInf, 0.0};
    return 1.0 / q;
  }
  const cplx x = q * L;
  if (std::abs(x) < 1e-3) {
    // L (1 - x/2 + x^2/6 - x^3/24 + x^4/120)
    return L * (1.0 + x * (-0.5 + x * (1.0 / 6.0 + x * (-1.0 / 24.0 + x / 120.0))));
  }
  return (1.0 - std::exp(-x)) / q;
}

bool nearly_equal_rates(cplx z, cplx w) {
  return std::abs(z - w) <= 1e-9 * std::max(1.0, std::abs(z));
}

RingDown make_ringdown(cplx beta_T, cplx sigma_T, cplx z, cplx w, double kappa, double t_start,
                       double horizon) {
  RingDown r;
  r.t_start = t_start;
  r.horizon = horizon;
  r.z = z;
  r.w = w;
  if (nearly_equal_rates(z, w)) {
    r.degenerate = true;
    r.a = beta_T;
    r.c = -kappa * sigma_T;
  } else {
    const cplx k = kappa * sigma_T / (z - w);
    r.a = beta_T + k;
    r.b = -k;
  }
  return r;
}

cplx mode_rate(double nu, double eta) { return {0.5 * eta, nu}; }

cplx coherence_rate(const MediumParams& medium, double detuning) {
  return {medium.coherence_decay(), detuning};
}

inline cplx etd_step(cplx beta, cplx s0, cplx s1, const EtdWeights& wts, double kappa) {
  return wts.decay * beta - kappa * (wts.w_prev * s0 + wts.w_next * s1);
}

/// Index of the stored sample used for time t, or n when t lies past the samples.
std::size_t sample_index(double t, double t0, double dt, std::size_t n) {
  const double pos = std::round((t - t0) / dt);
  if (pos < 0.0) return 0;
  const auto idx = static_cast<std::size_t>(pos);
  return idx < n ? idx : n;
}

double finish_integral(double trapezoid_sum, double dt, const RingDown& cont, double eta,
                       double scale) {
  return scale * eta * (0.5 * dt * trapezoid_sum + cont.norm_integral());
}

void check_mode(double nu, double eta) {
  if (!std::isfinite(nu)) throw InvalidParameter("mode detuning must be finite");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidParameter("mode damping eta must be > 0");
}

}  // namespace

// ---------------------------------------------------------------------------

ModeGrid ModeGrid::uniform(double nu_min, double nu_max, int n_modes, double eta, double kappa,
                           double scale) {
  ScenarioConfig c;
  c.grid = {nu_min, nu_max, n_modes, eta, kappa, scale};
  ModeGrid g;
  g.coupling_kappa = kappa;
  g.intensity_scale = scale;
  for (double nu : c.mode_nus()) g.modes.push_back({nu, eta});
  return g;
}

ModeGrid ModeGrid::from_config(const ScenarioConfig& config) {
  return uniform(config.grid.nu_min, config.grid.nu_max, config.grid.n_modes, config.grid.eta,
                 config.grid.kappa, config.grid.intensity_scale);
}

std::vector<double> ModeGrid::nus() const {
  std::vector<double> out;
  out.reserve(modes.size());
  for (const auto& m : modes) out.push_back(m.nu);
  return out;
}

void ModeGrid::validate() const {
  if (modes.empty()) throw InvalidParameter("mode grid is empty");
  if (!(coupling_kappa > 0.0)) throw InvalidParameter("coupling_kappa must be > 0");
  if (!(intensity_scale > 0.0)) throw InvalidParameter("intensity_scale must be > 0");
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (!(modes[i].eta > 0.0))
      throw InvalidParameter("mode " + std::to_string(i) + ": eta must be > 0");
    if (i > 0 && !(modes[i].nu > modes[i - 1].nu))
      throw InvalidParameter("mode " + std::to_string(i) + ": nu must be strictly increasing");
  }
}

// ---------------------------------------------------------------------------

cplx RingDown::at(double t) const {
  const double s = t - t_start;
  if (degenerate) return (a + c * s) * std::exp(-z * s);
  return a * std::exp(-z * s) + b * std::exp(-w * s);
}

bool RingDown::decays() const {
  if (degenerate) return z.real() > 0.0;
  return z.real() > 0.0 && (b == cplx{0.0, 0.0} || w.real() > 0.0);
}

double RingDown::norm_integral() const {
  if (degenerate) {
    const double r = 2.0 * z.real();
    return std::norm(a) / r + 2.0 * (a * std::conj(c)).real() / (r * r) +
           2.0 * std::norm(c) / (r * r * r);
  }
  if (decays() && b != cplx{0.0, 0.0}) {
    // beta = u e^{-zs} + K (e^{-zs} - e^{-ws}) / (z - w); the divided-difference
    // integrals stay well conditioned as w approaches z.
    const cplx u = a + b, K = -b * (z - w);
    const cplx zc = std::conj(z), wc = std::conj(w);
    const double cross = (-1.0 / ((z + zc) * (z + wc)) * u * std::conj(K)).real();
    const double tail = ((z + w + zc + wc) / ((z + zc) * (w + zc) * (z + wc) * (w + wc))).real();
    return std::max(0.0, std::norm(u) / (2.0 * z.real()) + 2.0 * cross + std::norm(K) * tail);
  }
  const double L = decays() ? kInf : std::max(0.0, horizon - t_start);
  double total = std::norm(a) * exp_integral({2.0 * z.real(), 0.0}, L).real();
  if (b != cplx{0.0, 0.0}) {
    total += std::norm(b) * exp_integral({2.0 * w.real(), 0.0}, L).real();
    total += 2.0 * (a * std::conj(b) * exp_integral(z + std::conj(w), L)).real();
  }
  return std::max(0.0, total);
}

RingDown RingDown::rebased(double new_start) const {
  RingDown r = *this;
  const double s0 = new_start - t_start;
  r.t_start = new_start;
  if (degenerate) {
    const cplx ez = std::exp(-z * s0);
    r.a = (a + c * s0) * ez;
    r.c = c * ez;
  } else {
    r.a = a * std::exp(-z * s0);
    r.b = b * std::exp(-w * s0);
  }
  return r;
}

cplx ModeAmplitudeSeries::at(double t) const {
  const std::size_t idx = sample_index(t, t0, dt, beta.size());
  if (idx < beta.size()) return beta[idx];
  if (continuation) return continuation->at(t);
  return beta.back() * std::exp(-mode_rate(nu, eta) * (t - t_last()));
}

// ---------------------------------------------------------------------------

EtdWeights etd_weights(cplx z, double h) {
  const cplx x = -z * h;
  const cplx e = std::exp(x);
  cplx phi1;
  cplx phi2;
  if (std::abs(x) < 0.5) {
    // phi1 = sum x^k/(k+1)!, phi2 = sum x^k/(k+2)!
    cplx term1{1.0, 0.0};
    cplx term2{0.5, 0.0};
    phi1 = term1;
    phi2 = term2;
    for (int k = 1; k < 30; ++k) {
      term1 *= x / static_cast<double>(k + 1);
      term2 *= x / static_cast<double>(k + 2);
      phi1 += term1;
      phi2 += term2;
      if (std::abs(term1) < 1e-18 * std::abs(phi1)) break;
    }
  } else {
    phi1 = (e - 1.0) / x;
    phi2 = (e - 1.0 - x) / (x * x);
  }
  return {e, h * (phi1 - phi2), h * phi2};
}

ModeAmplitudeSeries evolve_mode(const PolarizationTrajectory& traj, double nu, double eta,
                                double kappa) {
  if (traj.samples.empty()) throw InvalidInput("evolve_mode: empty trajectory");
  check_mode(nu, eta);

  ModeAmplitudeSeries out;
  out.nu = nu;
  out.eta = eta;
  out.kappa = kappa;
  out.t0 = traj.t0;
  out.dt = traj.dt;
  out.beta.resize(traj.samples.size());

  const EtdWeights wts = etd_weights(mode_rate(nu, eta), traj.dt);
  cplx beta{0.0, 0.0};
  out.beta[0] = beta;
  for (std::size_t n = 0; n + 1 < traj.samples.size(); ++n) {
    beta = etd_step(beta, traj.samples[n], traj.samples[n + 1], wts, kappa);
    out.beta[n + 1] = beta;
  }
  return out;
}

ModeAmplitudeSeries ringdown_extend(const ModeAmplitudeSeries& series, const AtomicState& final,
                                    double pulse_T, const MediumParams& medium, double detuning,
                                    double t_end, RingdownSampling sampling) {
  if (series.beta.empty()) throw InvalidInput("ringdown_extend: empty series");
  if (std::abs(series.t_last() - pulse_T) > 1e-9 * std::max(1.0, pulse_T))
    throw InvalidInput("ringdown_extend: series must end at the pulse end");
  if (t_end < pulse_T) throw InvalidParameter("ringdown_extend: t_end must be >= pulse_T");

  ModeAmplitudeSeries out = series;
  const RingDown cont = make_ringdown(series.beta.back(), final.coherence,
                                      mode_rate(series.nu, series.eta),
                                      coherence_rate(medium, detuning), series.kappa, pulse_T, t_end);
  if (sampling == RingdownSampling::closed_form_only || series.dt <= 0.0) {
    out.continuation = cont;
    return out;
  }
  const auto extra =
      static_cast<std::size_t>(std::floor((t_end - pulse_T) / series.dt + 1e-9));
  out.beta.reserve(out.beta.size() + extra);
  for (std::size_t k = 1; k <= extra; ++k)
    out.beta.push_back(cont.at(pulse_T + static_cast<double>(k) * series.dt));
  out.continuation = cont.rebased(pulse_T + static_cast<double>(extra) * series.dt);
  return out;
}

double integrated_intensity(const ModeAmplitudeSeries& series, double eta, double scale) {
  if (series.beta.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < series.beta.size(); ++i)
    sum += std::norm(series.beta[i]) + std::norm(series.beta[i + 1]);
  RingDown cont;
  if (series.continuation) {
    cont = *series.continuation;
  } else {
    cont.t_start = series.t_last();
    cont.z = mode_rate(series.nu, eta);
    cont.a = series.beta.back();
  }
  return finish_integral(sum, series.dt, cont, eta, scale);
}

// ---------------------------------------------------------------------------

namespace {

struct ModeResult {
  double at_detection = 0.0;
  double integrated = 0.0;
};

/// Fused per-mode kernel: the same arithmetic as the reference composition,
/// without storing the amplitude series.
ModeResult mode_kernel(const PolarizationTrajectory& traj, const Mode& mode, double kappa,
                       double scale, double detection_time, double t_end) {
  check_mode(mode.nu, mode.eta);
  const auto& s = traj.samples;
  const std::size_t n = s.size();
  const std::size_t det_idx = sample_index(detection_time, traj.t0, traj.dt, n);
  const EtdWeights wts = etd_weights(mode_rate(mode.nu, mode.eta), traj.dt);

  cplx beta{0.0, 0.0};
  cplx beta_det = beta;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const cplx next = etd_step(beta, s[i], s[i + 1], wts, kappa);
    sum += std::norm(beta) + std::norm(next);
    beta = next;
    if (i + 1 == det_idx) beta_det = beta;
  }
  const RingDown cont =
      make_ringdown(beta, traj.final_state.coherence, mode_rate(mode.nu, mode.eta),
                    coherence_rate(traj.medium, traj.pulse.detuning), kappa,
                    traj.pulse.duration_T, t_end);
  if (det_idx >= n) beta_det = cont.at(detection_time);

  return {mode_intensity(beta_det, mode.eta, scale),
          finish_integral(sum, traj.dt, cont, mode.eta, scale)};
}

void check_sweep_inputs(const PolarizationTrajectory& traj, const ModeGrid& grid,
                        double detection_time, double t_end) {
  if (traj.samples.empty()) throw InvalidInput("spectrum_sweep: empty trajectory");
  grid.validate();
  if (!(detection_time >= 0.0) || detection_time > t_end)
    throw InvalidParameter("spectrum_sweep: detection_time must lie in [0, t_end]");
  if (t_end < traj.pulse.duration_T)
    throw InvalidParameter("spectrum_sweep: t_end must be >= pulse duration");
}

Spectrum empty_spectrum(const ModeGrid& grid, double detection_time, double t_end) {
  Spectrum out;
  out.nu = grid.nus();
  out.intensity_at_detection.assign(grid.modes.size(), 0.0);
  out.integrated.assign(grid.modes.size(), 0.0);
  out.detection_time = detection_time;
  out.t_end = t_end;
  return out;
}

}  // namespace

Spectrum spectrum_sweep(const PolarizationTrajectory& traj, const ModeGrid& grid,
                        double detection_time, double t_end) {
  check_sweep_inputs(traj, grid, detection_time, t_end);
  Spectrum out = empty_spectrum(grid, detection_time, t_end);

  const auto n_modes = static_cast<std::ptrdiff_t>(grid.modes.size());
  std::vector<std::string> errors(grid.modes.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t k = 0; k < n_modes; ++k) {
    const auto i = static_cast<std::size_t>(k);
    try {
      const ModeResult r = mode_kernel(traj, grid.modes[i], grid.coupling_kappa,
                                       grid.intensity_scale, detection_time, t_end);
      out.intensity_at_detection[i] = r.at_detection;
      out.integrated[i] = r.integrated;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (std::size_t i = 0; i < errors.size(); ++i)
    if (!errors[i].empty())
      throw InvalidParameter("mode " + std::to_string(i) + ": " + errors[i]);
  return out;
}

Spectrum spectrum_sweep_serial(const PolarizationTrajectory& traj, const ModeGrid& grid,
                               double detection_time, double t_end) {
  check_sweep_inputs(traj, grid, detection_time, t_end);
  Spectrum out = empty_spectrum(grid, detection_time, t_end);

  for (std::size_t i = 0; i < grid.modes.size(); ++i) {
    const Mode& m = grid.modes[i];
    try {
      ModeAmplitudeSeries series = evolve_mode(traj, m.nu, m.eta, grid.coupling_kappa);
      series.mode_index = i;
      series = ringdown_extend(series, traj.final_state, traj.pulse.duration_T, traj.medium,
                               traj.pulse.detuning, t_end, RingdownSampling::closed_form_only);
      out.intensity_at_detection[i] =
          mode_intensity(series.at(detection_time), m.eta, grid.intensity_scale);
      out.integrated[i] = integrated_intensity(series, m.eta, grid.intensity_scale);
    } catch (const std::exception& e) {
      throw InvalidParameter("mode " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace lfs
