#pragma once

// Independent reference computations used by the test suites. Nothing here calls
// into the library paths it is compared against.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

namespace oracle {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

/// Midpoint-rule Fourier coefficient (1/2pi) int_0^{2pi} sin(u - B(1 - cos u)) e^{-iju} du.
inline cplx fourier_coefficient(double B, int j, int points = 4096) {
  cplx acc{0.0, 0.0};
  const double h = 2.0 * pi / points;
  for (int k = 0; k < points; ++k) {
    const double u = (k + 0.5) * h;
    const double f = std::sin(u - B * (1.0 - std::cos(u)));
    acc += f * std::polar(1.0, -j * u);
  }
  return acc / static_cast<double>(points);
}

/// Midpoint-rule mean of sin^2(u - B(1 - cos u)) over one period.
inline double mean_sin2(double B, int points = 4096) {
  double acc = 0.0;
  const double h = 2.0 * pi / points;
  for (int k = 0; k < points; ++k) {
    const double u = (k + 0.5) * h;
    const double s = std::sin(u - B * (1.0 - std::cos(u)));
    acc += s * s;
  }
  return acc / points;
}

/// 3 n G lambda^3 gamma / (16 pi^2) in 50-digit decimal arithmetic.
inline double local_field_coefficient(double n, double G, double lambda, double gamma) {
  using big = boost::multiprecision::cpp_dec_float_50;
  const big p = boost::math::constants::pi<big>();
  const big l = lambda;
  const big c = big(3) * big(n) * big(G) * l * l * l * big(gamma) / (big(16) * p * p);
  return c.convert_to<double>();
}

/// Composite Simpson quadrature of beta(t) = -kappa int_0^t sigma(tau) e^{-z(t - tau)} dtau
/// from uniform samples sigma[i] = sigma(i h); needs an even number of intervals.
inline cplx convolution_simpson(const std::vector<cplx>& sigma, double h, cplx z, double kappa) {
  const std::size_t n = sigma.size() - 1;
  const double t = static_cast<double>(n) * h;
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * sigma[i] * std::exp(-z * (t - static_cast<double>(i) * h));
  }
  return -kappa * acc * (h / 3.0);
}

/// Plain RK4 for the complex linear mode equation driven by a continuous sigma(t).
inline cplx mode_rk4(const std::function<cplx(double)>& sigma, cplx z, double kappa, double t0,
                     double t1, int steps, cplx beta0) {
  const double h = (t1 - t0) / steps;
  const auto f = [&](double t, cplx b) { return -z * b - kappa * sigma(t); };
  cplx b = beta0;
  for (int i = 0; i < steps; ++i) {
    const double t = t0 + i * h;
    const cplx k1 = f(t, b);
    const cplx k2 = f(t + 0.5 * h, b + 0.5 * h * k1);
    const cplx k3 = f(t + 0.5 * h, b + 0.5 * h * k2);
    const cplx k4 = f(t + h, b + h * k3);
    b += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return b;
}

/// Undamped resonant atom with local field reduces to a phase equation,
/// dV/dt = 2R(1 - B sin V), with sigma = sin(V)/2 and rho_22 = (1 - cos V)/2.
/// Returns V on t = i h, i = 0..steps.
inline std::vector<double> exact_phase(double R, double B, double T, int steps) {
  const double h = T / steps;
  const auto f = [&](double v) { return 2.0 * R * (1.0 - B * std::sin(v)); };
  std::vector<double> V(steps + 1, 0.0);
  for (int i = 0; i < steps; ++i) {
    const double v = V[i];
    const double k1 = f(v), k2 = f(v + 0.5 * h * k1), k3 = f(v + 0.5 * h * k2), k4 = f(v + h * k3);
    V[i + 1] = v + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return V;
}

}  // namespace oracle
