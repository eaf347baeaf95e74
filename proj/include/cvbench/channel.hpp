// Copyright 2026 The cvbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CVBENCH_CHANNEL_HPP
#define CVBENCH_CHANNEL_HPP

// Channel under test: loss, symmetric excess noise and phase diffusion caused
// by a finite-amplitude phase reference.
//
// Report units: means follow <a> = (<x> + i<p>)/sqrt(2), so a coherent state
// |beta> has mean_x = sqrt(2) Re(beta); variances are normalized to the shot
// noise (vacuum = 1). Q-function (double homodyne) marginal variances carry
// one extra shot-noise unit, so the vacuum Q-variance is 2.

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cvbench/errors.hpp"
#include "cvbench/fock.hpp"

namespace cvbench {

struct ChannelModel {
  double transmission = 1.0;  // total, receiver efficiency included
  double excess_noise = 0.0;  // shot-noise units on top of the vacuum value 1
  std::optional<double> calibration_amplitude;  // absent: perfect phase reference

  void validate() const {
    detail::require(std::isfinite(transmission) && transmission > 0.0 && transmission <= 1.0,
                    "transmission must lie in (0, 1]");
    detail::require(std::isfinite(excess_noise) && excess_noise >= 0.0,
                    "excess noise must be >= 0");
    if (calibration_amplitude)
      detail::require(std::isfinite(*calibration_amplitude) && *calibration_amplitude >= 0.0,
                      "calibration amplitude must be >= 0");
  }
};

/// Binary alphabet |+alpha>, |-alpha>.
struct ProbeAlphabet {
  double alpha = 0.0;
  double pulse_rate = 1.0;  // pulses per second

  void validate() const {
    detail::require(std::isfinite(alpha) && alpha >= 0.0, "alpha must be finite and >= 0");
    detail::require(std::isfinite(pulse_rate) && pulse_rate > 0.0, "pulse rate must be > 0");
  }
};

/// Symbol 0 sends +alpha, symbol 1 sends -alpha.
constexpr double symbol_sign(int symbol) { return symbol == 0 ? 1.0 : -1.0; }

struct PhaseDistribution {
  std::vector<double> nodes;    // equispaced on [0, 2 pi)
  std::vector<double> weights;  // probability mass per node

  double spacing() const { return 2.0 * std::numbers::pi / static_cast<double>(nodes.size()); }
  /// f(phi) at node j, per unit angle.
  double density(std::size_t j) const { return weights[j] / spacing(); }

  double total_weight() const {
    double t = 0.0;
    for (double w : weights) t += w;
    return t;
  }

  /// 1 - |E[exp(i phi)]|
  double circular_variance() const {
    Complex m = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) m += weights[j] * std::polar(1.0, nodes[j]);
    return 1.0 - std::abs(m);
  }
};

inline constexpr int kDefaultPhaseGrid = 2048;

inline Complex propagate_coherent(Complex alpha, const ChannelModel& channel) {
  channel.validate();
  return std::sqrt(channel.transmission) * alpha;
}

/// Phase density f(phi) = int_0^inf Q(r e^{i phi}) r dr of the coherent state
/// |alpha_cal>, Q(g) = exp(-|g - alpha_cal|^2)/pi, by radial Gauss-Legendre
/// quadrature. The integrand is a Gaussian in r centred at alpha_cal cos(phi)
/// with unit 1/e^2 width, so nine units either side cover it to exp(-81).
inline double phase_density(double phi, double alpha_cal) {
  const double c = alpha_cal * std::cos(phi);
  const double damping = std::exp(-std::pow(alpha_cal * std::sin(phi), 2));
  const double lo = std::max(0.0, c - 9.0);
  const double hi = std::max(c, 0.0) + 9.0;
  const auto integrand = [c](double r) { return std::exp(-(r - c) * (r - c)) * r; };
  constexpr double panel = 0.5;
  const int panels = static_cast<int>(std::ceil((hi - lo) / panel));
  const double h = (hi - lo) / panels;
  double acc = 0.0;
  for (int k = 0; k < panels; ++k)
    acc += boost::math::quadrature::gauss<double, 15>::integrate(integrand, lo + k * h,
                                                                 lo + (k + 1) * h);
  return damping * acc / std::numbers::pi;
}

inline PhaseDistribution phase_distribution(double alpha_cal, int grid_size = kDefaultPhaseGrid) {
  detail::require(std::isfinite(alpha_cal) && alpha_cal >= 0.0,
                  "calibration amplitude must be >= 0");
  detail::require(grid_size >= 64, "phase grid needs at least 64 nodes");
  PhaseDistribution f;
  f.nodes.resize(grid_size);
  f.weights.resize(grid_size);
  const double h = 2.0 * std::numbers::pi / grid_size;
  double total = 0.0;
  for (int j = 0; j < grid_size; ++j) {
    f.nodes[j] = j * h;
    f.weights[j] = phase_density(f.nodes[j], alpha_cal) * h;
    total += f.weights[j];
  }
  for (double& w : f.weights) w /= total;
  return f;
}

/// Means and marginal variances of a Q-function (report units).
struct QuadratureMoments {
  double mean_x = 0.0;
  double mean_p = 0.0;
  double qvar_x = 0.0;
  double qvar_p = 0.0;
};

/// Moments of the phase-diffused Q-function
///   Q_pd(g) = (1/pi) int f(phi) |<beta e^{i phi}|g>|^2 dphi,
/// a mixture of unit-width Gaussians centred on the rotated amplitudes. The
/// phase integral uses the grid of f (trapezoid rule, periodic integrand).
inline QuadratureMoments phase_diffused_moments(Complex beta, const PhaseDistribution& f) {
  detail::require(!f.nodes.empty() && f.nodes.size() == f.weights.size(),
                  "phase distribution is empty or inconsistent");
  detail::require(std::abs(f.total_weight() - 1.0) <= 1e-9, "phase distribution is not normalized");
  double ex = 0.0, ep = 0.0, ex2 = 0.0, ep2 = 0.0;
  for (std::size_t j = 0; j < f.nodes.size(); ++j) {
    const Complex c = beta * std::polar(1.0, f.nodes[j]);
    const double w = f.weights[j];
    ex += w * c.real();
    ep += w * c.imag();
    ex2 += w * c.real() * c.real();
    ep2 += w * c.imag() * c.imag();
  }
  // Each component has Var(Re g) = Var(Im g) = 1/2.
  const double var_re = 0.5 + ex2 - ex * ex;
  const double var_im = 0.5 + ep2 - ep * ep;
  return {std::numbers::sqrt2 * ex, std::numbers::sqrt2 * ep, 4.0 * var_re, 4.0 * var_im};
}

/// Per-quadrature state variances (vacuum = 1) of the channel output with
/// mean amplitude beta: excess noise plus the phase-diffusion inflation.
inline std::pair<double, double> effective_variance(Complex beta, const ChannelModel& channel,
                                                    int grid_size = kDefaultPhaseGrid) {
  channel.validate();
  double vx = 1.0 + channel.excess_noise;
  double vp = vx;
  if (channel.calibration_amplitude) {
    const auto m = phase_diffused_moments(beta, phase_distribution(*channel.calibration_amplitude,
                                                                   grid_size));
    vx += m.qvar_x - 2.0;
    vp += m.qvar_p - 2.0;
  }
  return {vx, vp};
}

/// State moments (report units) of the channel output for one symbol.
struct StateMoments {
  double mean_x = 0.0;
  double mean_p = 0.0;
  double var_x = 1.0;
  double var_p = 1.0;
};

inline StateMoments model_output_moments(int symbol, const ProbeAlphabet& alphabet,
                                         const ChannelModel& channel,
                                         int grid_size = kDefaultPhaseGrid) {
  alphabet.validate();
  channel.validate();
  const Complex beta = propagate_coherent(symbol_sign(symbol) * alphabet.alpha, channel);
  StateMoments out;
  if (channel.calibration_amplitude) {
    const auto m = phase_diffused_moments(
        beta, phase_distribution(*channel.calibration_amplitude, grid_size));
    out.mean_x = m.mean_x;
    out.mean_p = m.mean_p;
    out.var_x = m.qvar_x - 1.0 + channel.excess_noise;
    out.var_p = m.qvar_p - 1.0 + channel.excess_noise;
  } else {
    out.mean_x = std::numbers::sqrt2 * beta.real();
    out.mean_p = std::numbers::sqrt2 * beta.imag();
    out.var_x = out.var_p = 1.0 + channel.excess_noise;
  }
  return out;
}

}  // namespace cvbench

#endif  // CVBENCH_CHANNEL_HPP
