// SPDX-License-Identifier: Apache-2.0
//
// rismimo: joint RIS phase optimization and Type-I precoder selection
// Copyright (C) 2026 The rismimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "rismimo/error.hpp"
#include "rismimo/linalg.hpp"
#include "rismimo/random.hpp"
#include "rismimo/ris.hpp"

namespace rismimo {

// One multipath cluster of an externally supplied delay profile.
struct ClusterTap {
  double delay_ns = 0.0;
  double power_db = 0.0;
  double aod_deg = 0.0;
  double aoa_deg = 0.0;
};

/// Small-scale fading parameters of the simplified clustered channel.
///
/// Each cluster is a bundle of rays around a mean departure/arrival angle.
/// Every ray adds a rank-one outer product of array responses with a
/// complex Gaussian gain; cluster delays rotate the gains across subbands.
/// With `isotropic` set, ray angles ignore the cluster means and are drawn
/// uniformly, which approaches i.i.d. Rayleigh fading.
struct ChannelParams {
  int clusters = 3;
  int rays_per_cluster = 20;
  double angular_spread_deg = 10.0;
  bool isotropic = false;
  double delay_spread_ns = 300.0;
  double carrier_frequency_hz = 4.0e9;
  double subcarrier_spacing_hz = 30.0e3;
  int subband_size_rb = 16;
  double tx_spacing_wavelengths = 0.5;
  double rx_spacing_wavelengths = 0.5;
  double ris_spacing_wavelengths = 0.5;
  // Overrides the random cluster delays, powers and mean angles.
  std::optional<std::vector<ClusterTap>> taps;

  void validate() const {
    if (!taps && clusters < 1) throw ConfigError("channel: clusters must be >= 1");
    if (taps && taps->empty()) throw ConfigError("channel: tap list is empty");
    if (rays_per_cluster < 1) throw ConfigError("channel: rays_per_cluster must be >= 1");
    if (!(angular_spread_deg >= 0.0)) throw ConfigError("channel: angular spread must be >= 0");
    if (!(delay_spread_ns >= 0.0)) throw ConfigError("channel: delay spread must be >= 0");
    if (!(carrier_frequency_hz > 0.0)) throw ConfigError("channel: carrier frequency must be > 0");
    if (!(subcarrier_spacing_hz > 0.0)) throw ConfigError("channel: subcarrier spacing must be > 0");
    if (subband_size_rb < 1) throw ConfigError("channel: subband_size_rb must be >= 1");
    if (!(tx_spacing_wavelengths > 0.0 && rx_spacing_wavelengths > 0.0 &&
          ris_spacing_wavelengths > 0.0)) {
      throw ConfigError("channel: element spacings must be > 0");
    }
  }
};

// Array sizes of one gNodeB -> RIS -> UE link.
struct LinkLayout {
  int n1 = 2;  // horizontal ports per polarization
  int n2 = 1;  // vertical ports per polarization
  int n_r = 4;
  int n_ris_x = 8;
  int n_ris_y = 8;
  int n3 = 1;  // subbands

  int p_csirs() const noexcept { return 2 * n1 * n2; }
  int n_ris() const noexcept { return n_ris_x * n_ris_y; }

  void validate() const {
    if (n1 < 1 || n2 < 1 || n_r < 1 || n_ris_x < 1 || n_ris_y < 1 || n3 < 1) {
      throw ConfigError("link layout: all antenna, element and subband counts must be >= 1");
    }
  }
};

/// Channel realization: gNodeB -> RIS (h, N_RIS x P) and RIS -> UE
/// (g, N_R x N_RIS), one pair per subband.
struct ChannelSet {
  std::vector<ComplexMatrix> h;
  std::vector<ComplexMatrix> g;
  std::uint64_t seed = 0;

  std::size_t n_subbands() const noexcept { return h.size(); }
  std::size_t n_ris() const noexcept { return h.empty() ? 0 : h.front().rows(); }
  std::size_t p_csirs() const noexcept { return h.empty() ? 0 : h.front().cols(); }
  std::size_t n_r() const noexcept { return g.empty() ? 0 : g.front().rows(); }
};

namespace detail {

inline std::vector<Complex> planar_response(int nx, int ny, double spacing, double az, double el) {
  std::vector<Complex> a(static_cast<std::size_t>(nx * ny));
  const double kx = 2.0 * std::numbers::pi * spacing * std::sin(az) * std::cos(el);
  const double ky = 2.0 * std::numbers::pi * spacing * std::sin(el);
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy) a[static_cast<std::size_t>(ix * ny + iy)] = std::polar(1.0, kx * ix + ky * iy);
  return a;
}

struct ClusterDraw {
  double delay_s;
  double power;
  double aod_az, aod_el, aoa_az, aoa_el;
};

inline std::vector<ClusterDraw> draw_clusters(const ChannelParams& p, Rng& rng) {
  constexpr double kDeg = std::numbers::pi / 180.0;
  std::vector<ClusterDraw> out;
  if (p.taps) {
    double total = 0.0;
    for (const auto& t : *p.taps) total += std::pow(10.0, t.power_db / 10.0);
    for (const auto& t : *p.taps) {
      out.push_back({t.delay_ns * 1e-9, std::pow(10.0, t.power_db / 10.0) / total,
                     t.aod_deg * kDeg, 0.0, t.aoa_deg * kDeg, 0.0});
    }
    return out;
  }
  const double ds = p.delay_spread_ns * 1e-9;
  std::vector<double> delays(static_cast<std::size_t>(p.clusters));
  for (auto& d : delays) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    d = -ds * std::log(u);
  }
  std::sort(delays.begin(), delays.end());
  const double d0 = delays.front();
  double total = 0.0;
  for (auto& d : delays) {
    d -= d0;
    out.push_back({d, ds > 0.0 ? std::exp(-d / ds) : 1.0, 0, 0, 0, 0});
    total += out.back().power;
  }
  for (auto& c : out) {
    c.power /= total;
    c.aod_az = rng.uniform(-std::numbers::pi / 3.0, std::numbers::pi / 3.0);
    c.aod_el = rng.uniform(-std::numbers::pi / 6.0, std::numbers::pi / 6.0);
    c.aoa_az = rng.uniform(-std::numbers::pi / 3.0, std::numbers::pi / 3.0);
    c.aoa_el = rng.uniform(-std::numbers::pi / 6.0, std::numbers::pi / 6.0);
  }
  return out;
}

struct ArraySpec {
  int nx;
  int ny;
  double spacing;
  bool cross_polarized;  // ports = 2 * nx * ny, second half co-phased per ray
  std::size_t ports() const { return static_cast<std::size_t>((cross_polarized ? 2 : 1) * nx * ny); }
};

inline std::vector<Complex> array_response(const ArraySpec& a, double az, double el, Rng& rng) {
  auto base = planar_response(a.nx, a.ny, a.spacing, az, el);
  if (!a.cross_polarized) return base;
  const Complex xpol = std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi));
  std::vector<Complex> out(base);
  for (const auto& z : base) out.push_back(xpol * z);
  return out;
}

// Frequency offset of subband t from the carrier.
inline double subband_offset_hz(const ChannelParams& p, int t, int n3) {
  const double bw = p.subband_size_rb * 12.0 * p.subcarrier_spacing_hz;
  return (t - 0.5 * (n3 - 1)) * bw;
}

// Sum over clusters and rays of gain * rx_response * tx_response^T for
// every subband.
inline std::vector<ComplexMatrix> draw_link(const ChannelParams& p, const ArraySpec& rx,
                                            const ArraySpec& tx, int n3, Rng& rng) {
  const auto clusters = draw_clusters(p, rng);
  std::vector<ComplexMatrix> out(static_cast<std::size_t>(n3), ComplexMatrix(rx.ports(), tx.ports()));
  const double spread = p.angular_spread_deg * std::numbers::pi / 180.0;
  const int rays = p.rays_per_cluster;
  std::vector<Complex> rotation(static_cast<std::size_t>(n3));
  for (const auto& c : clusters) {
    for (int t = 0; t < n3; ++t) {
      rotation[static_cast<std::size_t>(t)] =
          std::polar(1.0, -2.0 * std::numbers::pi * subband_offset_hz(p, t, n3) * c.delay_s);
    }
    for (int k = 0; k < rays; ++k) {
      double aod_az, aod_el, aoa_az, aoa_el;
      if (p.isotropic) {
        aod_az = rng.uniform(-std::numbers::pi, std::numbers::pi);
        aod_el = rng.uniform(-std::numbers::pi / 2.0, std::numbers::pi / 2.0);
        aoa_az = rng.uniform(-std::numbers::pi, std::numbers::pi);
        aoa_el = rng.uniform(-std::numbers::pi / 2.0, std::numbers::pi / 2.0);
      } else {
        aod_az = c.aod_az + spread * rng.normal();
        aod_el = c.aod_el + spread * rng.normal();
        aoa_az = c.aoa_az + spread * rng.normal();
        aoa_el = c.aoa_el + spread * rng.normal();
      }
      const Complex gain = rng.complex_normal(c.power / rays);
      const auto a_rx = array_response(rx, aoa_az, aoa_el, rng);
      const auto a_tx = array_response(tx, aod_az, aod_el, rng);
      for (int t = 0; t < n3; ++t) {
        const Complex gt = gain * rotation[static_cast<std::size_t>(t)];
        auto& m = out[static_cast<std::size_t>(t)];
        for (std::size_t i = 0; i < a_rx.size(); ++i) {
          const Complex gi = gt * a_rx[i];
          for (std::size_t j = 0; j < a_tx.size(); ++j) m(i, j) += gi * a_tx[j];
        }
      }
    }
  }
  return out;
}

}  // namespace detail

/// Draws h (gNodeB -> RIS) and g (RIS -> UE) for every subband. The result
/// is a pure function of (layout, params, seed); entries have unit average
/// power.
inline ChannelSet generate_channels(const LinkLayout& layout, const ChannelParams& params,
                                    std::uint64_t seed) {
  layout.validate();
  params.validate();
  Rng rng(seed);
  const detail::ArraySpec gnb{layout.n1, layout.n2, params.tx_spacing_wavelengths, true};
  const detail::ArraySpec ris{layout.n_ris_x, layout.n_ris_y, params.ris_spacing_wavelengths, false};
  const detail::ArraySpec ue{layout.n_r, 1, params.rx_spacing_wavelengths, false};
  ChannelSet out;
  out.seed = seed;
  out.h = detail::draw_link(params, ris, gnb, layout.n3, rng);
  out.g = detail::draw_link(params, ue, ris, layout.n3, rng);
  return out;
}

namespace detail {
inline void check_cascade_dims(const ChannelSet& ch, const RisConfiguration& phi) {
  if (ch.h.empty() || ch.g.size() != ch.h.size()) {
    throw DimensionError("cascade: channel set has no subbands");
  }
  if (ch.g.front().cols() != ch.n_ris() || phi.size() != ch.n_ris()) {
    throw DimensionError("cascade: RIS size mismatch (h has " + std::to_string(ch.n_ris()) +
                         " rows, g has " + std::to_string(ch.g.front().cols()) +
                         " columns, configuration has " + std::to_string(phi.size()) +
                         " elements)");
  }
}
}  // namespace detail

/// F_t = G_t * Phi * H_t for subband t.
inline ComplexMatrix cascade_subband(const ChannelSet& ch, const RisConfiguration& phi, std::size_t t) {
  detail::check_cascade_dims(ch, phi);
  phi.validate();
  const auto coeff = phi.coefficients();
  const auto& g = ch.g.at(t);
  const auto& h = ch.h.at(t);
  ComplexMatrix gphi(g.rows(), g.cols());
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t n = 0; n < g.cols(); ++n) gphi(i, n) = g(i, n) * coeff[n];
  return gphi * h;
}

inline std::vector<ComplexMatrix> cascade_subbands(const ChannelSet& ch, const RisConfiguration& phi) {
  std::vector<ComplexMatrix> out;
  out.reserve(ch.n_subbands());
  for (std::size_t t = 0; t < ch.n_subbands(); ++t) out.push_back(cascade_subband(ch, phi, t));
  return out;
}

/// Wideband cascaded channel: the average of F_t over subbands. With a single
/// subband this is exactly G * Phi * H.
inline ComplexMatrix cascade(const ChannelSet& ch, const RisConfiguration& phi) {
  auto subbands = cascade_subbands(ch, phi);
  ComplexMatrix f = subbands.front();
  for (std::size_t t = 1; t < subbands.size(); ++t) f += subbands[t];
  if (subbands.size() > 1) f *= Complex(1.0 / static_cast<double>(subbands.size()));
  return f;
}

/// The wideband cascade is linear in the reflection coefficients:
/// F = sum_n c_n K_n with K_n = mean_t g_t[:, n] h_t[n, :]. Precomputing the
/// K_n makes repeated evaluation during phase search cheap.
class CascadeBasis {
 public:
  explicit CascadeBasis(const ChannelSet& ch) {
    if (ch.h.empty()) throw DimensionError("CascadeBasis: channel set has no subbands");
    n_r_ = ch.n_r();
    p_ = ch.p_csirs();
    const std::size_t n_ris = ch.n_ris();
    terms_.assign(n_ris, ComplexMatrix(n_r_, p_));
    const double w = 1.0 / static_cast<double>(ch.n_subbands());
    for (std::size_t t = 0; t < ch.n_subbands(); ++t) {
      const auto& g = ch.g[t];
      const auto& h = ch.h[t];
      for (std::size_t n = 0; n < n_ris; ++n)
        for (std::size_t i = 0; i < n_r_; ++i) {
          const Complex gi = g(i, n) * w;
          for (std::size_t j = 0; j < p_; ++j) terms_[n](i, j) += gi * h(n, j);
        }
    }
  }

  std::size_t n_ris() const noexcept { return terms_.size(); }

  ComplexMatrix evaluate(const RisConfiguration& phi) const {
    if (phi.size() != terms_.size()) throw DimensionError("CascadeBasis: RIS size mismatch");
    const auto coeff = phi.coefficients();
    ComplexMatrix f(n_r_, p_);
    auto out = f.entries();
    for (std::size_t n = 0; n < terms_.size(); ++n) {
      const auto k = terms_[n].entries();
      for (std::size_t e = 0; e < out.size(); ++e) out[e] += coeff[n] * k[e];
    }
    return f;
  }

 private:
  std::size_t n_r_ = 0;
  std::size_t p_ = 0;
  std::vector<ComplexMatrix> terms_;
};

/// Normalized element radiation pattern: cos^3(alpha) on [0, pi/2], zero
/// beyond. Angles in radians.
inline double radiation_pattern(double alpha, double beta) {
  if (!(alpha >= 0.0 && alpha <= std::numbers::pi)) {
    throw DomainError("radiation_pattern: elevation must be in [0, pi]");
  }
  if (!(beta >= 0.0 && beta <= 2.0 * std::numbers::pi)) {
    throw DomainError("radiation_pattern: azimuth must be in [0, 2 pi]");
  }
  if (alpha > std::numbers::pi / 2.0) return 0.0;
  const double c = std::cos(alpha);
  return c * c * c;
}

/// Far-field RIS path loss inputs. Lengths in meters, angles in radians,
/// gains linear.
struct PathLossParams {
  double d_t = 38.0;
  double d_r = 20.0;
  double d_x = 0.015;
  double d_y = 0.015;
  double wavelength = 0.075;
  double g_t = 1.0;
  double g_r = 1.0;
  double alpha_t = 0.0;
  double alpha_r = 0.0;
  double beta_t = 0.0;
  double beta_r = 0.0;
  double a_n = 1.0;
  int n_ris = 64;

  void validate() const {
    if (!(d_t > 0 && d_r > 0 && d_x > 0 && d_y > 0 && wavelength > 0)) {
      throw DomainError("path loss: distances, element size and wavelength must be > 0");
    }
    if (!(g_t > 0 && g_r > 0)) throw DomainError("path loss: antenna gains must be > 0");
    if (!(a_n >= 0.0 && a_n <= 1.0)) throw DomainError("path loss: amplitude must be in [0, 1]");
    if (n_ris < 1) throw DomainError("path loss: RIS must have at least one element");
  }
};

// Scattering gain of a single element, 4 pi d_x d_y / z^2.
inline double element_scattering_gain(const PathLossParams& p) {
  return 4.0 * std::numbers::pi * p.d_x * p.d_y / (p.wavelength * p.wavelength);
}

/// Linear far-field path loss of the reflected link,
///   64 pi^3 (d_t d_r)^2 / (G_t G_r G_s N^2 d_x d_y z^2 F_t F_r A^2).
/// Throws DomainError when either radiation pattern or the amplitude is zero,
/// since the loss is then unbounded.
inline double path_loss(const PathLossParams& p) {
  p.validate();
  const double ft = radiation_pattern(p.alpha_t, p.beta_t);
  const double fr = radiation_pattern(p.alpha_r, p.beta_r);
  if (ft * fr <= 0.0 || p.a_n == 0.0) {
    throw DomainError("path loss is infinite: zero radiation pattern or amplitude");
  }
  const double n = static_cast<double>(p.n_ris);
  const double dd = p.d_t * p.d_r;
  const double num = 64.0 * std::numbers::pi * std::numbers::pi * std::numbers::pi * dd * dd;
  const double den = p.g_t * p.g_r * element_scattering_gain(p) * n * n * p.d_x * p.d_y *
                     p.wavelength * p.wavelength * ft * fr * p.a_n * p.a_n;
  return num / den;
}

}  // namespace rismimo
