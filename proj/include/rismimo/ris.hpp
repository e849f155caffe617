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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "rismimo/error.hpp"
#include "rismimo/linalg.hpp"
#include "rismimo/random.hpp"

namespace rismimo {

inline constexpr unsigned kMinPhaseBits = 1;
inline constexpr unsigned kMaxPhaseBits = 16;

inline void check_phase_bits(unsigned bits) {
  if (bits < kMinPhaseBits || bits > kMaxPhaseBits) {
    throw DomainError("phase quantization width must be in [1, 16], got " + std::to_string(bits));
  }
}

/// Quantized phase levels {2 pi k / 2^bits : k = 0 .. 2^bits - 1}.
inline std::vector<double> phase_set(unsigned bits) {
  check_phase_bits(bits);
  const std::uint32_t levels = 1u << bits;
  std::vector<double> out(levels);
  for (std::uint32_t k = 0; k < levels; ++k) {
    out[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(levels);
  }
  return out;
}

/// Phase configuration of the surface. Phases are held as grid indices k so
/// that every element is exactly on the quantization grid; the angle
/// 2 pi k / 2^bits is produced on demand. The amplitude is common to all
/// elements.
struct RisConfiguration {
  unsigned bits = 1;
  double amplitude = 1.0;
  std::vector<std::uint32_t> indices;

  std::size_t size() const noexcept { return indices.size(); }
  std::uint32_t levels() const noexcept { return 1u << bits; }

  double theta(std::size_t n) const {
    return 2.0 * std::numbers::pi * static_cast<double>(indices.at(n)) /
           static_cast<double>(levels());
  }

  std::vector<double> thetas() const {
    std::vector<double> out(size());
    for (std::size_t n = 0; n < size(); ++n) out[n] = theta(n);
    return out;
  }

  // A e^{j theta_n} for every element.
  std::vector<Complex> coefficients() const {
    std::vector<Complex> out(size());
    for (std::size_t n = 0; n < size(); ++n) out[n] = std::polar(amplitude, theta(n));
    return out;
  }

  void validate() const {
    check_phase_bits(bits);
    if (!(amplitude >= 0.0 && amplitude <= 1.0)) {
      throw DomainError("RIS amplitude must be in [0, 1]");
    }
    for (auto k : indices) {
      if (k >= levels()) throw DomainError("RIS phase index outside the quantization grid");
    }
  }

  friend bool operator==(const RisConfiguration&, const RisConfiguration&) = default;
};

/// diag(A e^{j theta_1}, ..., A e^{j theta_N}).
inline ComplexMatrix reflection_matrix(const RisConfiguration& cfg) {
  cfg.validate();
  const auto c = cfg.coefficients();
  return ComplexMatrix::diagonal(c);
}

/// Draws `count` configurations with every phase uniform over the grid.
inline std::vector<RisConfiguration> sample_configurations(std::size_t count, std::size_t n_ris,
                                                           unsigned bits, std::uint64_t seed,
                                                           double amplitude = 1.0) {
  check_phase_bits(bits);
  if (count < 2) throw DomainError("sample_configurations: need at least two configurations");
  if (n_ris == 0) throw DomainError("sample_configurations: surface has no elements");
  Rng rng(seed);
  const std::uint64_t levels = 1u << bits;
  std::vector<RisConfiguration> out(count);
  for (auto& cfg : out) {
    cfg.bits = bits;
    cfg.amplitude = amplitude;
    cfg.indices.resize(n_ris);
    for (auto& k : cfg.indices) k = static_cast<std::uint32_t>(rng.index(levels));
  }
  return out;
}

}  // namespace rismimo
