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
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rismimo/error.hpp"
#include "rismimo/linalg.hpp"

namespace rismimo {

struct BeamIndex {
  int l = 0;
  int m = 0;
  friend bool operator==(const BeamIndex&, const BeamIndex&) = default;
};

/// Oversampled 2D DFT grid of beams v_{l,m} = v'_l (x) u_m with
/// l in [0, N1*O1) and m in [0, N2*O2).
class BeamGrid {
 public:
  BeamGrid(int n1, int n2, int o1, int o2) : n1_(n1), n2_(n2), o1_(o1), o2_(o2) {
    if (n1 < 1 || n2 < 1 || o1 < 1 || o2 < 1) {
      throw DomainError("BeamGrid: N1, N2, O1, O2 must all be >= 1");
    }
    beams_.reserve(static_cast<std::size_t>(size()));
    for (int l = 0; l < l_count(); ++l) {
      std::vector<Complex> horizontal(static_cast<std::size_t>(n1_));
      for (int p = 0; p < n1_; ++p) {
        horizontal[static_cast<std::size_t>(p)] =
            std::polar(1.0, 2.0 * std::numbers::pi * l * p / static_cast<double>(o1_ * n1_));
      }
      for (int m = 0; m < m_count(); ++m) {
        std::vector<Complex> vertical(static_cast<std::size_t>(n2_));
        for (int q = 0; q < n2_; ++q) {
          vertical[static_cast<std::size_t>(q)] =
              std::polar(1.0, 2.0 * std::numbers::pi * m * q / static_cast<double>(o2_ * n2_));
        }
        beams_.push_back(kronecker(std::span<const Complex>(horizontal), std::span<const Complex>(vertical)));
      }
    }
  }

  int n1() const noexcept { return n1_; }
  int n2() const noexcept { return n2_; }
  int o1() const noexcept { return o1_; }
  int o2() const noexcept { return o2_; }
  int l_count() const noexcept { return n1_ * o1_; }
  int m_count() const noexcept { return n2_ * o2_; }
  int size() const noexcept { return l_count() * m_count(); }
  // Beam length N1*N2, i.e. half the CSI-RS port count.
  int beam_length() const noexcept { return n1_ * n2_; }
  int p_csirs() const noexcept { return 2 * n1_ * n2_; }

  bool contains(BeamIndex b) const noexcept {
    return b.l >= 0 && b.l < l_count() && b.m >= 0 && b.m < m_count();
  }

  // Flat position in (l, then m) order.
  int flat(BeamIndex b) const noexcept { return b.l * m_count() + b.m; }
  BeamIndex index(int flat) const noexcept { return {flat / m_count(), flat % m_count()}; }

  std::span<const Complex> beam(BeamIndex b) const {
    if (!contains(b)) {
      throw DomainError("BeamGrid: beam (" + std::to_string(b.l) + ", " + std::to_string(b.m) +
                        ") outside the grid");
    }
    return beams_[static_cast<std::size_t>(flat(b))];
  }

 private:
  int n1_, n2_, o1_, o2_;
  std::vector<std::vector<Complex>> beams_;
};

inline BeamGrid build_beam_grid(int n1, int n2, int o1, int o2) { return BeamGrid(n1, n2, o1, o2); }

// Offsets of the second beam, in units of (O1, O2), relative to the primary.
// Tables follow the Type-I single-panel layer-2 and layer-3/4 (P < 16)
// mappings; rows are matched on the panel shape.
struct BeamOffsetRow {
  enum class Shape { single_port_pair, n1_eq_2_n2_eq_1, n1_gt_2_n2_eq_1, n1_eq_n2, n1_gt_n2_gt_1, exact };
  Shape shape;
  int n1 = 0;  // used with Shape::exact
  int n2 = 0;
  std::array<std::array<int, 2>, 4> offsets{};
  int count = 0;
};

inline constexpr std::array<BeamOffsetRow, 5> kLayer2Offsets{{
    {BeamOffsetRow::Shape::single_port_pair, 0, 0, {{{0, 0}}}, 1},
    {BeamOffsetRow::Shape::n1_eq_2_n2_eq_1, 0, 0, {{{0, 0}, {1, 0}}}, 2},
    {BeamOffsetRow::Shape::n1_gt_2_n2_eq_1, 0, 0, {{{0, 0}, {1, 0}, {2, 0}, {3, 0}}}, 4},
    {BeamOffsetRow::Shape::n1_eq_n2, 0, 0, {{{0, 0}, {1, 0}, {0, 1}, {1, 1}}}, 4},
    {BeamOffsetRow::Shape::n1_gt_n2_gt_1, 0, 0, {{{0, 0}, {1, 0}, {0, 1}, {2, 0}}}, 4},
}};

inline constexpr std::array<BeamOffsetRow, 5> kLayer34Offsets{{
    {BeamOffsetRow::Shape::exact, 2, 1, {{{1, 0}}}, 1},
    {BeamOffsetRow::Shape::exact, 4, 1, {{{1, 0}, {2, 0}, {3, 0}}}, 3},
    {BeamOffsetRow::Shape::exact, 6, 1, {{{1, 0}, {2, 0}, {3, 0}, {4, 0}}}, 4},
    {BeamOffsetRow::Shape::exact, 2, 2, {{{1, 0}, {0, 1}, {1, 1}}}, 3},
    {BeamOffsetRow::Shape::exact, 3, 2, {{{1, 0}, {0, 1}, {1, 1}, {2, 0}}}, 4},
}};

namespace detail {
inline bool row_matches(const BeamOffsetRow& row, int n1, int n2) {
  using S = BeamOffsetRow::Shape;
  switch (row.shape) {
    case S::single_port_pair: return n1 == 1 && n2 == 1;
    case S::n1_eq_2_n2_eq_1: return n1 == 2 && n2 == 1;
    case S::n1_gt_2_n2_eq_1: return n1 > 2 && n2 == 1;
    case S::n1_eq_n2: return n1 == n2 && n1 > 1;
    case S::n1_gt_n2_gt_1: return n1 > n2 && n2 > 1;
    case S::exact: return n1 == row.n1 && n2 == row.n2;
  }
  return false;
}
}  // namespace detail

/// Candidate set for the second beam given the primary beam. Offsets wrap
/// modulo the grid extent (the DFT beams are periodic), and duplicates are
/// dropped. Empty for a single layer.
inline std::vector<BeamIndex> restricted_grid(BeamIndex primary, const BeamGrid& grid, int layer) {
  if (!grid.contains(primary)) throw DomainError("restricted_grid: primary beam outside the grid");
  if (layer < 1 || layer > 4) throw DomainError("restricted_grid: layer must be in [1, 4]");
  if (layer == 1) return {};
  if (layer >= 3 && grid.p_csirs() >= 16) {
    throw DomainError("restricted_grid: layers 3-4 require fewer than 16 CSI-RS ports");
  }
  const auto& table = layer == 2 ? kLayer2Offsets : kLayer34Offsets;
  const auto row = std::find_if(table.begin(), table.end(), [&](const BeamOffsetRow& r) {
    return detail::row_matches(r, grid.n1(), grid.n2());
  });
  if (row == table.end()) {
    throw DomainError("restricted_grid: no beam offset table for N1=" + std::to_string(grid.n1()) +
                      ", N2=" + std::to_string(grid.n2()) + ", layer " + std::to_string(layer));
  }
  std::vector<BeamIndex> out;
  for (int k = 0; k < row->count; ++k) {
    const BeamIndex b{(primary.l + row->offsets[static_cast<std::size_t>(k)][0] * grid.o1()) % grid.l_count(),
                      (primary.m + row->offsets[static_cast<std::size_t>(k)][1] * grid.o2()) % grid.m_count()};
    if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
  }
  return out;
}

// Co-phasing alphabet size: {1, j, -1, -j} for one layer, {1, j} otherwise.
inline int cophase_count(int layer) noexcept { return layer == 1 ? 4 : 2; }

inline Complex cophase(int n) { return std::polar(1.0, std::numbers::pi * n / 2.0); }

struct PrecoderMatrix {
  ComplexMatrix matrix;  // P_CSI-RS x layer
  int layer = 1;
  std::size_t subband_index = 0;
};

/// Builds the Type-I precoder W = W1 W2 / sqrt(layer * P) for one subband.
///
/// Column layout, with phi = e^{j pi n / 2}:
///   1 layer:  [v; phi v]
///   2 layers: [v; phi v], [v'; -phi v']
///   3 layers: [v; phi v], [v'; phi v'], [v; -phi v]
///   4 layers: [v; phi v], [v'; phi v'], [v; -phi v], [v'; -phi v']
/// Every column has unit-modulus entries before scaling, so ||W||_F = 1.
inline PrecoderMatrix assemble_precoder(std::span<const Complex> beam1,
                                        std::optional<std::span<const Complex>> beam2, int cophase_index,
                                        int layer, int p_csirs, std::size_t subband_index = 0) {
  if (layer < 1 || layer > 4) throw DomainError("assemble_precoder: layer must be in [1, 4]");
  if (p_csirs < 2 || p_csirs % 2 != 0 || beam1.size() * 2 != static_cast<std::size_t>(p_csirs)) {
    throw DimensionError("assemble_precoder: beam length must be P_CSI-RS / 2");
  }
  if (cophase_index < 0 || cophase_index >= cophase_count(layer)) {
    throw DomainError("assemble_precoder: co-phase index " + std::to_string(cophase_index) +
                      " invalid for layer " + std::to_string(layer));
  }
  if (layer >= 2 && !beam2) throw DomainError("assemble_precoder: second beam required for layer >= 2");
  if (beam2 && beam2->size() != beam1.size()) {
    throw DimensionError("assemble_precoder: beams differ in length");
  }

  const std::size_t half = beam1.size();
  const Complex phi = cophase(cophase_index);
  // (beam selector: 0 = v, 1 = v'), polarization sign
  struct Column { int beam; double sign; };
  static constexpr std::array<std::array<Column, 4>, 4> kLayout{{
      {{{0, 1.0}}},
      {{{0, 1.0}, {1, -1.0}}},
      {{{0, 1.0}, {1, 1.0}, {0, -1.0}}},
      {{{0, 1.0}, {1, 1.0}, {0, -1.0}, {1, -1.0}}},
  }};

  PrecoderMatrix out{ComplexMatrix(static_cast<std::size_t>(p_csirs), static_cast<std::size_t>(layer)),
                     layer, subband_index};
  const double scale = 1.0 / std::sqrt(static_cast<double>(layer * p_csirs));
  for (int c = 0; c < layer; ++c) {
    const auto& col = kLayout[static_cast<std::size_t>(layer - 1)][static_cast<std::size_t>(c)];
    const auto v = col.beam == 0 ? beam1 : *beam2;
    for (std::size_t i = 0; i < half; ++i) {
      out.matrix(i, static_cast<std::size_t>(c)) = scale * v[i];
      out.matrix(half + i, static_cast<std::size_t>(c)) = scale * col.sign * phi * v[i];
    }
  }
  return out;
}

inline PrecoderMatrix assemble_precoder(const BeamGrid& grid, BeamIndex beam1, std::optional<BeamIndex> beam2,
                                        int cophase_index, int layer, std::size_t subband_index = 0) {
  std::optional<std::span<const Complex>> b2;
  if (beam2) b2 = grid.beam(*beam2);
  return assemble_precoder(grid.beam(beam1), b2, cophase_index, layer, grid.p_csirs(), subband_index);
}

}  // namespace rismimo
