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
#include <cstdio>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "rismimo/codebook.hpp"
#include "rismimo/error.hpp"
#include "rismimo/linalg.hpp"

namespace rismimo {

// Work tallies of one selection call. An inner product is one complex dot
// product of any length; a MAC is one complex multiply-accumulate.
struct SelectionCounters {
  std::int64_t wideband_inner_products = 0;
  std::int64_t wideband_macs = 0;
  std::int64_t cophase_inner_products = 0;
  std::int64_t cophase_macs = 0;
  std::int64_t svd_calls = 0;

  std::int64_t total_macs() const noexcept { return wideband_macs + cophase_macs; }

  SelectionCounters& operator+=(const SelectionCounters& o) noexcept {
    wideband_inner_products += o.wideband_inner_products;
    wideband_macs += o.wideband_macs;
    cophase_inner_products += o.cophase_inner_products;
    cophase_macs += o.cophase_macs;
    svd_calls += o.svd_calls;
    return *this;
  }
  friend bool operator==(const SelectionCounters&, const SelectionCounters&) = default;
};

/// PMI report: wideband beams, per-subband co-phasing indices, rank and the
/// optimization parameter fed back for RIS control.
struct CsiReport {
  BeamIndex beam1;
  std::optional<BeamIndex> beam2;
  std::vector<int> cophase;
  int rank = 1;
  double op = 0.0;
  SelectionCounters counters;

  // Precoder of subband t.
  PrecoderMatrix precoder(const BeamGrid& grid, std::size_t t) const {
    return assemble_precoder(grid, beam1, beam2, cophase.at(t), rank, t);
  }
};

// Which dominant singular vector drives the co-phase choice of subband t.
enum class CophaseReference { subband, wideband };

namespace detail {

inline void check_selection_inputs(const ComplexMatrix& f, const BeamGrid& grid, int n3, int layer,
                                   std::span<const ComplexMatrix> subbands) {
  if (layer < 1) throw DomainError("precoder selection: layer must be >= 1");
  if (layer > 4) throw DomainError("precoder selection: at most 4 layers are supported");
  if (f.cols() != static_cast<std::size_t>(grid.p_csirs())) {
    throw DimensionError("precoder selection: F has " + std::to_string(f.cols()) +
                         " columns but the codebook has " + std::to_string(grid.p_csirs()) + " ports");
  }
  if (static_cast<std::size_t>(layer) > std::min(f.rows(), f.cols())) {
    throw DomainError("precoder selection: layer exceeds min(N_R, P_CSI-RS)");
  }
  if (n3 < 1) throw DomainError("precoder selection: need at least one subband");
  if (!subbands.empty()) {
    if (subbands.size() != static_cast<std::size_t>(n3)) {
      throw DimensionError("precoder selection: expected " + std::to_string(n3) + " subband channels");
    }
    for (const auto& ft : subbands) {
      if (ft.rows() != f.rows() || ft.cols() != f.cols()) {
        throw DimensionError("precoder selection: subband channel shape differs from F");
      }
    }
  }
}

inline bool lex_less(BeamIndex a, BeamIndex b) { return a.l < b.l || (a.l == b.l && a.m < b.m); }

}  // namespace detail

/// SVD-driven selection.
///
/// The primary beam maximizes |v^H w*| over the full grid where w* is the
/// first half of the dominant right singular vector of F. For more than one
/// layer the second beam maximizes the same score against the first half of
/// the second singular vector over the restricted set. Each subband's
/// co-phase maximizes |[v; phi_n v]^H w_opt|. Ties go to the lowest index.
inline CsiReport select_proposed(const ComplexMatrix& f, const BeamGrid& grid, int n3, int layer,
                                 std::span<const ComplexMatrix> subband_channels,
                                 CophaseReference reference = CophaseReference::subband) {
  detail::check_selection_inputs(f, grid, n3, layer, subband_channels);
  const std::size_t half = static_cast<std::size_t>(grid.beam_length());
  const std::size_t ports = 2 * half;

  CsiReport report;
  report.rank = layer;
  auto& cnt = report.counters;

  const auto dec = svd(f);
  ++cnt.svd_calls;
  const auto w_opt = dec.right_vector(0);
  const std::span<const Complex> w_opt_half(w_opt.data(), half);

  double best = -1.0;
  for (int k = 0; k < grid.size(); ++k) {
    const BeamIndex b = grid.index(k);
    const double score = std::abs(inner_product(grid.beam(b), w_opt_half));
    ++cnt.wideband_inner_products;
    cnt.wideband_macs += static_cast<std::int64_t>(half);
    if (score > best) {
      best = score;
      report.beam1 = b;
    }
  }

  if (layer > 1) {
    const auto w_sub = dec.right_vector(1);
    const std::span<const Complex> w_sub_half(w_sub.data(), half);
    double best2 = -1.0;
    for (const BeamIndex b : restricted_grid(report.beam1, grid, layer)) {
      const double score = std::abs(inner_product(grid.beam(b), w_sub_half));
      ++cnt.wideband_inner_products;
      cnt.wideband_macs += static_cast<std::int64_t>(half);
      if (score > best2 || (score == best2 && detail::lex_less(b, *report.beam2))) {
        best2 = score;
        report.beam2 = b;
      }
    }
  }

  const auto v = grid.beam(report.beam1);
  const int n_count = cophase_count(layer);
  std::vector<Complex> candidate(ports);
  report.cophase.assign(static_cast<std::size_t>(n3), 0);
  for (int t = 0; t < n3; ++t) {
    std::vector<Complex> w_ref;
    if (reference == CophaseReference::subband && !subband_channels.empty()) {
      w_ref = svd(subband_channels[static_cast<std::size_t>(t)]).right_vector(0);
      ++cnt.svd_calls;
    } else {
      w_ref = w_opt;
    }
    double best_c = -1.0;
    for (int n = 0; n < n_count; ++n) {
      const Complex phi = cophase(n);
      for (std::size_t i = 0; i < half; ++i) {
        candidate[i] = v[i];
        candidate[half + i] = phi * v[i];
      }
      const double score = std::abs(inner_product(candidate, w_ref));
      ++cnt.cophase_inner_products;
      cnt.cophase_macs += static_cast<std::int64_t>(ports);
      if (score > best_c) {
        best_c = score;
        report.cophase[static_cast<std::size_t>(t)] = n;
      }
    }
  }

  // Fraction of the spectrum held by the (at most two) leading singular values.
  double head = 0.0, total = 0.0;
  for (std::size_t r = 0; r < dec.singular_values.size(); ++r) {
    if (r < static_cast<std::size_t>(std::min(layer, 2))) head += dec.singular_values[r];
    total += dec.singular_values[r];
  }
  report.op = total > 0.0 ? head / total : 0.0;
  return report;
}

namespace detail {

// sum_r log2(1 + [W^H F^H F W]_rr / noise_var), tallying the work.
inline double mutual_information(const ComplexMatrix& f, const PrecoderMatrix& w, double noise_var,
                                 std::int64_t& inner_products, std::int64_t& macs) {
  const std::size_t nr = f.rows();
  const std::size_t p = f.cols();
  double rate = 0.0;
  for (std::size_t r = 0; r < w.matrix.cols(); ++r) {
    double d = 0.0;
    for (std::size_t i = 0; i < nr; ++i) {
      Complex s{};
      for (std::size_t j = 0; j < p; ++j) s += f(i, j) * w.matrix(j, r);
      d += std::norm(s);
    }
    rate += std::log2(1.0 + d / noise_var);
    inner_products += static_cast<std::int64_t>(nr + 1);
    macs += static_cast<std::int64_t>(nr * p + nr);
  }
  return rate;
}

}  // namespace detail

/// Mutual-information baseline.
///
/// Wideband beams and co-phase are found by exhaustive search over every
/// codebook precoder of the given rank, maximizing the Gram-diagonal rate on
/// the band-averaged F. With the beams fixed, each subband's co-phase is then
/// re-chosen by the same metric on F_t. Ties go to the lowest (l, m, n).
inline CsiReport select_conventional(const ComplexMatrix& f, const BeamGrid& grid, int n3, int layer,
                                     std::span<const ComplexMatrix> subband_channels, double noise_var) {
  detail::check_selection_inputs(f, grid, n3, layer, subband_channels);
  if (!(noise_var > 0.0)) throw DomainError("select_conventional: noise variance must be > 0");

  CsiReport report;
  report.rank = layer;
  auto& cnt = report.counters;
  const int n_count = cophase_count(layer);

  double best = -1.0;
  int best_n = 0;
  for (int k = 0; k < grid.size(); ++k) {
    const BeamIndex b1 = grid.index(k);
    std::vector<std::optional<BeamIndex>> seconds;
    if (layer == 1) {
      seconds.emplace_back(std::nullopt);
    } else {
      auto cand = restricted_grid(b1, grid, layer);
      std::sort(cand.begin(), cand.end(), detail::lex_less);
      for (auto b : cand) seconds.emplace_back(b);
    }
    for (const auto& b2 : seconds) {
      for (int n = 0; n < n_count; ++n) {
        const auto w = assemble_precoder(grid, b1, b2, n, layer);
        const double mi = detail::mutual_information(f, w, noise_var, cnt.wideband_inner_products,
                                                     cnt.wideband_macs);
        if (mi > best) {
          best = mi;
          report.beam1 = b1;
          report.beam2 = b2;
          best_n = n;
        }
      }
    }
  }

  report.cophase.assign(static_cast<std::size_t>(n3), best_n);
  for (int t = 0; t < n3; ++t) {
    const ComplexMatrix& ft = subband_channels.empty() ? f : subband_channels[static_cast<std::size_t>(t)];
    double best_t = -1.0;
    for (int n = 0; n < n_count; ++n) {
      const auto w = assemble_precoder(grid, report.beam1, report.beam2, n, layer);
      const double mi = detail::mutual_information(ft, w, noise_var, cnt.cophase_inner_products,
                                                   cnt.cophase_macs);
      if (mi > best_t) {
        best_t = mi;
        report.cophase[static_cast<std::size_t>(t)] = n;
      }
    }
  }
  return report;
}

struct ComplexityComparison {
  SelectionCounters a;
  SelectionCounters b;
  double wideband_ratio = 0.0;  // b / a, wideband inner products
  double cophase_ratio = 0.0;   // b / a, co-phase inner products
  double mac_ratio = 0.0;       // b / a, all MACs

  std::string table() const {
    std::ostringstream os;
    os << "counter                    a            b        b/a\n";
    auto row = [&](const char* name, std::int64_t x, std::int64_t y) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "%-20s %12lld %12lld %10.4g\n", name, static_cast<long long>(x),
                    static_cast<long long>(y), x == 0 ? 0.0 : static_cast<double>(y) / static_cast<double>(x));
      os << buf;
    };
    row("wideband_inner", a.wideband_inner_products, b.wideband_inner_products);
    row("wideband_macs", a.wideband_macs, b.wideband_macs);
    row("cophase_inner", a.cophase_inner_products, b.cophase_inner_products);
    row("cophase_macs", a.cophase_macs, b.cophase_macs);
    row("total_macs", a.total_macs(), b.total_macs());
    row("svd_calls", a.svd_calls, b.svd_calls);
    return os.str();
  }
};

/// Side-by-side counter table for two reports of the same scenario.
inline ComplexityComparison complexity_report(const CsiReport& a, const CsiReport& b) {
  auto ratio = [](std::int64_t x, std::int64_t y) {
    return x == 0 ? 0.0 : static_cast<double>(y) / static_cast<double>(x);
  };
  ComplexityComparison out{a.counters, b.counters};
  out.wideband_ratio = ratio(a.counters.wideband_inner_products, b.counters.wideband_inner_products);
  out.cophase_ratio = ratio(a.counters.cophase_inner_products, b.counters.cophase_inner_products);
  out.mac_ratio = ratio(a.counters.total_macs(), b.counters.total_macs());
  return out;
}

}  // namespace rismimo
