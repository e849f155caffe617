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
#include <string>
#include <vector>

#include "rismimo/codebook.hpp"
#include "rismimo/error.hpp"
#include "rismimo/linalg.hpp"

namespace rismimo {

struct LinkMetrics {
  std::vector<double> per_layer_snr;  // linear, post-ZF
  double rate_bps_hz = 0.0;           // Gram-diagonal achievable rate
  double avg_snr = 0.0;               // linear
};

namespace detail {
inline ComplexMatrix effective_channel(const ComplexMatrix& f, const PrecoderMatrix& w) {
  if (f.cols() != w.matrix.rows()) {
    throw DimensionError("effective channel: F is " + f.shape() + ", W is " + w.matrix.shape());
  }
  return f * w.matrix;
}

inline ComplexMatrix solve_gram(const ComplexMatrix& gram_matrix, const ComplexMatrix& rhs) {
  try {
    return hermitian_solve(gram_matrix, rhs);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("zero-forcing equalization failed: ") + e.what());
  }
}
}  // namespace detail

/// Zero-forcing equalizer sqrt(PL) (W^H F^H F W)^{-1} W^H F^H, of size
/// layer x N_R. Throws NumericalError when F W is rank deficient.
inline ComplexMatrix zf_matrix(const ComplexMatrix& f, const PrecoderMatrix& w, double pl_ris) {
  if (!(pl_ris > 0.0)) throw DomainError("zf_matrix: path loss must be > 0");
  const auto fw = detail::effective_channel(f, w);
  auto out = detail::solve_gram(gram(fw), fw.adjoint());
  out *= Complex(std::sqrt(pl_ris));
  return out;
}

/// Post-ZF SNR of each layer: avg_snr / [(W^H F^H F W)^{-1}]_rr.
inline std::vector<double> per_layer_snr(const ComplexMatrix& f, const PrecoderMatrix& w, double avg_snr) {
  if (!(avg_snr >= 0.0)) throw DomainError("per_layer_snr: average SNR must be >= 0");
  const auto g = gram(detail::effective_channel(f, w));
  const auto inv = detail::solve_gram(g, ComplexMatrix::identity(g.rows()));
  std::vector<double> out(g.rows());
  for (std::size_t r = 0; r < g.rows(); ++r) out[r] = avg_snr / inv(r, r).real();
  return out;
}

/// sum_r log2(1 + avg_snr * [W^H F^H F W]_rr).
inline double achievable_rate(const ComplexMatrix& f, const PrecoderMatrix& w, double avg_snr) {
  if (!(avg_snr >= 0.0)) throw DomainError("achievable_rate: average SNR must be >= 0");
  const auto fw = detail::effective_channel(f, w);
  double rate = 0.0;
  for (std::size_t r = 0; r < fw.cols(); ++r) {
    double d = 0.0;
    for (std::size_t i = 0; i < fw.rows(); ++i) d += std::norm(fw(i, r));
    rate += std::log2(1.0 + avg_snr * d);
  }
  return rate;
}

/// sum_r log2(1 + rho_r) over the post-ZF layer SNRs.
inline double zf_rate(const ComplexMatrix& f, const PrecoderMatrix& w, double avg_snr) {
  double rate = 0.0;
  for (double s : per_layer_snr(f, w, avg_snr)) rate += std::log2(1.0 + s);
  return rate;
}

/// P_T / (sigma^2 N_T PL).
inline double average_snr(double p_t, double sigma2, int n_t, double pl_ris) {
  if (!(p_t > 0.0 && sigma2 > 0.0 && n_t > 0 && pl_ris > 0.0)) {
    throw DomainError("average_snr: all inputs must be positive");
  }
  return p_t / (sigma2 * static_cast<double>(n_t) * pl_ris);
}

inline LinkMetrics evaluate_link(const ComplexMatrix& f, const PrecoderMatrix& w, double avg_snr) {
  return {per_layer_snr(f, w, avg_snr), achievable_rate(f, w, avg_snr), avg_snr};
}

}  // namespace rismimo
