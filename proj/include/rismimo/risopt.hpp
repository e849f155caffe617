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
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "rismimo/channel.hpp"
#include "rismimo/error.hpp"
#include "rismimo/linalg.hpp"
#include "rismimo/random.hpp"
#include "rismimo/ris.hpp"

namespace rismimo {

enum class MetricKind { lambda_based, effective_rank };

inline const char* to_string(MetricKind k) noexcept {
  return k == MetricKind::lambda_based ? "lambda" : "effrank";
}

struct OpMetric {
  MetricKind kind = MetricKind::lambda_based;
  int layer = 1;
  double value = 0.0;
};

// Sum of the `count` largest singular values over the sum of all of them.
// `values` must be sorted non-increasing.
inline double dominant_ratio(std::span<const double> values, std::size_t count) {
  const double total = std::accumulate(values.begin(), values.end(), 0.0);
  if (!(total > 0.0)) throw DomainError("OP: channel has no energy");
  count = std::min(count, values.size());
  return std::accumulate(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(count), 0.0) / total;
}

// exp of the Shannon entropy of the normalized singular values.
inline double effective_rank(std::span<const double> values) {
  const double total = std::accumulate(values.begin(), values.end(), 0.0);
  if (!(total > 0.0)) throw DomainError("OP: channel has no energy");
  double entropy = 0.0;
  for (double v : values) {
    const double p = v / total;
    if (p > 0.0) entropy -= p * std::log(p);
  }
  return std::exp(entropy);
}

/// Dominant singular value ratio. Layers above one are clamped to two, the
/// pair of singular vectors the Type-I precoder structure can follow.
inline OpMetric op_lambda(const ComplexMatrix& f, int layer) {
  if (layer < 1) throw DomainError("op_lambda: layer must be >= 1");
  const int used = std::min(layer, 2);
  const auto sv = singular_values(f);
  return {MetricKind::lambda_based, used, dominant_ratio(sv, static_cast<std::size_t>(used))};
}

inline OpMetric op_effective_rank(const ComplexMatrix& f) {
  const auto sv = singular_values(f);
  return {MetricKind::effective_rank, 0, effective_rank(sv)};
}

inline OpMetric evaluate_op(MetricKind kind, const ComplexMatrix& f, int layer) {
  return kind == MetricKind::lambda_based ? op_lambda(f, layer) : op_effective_rank(f);
}

struct McaOptions {
  int t_random = 200;
  int n_ris_new = 6;
  unsigned bits = 4;
  double amplitude = 1.0;
  bool record_trace = false;
};

inline constexpr int kMaxSwapElements = 20;

/// Parents, crossover positions and offspring scores of one MCA run.
/// Offspring i takes the submax parent's phase at swap_indices[k] whenever
/// bit k of i is set and the max parent's phase everywhere else, so
/// offspring 0 is the max parent itself.
struct McaState {
  RisConfiguration parent_max;
  RisConfiguration parent_submax;
  double op_max = 0.0;
  double op_submax = 0.0;
  std::vector<std::size_t> swap_indices;
  std::vector<double> offspring_op;
  std::size_t best_offspring = 0;

  std::size_t offspring_count() const noexcept { return std::size_t{1} << swap_indices.size(); }

  RisConfiguration offspring(std::size_t i) const {
    RisConfiguration c = parent_max;
    for (std::size_t k = 0; k < swap_indices.size(); ++k) {
      if ((i >> k) & 1u) c.indices[swap_indices[k]] = parent_submax.indices[swap_indices[k]];
    }
    return c;
  }
};

enum class TraceStage { initial, offspring };

struct TraceRecord {
  std::vector<std::uint32_t> phase_indices;
  double op_value = 0.0;
  TraceStage stage = TraceStage::initial;
};

struct McaResult {
  RisConfiguration config;
  OpMetric op;
  McaState state;
  double best_initial_op = 0.0;
  std::vector<TraceRecord> trace;
};

/// Maximum cross-swapping search over quantized RIS phases.
///
/// T random configurations are scored on the wideband cascade, the two best
/// become parents, and all 2^n_ris_new crossings at randomly chosen element
/// positions are scored. The best offspring is returned; since offspring 0
/// is the top parent, the result never scores below the initial set.
inline McaResult mca_optimize(const CascadeBasis& basis, const McaOptions& opt, MetricKind kind, int layer,
                              std::uint64_t seed) {
  const std::size_t n_ris = basis.n_ris();
  if (opt.t_random < 2) throw DomainError("mca: need at least two random configurations");
  if (opt.n_ris_new < 0 || static_cast<std::size_t>(opt.n_ris_new) > n_ris) {
    throw DomainError("mca: n_ris_new must be in [0, N_RIS]");
  }
  if (opt.n_ris_new > kMaxSwapElements) throw DomainError("mca: n_ris_new must be <= 20");

  auto score = [&](const RisConfiguration& c) { return evaluate_op(kind, basis.evaluate(c), layer).value; };

  McaResult out;
  const auto initial = sample_configurations(static_cast<std::size_t>(opt.t_random), n_ris, opt.bits,
                                             derive_seed(seed, 1), opt.amplitude);
  std::vector<double> ops(initial.size());
  for (std::size_t t = 0; t < initial.size(); ++t) {
    ops[t] = score(initial[t]);
    if (opt.record_trace) out.trace.push_back({initial[t].indices, ops[t], TraceStage::initial});
  }

  // Top two by OP, earlier index first on ties.
  std::size_t i_max = 0, i_sub = 1;
  if (ops[1] > ops[0]) std::swap(i_max, i_sub);
  for (std::size_t t = 2; t < ops.size(); ++t) {
    if (ops[t] > ops[i_max]) {
      i_sub = i_max;
      i_max = t;
    } else if (ops[t] > ops[i_sub]) {
      i_sub = t;
    }
  }

  auto& st = out.state;
  st.parent_max = initial[i_max];
  st.parent_submax = initial[i_sub];
  st.op_max = ops[i_max];
  st.op_submax = ops[i_sub];
  out.best_initial_op = ops[i_max];

  // Partial Fisher-Yates draw of distinct swap positions.
  Rng rng(derive_seed(seed, 2));
  std::vector<std::size_t> pool(n_ris);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (int k = 0; k < opt.n_ris_new; ++k) {
    const std::size_t j = static_cast<std::size_t>(k) + rng.index(n_ris - static_cast<std::size_t>(k));
    std::swap(pool[static_cast<std::size_t>(k)], pool[j]);
  }
  st.swap_indices.assign(pool.begin(), pool.begin() + opt.n_ris_new);
  std::sort(st.swap_indices.begin(), st.swap_indices.end());

  st.offspring_op.resize(st.offspring_count());
  for (std::size_t i = 0; i < st.offspring_count(); ++i) {
    const auto child = st.offspring(i);
    // Offspring 0 is the max parent, already scored.
    st.offspring_op[i] = i == 0 ? st.op_max : score(child);
    if (opt.record_trace) out.trace.push_back({child.indices, st.offspring_op[i], TraceStage::offspring});
    if (st.offspring_op[i] > st.offspring_op[st.best_offspring]) st.best_offspring = i;
  }

  out.config = st.offspring(st.best_offspring);
  out.op = evaluate_op(kind, basis.evaluate(out.config), layer);
  return out;
}

inline McaResult mca_optimize(const ChannelSet& channels, const McaOptions& opt, MetricKind kind, int layer,
                              std::uint64_t seed) {
  return mca_optimize(CascadeBasis(channels), opt, kind, layer, seed);
}

}  // namespace rismimo
