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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "rismimo/channel.hpp"
#include "rismimo/codebook.hpp"
#include "rismimo/error.hpp"
#include "rismimo/link.hpp"
#include "rismimo/random.hpp"
#include "rismimo/risopt.hpp"
#include "rismimo/selector.hpp"

namespace rismimo {

enum class SelectorKind { proposed, conventional };

inline const char* to_string(SelectorKind k) noexcept {
  return k == SelectorKind::proposed ? "proposed" : "conventional";
}

// How entries of the SNR grid are read: directly as the average receive SNR
// (P_T / (sigma^2 N_T PL)), or as P_T / sigma^2 with the path loss applied.
enum class SnrDefinition { average, transmit };

// Channel on which the rate of each subband precoder is measured.
enum class RateEvaluation { subband, wideband };

// Gram-diagonal rate, or the rate implied by the post-ZF layer SNRs.
enum class RateFormula { gram_diagonal, zf };

/// Full description of one simulated scenario.
struct ExperimentConfig {
  std::string name = "scenario";
  int n_t = 4;
  int n_r = 4;
  int n1 = 2;
  int n2 = 1;
  int o1 = 4;
  int o2 = 1;
  int n_ris_x = 8;
  int n_ris_y = 8;
  unsigned bits = 4;
  int layer = 4;
  int n3 = 10;
  std::vector<double> snr_grid_db{-10, -5, 0, 5, 10, 15, 20, 25, 30};
  SnrDefinition snr_definition = SnrDefinition::average;
  int trials = 200;
  int t_random = 200;
  int n_ris_new = 6;
  double amplitude = 1.0;
  std::vector<MetricKind> metrics{MetricKind::lambda_based, MetricKind::effective_rank};
  std::vector<SelectorKind> selectors{SelectorKind::proposed, SelectorKind::conventional};
  CophaseReference cophase_reference = CophaseReference::subband;
  RateEvaluation rate_evaluation = RateEvaluation::subband;
  RateFormula rate_formula = RateFormula::gram_diagonal;
  ChannelParams channel;
  // Geometry of the reflected link; n_ris and a_n are filled from the fields above.
  PathLossParams path_loss{38.0, 20.0, 0.015, 0.015, 0.075, 1.0, 1.0,
                           10.0 * std::numbers::pi / 180.0, 10.0 * std::numbers::pi / 180.0};
  std::uint64_t seed = 1;

  int p_csirs() const noexcept { return 2 * n1 * n2; }
  int n_ris() const noexcept { return n_ris_x * n_ris_y; }

  LinkLayout layout() const { return {n1, n2, n_r, n_ris_x, n_ris_y, n3}; }

  McaOptions mca_options(bool record_trace = false) const {
    return {t_random, n_ris_new, bits, amplitude, record_trace};
  }

  PathLossParams path_loss_params() const {
    PathLossParams p = path_loss;
    p.n_ris = n_ris();
    p.a_n = amplitude;
    return p;
  }

  double path_loss_linear() const { return rismimo::path_loss(path_loss_params()); }

  // Average receive SNR for a grid entry.
  double avg_snr(double snr_db) const {
    const double x = std::pow(10.0, snr_db / 10.0);
    if (snr_definition == SnrDefinition::average) return x;
    return average_snr(x, 1.0, n_t, path_loss_linear());
  }

  BeamGrid beam_grid() const { return BeamGrid(n1, n2, o1, o2); }

  void validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };
    if (n_t < 1 || n_r < 1) fail("n_t and n_r must be >= 1");
    if (n1 < 1 || n2 < 1 || o1 < 1 || o2 < 1) fail("n1, n2, o1, o2 must be >= 1");
    if (p_csirs() != n_t) {
      fail("P_CSI-RS = 2*n1*n2 = " + std::to_string(p_csirs()) + " must equal n_t = " + std::to_string(n_t));
    }
    if (n_ris_x < 1 || n_ris_y < 1) fail("RIS grid must have at least one element");
    if (bits < kMinPhaseBits || bits > kMaxPhaseBits) fail("bits must be in [1, 16]");
    if (layer < 1 || layer > 4) fail("layer must be in [1, 4]");
    if (layer > std::min(n_t, n_r)) fail("layer exceeds min(n_t, n_r)");
    if (layer >= 3 && n_t >= 16) fail("layers 3-4 need fewer than 16 ports");
    if (n3 < 1) fail("n3 must be >= 1");
    if (trials < 1) fail("trials must be >= 1");
    if (t_random < 2) fail("t_random must be >= 2");
    if (n_ris_new < 0 || n_ris_new > std::min(n_ris(), kMaxSwapElements)) {
      fail("n_ris_new must be in [0, min(N_RIS, 20)]");
    }
    if (!(amplitude > 0.0 && amplitude <= 1.0)) fail("amplitude must be in (0, 1]");
    if (metrics.empty()) fail("at least one metric is required");
    if (selectors.empty()) fail("at least one selector is required");
    for (double s : snr_grid_db) {
      if (!std::isfinite(s)) fail("snr grid entries must be finite");
    }
    try {
      channel.validate();
      (void)path_loss_linear();
      const BeamGrid grid = beam_grid();
      (void)restricted_grid(BeamIndex{0, 0}, grid, layer);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      fail(e.what());
    }
  }
};

inline ChannelSet generate_channels(const ExperimentConfig& cfg, std::uint64_t seed) {
  return generate_channels(cfg.layout(), cfg.channel, seed);
}

/// One (metric, selector, SNR) measurement of a trial.
struct TrialSample {
  MetricKind metric = MetricKind::lambda_based;
  SelectorKind selector = SelectorKind::proposed;
  std::size_t snr_index = 0;
  double rate = 0.0;
  std::optional<std::vector<double>> layer_snr;  // empty when ZF failed
  double op = 0.0;
  CsiReport report;
};

struct TrialOutcome {
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  std::vector<TrialSample> samples;
  std::vector<McaResult> optimizations;  // one per metric, in cfg.metrics order
  int zf_failures = 0;
};

inline std::uint64_t trial_seed(std::uint64_t master, std::size_t trial) {
  return derive_seed(master, static_cast<std::uint64_t>(trial));
}

namespace detail {

struct Measured {
  double rate = 0.0;
  std::optional<std::vector<double>> layer_snr;
};

inline Measured measure(const ExperimentConfig& cfg, const BeamGrid& grid, const CsiReport& report,
                        const ComplexMatrix& wideband, const std::vector<ComplexMatrix>& subbands,
                        double rho, int& zf_failures) {
  Measured m;
  std::vector<double> snr_sum(static_cast<std::size_t>(cfg.layer), 0.0);
  bool zf_ok = true;
  for (std::size_t t = 0; t < subbands.size(); ++t) {
    const auto w = report.precoder(grid, t);
    const ComplexMatrix& f = cfg.rate_evaluation == RateEvaluation::subband ? subbands[t] : wideband;
    try {
      const auto s = per_layer_snr(f, w, rho);
      for (std::size_t r = 0; r < s.size(); ++r) snr_sum[r] += s[r];
      if (cfg.rate_formula == RateFormula::zf) {
        for (double x : s) m.rate += std::log2(1.0 + x);
      }
    } catch (const NumericalError&) {
      zf_ok = false;
      if (cfg.rate_formula == RateFormula::zf) throw;
    }
    if (cfg.rate_formula == RateFormula::gram_diagonal) m.rate += achievable_rate(f, w, rho);
  }
  const double n = static_cast<double>(subbands.size());
  m.rate /= n;
  if (zf_ok) {
    for (auto& s : snr_sum) s /= n;
    m.layer_snr = std::move(snr_sum);
  } else {
    ++zf_failures;
  }
  return m;
}

}  // namespace detail

/// One Monte-Carlo draw of the full pipeline: channels, RIS optimization per
/// metric, precoder selection per selector and SNR, and per-subband rates.
/// Errors are captured in the outcome rather than thrown.
inline TrialOutcome run_trial(const ExperimentConfig& cfg, std::uint64_t seed, bool record_trace = false) {
  TrialOutcome out;
  out.seed = seed;
  try {
    const auto channels = generate_channels(cfg, seed);
    const CascadeBasis basis(channels);
    const BeamGrid grid = cfg.beam_grid();
    std::vector<double> rho(cfg.snr_grid_db.size());
    for (std::size_t s = 0; s < rho.size(); ++s) rho[s] = cfg.avg_snr(cfg.snr_grid_db[s]);

    for (const MetricKind metric : cfg.metrics) {
      // Same random candidates and swap positions for every metric.
      auto mca = mca_optimize(basis, cfg.mca_options(record_trace), metric, cfg.layer, derive_seed(seed, 100));
      const auto subbands = cascade_subbands(channels, mca.config);
      const auto wideband = cascade(channels, mca.config);

      for (const SelectorKind selector : cfg.selectors) {
        std::optional<CsiReport> fixed;
        if (selector == SelectorKind::proposed) {
          fixed = select_proposed(wideband, grid, cfg.n3, cfg.layer, subbands, cfg.cophase_reference);
        }
        for (std::size_t s = 0; s < rho.size(); ++s) {
          CsiReport report = fixed ? *fixed
                                   : select_conventional(wideband, grid, cfg.n3, cfg.layer, subbands, 1.0 / rho[s]);
          report.op = mca.op.value;
          const auto m = detail::measure(cfg, grid, report, wideband, subbands, rho[s], out.zf_failures);
          out.samples.push_back({metric, selector, s, m.rate, m.layer_snr, mca.op.value, std::move(report)});
        }
      }
      out.optimizations.push_back(std::move(mca));
    }
  } catch (const Error& e) {
    out.ok = false;
    out.error = e.what();
    out.samples.clear();
  }
  return out;
}

/// Aggregate of one curve point.
struct ResultRow {
  std::string scenario;
  double snr_db = 0.0;
  SelectorKind selector = SelectorKind::proposed;
  MetricKind metric = MetricKind::lambda_based;
  int n_ris = 0;
  int n_t = 0;
  int n_r = 0;
  int layer = 0;
  double mean_rate = 0.0;
  double stderr_rate = 0.0;  // sample std / sqrt(trials)
  std::vector<double> mean_layer_snr;
  double mean_op = 0.0;
  SelectionCounters counters;  // summed over trials
  int trials = 0;
};

struct SweepOptions {
  unsigned threads = 1;
  bool record_trace = false;
};

struct SweepResult {
  std::vector<ResultRow> rows;
  std::vector<TrialOutcome> trials;
  int failed_trials = 0;
  int zf_failures = 0;
  std::vector<std::string> warnings;
};

/// Runs cfg.trials independent trials and reduces them, in trial order, to one
/// row per (metric, selector, SNR). Thread count does not affect the output.
inline SweepResult run_sweep(const ExperimentConfig& cfg, const SweepOptions& opt = {}) {
  cfg.validate();
  SweepResult out;
  if (cfg.snr_grid_db.empty()) {
    out.warnings.push_back("empty SNR grid: nothing to simulate");
    return out;
  }

  out.trials.resize(static_cast<std::size_t>(cfg.trials));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < out.trials.size(); i = next++) {
      out.trials[i] = run_trial(cfg, trial_seed(cfg.seed, i), opt.record_trace);
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(cfg.trials)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }

  for (const auto& t : out.trials) {
    if (!t.ok) {
      ++out.failed_trials;
      out.warnings.push_back("trial seed " + std::to_string(t.seed) + " failed: " + t.error);
    }
    out.zf_failures += t.zf_failures;
  }

  const std::size_t n_snr = cfg.snr_grid_db.size();
  for (const MetricKind metric : cfg.metrics) {
    for (const SelectorKind selector : cfg.selectors) {
      for (std::size_t s = 0; s < n_snr; ++s) {
        ResultRow row;
        row.scenario = cfg.name;
        row.snr_db = cfg.snr_grid_db[s];
        row.selector = selector;
        row.metric = metric;
        row.n_ris = cfg.n_ris();
        row.n_t = cfg.n_t;
        row.n_r = cfg.n_r;
        row.layer = cfg.layer;
        row.mean_layer_snr.assign(static_cast<std::size_t>(cfg.layer), 0.0);
        std::vector<double> rates;
        int snr_count = 0;
        double op_sum = 0.0;
        for (const auto& t : out.trials) {
          if (!t.ok) continue;
          for (const auto& smp : t.samples) {
            if (smp.metric != metric || smp.selector != selector || smp.snr_index != s) continue;
            rates.push_back(smp.rate);
            op_sum += smp.op;
            row.counters += smp.report.counters;
            if (smp.layer_snr) {
              ++snr_count;
              for (std::size_t r = 0; r < smp.layer_snr->size(); ++r) row.mean_layer_snr[r] += (*smp.layer_snr)[r];
            }
          }
        }
        row.trials = static_cast<int>(rates.size());
        if (row.trials > 0) {
          double sum = 0.0;
          for (double r : rates) sum += r;
          row.mean_rate = sum / row.trials;
          double ss = 0.0;
          for (double r : rates) ss += (r - row.mean_rate) * (r - row.mean_rate);
          row.stderr_rate = row.trials > 1 ? std::sqrt(ss / (row.trials - 1)) / std::sqrt(double(row.trials)) : 0.0;
          row.mean_op = op_sum / row.trials;
        }
        if (snr_count > 0) {
          for (auto& v : row.mean_layer_snr) v /= snr_count;
        }
        out.rows.push_back(std::move(row));
      }
    }
  }
  return out;
}

}  // namespace rismimo
