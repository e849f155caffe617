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

#include <gtest/gtest.h>

#include "rismimo/harness.hpp"

using namespace rismimo;

namespace {

// Small scenario that runs in milliseconds.
ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.n_ris_x = 4;
  cfg.n_ris_y = 4;
  cfg.n3 = 3;
  cfg.trials = 4;
  cfg.t_random = 10;
  cfg.n_ris_new = 3;
  cfg.snr_grid_db = {-10, 0, 10, 20, 30};
  return cfg;
}

}  // namespace

TEST(ExperimentConfig, DefaultsValidate) {
  EXPECT_NO_THROW(ExperimentConfig{}.validate());
  const ExperimentConfig cfg;
  EXPECT_EQ(cfg.n_ris(), 64);
  EXPECT_EQ(cfg.p_csirs(), cfg.n_t);
  EXPECT_NEAR(10.0 * std::log10(cfg.path_loss_linear()), 116.83213, 1e-4);
}

TEST(ExperimentConfig, RejectsInconsistentGeometry) {
  auto cfg = small_config();
  cfg.n1 = 1;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.layer = 5;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.n_ris_new = 21;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.metrics.clear();
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.path_loss.alpha_t = 2.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(ExperimentConfig, SnrDefinitions) {
  auto cfg = small_config();
  EXPECT_NEAR(cfg.avg_snr(10.0), 10.0, 1e-12);
  cfg.snr_definition = SnrDefinition::transmit;
  EXPECT_NEAR(cfg.avg_snr(10.0), 10.0 / (cfg.n_t * cfg.path_loss_linear()), 1e-24);
}

TEST(RunTrial, Deterministic) {
  const auto cfg = small_config();
  const auto a = run_trial(cfg, 17);
  const auto b = run_trial(cfg, 17);
  ASSERT_TRUE(a.ok) << a.error;
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    EXPECT_EQ(a.samples[k].rate, b.samples[k].rate);
    EXPECT_EQ(a.samples[k].report.cophase, b.samples[k].report.cophase);
  }
}

TEST(RunTrial, SelectorsShareChannelAndRisConfiguration) {
  auto cfg = small_config();
  cfg.selectors = {SelectorKind::proposed};
  const auto p = run_trial(cfg, 5);
  cfg.selectors = {SelectorKind::conventional};
  const auto c = run_trial(cfg, 5);
  ASSERT_TRUE(p.ok && c.ok);
  ASSERT_EQ(p.optimizations.size(), c.optimizations.size());
  for (std::size_t k = 0; k < p.optimizations.size(); ++k) {
    EXPECT_EQ(p.optimizations[k].config, c.optimizations[k].config);
    EXPECT_EQ(p.optimizations[k].op.value, c.optimizations[k].op.value);
  }
  for (const auto& s : p.samples) EXPECT_EQ(s.selector, SelectorKind::proposed);
  for (const auto& s : c.samples) EXPECT_EQ(s.selector, SelectorKind::conventional);
}

TEST(RunTrial, RateIncreasesWithSnr) {
  auto cfg = small_config();
  cfg.selectors = {SelectorKind::proposed};
  cfg.metrics = {MetricKind::lambda_based};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto t = run_trial(cfg, seed);
    ASSERT_TRUE(t.ok) << t.error;
    ASSERT_EQ(t.samples.size(), cfg.snr_grid_db.size());
    for (std::size_t s = 1; s < t.samples.size(); ++s) {
      EXPECT_GT(t.samples[s].rate, t.samples[s - 1].rate);
    }
    EXPECT_GT(t.samples.back().rate, 0.0);
  }
}

TEST(RunTrial, SampleCountsFollowConfig) {
  const auto cfg = small_config();
  const auto t = run_trial(cfg, 3, true);
  ASSERT_TRUE(t.ok);
  EXPECT_EQ(t.samples.size(), 2u * 2u * cfg.snr_grid_db.size());
  ASSERT_EQ(t.optimizations.size(), 2u);
  EXPECT_EQ(t.optimizations[0].trace.size(),
            static_cast<std::size_t>(cfg.t_random) + (std::size_t{1} << cfg.n_ris_new));
  for (const auto& s : t.samples) {
    EXPECT_EQ(s.report.cophase.size(), static_cast<std::size_t>(cfg.n3));
    EXPECT_GE(s.op, 0.0);
  }
}

TEST(RunSweep, EmptyGridWarns) {
  auto cfg = small_config();
  cfg.snr_grid_db.clear();
  const auto r = run_sweep(cfg);
  EXPECT_TRUE(r.rows.empty());
  ASSERT_EQ(r.warnings.size(), 1u);
}

TEST(RunSweep, CartesianRowCount) {
  const auto cfg = small_config();
  const auto r = run_sweep(cfg);
  ASSERT_EQ(r.rows.size(), 20u);
  EXPECT_EQ(r.failed_trials, 0);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.trials, cfg.trials);
    EXPECT_GE(row.stderr_rate, 0.0);
    EXPECT_EQ(row.n_ris, 16);
  }
  EXPECT_EQ(r.rows.front().metric, MetricKind::lambda_based);
  EXPECT_EQ(r.rows.front().selector, SelectorKind::proposed);
  EXPECT_EQ(r.rows.back().metric, MetricKind::effective_rank);
  EXPECT_EQ(r.rows.back().selector, SelectorKind::conventional);
}

TEST(RunSweep, ThreadCountDoesNotChangeRows) {
  const auto cfg = small_config();
  const auto a = run_sweep(cfg, {1, false});
  const auto b = run_sweep(cfg, {3, false});
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    EXPECT_EQ(a.rows[k].mean_rate, b.rows[k].mean_rate);
    EXPECT_EQ(a.rows[k].stderr_rate, b.rows[k].stderr_rate);
  }
}

TEST(RunSweep, StandardErrorMatchesDefinitionAndShrinks) {
  auto cfg = small_config();
  cfg.metrics = {MetricKind::lambda_based};
  cfg.selectors = {SelectorKind::proposed};
  cfg.snr_grid_db = {20.0};
  cfg.t_random = 4;
  cfg.n_ris_new = 1;
  cfg.trials = 16;
  const auto small = run_sweep(cfg);
  double mean = 0.0, ss = 0.0;
  for (const auto& t : small.trials) mean += t.samples[0].rate;
  mean /= 16.0;
  for (const auto& t : small.trials) ss += (t.samples[0].rate - mean) * (t.samples[0].rate - mean);
  EXPECT_NEAR(small.rows[0].mean_rate, mean, 1e-12);
  EXPECT_NEAR(small.rows[0].stderr_rate, std::sqrt(ss / 15.0) / 4.0, 1e-12);

  cfg.trials = 256;
  const auto large = run_sweep(cfg);
  // Sixteen times the trials: about a quarter of the standard error.
  const double ratio = large.rows[0].stderr_rate / small.rows[0].stderr_rate;
  EXPECT_GT(ratio, 0.25 / 2.0);
  EXPECT_LT(ratio, 0.25 * 2.0);
}
