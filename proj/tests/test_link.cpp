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

#include <random>

#include "rismimo/link.hpp"
#include "test_util.hpp"

using namespace rismimo;
using rismimo::test::max_abs_diff;
using rismimo::test::random_matrix;

namespace {

PrecoderMatrix as_precoder(const ComplexMatrix& m) { return {m, static_cast<int>(m.cols()), 0}; }

PrecoderMatrix random_precoder(std::size_t p, std::size_t layer, Rng& rng) {
  auto m = random_matrix(p, layer, rng);
  m *= Complex(1.0 / m.frobenius_norm());
  return as_precoder(m);
}

}  // namespace

TEST(ZfMatrix, IdentityChannel) {
  const auto w = zf_matrix(ComplexMatrix::identity(2), as_precoder(ComplexMatrix::identity(2)), 1.0);
  EXPECT_LE(max_abs_diff(w, ComplexMatrix::identity(2)), 1e-15);
}

TEST(ZfMatrix, DiagonalChannel) {
  const ComplexMatrix f{{2.0, 0.0}, {0.0, 1.0}};
  const auto w = zf_matrix(f, as_precoder(ComplexMatrix::identity(2)), 1.0);
  const ComplexMatrix expected{{0.5, 0.0}, {0.0, 1.0}};
  EXPECT_LE(max_abs_diff(w, expected), 1e-15);
}

TEST(ZfMatrix, InvertsScaledForwardChannel) {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t layer = 1 + rng.index(4);
    const auto f = random_matrix(4, 4, rng);
    const auto w = random_precoder(4, layer, rng);
    const double pl = std::pow(10.0, rng.uniform(0.0, 12.0));
    const auto zf = zf_matrix(f, w, pl);
    const auto product = zf * (f * w.matrix) * Complex(1.0 / std::sqrt(pl));
    EXPECT_LE(max_abs_diff(product, ComplexMatrix::identity(layer)), 1e-8);
  }
}

TEST(ZfMatrix, RankDeficientFails) {
  const ComplexMatrix f{{1.0, 1.0}, {1.0, 1.0}};
  EXPECT_THROW(zf_matrix(f, as_precoder(ComplexMatrix::identity(2)), 1.0), NumericalError);
  EXPECT_THROW(per_layer_snr(f, as_precoder(ComplexMatrix::identity(2)), 1.0), NumericalError);
  EXPECT_THROW(zf_matrix(ComplexMatrix::identity(2), as_precoder(ComplexMatrix::identity(3)), 1.0), DimensionError);
}

TEST(PerLayerSnr, UnitGram) {
  const ComplexMatrix w{{1.0}, {0.0}};
  const auto s = per_layer_snr(ComplexMatrix::identity(2), as_precoder(w), 7.0);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_NEAR(s[0], 7.0, 1e-14);
}

TEST(PerLayerSnr, OrthogonalColumns) {
  const ComplexMatrix fw{{2.0, 0.0}, {0.0, Complex(0.0, 1.0)}, {0.0, 0.0}};
  const auto s = per_layer_snr(fw, as_precoder(ComplexMatrix::identity(2)), 3.0);
  EXPECT_NEAR(s[0], 12.0, 1e-13);
  EXPECT_NEAR(s[1], 3.0, 1e-13);
}

// Simulates y = F W x + n with unit-power symbols and noise variance
// 1/avg_snr, equalizes with an Eigen pseudo-inverse and measures the
// residual noise power per layer.
TEST(PerLayerSnr, MatchesMonteCarloEqualization) {
  Rng rng(41);
  std::mt19937_64 noise_engine(2024);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int instance = 0; instance < 20; ++instance) {
    const std::size_t layer = 1 + rng.index(3);
    const auto f = random_matrix(4, 4, rng);
    const auto w = random_precoder(4, layer, rng);
    const double avg_snr = std::pow(10.0, rng.uniform(-1.0, 2.0));
    const double sigma = std::sqrt(1.0 / avg_snr / 2.0);

    const Eigen::MatrixXcd h = rismimo::test::to_eigen(f * w.matrix);
    const Eigen::MatrixXcd pinv = h.completeOrthogonalDecomposition().pseudoInverse();
    constexpr int kDraws = 100000;
    std::vector<double> noise_power(layer, 0.0);
    Eigen::VectorXcd n(4);
    for (int d = 0; d < kDraws; ++d) {
      for (int i = 0; i < 4; ++i) n(i) = Complex(sigma * normal(noise_engine), sigma * normal(noise_engine));
      const Eigen::VectorXcd e = pinv * n;
      for (std::size_t r = 0; r < layer; ++r) noise_power[r] += std::norm(e(Eigen::Index(r)));
    }
    const auto s = per_layer_snr(f, w, avg_snr);
    for (std::size_t r = 0; r < layer; ++r) {
      const double measured = static_cast<double>(kDraws) / noise_power[r];
      EXPECT_NEAR(s[r] / measured, 1.0, 0.02) << "instance " << instance << " layer " << r;
    }
  }
}

TEST(AchievableRate, Examples) {
  Rng rng(5);
  const auto f = random_matrix(4, 4, rng);
  EXPECT_EQ(achievable_rate(f, random_precoder(4, 2, rng), 0.0), 0.0);
  const ComplexMatrix fw{{std::sqrt(3.0), 0.0}, {0.0, 1.0}};
  EXPECT_NEAR(achievable_rate(fw, as_precoder(ComplexMatrix::identity(2)), 1.0), 3.0, 1e-14);
  const ComplexMatrix single{{2.0}};
  EXPECT_NEAR(achievable_rate(single, as_precoder(ComplexMatrix{{1.0}}), 1.0), std::log2(5.0), 1e-14);
}

TEST(AchievableRate, RecomputedFromGram) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_matrix(4, 4, rng);
    const auto w = random_precoder(4, 1 + rng.index(4), rng);
    const double snr = rng.uniform(0.0, 50.0);
    const Eigen::MatrixXcd g = rismimo::test::to_eigen(w.matrix).adjoint() * rismimo::test::to_eigen(f).adjoint() *
                   rismimo::test::to_eigen(f) * rismimo::test::to_eigen(w.matrix);
    double expected = 0.0;
    for (Eigen::Index r = 0; r < g.rows(); ++r) expected += std::log2(1.0 + snr * g(r, r).real());
    EXPECT_NEAR(achievable_rate(f, w, snr), expected, 1e-9);
  }
}

TEST(AchievableRate, GramDiagonalBoundsZfRate) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = random_matrix(4, 4, rng);
    const auto w = random_precoder(4, 2 + rng.index(3), rng);
    const double snr = std::pow(10.0, rng.uniform(-1.0, 3.0));
    EXPECT_GE(achievable_rate(f, w, snr), zf_rate(f, w, snr) - 1e-9);
  }
  // Equality when the Gram is diagonal.
  const ComplexMatrix fw{{2.0, 0.0}, {0.0, 0.5}, {0.0, 0.0}};
  const auto w = as_precoder(ComplexMatrix::identity(2));
  EXPECT_NEAR(achievable_rate(fw, w, 4.0), zf_rate(fw, w, 4.0), 1e-12);
}

TEST(AchievableRate, MonotoneInSnr) {
  Rng rng(8);
  const auto f = random_matrix(4, 4, rng);
  const auto w = random_precoder(4, 3, rng);
  double prev = -1.0;
  for (double snr_db = -20.0; snr_db <= 40.0; snr_db += 2.5) {
    const double rate = achievable_rate(f, w, std::pow(10.0, snr_db / 10.0));
    EXPECT_GE(rate, prev);
    prev = rate;
  }
}

TEST(AverageSnr, Examples) {
  EXPECT_DOUBLE_EQ(average_snr(2.0, 2.0, 1, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(average_snr(1.0, 1.0, 8, 1.0), average_snr(1.0, 1.0, 4, 1.0) / 2.0);
  // Reference geometry path loss, frozen from a high-precision evaluation.
  EXPECT_NEAR(average_snr(1.0, 1.0, 1, 482184421045.7765337) * 482184421045.7765337, 1.0, 1e-15);
  EXPECT_THROW(average_snr(0.0, 1.0, 1, 1.0), DomainError);
  EXPECT_THROW(average_snr(1.0, 1.0, 0, 1.0), DomainError);
}

TEST(EvaluateLink, BundlesMetrics) {
  Rng rng(9);
  const auto f = random_matrix(4, 4, rng);
  const auto w = random_precoder(4, 2, rng);
  const auto m = evaluate_link(f, w, 10.0);
  EXPECT_EQ(m.avg_snr, 10.0);
  EXPECT_EQ(m.per_layer_snr, per_layer_snr(f, w, 10.0));
  EXPECT_EQ(m.rate_bps_hz, achievable_rate(f, w, 10.0));
}
