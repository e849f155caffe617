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

// Acceptance gate. Runs each criterion at its stated scale and tolerance and
// prints one PASS/FAIL line per criterion; exits non-zero if any fails.

#include <chrono>
#include <cstdio>
#include <random>
#include <string>

#include "rismimo/io.hpp"
#include "rismimo/rismimo.hpp"
#include "test_util.hpp"

using namespace rismimo;

namespace {

struct Verdict {
  std::string id;
  bool pass = false;
  std::string detail;
};

std::vector<Verdict> verdicts;

void report(const std::string& id, bool pass, const std::string& detail) {
  verdicts.push_back({id, pass, detail});
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const ResultRow& row(const SweepResult& r, MetricKind metric, SelectorKind selector, double snr_db) {
  for (const auto& x : r.rows) {
    if (x.metric == metric && x.selector == selector && x.snr_db == snr_db) return x;
  }
  throw Error("acceptance: missing result row");
}

// Standard error of the difference of two independent means.
double se_diff(const ResultRow& a, const ResultRow& b) {
  return std::sqrt(a.stderr_rate * a.stderr_rate + b.stderr_rate * b.stderr_rate);
}

ExperimentConfig reference_scenario() {
  ExperimentConfig cfg;
  cfg.name = "mimo4x4_ris64";
  cfg.n_t = 4;
  cfg.n_r = 4;
  cfg.n1 = 2;
  cfg.n2 = 1;
  cfg.o1 = 4;
  cfg.o2 = 1;
  cfg.n_ris_x = 8;
  cfg.n_ris_y = 8;
  cfg.bits = 4;
  cfg.layer = 4;
  cfg.t_random = 200;
  cfg.n_ris_new = 6;
  cfg.trials = 200;
  cfg.snr_grid_db = {-10, -5, 0, 5, 10, 15, 20, 25, 30};
  cfg.metrics = {MetricKind::lambda_based, MetricKind::effective_rank};
  cfg.selectors = {SelectorKind::proposed, SelectorKind::conventional};
  cfg.seed = 2026;
  return cfg;
}

void print_curves(const SweepResult& r) {
  std::printf("  %7s %-13s %-8s %10s %9s\n", "snr_db", "selector", "metric", "mean_rate", "stderr");
  for (const auto& x : r.rows) {
    std::printf("  %7.1f %-13s %-8s %10.4f %9.4f\n", x.snr_db, to_string(x.selector), to_string(x.metric),
                x.mean_rate, x.stderr_rate);
  }
}

// Proposed vs conventional under the lambda metric: proposed >= conventional
// - 1 SE at every point >= 10 dB, strictly greater at half of them or more.
bool proposed_advantage(const SweepResult& r, const std::vector<double>& grid, std::string& detail) {
  int points = 0, strictly = 0;
  bool within = true;
  double worst = 1e300;
  for (double s : grid) {
    if (s < 10.0) continue;
    const auto& p = row(r, MetricKind::lambda_based, SelectorKind::proposed, s);
    const auto& c = row(r, MetricKind::lambda_based, SelectorKind::conventional, s);
    ++points;
    const double margin = (p.mean_rate - c.mean_rate) / se_diff(p, c);
    worst = std::min(worst, margin);
    if (margin < -1.0) within = false;
    if (p.mean_rate > c.mean_rate) ++strictly;
  }
  detail = fmt("%g points >= 10 dB, proposed strictly higher at %g, worst (proposed - conventional)/SE = %.2f",
               points, strictly, worst);
  return within && 2 * strictly >= points;
}

void ac1_ac2_ac3(const SweepResult& ref, const ExperimentConfig& cfg2) {
  std::string detail;
  const bool ac1 = proposed_advantage(ref, cfg2.snr_grid_db, detail);
  report("AC-1", ac1, "4x4, layer 4, N_RIS 64, 200 trials: " + detail);

  bool every = true;
  double gap_sum = 0.0, worst = 1e300;
  int n = 0;
  for (auto sel : cfg2.selectors)
    for (double s : cfg2.snr_grid_db) {
      const auto& l = row(ref, MetricKind::lambda_based, sel, s);
      const auto& e = row(ref, MetricKind::effective_rank, sel, s);
      const double margin = (l.mean_rate - e.mean_rate) / se_diff(l, e);
      worst = std::min(worst, margin);
      if (margin < -1.0) every = false;
      gap_sum += l.mean_rate - e.mean_rate;
      ++n;
    }
  const double mean_gap = gap_sum / n;
  report("AC-2", every && mean_gap > 0.0,
         fmt("lambda - effrank: mean gap %.4f bit/s/Hz over both selectors, worst margin %.2f SE", mean_gap, worst));

  ExperimentConfig small = cfg2;
  small.name = "mimo2x2_ris16";
  small.n_t = 2;
  small.n_r = 2;
  small.n1 = 1;
  small.n2 = 1;
  small.o1 = 1;
  small.o2 = 1;
  small.n_ris_x = 4;
  small.n_ris_y = 4;
  small.layer = 2;
  small.metrics = {MetricKind::lambda_based};
  const auto r = run_sweep(small);
  std::printf("AC-3 curves (2x2, N_RIS 16, layer 2):\n");
  print_curves(r);
  bool agree = true;
  double worst_abs = 0.0;
  for (double s : small.snr_grid_db) {
    const auto& p = row(r, MetricKind::lambda_based, SelectorKind::proposed, s);
    const auto& c = row(r, MetricKind::lambda_based, SelectorKind::conventional, s);
    const double z = std::abs(p.mean_rate - c.mean_rate) / se_diff(p, c);
    worst_abs = std::max(worst_abs, z);
    if (z > 2.0) agree = false;
  }
  report("AC-3", agree && ac1,
         fmt("2x2 N_RIS 16: max |proposed - conventional|/SE = %.2f (limit 2); ", worst_abs) +
             "4x4 N_RIS 64 advantage: " + (ac1 ? "present" : "absent (see AC-1)"));
}

void ac4() {
  bool ok = true;
  std::string detail;
  Rng rng(404);
  for (auto dims : {std::array{2, 1, 4, 1}, std::array{2, 2, 4, 4}}) {
    const BeamGrid grid(dims[0], dims[1], dims[2], dims[3]);
    const std::size_t nt = static_cast<std::size_t>(grid.p_csirs());
    const int n3 = 10;
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<ComplexMatrix> sub;
      for (int t = 0; t < n3; ++t) sub.push_back(test::random_matrix(nt, nt, rng));
      ComplexMatrix f(nt, nt);
      for (const auto& m : sub) f += m;
      f *= Complex(1.0 / n3);
      const auto p1 = select_proposed(f, grid, n3, 1, sub);
      const auto p4 = select_proposed(f, grid, n3, 4, sub);
      const auto b_prime = static_cast<std::int64_t>(restricted_grid(p4.beam1, grid, 4).size());
      const bool prop_ok = p1.beam1 == p4.beam1 &&
                           p4.counters.wideband_inner_products == p1.counters.wideband_inner_products + b_prime &&
                           p1.counters.wideband_inner_products == grid.size();
      const auto c1 = select_conventional(f, grid, n3, 1, sub, 0.1);
      const auto c4 = select_conventional(f, grid, n3, 4, sub, 0.1);
      const auto growth = c4.counters.total_macs() - c1.counters.total_macs();
      const std::int64_t term = std::int64_t(nt) * (n3 + grid.size()) * (4 - 1);
      const bool conv_ok = growth >= term && complexity_report(c1, c4).mac_ratio > 1.0;
      ok = ok && prop_ok && conv_ok;
      if (trial == 0) {
        std::printf("AC-4 counters, N_T = %zu (proposed layer 1 vs 4, then conventional layer 1 vs 4):\n", nt);
        std::printf("%s%s", complexity_report(p1, p4).table().c_str(), complexity_report(c1, c4).table().c_str());
        detail += fmt("N_T=%g: proposed wideband %g -> ", double(nt), double(p1.counters.wideband_inner_products)) +
                  fmt("%g (|B'|=%g), ", double(p4.counters.wideband_inner_products), double(b_prime)) +
                  fmt("conventional MAC ratio %.3g (growth %g >= %g); ", complexity_report(c1, c4).mac_ratio,
                      double(growth), double(term));
      }
    }
  }
  report("AC-4", ok, detail);
}

void ac5() {
  ExperimentConfig cfg = reference_scenario();
  int runs = 0, monotone = 0;
  for (auto metric : {MetricKind::lambda_based, MetricKind::effective_rank}) {
    for (int k = 0; k < 50; ++k) {
      const auto seed = derive_seed(5005, std::uint64_t(k));
      const auto ch = generate_channels(cfg, seed);
      const auto initial = sample_configurations(std::size_t(cfg.t_random), std::size_t(cfg.n_ris()), cfg.bits,
                                                 derive_seed(seed, 1));
      double best_initial = -1.0;
      for (const auto& c : initial) best_initial = std::max(best_initial, evaluate_op(metric, cascade(ch, c), cfg.layer).value);
      const auto result = mca_optimize(ch, cfg.mca_options(), metric, cfg.layer, seed);
      ++runs;
      if (result.op.value >= best_initial - 1e-12) ++monotone;
    }
  }

  ExperimentConfig tiny = cfg;
  tiny.n_ris_x = 2;
  tiny.n_ris_y = 1;
  tiny.n_ris_new = 2;
  int exhaustive = 0, tiny_runs = 0;
  for (int k = 0; k < 100; ++k) {
    const auto seed = derive_seed(6006, std::uint64_t(k));
    const auto ch = generate_channels(tiny, seed);
    const auto result = mca_optimize(ch, tiny.mca_options(), MetricKind::lambda_based, tiny.layer, seed);
    const auto& st = result.state;
    double best = -1.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        RisConfiguration c = st.parent_max;
        c.indices[0] = (a ? st.parent_submax : st.parent_max).indices[0];
        c.indices[1] = (b ? st.parent_submax : st.parent_max).indices[1];
        best = std::max(best, op_lambda(cascade(ch, c), tiny.layer).value);
      }
    ++tiny_runs;
    if (std::abs(result.op.value - best) <= 1e-12 * std::max(1.0, best)) ++exhaustive;
  }
  report("AC-5", monotone == runs && exhaustive == tiny_runs,
         fmt("final OP >= best initial in %g/%g runs; N_RIS=2 matches exhaustive in %g/100", monotone, runs,
             exhaustive));
}

void ac6() {
  std::string detail;
  PathLossParams p;
  p.alpha_t = p.alpha_r = 10.0 * std::numbers::pi / 180.0;
  const double pl = path_loss(p);
  const double rel = std::abs(pl / 482184421045.7765337 - 1.0);
  bool ok = rel <= 1e-12;
  detail += fmt("path loss rel. error %.2e; ", rel);

  Rng rng(606);
  std::mt19937_64 engine(6060);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst_snr = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    const std::size_t layer = 1 + rng.index(3);
    const auto f = test::random_matrix(4, 4, rng);
    auto wm = test::random_matrix(4, layer, rng);
    wm *= Complex(1.0 / wm.frobenius_norm());
    const PrecoderMatrix w{wm, int(layer), 0};
    const double rho = std::pow(10.0, rng.uniform(-1.0, 2.0));
    const double sigma = std::sqrt(0.5 / rho);
    const Eigen::MatrixXcd h = test::to_eigen(f * wm);
    const Eigen::MatrixXcd pinv = h.completeOrthogonalDecomposition().pseudoInverse();
    std::vector<double> noise(layer, 0.0);
    Eigen::VectorXcd nvec(4);
    constexpr int kDraws = 100000;
    for (int d = 0; d < kDraws; ++d) {
      for (int i = 0; i < 4; ++i) nvec(i) = Complex(sigma * normal(engine), sigma * normal(engine));
      const Eigen::VectorXcd e = pinv * nvec;
      for (std::size_t r = 0; r < layer; ++r) noise[r] += std::norm(e(Eigen::Index(r)));
    }
    const auto s = per_layer_snr(f, w, rho);
    for (std::size_t r = 0; r < layer; ++r) worst_snr = std::max(worst_snr, std::abs(s[r] * noise[r] / kDraws - 1.0));
  }
  ok = ok && worst_snr <= 0.02;
  detail += fmt("post-ZF SNR worst deviation %.2f%%; ", 100.0 * worst_snr);

  double worst_rec = 0.0, worst_unit = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto a = test::random_matrix(1 + rng.index(8), 1 + rng.index(8), rng);
    const auto s = svd(a);
    worst_rec = std::max(worst_rec, (s.reconstruct() - a).frobenius_norm() / std::max(1.0, a.frobenius_norm()));
    worst_unit = std::max(worst_unit, (s.u.adjoint() * s.u - ComplexMatrix::identity(s.u.cols())).frobenius_norm());
    worst_unit = std::max(worst_unit, (s.v.adjoint() * s.v - ComplexMatrix::identity(s.v.cols())).frobenius_norm());
  }
  ok = ok && worst_rec <= 1e-9 && worst_unit <= 1e-9;
  detail += fmt("SVD reconstruction %.1e, unitarity %.1e; ", worst_rec, worst_unit);

  double worst_norm = 0.0;
  long count = 0;
  for (auto dims : {std::array{1, 1, 1, 1}, std::array{2, 1, 4, 1}, std::array{4, 1, 4, 1}, std::array{2, 2, 4, 4},
                    std::array{3, 2, 4, 4}}) {
    const BeamGrid grid(dims[0], dims[1], dims[2], dims[3]);
    for (int layer = 1; layer <= std::min(4, grid.p_csirs()); ++layer) {
      for (int k = 0; k < grid.size(); ++k) {
        const auto b1 = grid.index(k);
        std::vector<std::optional<BeamIndex>> seconds{std::nullopt};
        if (layer > 1) {
          seconds.clear();
          for (auto b : restricted_grid(b1, grid, layer)) seconds.emplace_back(b);
        }
        for (const auto& b2 : seconds)
          for (int n = 0; n < cophase_count(layer); ++n) {
            worst_norm = std::max(worst_norm, std::abs(assemble_precoder(grid, b1, b2, n, layer).matrix.frobenius_norm_squared() - 1.0));
            ++count;
          }
      }
    }
  }
  ok = ok && worst_norm <= 1e-12;
  detail += fmt("%g precoders, worst | ||W||^2 - 1 | = %.1e", double(count), worst_norm);
  report("AC-6", ok, detail);
}

void ac7(const ExperimentConfig& cfg, const SweepResult& first) {
  const auto again = run_sweep(cfg, {2, false});
  const auto a = io::curves_csv(first.rows);
  const auto b = io::curves_csv(again.rows);
  report("AC-7", a == b && !a.empty(),
         fmt("repeated sweep (1 vs 2 threads): %g CSV bytes, ", double(a.size())) + (a == b ? "identical" : "DIFFERENT"));
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  try {
    const auto cfg = reference_scenario();
    const auto ref = run_sweep(cfg);
    std::printf("Reference scenario curves (4x4, layer 4, N_RIS 64, %d trials, %d failed):\n", cfg.trials,
                ref.failed_trials);
    print_curves(ref);

    // Supplementary: same scenario scored with the post-ZF rate. Not a criterion.
    auto zf = cfg;
    zf.metrics = {MetricKind::lambda_based};
    zf.rate_formula = RateFormula::zf;
    const auto zf_result = run_sweep(zf);
    std::printf("info: post-ZF rate variant (lambda metric):\n");
    print_curves(zf_result);

    ac1_ac2_ac3(ref, cfg);
    ac4();
    ac5();
    ac6();
    ac7(cfg, ref);
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 2;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  int failed = 0;
  std::printf("\n");
  for (const auto& v : verdicts) {
    std::printf("[%s] %s: %s\n", v.pass ? "PASS" : "FAIL", v.id.c_str(), v.detail.c_str());
    if (!v.pass) ++failed;
  }
  std::printf("acceptance: %zu criteria, %d failed, %.1f s\n", verdicts.size(), failed, secs);
  return failed == 0 ? 0 : 1;
}
