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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "rismimo/io.hpp"
#include "rismimo/rismimo.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int run_simulate(const std::string& config_path, const std::string& out_dir, std::optional<int> trials,
                 std::optional<std::uint64_t> seed, const std::string& selector, const std::string& metric,
                 unsigned threads, bool trace) {
  auto cfg = rismimo::io::load_config(config_path);
  if (trials) cfg.trials = *trials;
  if (seed) cfg.seed = *seed;
  if (!selector.empty()) cfg.selectors = rismimo::io::parse_selectors(selector);
  if (!metric.empty()) cfg.metrics = rismimo::io::parse_metrics(metric);
  cfg.validate();

  const auto result = rismimo::run_sweep(cfg, {threads, trace});
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  rismimo::io::write_sweep_artifacts(out_dir, cfg, result, trace);

  std::cerr << cfg.name << ": " << result.rows.size() << " rows, " << cfg.trials << " trials ("
            << result.failed_trials << " failed, " << result.zf_failures << " ZF failures) -> " << out_dir << '\n';
  if (!cfg.snr_grid_db.empty() && result.failed_trials == cfg.trials) return kExitNumerical;
  return 0;
}

int run_codebook_dump(int n1, int n2, int o1, int o2, int layer, const std::string& out) {
  std::string text;
  try {
    const auto grid = rismimo::build_beam_grid(n1, n2, o1, o2);
    text = rismimo::io::codebook_dump(grid, layer).dump(2) + "\n";
  } catch (const rismimo::DomainError& e) {
    throw rismimo::ConfigError(e.what());
  }
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    std::ofstream f(out);
    if (!f) throw rismimo::ConfigError("cannot write " + out);
    f << text;
  }
  return 0;
}

int run_validate(const std::string& path) {
  const auto cfg = rismimo::io::load_config(path);
  std::cout << "ok: " << cfg.name << " (" << cfg.n_t << "x" << cfg.n_r << ", layer " << cfg.layer
            << ", N_RIS " << cfg.n_ris() << ", " << cfg.snr_grid_db.size() << " SNR points, " << cfg.trials
            << " trials, path loss " << rismimo::io::format_number(10.0 * std::log10(cfg.path_loss_linear()))
            << " dB)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS-assisted MIMO phase optimization and Type-I precoder selection"};
  app.require_subcommand(1);

  std::string config_path, out_dir, selector, metric;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  bool trace = false;
  auto* sim = app.add_subcommand("simulate", "Run a Monte-Carlo sweep and write curves/results");
  sim->add_option("--config", config_path, "Experiment config (JSON)")->required();
  sim->add_option("--out", out_dir, "Output directory")->required();
  sim->add_option("--trials", trials, "Override the trial count");
  sim->add_option("--seed", seed, "Override the master seed");
  sim->add_option("--selector", selector, "proposed | conventional | both")
      ->check(CLI::IsMember({"proposed", "conventional", "both"}));
  sim->add_option("--metric", metric, "lambda | effrank | both")->check(CLI::IsMember({"lambda", "effrank", "both"}));
  sim->add_option("--threads", threads, "Worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
  sim->add_flag("--trace", trace, "Also write trace.jsonl with every evaluated RIS configuration");

  int n1 = 2, n2 = 1, o1 = 4, o2 = 1, layer = 1;
  std::string dump_out;
  auto* dump = app.add_subcommand("codebook-dump", "Emit beams and precoders of a Type-I codebook as JSON");
  dump->add_option("--n1", n1, "Horizontal ports per polarization")->required();
  dump->add_option("--n2", n2, "Vertical ports per polarization")->required();
  dump->add_option("--o1", o1, "Horizontal oversampling")->required();
  dump->add_option("--o2", o2, "Vertical oversampling")->required();
  dump->add_option("--layer", layer, "Number of layers (1-4)")->required();
  dump->add_option("--out", dump_out, "Output file (default stdout)");

  std::string validate_path;
  auto* val = app.add_subcommand("validate-config", "Check an experiment config");
  val->add_option("path", validate_path, "Config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*sim) return run_simulate(config_path, out_dir, trials, seed, selector, metric, threads, trace);
    if (*dump) return run_codebook_dump(n1, n2, o1, o2, layer, dump_out);
    if (*val) return run_validate(validate_path);
  } catch (const rismimo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const rismimo::Error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
