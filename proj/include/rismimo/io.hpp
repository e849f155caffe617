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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "rismimo/channel.hpp"
#include "rismimo/codebook.hpp"
#include "rismimo/error.hpp"
#include "rismimo/harness.hpp"
#include "rismimo/ris.hpp"
#include "rismimo/risopt.hpp"
#include "rismimo/selector.hpp"

namespace rismimo::io {

using json = nlohmann::json;

// Fixed 12-significant-digit formatting for every number written to CSV.
inline std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---- enums ---------------------------------------------------------------

inline MetricKind parse_metric(const std::string& s) {
  if (s == "lambda" || s == "lambda_based") return MetricKind::lambda_based;
  if (s == "effrank" || s == "effective_rank") return MetricKind::effective_rank;
  throw ConfigError("unknown metric '" + s + "' (expected lambda or effrank)");
}

inline SelectorKind parse_selector(const std::string& s) {
  if (s == "proposed") return SelectorKind::proposed;
  if (s == "conventional") return SelectorKind::conventional;
  throw ConfigError("unknown selector '" + s + "' (expected proposed or conventional)");
}

inline std::vector<MetricKind> parse_metrics(const std::string& s) {
  if (s == "both") return {MetricKind::lambda_based, MetricKind::effective_rank};
  return {parse_metric(s)};
}

inline std::vector<SelectorKind> parse_selectors(const std::string& s) {
  if (s == "both") return {SelectorKind::proposed, SelectorKind::conventional};
  return {parse_selector(s)};
}

// ---- RIS configuration ---------------------------------------------------

inline json to_json(const RisConfiguration& c) {
  return {{"bits", c.bits}, {"amplitude", c.amplitude}, {"indices", c.indices}};
}

inline RisConfiguration ris_configuration_from_json(const json& j) {
  try {
    RisConfiguration c;
    c.bits = j.at("bits").get<unsigned>();
    c.amplitude = j.at("amplitude").get<double>();
    c.indices = j.at("indices").get<std::vector<std::uint32_t>>();
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("RIS configuration: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("RIS configuration: ") + e.what());
  }
}

// ---- CSI report ----------------------------------------------------------

inline json to_json(const SelectionCounters& c) {
  return {{"wideband_inner_products", c.wideband_inner_products},
          {"wideband_macs", c.wideband_macs},
          {"cophase_inner_products", c.cophase_inner_products},
          {"cophase_macs", c.cophase_macs},
          {"svd_calls", c.svd_calls}};
}

inline json to_json(const CsiReport& r) {
  json j{{"beam1", {r.beam1.l, r.beam1.m}},
         {"beam2", nullptr},
         {"cophase", r.cophase},
         {"rank", r.rank},
         {"op", r.op},
         {"counters", to_json(r.counters)}};
  if (r.beam2) j["beam2"] = {r.beam2->l, r.beam2->m};
  return j;
}

// ---- channel taps --------------------------------------------------------

inline std::vector<ClusterTap> taps_from_json(const json& j) {
  if (!j.is_array()) throw ConfigError("tap profile must be a JSON array of clusters");
  std::vector<ClusterTap> taps;
  for (const auto& c : j) {
    try {
      taps.push_back({c.at("delay_ns").get<double>(), c.at("power_db").get<double>(),
                      c.at("aod_deg").get<double>(), c.at("aoa_deg").get<double>()});
    } catch (const json::exception& e) {
      throw ConfigError(std::string("tap profile: ") + e.what());
    }
  }
  if (taps.empty()) throw ConfigError("tap profile is empty");
  return taps;
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

// ---- experiment configuration -------------------------------------------

namespace detail {

// Reads optional key `key` into `dst`, rejecting type mismatches.
template <typename T>
void read(const json& j, const char* key, T& dst, std::set<std::string>& seen) {
  seen.insert(key);
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

inline void reject_unknown(const json& j, const std::set<std::string>& seen, const std::string& where) {
  for (const auto& [k, _] : j.items()) {
    if (!seen.count(k)) throw ConfigError("unknown " + where + " field '" + k + "'");
  }
}

inline std::vector<std::string> string_list(const json& j, const char* key, std::set<std::string>& seen) {
  seen.insert(key);
  if (!j.contains(key)) return {};
  const auto& v = j.at(key);
  if (v.is_string()) return {v.get<std::string>()};
  try {
    return v.get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

constexpr double kDeg = std::numbers::pi / 180.0;

}  // namespace detail

/// Parses an ExperimentConfig. Unknown keys are rejected. `base_dir` resolves
/// a relative channel.tap_file.
inline ExperimentConfig config_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  std::set<std::string> seen;
  detail::read(j, "name", c.name, seen);
  detail::read(j, "n_t", c.n_t, seen);
  detail::read(j, "n_r", c.n_r, seen);
  detail::read(j, "n1", c.n1, seen);
  detail::read(j, "n2", c.n2, seen);
  detail::read(j, "o1", c.o1, seen);
  detail::read(j, "o2", c.o2, seen);
  detail::read(j, "n_ris_x", c.n_ris_x, seen);
  detail::read(j, "n_ris_y", c.n_ris_y, seen);
  detail::read(j, "bits", c.bits, seen);
  detail::read(j, "layer", c.layer, seen);
  detail::read(j, "n3", c.n3, seen);
  detail::read(j, "snr_grid_db", c.snr_grid_db, seen);
  detail::read(j, "trials", c.trials, seen);
  detail::read(j, "t_random", c.t_random, seen);
  detail::read(j, "n_ris_new", c.n_ris_new, seen);
  detail::read(j, "amplitude", c.amplitude, seen);
  detail::read(j, "seed", c.seed, seen);

  std::string snr_def = "average", cophase = "subband", rate_eval = "subband", rate_formula = "gram_diagonal";
  detail::read(j, "snr_definition", snr_def, seen);
  detail::read(j, "cophase_reference", cophase, seen);
  detail::read(j, "rate_evaluation", rate_eval, seen);
  detail::read(j, "rate_formula", rate_formula, seen);
  if (snr_def == "average") c.snr_definition = SnrDefinition::average;
  else if (snr_def == "transmit") c.snr_definition = SnrDefinition::transmit;
  else throw ConfigError("snr_definition must be 'average' or 'transmit'");
  if (cophase == "subband") c.cophase_reference = CophaseReference::subband;
  else if (cophase == "wideband") c.cophase_reference = CophaseReference::wideband;
  else throw ConfigError("cophase_reference must be 'subband' or 'wideband'");
  if (rate_eval == "subband") c.rate_evaluation = RateEvaluation::subband;
  else if (rate_eval == "wideband") c.rate_evaluation = RateEvaluation::wideband;
  else throw ConfigError("rate_evaluation must be 'subband' or 'wideband'");
  if (rate_formula == "gram_diagonal") c.rate_formula = RateFormula::gram_diagonal;
  else if (rate_formula == "zf") c.rate_formula = RateFormula::zf;
  else throw ConfigError("rate_formula must be 'gram_diagonal' or 'zf'");

  if (auto m = detail::string_list(j, "metric_kind", seen); !m.empty()) {
    c.metrics.clear();
    for (const auto& s : m) {
      for (auto k : parse_metrics(s)) c.metrics.push_back(k);
    }
  }
  if (auto s = detail::string_list(j, "selector_kind", seen); !s.empty()) {
    c.selectors.clear();
    for (const auto& x : s) {
      for (auto k : parse_selectors(x)) c.selectors.push_back(k);
    }
  }

  seen.insert("channel");
  if (j.contains("channel")) {
    const auto& ch = j.at("channel");
    if (!ch.is_object()) throw ConfigError("config field 'channel' must be an object");
    std::set<std::string> cs;
    auto& p = c.channel;
    detail::read(ch, "clusters", p.clusters, cs);
    detail::read(ch, "rays_per_cluster", p.rays_per_cluster, cs);
    detail::read(ch, "angular_spread_deg", p.angular_spread_deg, cs);
    detail::read(ch, "isotropic", p.isotropic, cs);
    detail::read(ch, "delay_spread_ns", p.delay_spread_ns, cs);
    detail::read(ch, "carrier_frequency_hz", p.carrier_frequency_hz, cs);
    detail::read(ch, "subcarrier_spacing_hz", p.subcarrier_spacing_hz, cs);
    detail::read(ch, "subband_size_rb", p.subband_size_rb, cs);
    detail::read(ch, "tx_spacing_wavelengths", p.tx_spacing_wavelengths, cs);
    detail::read(ch, "rx_spacing_wavelengths", p.rx_spacing_wavelengths, cs);
    detail::read(ch, "ris_spacing_wavelengths", p.ris_spacing_wavelengths, cs);
    cs.insert("taps");
    if (ch.contains("taps") && !ch.at("taps").is_null()) p.taps = taps_from_json(ch.at("taps"));
    cs.insert("tap_file");
    if (ch.contains("tap_file") && !ch.at("tap_file").is_null()) {
      std::filesystem::path tp = ch.at("tap_file").get<std::string>();
      if (tp.is_relative()) tp = base_dir / tp;
      p.taps = taps_from_json(read_json_file(tp));
    }
    detail::reject_unknown(ch, cs, "channel");
  }

  seen.insert("path_loss");
  if (j.contains("path_loss")) {
    const auto& pl = j.at("path_loss");
    if (!pl.is_object()) throw ConfigError("config field 'path_loss' must be an object");
    std::set<std::string> ps;
    auto& p = c.path_loss;
    detail::read(pl, "d_t", p.d_t, ps);
    detail::read(pl, "d_r", p.d_r, ps);
    detail::read(pl, "d_x", p.d_x, ps);
    detail::read(pl, "d_y", p.d_y, ps);
    detail::read(pl, "wavelength", p.wavelength, ps);
    detail::read(pl, "g_t", p.g_t, ps);
    detail::read(pl, "g_r", p.g_r, ps);
    double at = p.alpha_t / detail::kDeg, ar = p.alpha_r / detail::kDeg;
    double bt = p.beta_t / detail::kDeg, br = p.beta_r / detail::kDeg;
    detail::read(pl, "alpha_t_deg", at, ps);
    detail::read(pl, "alpha_r_deg", ar, ps);
    detail::read(pl, "beta_t_deg", bt, ps);
    detail::read(pl, "beta_r_deg", br, ps);
    p.alpha_t = at * detail::kDeg;
    p.alpha_r = ar * detail::kDeg;
    p.beta_t = bt * detail::kDeg;
    p.beta_r = br * detail::kDeg;
    detail::reject_unknown(pl, ps, "path_loss");
  }

  detail::reject_unknown(j, seen, "config");
  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  return config_from_json(read_json_file(path), path.parent_path());
}

inline json to_json(const ExperimentConfig& c) {
  json metrics = json::array(), selectors = json::array();
  for (auto m : c.metrics) metrics.push_back(to_string(m));
  for (auto s : c.selectors) selectors.push_back(to_string(s));
  json channel{{"clusters", c.channel.clusters},
               {"rays_per_cluster", c.channel.rays_per_cluster},
               {"angular_spread_deg", c.channel.angular_spread_deg},
               {"isotropic", c.channel.isotropic},
               {"delay_spread_ns", c.channel.delay_spread_ns},
               {"carrier_frequency_hz", c.channel.carrier_frequency_hz},
               {"subcarrier_spacing_hz", c.channel.subcarrier_spacing_hz},
               {"subband_size_rb", c.channel.subband_size_rb},
               {"tx_spacing_wavelengths", c.channel.tx_spacing_wavelengths},
               {"rx_spacing_wavelengths", c.channel.rx_spacing_wavelengths},
               {"ris_spacing_wavelengths", c.channel.ris_spacing_wavelengths},
               {"taps", nullptr}};
  if (c.channel.taps) {
    json taps = json::array();
    for (const auto& t : *c.channel.taps) {
      taps.push_back({{"delay_ns", t.delay_ns}, {"power_db", t.power_db}, {"aod_deg", t.aod_deg}, {"aoa_deg", t.aoa_deg}});
    }
    channel["taps"] = taps;
  }
  const auto& p = c.path_loss;
  return {{"name", c.name},
          {"n_t", c.n_t},
          {"n_r", c.n_r},
          {"n1", c.n1},
          {"n2", c.n2},
          {"o1", c.o1},
          {"o2", c.o2},
          {"n_ris_x", c.n_ris_x},
          {"n_ris_y", c.n_ris_y},
          {"bits", c.bits},
          {"layer", c.layer},
          {"n3", c.n3},
          {"snr_grid_db", c.snr_grid_db},
          {"snr_definition", c.snr_definition == SnrDefinition::average ? "average" : "transmit"},
          {"trials", c.trials},
          {"t_random", c.t_random},
          {"n_ris_new", c.n_ris_new},
          {"amplitude", c.amplitude},
          {"metric_kind", metrics},
          {"selector_kind", selectors},
          {"cophase_reference", c.cophase_reference == CophaseReference::subband ? "subband" : "wideband"},
          {"rate_evaluation", c.rate_evaluation == RateEvaluation::subband ? "subband" : "wideband"},
          {"rate_formula", c.rate_formula == RateFormula::gram_diagonal ? "gram_diagonal" : "zf"},
          {"channel", channel},
          {"path_loss",
           {{"d_t", p.d_t}, {"d_r", p.d_r}, {"d_x", p.d_x}, {"d_y", p.d_y}, {"wavelength", p.wavelength},
            {"g_t", p.g_t}, {"g_r", p.g_r}, {"alpha_t_deg", p.alpha_t / detail::kDeg},
            {"alpha_r_deg", p.alpha_r / detail::kDeg}, {"beta_t_deg", p.beta_t / detail::kDeg},
            {"beta_r_deg", p.beta_r / detail::kDeg}}},
          {"seed", c.seed}};
}

// ---- sweep output ----------------------------------------------------------

inline std::string curves_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  os << "snr_db,selector,metric,n_ris,n_t,n_r,mean_rate,stderr\n";
  for (const auto& r : rows) {
    os << format_number(r.snr_db) << ',' << to_string(r.selector) << ',' << to_string(r.metric) << ','
       << r.n_ris << ',' << r.n_t << ',' << r.n_r << ',' << format_number(r.mean_rate) << ','
       << format_number(r.stderr_rate) << '\n';
  }
  return os.str();
}

inline json to_json(const ResultRow& r) {
  return {{"scenario", r.scenario},   {"snr_db", r.snr_db},         {"selector", to_string(r.selector)},
          {"metric", to_string(r.metric)}, {"n_ris", r.n_ris},      {"n_t", r.n_t},
          {"n_r", r.n_r},             {"layer", r.layer},           {"mean_rate", r.mean_rate},
          {"stderr", r.stderr_rate},  {"mean_layer_snr", r.mean_layer_snr}, {"mean_op", r.mean_op},
          {"counters", to_json(r.counters)}, {"trials", r.trials}};
}

inline json to_json(const SweepResult& s) {
  json rows = json::array();
  for (const auto& r : s.rows) rows.push_back(to_json(r));
  return {{"rows", rows},
          {"failed_trials", s.failed_trials},
          {"zf_failures", s.zf_failures},
          {"warnings", s.warnings}};
}

/// One JSON line per evaluated configuration of every trial and metric.
inline std::string trace_jsonl(const ExperimentConfig& cfg, const SweepResult& s) {
  std::ostringstream os;
  for (std::size_t t = 0; t < s.trials.size(); ++t) {
    const auto& trial = s.trials[t];
    for (std::size_t k = 0; k < trial.optimizations.size(); ++k) {
      for (const auto& rec : trial.optimizations[k].trace) {
        json line{{"trial", t},
                  {"metric", to_string(cfg.metrics[k])},
                  {"phase_indices", rec.phase_indices},
                  {"op_value", rec.op_value},
                  {"stage", rec.stage == TraceStage::initial ? "initial" : "offspring"}};
        os << line.dump() << '\n';
      }
    }
  }
  return os.str();
}

// ---- codebook dump ---------------------------------------------------------

/// Every beam of the grid and every precoder of the given rank.
inline json codebook_dump(const BeamGrid& grid, int layer) {
  json beams = json::array();
  for (int k = 0; k < grid.size(); ++k) {
    const auto b = grid.index(k);
    json entries = json::array();
    for (auto z : grid.beam(b)) entries.push_back(complex_to_json(z));
    beams.push_back({{"l", b.l}, {"m", b.m}, {"entries", entries}});
  }
  json precoders = json::array();
  for (int k = 0; k < grid.size(); ++k) {
    const auto b1 = grid.index(k);
    std::vector<std::optional<BeamIndex>> seconds;
    if (layer == 1) {
      seconds.emplace_back(std::nullopt);
    } else {
      for (auto b : restricted_grid(b1, grid, layer)) seconds.emplace_back(b);
    }
    for (const auto& b2 : seconds) {
      for (int n = 0; n < cophase_count(layer); ++n) {
        const auto w = assemble_precoder(grid, b1, b2, n, layer);
        json e{{"beam1", {b1.l, b1.m}}, {"beam2", nullptr}, {"cophase", n}, {"matrix", matrix_to_json(w.matrix)}};
        if (b2) e["beam2"] = {b2->l, b2->m};
        precoders.push_back(std::move(e));
      }
    }
  }
  return {{"n1", grid.n1()}, {"n2", grid.n2()}, {"o1", grid.o1()}, {"o2", grid.o2()}, {"layer", layer},
          {"p_csirs", grid.p_csirs()}, {"beams", beams}, {"precoders", precoders}};
}

/// Writes curves.csv, results.json, config.json and optionally trace.jsonl.
inline void write_sweep_artifacts(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                                  const SweepResult& result, bool with_trace) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + (dir / name).string());
    out << text;
    if (!out) throw ConfigError("write failed for " + (dir / name).string());
  };
  write("curves.csv", curves_csv(result.rows));
  write("results.json", to_json(result).dump(2) + "\n");
  write("config.json", to_json(cfg).dump(2) + "\n");
  if (with_trace) write("trace.jsonl", trace_jsonl(cfg, result));
}

}  // namespace rismimo::io
