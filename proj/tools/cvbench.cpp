// Copyright 2026 The cvbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line driver: simulate, quantify, sweep, sweep-phase, report.
//
// Exit codes: 0 ran (including "no entanglement" verdicts), 2 usage or
// validation, 3 malformed input data, 4 numerical failure.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cvbench/benchmark.hpp"
#include "cvbench/io.hpp"
#include "cvbench/moments.hpp"
#include "cvbench/quantifier.hpp"
#include "cvbench/sampling.hpp"

namespace {

using namespace cvbench;
using Json = nlohmann::ordered_json;

enum Exit { kOk = 0, kUsage = 2, kData = 3, kNumeric = 4 };

// Flag values as typed; unset flags leave the config untouched.
struct Flags {
  std::string config;
  std::string preset;
  std::optional<double> transmission;
  std::optional<double> excess_noise;
  std::string alpha;
  std::string alpha_cal;
  std::optional<double> pulse_rate;
  std::optional<std::int64_t> pulses;
  std::optional<std::uint64_t> seed;
  std::optional<int> dim;
  std::optional<double> tol;
  std::string out;
  std::string overlap = "auto";
  std::string k_sigmas = "1,2,3";
  std::string source;
  std::string generator = "heterodyne";
  int threads = 0;
  bool timestamps = false;
  std::string input;
};

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidInput("cannot parse " + what + " value '" + s + "'");
  }
}

// "a:b:step" (inclusive), "x,y,z" or a single number.
std::vector<double> parse_grid(const std::string& s, const std::string& what) {
  if (s.empty()) throw InvalidInput(what + " grid is empty");
  if (s.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw InvalidInput(what + " range must be first:last:step");
    return linear_grid(parse_double(parts[0], what), parse_double(parts[1], what), parse_double(parts[2], what));
  }
  std::vector<double> out;
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, ',');)
    if (!p.empty()) out.push_back(parse_double(p, what));
  if (out.empty()) throw InvalidInput(what + " grid is empty");
  return out;
}

struct Resolved {
  RunConfig config;
  std::string echo;  // config text as supplied, or the canonical form
};

Resolved resolve(const Flags& f) {
  Resolved r;
  nlohmann::json base = nlohmann::json::object();
  if (!f.config.empty()) {
    r.echo = read_text(f.config);
    try {
      base = nlohmann::json::parse(r.echo);
    } catch (const nlohmann::json::parse_error& e) {
      throw InvalidInput(std::string("config: ") + e.what());
    }
  }
  RunConfig& c = r.config;
  c = run_config_from_json(base);
  if (!f.preset.empty()) {
    c.preset = f.preset;
    const auto p = channel_preset(f.preset);
    c.channel.transmission = p.transmission;
    c.channel.excess_noise = p.excess_noise;
  }
  if (f.transmission) c.channel.transmission = *f.transmission;
  if (f.excess_noise) c.channel.excess_noise = *f.excess_noise;
  if (f.pulse_rate) c.alphabet.pulse_rate = *f.pulse_rate;
  if (f.pulses) c.pulses = *f.pulses;
  if (f.seed) c.seed = *f.seed;
  if (f.dim) c.solver.start_dim = *f.dim;
  if (f.tol) c.solver.objective_tolerance = *f.tol;
  c.validate();
  if (f.config.empty()) r.echo = to_json(c).dump();
  return r;
}

std::vector<double> parse_k_sigmas(const std::string& s) {
  if (s == "none") return {};
  auto k = parse_grid(s, "k-sigma");
  for (double v : k) detail::require(v >= 0.0, "k-sigma must be >= 0");
  return k;
}

Generator parse_generator(const std::string& g) {
  if (g == "heterodyne") return Generator::heterodyne;
  if (g == "mp" || g == "measure-prepare") return Generator::measure_prepare;
  throw InvalidInput("generator must be 'heterodyne' or 'mp'");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int cmd_simulate(const Flags& f) {
  Resolved r = resolve(f);
  RunConfig& c = r.config;
  if (!f.alpha.empty()) c.alphabet.alpha = parse_double(f.alpha, "alpha");
  if (!f.alpha_cal.empty()) c.channel.calibration_amplitude = parse_double(f.alpha_cal, "alpha-cal");
  c.validate();
  const fs::path out = f.out.empty() ? c.output_dir / "samples.csv" : fs::path(f.out);
  check_writable(out);
  const Generator g = parse_generator(f.generator);
  if (g == Generator::measure_prepare && c.channel.calibration_amplitude)
    throw InvalidInput("the measure-prepare generator has no phase-noise model");
  const SampleBatch batch = g == Generator::measure_prepare
                                ? simulate_mp_channel(c.alphabet, c.channel.transmission, c.pulses, c.seed)
                                : sample_heterodyne(c.alphabet, c.channel, c.pulses, c.seed);
  write_sample_files(batch, out);
  std::cout << "wrote " << batch.records.size() << " pulses to " << out.string() << "\n";
  return kOk;
}

int cmd_quantify(const Flags& f) {
  const auto t0 = std::chrono::steady_clock::now();
  Resolved r = resolve(f);
  RunConfig& c = r.config;
  const fs::path out = f.out.empty() ? c.output_dir / "quantify.json" : fs::path(f.out);
  check_writable(out);
  auto [batch, have_meta] = load_sample_files(f.input);
  double t = have_meta ? batch.meta.channel.transmission : 0.0;
  if (f.transmission || !f.preset.empty()) t = c.channel.transmission;
  if (!(t > 0.0)) throw InvalidInput("no sidecar metadata: pass --transmission or --preset");
  const double pulse_rate = f.pulse_rate ? *f.pulse_rate : (have_meta ? batch.meta.alphabet.pulse_rate : c.alphabet.pulse_rate);

  const auto [record, unc] = estimate_moments(batch, t);
  const auto est = infer_overlap(extract_beta(record), t);
  double s = est.overlap_s;
  std::string s_source = "inferred";
  if (!f.alpha.empty()) {
    const double a = parse_double(f.alpha, "alpha");
    detail::require(a >= 0.0, "alpha must be >= 0");
    s = std::exp(-2.0 * a * a);
    s_source = "alphabet";
  }
  if (f.overlap != "auto") {
    s = parse_double(f.overlap, "overlap");
    s_source = "given";
  }
  detail::require(s >= 0.0 && s <= 1.0, "overlap must lie in [0, 1]");

  const NegativityResult res = truncation_converge(record, s, c.solver);
  const double n = res.certified_negativity();
  const double e_n = log_negativity(n);
  const double rate = entanglement_rate(e_n, pulse_rate);

  Json report = report_envelope("quantify", r.echo, f.timestamps);
  report["input"] = fs::path(f.input).filename().string();
  report["transmission"] = t;
  report["overlap_s"] = s;
  report["overlap_source"] = s_source;
  report["alpha_hat"] = est.alpha_hat;
  report["pulse_rate"] = pulse_rate;
  report["moments"] = to_json(record);
  report["uncertainty"] = to_json(unc);
  report["result"] = to_json(res, f.timestamps);
  report["negativity"] = n;
  report["log_negativity"] = e_n;
  report["rate"] = rate;
  report["rate_units"] = "log-neg units per second";
  Json bands = Json::array();
  for (double k : parse_k_sigmas(f.k_sigmas)) {
    const auto b = truncation_converge(perturb_adversarially(record, unc, k), s, c.solver);
    const double bn = std::min(b.certified_negativity(), n);
    bands.push_back({{"k", k}, {"negativity", bn}, {"status", to_string(b.status)},
                     {"rate", entanglement_rate(log_negativity(bn), pulse_rate)}});
  }
  report["bands"] = bands;
  if (f.timestamps)
    report["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  atomic_write(out, report.dump(2) + "\n");
  std::cout << "N=" << fmt(n) << " E_N=" << fmt(e_n) << " rate=" << fmt(rate)
            << " status=" << to_string(res.status) << "\n";
  return kOk;
}

SweepSpec sweep_spec(const Flags& f, const RunConfig& c, MomentSource default_source) {
  SweepSpec sp;
  sp.channel = c.channel;
  sp.pulses = c.pulses;
  sp.pulse_rate = c.alphabet.pulse_rate;
  sp.seed = c.seed;
  sp.solver = c.solver;
  sp.k_sigmas = parse_k_sigmas(f.k_sigmas);
  sp.threads = f.threads;
  sp.generator = parse_generator(f.generator);
  sp.source = default_source;
  if (!f.source.empty()) {
    if (f.source == "model")
      sp.source = MomentSource::model;
    else if (f.source == "sampled")
      sp.source = MomentSource::sampled;
    else
      throw InvalidInput("source must be 'sampled' or 'model'");
  }
  if (sp.source == MomentSource::model && sp.generator == Generator::measure_prepare)
    throw InvalidInput("the measure-prepare generator needs --source sampled");
  return sp;
}

int write_sweep(const Flags& f, const Resolved& r, const WorkingPointReport& rep, const std::string& command,
                const std::string& stem, double seconds) {
  const fs::path dir = f.out.empty() ? r.config.output_dir : fs::path(f.out);
  Json report = report_envelope(command, r.echo, f.timestamps);
  report["sweep"] = to_json(rep, f.timestamps);
  if (f.timestamps) report["wall_seconds"] = seconds;
  atomic_write(dir / (stem + ".csv"), to_csv(rep));
  atomic_write(dir / (stem + ".json"), report.dump(2) + "\n");
  const auto wp = working_point(rep);
  if (!wp) {
    std::cout << "no quantum working point\n";
  } else if (rep.kind == SweepKind::amplitude) {
    std::cout << "working point alpha=" << fmt(rep.rows[*wp].alpha) << " rate=" << fmt(rep.rows[*wp].rate) << "\n";
  } else {
    std::cout << "working point tuning=" << fmt(rep.rows[*wp].tuning) << " rate=" << fmt(rep.rows[*wp].rate) << "\n";
  }
  if (rep.kind == SweepKind::phase) {
    const auto th = entanglement_threshold(rep);
    std::cout << "threshold tuning=" << (th ? fmt(*th) : std::string("none")) << "\n";
  }
  return kOk;
}

void check_sweep_dir(const Flags& f, const RunConfig& c, const std::string& stem) {
  const fs::path dir = f.out.empty() ? c.output_dir : fs::path(f.out);
  check_writable(dir / (stem + ".csv"));
}

int cmd_sweep(const Flags& f) {
  const auto t0 = std::chrono::steady_clock::now();
  const Resolved r = resolve(f);
  check_sweep_dir(f, r.config, "sweep");
  SweepSpec sp = sweep_spec(f, r.config, MomentSource::sampled);
  if (!f.alpha_cal.empty()) sp.channel.calibration_amplitude = parse_double(f.alpha_cal, "alpha-cal");
  sp.amplitudes = f.alpha.empty() ? default_amplitude_grid() : parse_grid(f.alpha, "alpha");
  const auto rep = amplitude_sweep(sp);
  return write_sweep(f, r, rep, "sweep", "sweep",
                     std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

int cmd_sweep_phase(const Flags& f) {
  const auto t0 = std::chrono::steady_clock::now();
  const Resolved r = resolve(f);
  check_sweep_dir(f, r.config, "sweep_phase");
  SweepSpec sp = sweep_spec(f, r.config, MomentSource::model);
  sp.probe_alpha = f.alpha.empty() ? 0.5 : parse_double(f.alpha, "alpha");
  sp.calibration_amplitudes = f.alpha_cal.empty() ? default_calibration_grid() : parse_grid(f.alpha_cal, "alpha-cal");
  const auto rep = phase_noise_sweep(sp);
  return write_sweep(f, r, rep, "sweep-phase", "sweep_phase",
                     std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

// Summarizes a report written by quantify, sweep or sweep-phase.
int cmd_report(const Flags& f) {
  Json j;
  try {
    j = Json::parse(read_text(f.input));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataFormatError(f.input + ": " + e.what(), 0);
  }
  std::ostringstream os;
  try {
    const std::string command = j.at("command").get<std::string>();
    os << "# " << kToolName << " " << command << " report\n\n";
    if (command == "quantify") {
      os << "| quantity | value |\n|---|---|\n";
      os << "| N | " << fmt(j.at("negativity").get<double>()) << " |\n";
      os << "| E_N | " << fmt(j.at("log_negativity").get<double>()) << " |\n";
      os << "| rate (log-neg units/s) | " << fmt(j.at("rate").get<double>()) << " |\n";
      os << "| status | " << j.at("result").at("status").get<std::string>() << " |\n";
      os << "| d used | " << j.at("result").at("d_used").get<int>() << " |\n";
      os << "| overlap s | " << fmt(j.at("overlap_s").get<double>()) << " |\n";
    } else if (command == "sweep" || command == "sweep-phase") {
      const auto& sw = j.at("sweep");
      const bool phase = sw.at("kind") == "phase";
      os << (phase ? "| tuning | var_x | var_p | N | rate |\n|---|---|---|---|---|\n"
                   : "| alpha | N | E_N | rate | status |\n|---|---|---|---|---|\n");
      for (const auto& row : sw.at("rows")) {
        if (phase)
          os << "| " << fmt(row.at("tuning").get<double>()) << " | "
             << fmt(row.at("moments").at("symbol0_var_x").get<double>()) << " | "
             << fmt(row.at("moments").at("symbol0_var_p").get<double>()) << " | "
             << fmt(row.at("negativity").get<double>()) << " | " << fmt(row.at("rate").get<double>()) << " |\n";
        else
          os << "| " << fmt(row.at("alpha").get<double>()) << " | " << fmt(row.at("negativity").get<double>())
             << " | " << fmt(row.at("log_negativity").get<double>()) << " | " << fmt(row.at("rate").get<double>())
             << " | " << row.at("result").at("status").get<std::string>() << " |\n";
      }
      const auto& wp = sw.at("working_point");
      os << "\nworking point: ";
      if (wp.is_string())
        os << wp.get<std::string>() << "\n";
      else
        os << (phase ? "tuning=" + fmt(wp.at("tuning").get<double>()) : "alpha=" + fmt(wp.at("alpha").get<double>()))
           << " rate=" << fmt(wp.at("rate").get<double>()) << "\n";
    } else {
      throw DataFormatError("unknown report command '" + command + "'", 0);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataFormatError(f.input + ": not a " + std::string(kToolName) + " report (" + e.what() + ")", 0);
  }
  if (f.out.empty()) {
    std::cout << os.str();
  } else {
    check_writable(f.out);
    atomic_write(f.out, os.str());
  }
  return kOk;
}

void add_channel_flags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON run config; flags override its values");
  app->add_option("--preset", f.preset, "channel preset (20km, 40km)");
  app->add_option("--transmission", f.transmission, "total channel transmission T in (0, 1]");
  app->add_option("--excess-noise", f.excess_noise, "excess noise epsilon in SNL");
  app->add_option("--pulse-rate", f.pulse_rate, "pulse rate in Hz (default 875000)");
  app->add_option("--seed", f.seed, "RNG seed");
  app->add_option("--dim", f.dim, "starting Fock truncation d (>= 3; default from data)");
  app->add_option("--tol", f.tol, "objective tolerance for truncation convergence");
  app->add_flag("--timestamps", f.timestamps, "add creation time and wall time to reports");
}

}  // namespace

int main(int argc, char** argv) {
  Flags f;
  CLI::App app{"Benchmark quantum channels by certified effective entanglement.", kToolName};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);
  app.footer(
      "Flags (see '<subcommand> --help' for which apply): --config --preset --transmission\n"
      "--excess-noise --alpha --alpha-cal --pulses --pulse-rate --seed --dim --tol --out\n"
      "--overlap --k-sigmas --source --generator --threads --timestamps\n"
      "Default output directory: $CVBENCH_OUT_DIR, else the working directory.\n"
      "Exit codes: 0 ran, 2 usage or validation, 3 malformed data, 4 numerical failure.");

  auto* sim = app.add_subcommand("simulate", "draw heterodyne (or measure-prepare) samples");
  add_channel_flags(sim, f);
  sim->add_option("--alpha", f.alpha, "probe amplitude |alpha|");
  sim->add_option("--alpha-cal", f.alpha_cal, "calibration amplitude (enables phase noise)");
  sim->add_option("--pulses", f.pulses, "number of pulses");
  sim->add_option("--generator", f.generator, "heterodyne | mp");
  sim->add_option("--out", f.out, "sample CSV path (sidecar: <out>.meta.json)");

  auto* quant = app.add_subcommand("quantify", "certify entanglement from a sample CSV");
  add_channel_flags(quant, f);
  quant->add_option("samples", f.input, "sample CSV")->required();
  quant->add_option("--alpha", f.alpha, "probe amplitude, fixes s = exp(-2 alpha^2)");
  quant->add_option("--overlap", f.overlap, "overlap s in [0, 1], or auto (from data)");
  quant->add_option("--k-sigmas", f.k_sigmas, "error-bar multiples, comma list or 'none'");
  quant->add_option("--out", f.out, "report JSON path");

  auto* sweep = app.add_subcommand("sweep", "rate versus probe amplitude");
  add_channel_flags(sweep, f);
  sweep->add_option("--alpha", f.alpha, "amplitude grid: first:last:step or list (default 0.05:1:0.05)");
  sweep->add_option("--alpha-cal", f.alpha_cal, "fixed calibration amplitude (enables phase noise)");
  sweep->add_option("--pulses", f.pulses, "pulses per grid point (>= 1e4)");
  sweep->add_option("--source", f.source, "sampled | model (default sampled)");
  sweep->add_option("--generator", f.generator, "heterodyne | mp");
  sweep->add_option("--k-sigmas", f.k_sigmas, "error-bar multiples, comma list or 'none'");
  sweep->add_option("--threads", f.threads, "worker threads (0: all cores)");
  sweep->add_option("--out", f.out, "output directory for sweep.json and sweep.csv");

  auto* phase = app.add_subcommand("sweep-phase", "rate versus phase-reference quality");
  add_channel_flags(phase, f);
  phase->add_option("--alpha", f.alpha, "probe amplitude (default 0.5)");
  phase->add_option("--alpha-cal", f.alpha_cal, "calibration grid: first:last:step or list (default 6:0:-0.25)");
  phase->add_option("--pulses", f.pulses, "pulses per grid point (>= 1e4)");
  phase->add_option("--source", f.source, "model | sampled (default model)");
  phase->add_option("--k-sigmas", f.k_sigmas, "error-bar multiples, comma list or 'none'");
  phase->add_option("--threads", f.threads, "worker threads (0: all cores)");
  phase->add_option("--out", f.out, "output directory for sweep_phase.json and sweep_phase.csv");

  auto* rep = app.add_subcommand("report", "summarize a report JSON as a markdown table");
  rep->add_option("report", f.input, "report JSON")->required();
  rep->add_option("--out", f.out, "markdown path (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*sim) return cmd_simulate(f);
    if (*quant) return cmd_quantify(f);
    if (*sweep) return cmd_sweep(f);
    if (*phase) return cmd_sweep_phase(f);
    if (*rep) return cmd_report(f);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DataFormatError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const InsufficientData& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kNumeric;
  }
  return kUsage;
}
