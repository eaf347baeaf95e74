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

#ifndef CVBENCH_BENCHMARK_HPP
#define CVBENCH_BENCHMARK_HPP

// Amplitude and phase-noise sweeps, entanglement rates, working points.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <iomanip>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cvbench/channel.hpp"
#include "cvbench/errors.hpp"
#include "cvbench/moments.hpp"
#include "cvbench/quantifier.hpp"
#include "cvbench/rng.hpp"
#include "cvbench/sampling.hpp"

namespace cvbench {

/// Log-negativity per second: E_N per pulse times pulses per second.
inline double entanglement_rate(double e_n, double pulse_rate) {
  detail::require(std::isfinite(e_n) && e_n >= 0.0, "E_N must be >= 0");
  detail::require(std::isfinite(pulse_rate) && pulse_rate > 0.0, "pulse rate must be > 0");
  return e_n * pulse_rate;
}

inline constexpr double kDefaultPulseRate = 0.875e6;

inline constexpr const char* kChannelPresets = R"({
  "presets": {
    "20km": {"transmission": 0.24, "excess_noise": 0.02, "units": {"excess_noise": "snl"}},
    "40km": {"transmission": 0.09, "excess_noise": 0.04, "units": {"excess_noise": "snl"}}
  }
})";

inline std::vector<std::string> preset_names() {
  const auto presets = nlohmann::json::parse(kChannelPresets).at("presets");
  std::vector<std::string> out;
  for (const auto& [k, v] : presets.items()) out.push_back(k);
  return out;
}

inline ChannelModel channel_preset(const std::string& name) {
  const auto presets = nlohmann::json::parse(kChannelPresets).at("presets");
  if (!presets.contains(name)) throw InvalidInput("unknown channel preset '" + name + "'");
  ChannelModel c;
  c.transmission = presets.at(name).at("transmission").get<double>();
  c.excess_noise = presets.at(name).at("excess_noise").get<double>();
  c.validate();
  return c;
}

/// Inclusive arithmetic grid; the end point is kept despite rounding.
inline std::vector<double> linear_grid(double first, double last, double step) {
  detail::require(std::isfinite(first) && std::isfinite(last) && std::isfinite(step) && step != 0.0,
                  "grid bounds and step must be finite, step nonzero");
  detail::require((last - first) / step >= -1e-9, "grid step points away from the end point");
  const auto count = static_cast<std::int64_t>(std::floor((last - first) / step + 1e-9)) + 1;
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) g.push_back(first + static_cast<double>(i) * step);
  return g;
}

inline std::vector<double> default_amplitude_grid() { return linear_grid(0.05, 1.0, 0.05); }
inline std::vector<double> default_calibration_grid() { return linear_grid(6.0, 0.0, -0.25); }

enum class MomentSource { sampled, model };

inline const char* to_string(MomentSource s) { return s == MomentSource::sampled ? "sampled" : "model"; }

enum class SweepKind { amplitude, phase };

struct SweepSpec {
  ChannelModel channel;
  std::vector<double> amplitudes;              // amplitude sweep
  std::vector<double> calibration_amplitudes;  // phase sweep
  double probe_alpha = 0.5;                    // phase sweep probe
  std::int64_t pulses = 1'000'000;
  double pulse_rate = kDefaultPulseRate;
  std::uint64_t seed = 1;
  SolverConfig solver;
  std::vector<double> k_sigmas{1.0, 2.0, 3.0};
  MomentSource source = MomentSource::sampled;
  Generator generator = Generator::heterodyne;
  int threads = 0;  // 0: hardware concurrency

  void validate(SweepKind kind) const {
    channel.validate();
    solver.validate();
    detail::require(pulses >= 10'000, "need at least 1e4 pulses per sweep point");
    detail::require(std::isfinite(pulse_rate) && pulse_rate > 0.0, "pulse rate must be > 0");
    detail::require(threads >= 0, "thread count must be >= 0");
    for (double k : k_sigmas) detail::require(std::isfinite(k) && k >= 0.0, "k-sigma must be >= 0");
    if (kind == SweepKind::amplitude) {
      detail::require(!amplitudes.empty(), "amplitude grid is empty");
      for (double a : amplitudes) detail::require(std::isfinite(a) && a >= 0.0, "amplitudes must be >= 0");
    } else {
      detail::require(!calibration_amplitudes.empty(), "calibration grid is empty");
      for (double a : calibration_amplitudes)
        detail::require(std::isfinite(a) && a >= 0.0, "calibration amplitudes must be >= 0");
      detail::require(std::isfinite(probe_alpha) && probe_alpha >= 0.0, "probe amplitude must be >= 0");
    }
  }
};

struct SweepRow {
  double alpha = 0.0;
  std::optional<double> alpha_cal;
  double tuning = 0.0;  // 6 - alpha_cal on phase sweeps
  double overlap = 1.0;
  MomentRecord moments;
  MomentUncertainty uncertainty;
  NegativityResult result;
  std::vector<NegativityResult> bands;  // one per k-sigma
  double rate = 0.0;
  std::vector<double> band_rates;
  std::string error;  // non-empty when the row failed
};

struct WorkingPointReport {
  SweepKind kind = SweepKind::amplitude;
  ChannelModel channel;
  double pulse_rate = kDefaultPulseRate;
  std::vector<double> k_sigmas;
  MomentSource source = MomentSource::sampled;
  std::vector<SweepRow> rows;
};

namespace detail {

// Expected moment record and its standard errors for n pulses split evenly
// over the two symbols.
inline std::pair<MomentRecord, MomentUncertainty> model_record(const ProbeAlphabet& alphabet,
                                                               const ChannelModel& channel,
                                                               std::int64_t pulses) {
  MomentRecord r;
  MomentUncertainty u;
  r.transmission = channel.transmission;
  const std::int64_t n = pulses / 2;
  for (int k = 0; k < 2; ++k) {
    const auto m = model_output_moments(k, alphabet, channel);
    auto& s = r.symbol[k];
    s.mean_x = m.mean_x;
    s.mean_p = m.mean_p;
    s.var_x = m.var_x;
    s.var_p = m.var_p;
    s.count = n;
    // Heterodyne marginals carry one extra vacuum unit.
    const double qx = m.var_x + kHeterodyneConstant, qp = m.var_p + kHeterodyneConstant;
    const double nn = static_cast<double>(n);
    u.symbol[k] = {std::sqrt(qx / nn), std::sqrt(qp / nn), qx * std::sqrt(2.0 / (nn - 1.0)),
                   qp * std::sqrt(2.0 / (nn - 1.0))};
  }
  return {r, u};
}

inline void quantify_row(SweepRow& row, const SweepSpec& spec, const ChannelModel& channel,
                         std::uint64_t row_seed) {
  const ProbeAlphabet alphabet{row.alpha, spec.pulse_rate};
  if (spec.source == MomentSource::model) {
    std::tie(row.moments, row.uncertainty) = model_record(alphabet, channel, spec.pulses);
  } else {
    const SampleBatch batch =
        spec.generator == Generator::measure_prepare
            ? simulate_mp_channel(alphabet, channel.transmission, spec.pulses, row_seed)
            : sample_heterodyne(alphabet, channel, spec.pulses, row_seed);
    std::tie(row.moments, row.uncertainty) = estimate_moments(batch, channel.transmission);
  }
  // The sender knows its own alphabet.
  row.overlap = std::exp(-2.0 * row.alpha * row.alpha);
  row.result = truncation_converge(row.moments, row.overlap, spec.solver);
  row.rate = entanglement_rate(row.result.certified_negativity() > 0.0
                                   ? log_negativity(row.result.certified_negativity())
                                   : 0.0,
                               spec.pulse_rate);
  for (double k : spec.k_sigmas) {
    NegativityResult b = k == 0.0 ? row.result
                                  : truncation_converge(perturb_adversarially(row.moments, row.uncertainty, k),
                                                        row.overlap, spec.solver);
    // Perturbations only relax the data toward separability.
    if (b.status == SolveStatus::optimal && row.result.status == SolveStatus::optimal)
      b.negativity = std::min(b.negativity, row.result.negativity);
    const double cn = b.certified_negativity();
    b.log_negativity = log_negativity(cn);
    row.band_rates.push_back(entanglement_rate(b.log_negativity, spec.pulse_rate));
    row.bands.push_back(std::move(b));
  }
}

// Runs job(i) for i in [0, n) on up to `threads` workers; results are placed
// by index, so the outcome does not depend on scheduling.
template <typename Job>
void parallel_for(std::size_t n, int threads, Job job) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) job(i);
    });
  for (auto& t : pool) t.join();
}

inline void run_rows(WorkingPointReport& report, const SweepSpec& spec,
                     const std::vector<ChannelModel>& channels) {
  parallel_for(report.rows.size(), spec.threads, [&](std::size_t i) {
    SweepRow& row = report.rows[i];
    try {
      quantify_row(row, spec, channels[i], derive_key(spec.seed, i));
    } catch (const std::exception& e) {
      row.error = e.what();
      row.rate = 0.0;
      row.band_rates.assign(spec.k_sigmas.size(), 0.0);
    }
  });
}

}  // namespace detail

/// Rate-vs-amplitude study on one channel.
inline WorkingPointReport amplitude_sweep(const SweepSpec& spec) {
  spec.validate(SweepKind::amplitude);
  WorkingPointReport report;
  report.kind = SweepKind::amplitude;
  report.channel = spec.channel;
  report.pulse_rate = spec.pulse_rate;
  report.k_sigmas = spec.k_sigmas;
  report.source = spec.source;
  report.rows.resize(spec.amplitudes.size());
  for (std::size_t i = 0; i < spec.amplitudes.size(); ++i) report.rows[i].alpha = spec.amplitudes[i];
  detail::run_rows(report, spec, std::vector<ChannelModel>(report.rows.size(), spec.channel));
  return report;
}

inline constexpr double kTuningOrigin = 6.0;

/// Rate-vs-dephasing study at a fixed probe amplitude; rows are indexed by
/// the tuning parameter 6 - alpha_cal.
inline WorkingPointReport phase_noise_sweep(const SweepSpec& spec) {
  spec.validate(SweepKind::phase);
  WorkingPointReport report;
  report.kind = SweepKind::phase;
  report.channel = spec.channel;
  report.pulse_rate = spec.pulse_rate;
  report.k_sigmas = spec.k_sigmas;
  report.source = spec.source;
  report.rows.resize(spec.calibration_amplitudes.size());
  std::vector<ChannelModel> channels(report.rows.size(), spec.channel);
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    auto& row = report.rows[i];
    row.alpha = spec.probe_alpha;
    row.alpha_cal = spec.calibration_amplitudes[i];
    row.tuning = kTuningOrigin - *row.alpha_cal;
    channels[i].calibration_amplitude = row.alpha_cal;
  }
  detail::run_rows(report, spec, channels);
  return report;
}

/// Index of the maximal-rate row, ties toward smaller alpha; nullopt when no
/// row has a positive rate ("no quantum working point"). With `k_sigma` the
/// rows are ranked by that error band's (minimal) rate instead.
inline std::optional<std::size_t> working_point(const WorkingPointReport& report,
                                                std::optional<double> k_sigma = std::nullopt) {
  detail::require(!report.rows.empty(), "report has no rows");
  std::optional<std::size_t> band;
  if (k_sigma) {
    for (std::size_t b = 0; b < report.k_sigmas.size(); ++b)
      if (report.k_sigmas[b] == *k_sigma) band = b;
    detail::require(band.has_value(), "requested k-sigma band is not in the report");
  }
  auto rate = [&](const SweepRow& r) {
    if (!band) return r.rate;
    return *band < r.band_rates.size() ? r.band_rates[*band] : 0.0;
  };
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    if (!(rate(r) > 0.0)) continue;
    if (!best || rate(r) > rate(report.rows[*best]) ||
        (rate(r) == rate(report.rows[*best]) && r.alpha < report.rows[*best].alpha))
      best = i;
  }
  return best;
}

/// Smallest tuning value from which every row with a larger tuning value also
/// certifies nothing. nullopt when the last row is still entangled.
inline std::optional<double> entanglement_threshold(const WorkingPointReport& report) {
  std::vector<const SweepRow*> rows;
  for (const auto& r : report.rows) rows.push_back(&r);
  std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->tuning < b->tuning; });
  std::optional<double> threshold;
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    if ((*it)->rate > 0.0) break;
    threshold = (*it)->tuning;
  }
  return threshold;
}

inline nlohmann::ordered_json to_json(const WorkingPointReport& report, bool include_timing = false) {
  nlohmann::ordered_json j;
  j["kind"] = report.kind == SweepKind::amplitude ? "amplitude" : "phase";
  j["channel"] = {{"T", report.channel.transmission}, {"epsilon", report.channel.excess_noise}};
  j["pulse_rate"] = report.pulse_rate;
  j["rate_units"] = "log-neg units per second";
  j["moment_source"] = to_string(report.source);
  j["k_sigmas"] = report.k_sigmas;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json row;
    row["alpha"] = r.alpha;
    if (r.alpha_cal) {
      row["alpha_cal"] = *r.alpha_cal;
      row["tuning"] = r.tuning;
    }
    row["overlap_s"] = r.overlap;
    row["moments"] = to_json(r.moments);
    row["uncertainty"] = to_json(r.uncertainty);
    row["negativity"] = r.result.certified_negativity();
    row["log_negativity"] = r.result.certified_negativity() > 0.0 ? log_negativity(r.result.certified_negativity()) : 0.0;
    row["rate"] = r.rate;
    row["result"] = to_json(r.result, include_timing);
    nlohmann::ordered_json bands = nlohmann::ordered_json::array();
    for (std::size_t b = 0; b < r.bands.size(); ++b)
      bands.push_back({{"k", report.k_sigmas[b]},
                       {"negativity", r.bands[b].certified_negativity()},
                       {"status", to_string(r.bands[b].status)},
                       {"rate", r.band_rates[b]}});
    row["bands"] = bands;
    if (!r.error.empty()) row["error"] = r.error;
    rows.push_back(row);
  }
  j["rows"] = rows;
  const auto wp = working_point(report);
  if (wp) {
    j["working_point"] = {{"index", *wp}, {"alpha", report.rows[*wp].alpha}, {"rate", report.rows[*wp].rate}};
    if (report.kind == SweepKind::phase) j["working_point"]["tuning"] = report.rows[*wp].tuning;
  } else {
    j["working_point"] = "no quantum working point";
  }
  if (!report.k_sigmas.empty()) {
    const auto kpos = std::max_element(report.k_sigmas.begin(), report.k_sigmas.end());
    const auto band = static_cast<std::size_t>(kpos - report.k_sigmas.begin());
    const auto mp = working_point(report, *kpos);
    if (mp) {
      const auto& row = report.rows[*mp];
      nlohmann::ordered_json m = {{"k", *kpos}, {"index", *mp}, {"alpha", row.alpha}, {"rate", row.band_rates[band]}};
      if (report.kind == SweepKind::phase) m["tuning"] = row.tuning;
      j["minimal_rate_working_point"] = m;
    } else {
      j["minimal_rate_working_point"] = "no quantum working point";
    }
  }
  if (report.kind == SweepKind::phase) {
    const auto t = entanglement_threshold(report);
    j["threshold_tuning"] = t ? nlohmann::ordered_json(*t) : nlohmann::ordered_json(nullptr);
  }
  return j;
}

namespace detail {
inline std::string csv_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 10);
  return std::string(buf, res.ptr);
}
}  // namespace detail

/// Plot-ready CSV: alpha,N,E_N,rate,rate_1sigma,rate_2sigma,rate_3sigma for
/// amplitude sweeps, tuning,var_x,var_p,rate for phase sweeps.
inline std::string to_csv(const WorkingPointReport& report) {
  std::ostringstream out;
  using detail::csv_number;
  if (report.kind == SweepKind::amplitude) {
    out << "alpha,N,E_N,rate,rate_1sigma,rate_2sigma,rate_3sigma\n";
    for (const auto& r : report.rows) {
      const double n = r.result.certified_negativity();
      out << csv_number(r.alpha) << ',' << csv_number(n) << ',' << csv_number(n > 0.0 ? log_negativity(n) : 0.0)
          << ',' << csv_number(r.rate);
      for (double k : {1.0, 2.0, 3.0}) {
        out << ',';
        for (std::size_t b = 0; b < report.k_sigmas.size() && b < r.band_rates.size(); ++b)
          if (report.k_sigmas[b] == k) {
            out << csv_number(r.band_rates[b]);
            break;
          }
      }
      out << '\n';
    }
  } else {
    out << "tuning,var_x,var_p,rate\n";
    for (const auto& r : report.rows)
      out << csv_number(r.tuning) << ',' << csv_number(r.moments.symbol[0].var_x) << ','
          << csv_number(r.moments.symbol[0].var_p) << ',' << csv_number(r.rate) << '\n';
  }
  return out.str();
}

}  // namespace cvbench

#endif  // CVBENCH_BENCHMARK_HPP
