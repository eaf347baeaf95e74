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

#ifndef CVBENCH_SAMPLING_HPP
#define CVBENCH_SAMPLING_HPP

// Synthetic double-homodyne records for the binary alphabet.
//
// Record coordinates: for symbol k with model mean amplitude mu_k (the mean
// of Re/Im g under the Q-function), an outcome g is written as
//   x = sqrt(2) Re(mu_k) + 2 (Re g - Re mu_k)
// and likewise for p. Sample means are then sqrt(2) Re(beta) and sample
// variances are Q-marginal variances in shot-noise units (vacuum 2).

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "cvbench/channel.hpp"
#include "cvbench/errors.hpp"
#include "cvbench/rng.hpp"

namespace cvbench {

struct SampleRecord {
  std::int64_t pulse_index = 0;
  int symbol = 0;
  double x = 0.0;
  double p = 0.0;

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

enum class Generator { heterodyne, measure_prepare, external };

inline const char* to_string(Generator g) {
  switch (g) {
    case Generator::heterodyne: return "heterodyne";
    case Generator::measure_prepare: return "measure-prepare";
    case Generator::external: return "external";
  }
  return "external";
}

struct BatchMetadata {
  std::uint64_t seed = 0;
  ChannelModel channel;
  ProbeAlphabet alphabet;
  Generator generator = Generator::external;
};

struct SampleBatch {
  BatchMetadata meta;
  std::vector<SampleRecord> records;
};

struct SamplingOptions {
  int shards = 1;  // worker threads; output does not depend on this
};

namespace detail {

template <typename PulseFn>
std::vector<SampleRecord> generate(std::int64_t n, int shards, PulseFn&& pulse) {
  std::vector<SampleRecord> out(static_cast<std::size_t>(n));
  shards = std::clamp<std::int64_t>(shards, 1, n);
  if (shards == 1) {
    for (std::int64_t i = 0; i < n; ++i) out[i] = pulse(i);
    return out;
  }
  std::vector<std::thread> workers;
  const std::int64_t chunk = (n + shards - 1) / shards;
  for (int s = 0; s < shards; ++s) {
    const std::int64_t lo = s * chunk;
    const std::int64_t hi = std::min(n, lo + chunk);
    workers.emplace_back([&out, &pulse, lo, hi] {
      for (std::int64_t i = lo; i < hi; ++i) out[i] = pulse(i);
    });
  }
  for (auto& w : workers) w.join();
  return out;
}

inline double record_coordinate(double model_mean, double outcome) {
  return std::numbers::sqrt2 * model_mean + 2.0 * (outcome - model_mean);
}

// Picks a node index with probability weights[j] given the running sums.
inline std::size_t sample_index(const std::vector<double>& cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u * cumulative.back());
  return std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1);
}

}  // namespace detail

/// Direct transmission: symbol k uniform in {0, 1}, output Q-function of the
/// lossy, noisy and (optionally) phase-diffused coherent state.
inline SampleBatch sample_heterodyne(const ProbeAlphabet& alphabet, const ChannelModel& channel,
                                     std::int64_t n_pulses, std::uint64_t seed,
                                     SamplingOptions options = {}) {
  alphabet.validate();
  channel.validate();
  detail::require(n_pulses >= 1, "n_pulses must be >= 1");

  const double amp = std::sqrt(channel.transmission) * alphabet.alpha;
  const double sd = std::sqrt(0.5 + 0.25 * channel.excess_noise);  // per Re/Im of g
  std::vector<double> nodes, cumulative;
  Complex rotation_mean = 1.0;  // E[e^{i phi}]
  if (channel.calibration_amplitude) {
    const PhaseDistribution f = phase_distribution(*channel.calibration_amplitude);
    nodes = f.nodes;
    cumulative.resize(f.weights.size());
    double acc = 0.0;
    rotation_mean = 0.0;
    for (std::size_t j = 0; j < f.weights.size(); ++j) {
      acc += f.weights[j];
      cumulative[j] = acc;
      rotation_mean += f.weights[j] * std::polar(1.0, f.nodes[j]);
    }
  }

  SampleBatch batch;
  batch.meta = {seed, channel, alphabet, Generator::heterodyne};
  batch.records = detail::generate(n_pulses, options.shards, [&](std::int64_t i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    SampleRecord r;
    r.pulse_index = i;
    r.symbol = rng.uniform() < 0.5 ? 0 : 1;
    const Complex beta = symbol_sign(r.symbol) * amp;
    Complex center = beta;
    if (!nodes.empty()) center *= std::polar(1.0, nodes[detail::sample_index(cumulative, rng.uniform())]);
    const Complex mean = beta * rotation_mean;
    const auto [gx, gp] = rng.normal_pair();
    r.x = detail::record_coordinate(mean.real(), center.real() + sd * gx);
    r.p = detail::record_coordinate(mean.imag(), center.imag() + sd * gp);
    return r;
  });
  return batch;
}

/// Measure-and-prepare null model: heterodyne the input, re-prepare the
/// coherent state sqrt(T) g1, and heterodyne again at the receiver. The
/// output state variance is 1 + 2T shot-noise units.
inline SampleBatch simulate_mp_channel(const ProbeAlphabet& alphabet, double transmission,
                                       std::int64_t n_pulses, std::uint64_t seed,
                                       SamplingOptions options = {}) {
  ChannelModel channel;
  channel.transmission = transmission;
  alphabet.validate();
  channel.validate();
  detail::require(n_pulses >= 1, "n_pulses must be >= 1");
  const double gain = std::sqrt(transmission);
  const double sd = std::sqrt(0.5);

  SampleBatch batch;
  batch.meta = {seed, channel, alphabet, Generator::measure_prepare};
  batch.records = detail::generate(n_pulses, options.shards, [&](std::int64_t i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    SampleRecord r;
    r.pulse_index = i;
    r.symbol = rng.uniform() < 0.5 ? 0 : 1;
    const double a = symbol_sign(r.symbol) * alphabet.alpha;
    const auto [u1, v1] = rng.normal_pair();
    const double g1x = a + sd * u1;
    const double g1p = sd * v1;
    const auto [u2, v2] = rng.normal_pair();
    const double mean = gain * a;
    r.x = detail::record_coordinate(mean, gain * g1x + sd * u2);
    r.p = detail::record_coordinate(0.0, gain * g1p + sd * v2);
    return r;
  });
  return batch;
}

// ---------------------------------------------------------------------------
// CSV / sidecar

inline constexpr std::string_view kSampleCsvHeader = "pulse_index,symbol,x,p";

namespace detail {

inline void append_double(std::string& out, double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
  out.append(buf, res.ptr);
}

inline void append_int(std::string& out, std::int64_t v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

}  // namespace detail

inline void write_samples_csv(const SampleBatch& batch, std::ostream& os) {
  std::string buf;
  buf.reserve(1 << 16);
  buf.append(kSampleCsvHeader).push_back('\n');
  for (const auto& r : batch.records) {
    detail::append_int(buf, r.pulse_index);
    buf.push_back(',');
    detail::append_int(buf, r.symbol);
    buf.push_back(',');
    detail::append_double(buf, r.x);
    buf.push_back(',');
    detail::append_double(buf, r.p);
    buf.push_back('\n');
    if (buf.size() > (1 << 16) - 128) {
      os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

inline nlohmann::ordered_json metadata_json(const BatchMetadata& meta, std::int64_t n_pulses) {
  nlohmann::ordered_json j;
  j["generator"] = to_string(meta.generator);
  j["seed"] = meta.seed;
  j["n_pulses"] = n_pulses;
  j["T"] = meta.channel.transmission;
  j["epsilon"] = meta.channel.excess_noise;
  j["alpha"] = meta.alphabet.alpha;
  if (meta.channel.calibration_amplitude)
    j["alpha_cal"] = *meta.channel.calibration_amplitude;
  else
    j["alpha_cal"] = nullptr;
  j["pulse_rate"] = meta.alphabet.pulse_rate;
  j["units"] = {{"x", "snl"}, {"p", "snl"}, {"pulse_rate", "hz"}};
  return j;
}

inline BatchMetadata metadata_from_json(const nlohmann::json& j) {
  BatchMetadata meta;
  try {
    meta.seed = j.value("seed", std::uint64_t{0});
    meta.channel.transmission = j.at("T").get<double>();
    meta.channel.excess_noise = j.value("epsilon", 0.0);
    if (j.contains("alpha_cal") && !j.at("alpha_cal").is_null())
      meta.channel.calibration_amplitude = j.at("alpha_cal").get<double>();
    meta.alphabet.alpha = j.value("alpha", 0.0);
    meta.alphabet.pulse_rate = j.value("pulse_rate", 1.0);
    const std::string g = j.value("generator", std::string("external"));
    meta.generator = g == "heterodyne"        ? Generator::heterodyne
                     : g == "measure-prepare" ? Generator::measure_prepare
                                              : Generator::external;
  } catch (const nlohmann::json::exception& e) {
    throw DataFormatError(std::string("sample metadata: ") + e.what(), 0);
  }
  return meta;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace detail

/// Parses the sample CSV. Blank lines are skipped; anything else that is not
/// a well-formed record raises DataFormatError with its line number.
inline SampleBatch read_samples_csv(std::istream& is, BatchMetadata meta = {}) {
  SampleBatch batch;
  batch.meta = meta;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string_view view = detail::trim(line);
    if (view.empty()) continue;
    if (!header_seen) {
      if (view != kSampleCsvHeader)
        throw DataFormatError("expected header '" + std::string(kSampleCsvHeader) + "'", line_no);
      header_seen = true;
      continue;
    }
    std::string_view fields[4];
    std::size_t start = 0;
    int count = 0;
    for (std::size_t k = 0; k <= view.size(); ++k) {
      if (k == view.size() || view[k] == ',') {
        if (count == 4) throw DataFormatError("too many fields", line_no);
        fields[count++] = view.substr(start, k - start);
        start = k + 1;
      }
    }
    if (count != 4) throw DataFormatError("expected 4 fields", line_no);
    SampleRecord r;
    if (!detail::parse_number(fields[0], r.pulse_index))
      throw DataFormatError("bad pulse_index", line_no);
    if (!detail::parse_number(fields[1], r.symbol) || (r.symbol != 0 && r.symbol != 1))
      throw DataFormatError("symbol must be 0 or 1", line_no);
    if (!detail::parse_number(fields[2], r.x) || !std::isfinite(r.x))
      throw DataFormatError("bad x outcome", line_no);
    if (!detail::parse_number(fields[3], r.p) || !std::isfinite(r.p))
      throw DataFormatError("bad p outcome", line_no);
    batch.records.push_back(r);
  }
  if (!header_seen) throw DataFormatError("empty sample file", line_no);
  return batch;
}

}  // namespace cvbench

#endif  // CVBENCH_SAMPLING_HPP
