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

#ifndef CVBENCH_IO_HPP
#define CVBENCH_IO_HPP

// Run configuration, sample-file ingestion and atomic persistence.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "cvbench/benchmark.hpp"
#include "cvbench/channel.hpp"
#include "cvbench/errors.hpp"
#include "cvbench/quantifier.hpp"
#include "cvbench/sampling.hpp"

namespace cvbench {

inline constexpr const char* kToolName = "cvbench";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kOutputDirEnv = "CVBENCH_OUT_DIR";

namespace fs = std::filesystem;

/// Writes `content` to a temporary sibling of `path`, then renames it into
/// place. Readers never observe a partial file; on failure nothing is left.
inline void atomic_write(const fs::path& path, std::string_view content) {
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("output directory does not exist: " + dir.string());
  std::random_device rd;
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(rd()));
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot write " + path.string());
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    os.flush();
    if (!os) {
      os.close();
      fs::remove(tmp, ec);
      throw IoError("short write to " + path.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename into " + path.string());
  }
}

/// Fails early if `path` cannot be created, before any expensive work.
inline void check_writable(const fs::path& path) {
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("output directory does not exist: " + dir.string());
  if (fs::is_directory(path, ec)) throw IoError("output path is a directory: " + path.string());
  const auto perms = fs::status(dir, ec).permissions();
  if (ec || (perms & fs::perms::owner_write) == fs::perms::none)
    throw IoError("output directory is not writable: " + dir.string());
}

inline fs::path default_output_dir() {
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return fs::path(env);
  return fs::path(".");
}

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string read_text(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

/// Sidecar metadata path for a sample CSV.
inline fs::path sidecar_path(const fs::path& csv) { return fs::path(csv.string() + ".meta.json"); }

inline void write_sample_files(const SampleBatch& batch, const fs::path& csv) {
  check_writable(csv);
  std::ostringstream os;
  write_samples_csv(batch, os);
  const std::string meta = metadata_json(batch.meta, static_cast<std::int64_t>(batch.records.size())).dump(2) + "\n";
  atomic_write(csv, os.str());
  atomic_write(sidecar_path(csv), meta);
}

/// Loads a sample CSV and, when present, its sidecar.
inline std::pair<SampleBatch, bool> load_sample_files(const fs::path& csv) {
  std::ifstream is(csv, std::ios::binary);
  if (!is) throw IoError("cannot read " + csv.string());
  BatchMetadata meta;
  meta.generator = Generator::external;
  bool have_meta = false;
  const fs::path side = sidecar_path(csv);
  if (fs::exists(side)) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_text(side));
    } catch (const nlohmann::json::parse_error& e) {
      throw DataFormatError(side.string() + ": " + e.what(), 0);
    }
    meta = metadata_from_json(j);
    have_meta = true;
  }
  return {read_samples_csv(is, meta), have_meta};
}

/// Everything a command needs, after defaults and presets are resolved.
struct RunConfig {
  std::optional<std::string> preset;
  ChannelModel channel;
  ProbeAlphabet alphabet{0.3, kDefaultPulseRate};
  std::int64_t pulses = 1'000'000;
  std::uint64_t seed = 1;
  SolverConfig solver;
  fs::path output_dir = default_output_dir();

  void validate() const {
    channel.validate();
    alphabet.validate();
    solver.validate();
    detail::require(pulses >= 1, "pulse count must be >= 1");
  }
};

/// Parses a JSON run config. Quantities carry unit tags: excess noise in
/// "snl", pulse rate in "hz". Unknown keys are rejected.
inline RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  static const std::vector<std::string> known{"preset", "transmission", "excess_noise", "alpha_cal",
                                              "alpha", "pulse_rate", "pulses", "seed", "dim",
                                              "tol", "output_dir", "units"};
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (std::find(known.begin(), known.end(), k) == known.end())
      throw InvalidInput("unknown config key '" + k + "'");
  try {
    if (j.contains("units")) {
      const auto& u = j.at("units");
      if (u.contains("excess_noise") && u.at("excess_noise") != "snl")
        throw InvalidInput("excess_noise must be given in snl");
      if (u.contains("pulse_rate") && u.at("pulse_rate") != "hz")
        throw InvalidInput("pulse_rate must be given in hz");
    }
    if (j.contains("preset")) {
      c.preset = j.at("preset").get<std::string>();
      c.channel = channel_preset(*c.preset);
    }
    if (j.contains("transmission")) c.channel.transmission = j.at("transmission").get<double>();
    if (j.contains("excess_noise")) c.channel.excess_noise = j.at("excess_noise").get<double>();
    if (j.contains("alpha_cal") && !j.at("alpha_cal").is_null())
      c.channel.calibration_amplitude = j.at("alpha_cal").get<double>();
    if (j.contains("alpha")) c.alphabet.alpha = j.at("alpha").get<double>();
    if (j.contains("pulse_rate")) c.alphabet.pulse_rate = j.at("pulse_rate").get<double>();
    if (j.contains("pulses")) c.pulses = j.at("pulses").get<std::int64_t>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("dim")) c.solver.start_dim = j.at("dim").get<int>();
    if (j.contains("tol")) c.solver.objective_tolerance = j.at("tol").get<double>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

inline nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  if (c.preset) j["preset"] = *c.preset;
  j["transmission"] = c.channel.transmission;
  j["excess_noise"] = c.channel.excess_noise;
  j["alpha_cal"] = c.channel.calibration_amplitude ? nlohmann::ordered_json(*c.channel.calibration_amplitude)
                                                   : nlohmann::ordered_json(nullptr);
  j["alpha"] = c.alphabet.alpha;
  j["pulse_rate"] = c.alphabet.pulse_rate;
  j["pulses"] = c.pulses;
  j["seed"] = c.seed;
  j["dim"] = c.solver.start_dim;
  j["tol"] = c.solver.objective_tolerance;
  j["units"] = {{"excess_noise", "snl"}, {"pulse_rate", "hz"}};
  return j;
}

/// Common report envelope. `config_text` is echoed verbatim.
inline nlohmann::ordered_json report_envelope(const std::string& command, const std::string& config_text,
                                              bool timestamps) {
  nlohmann::ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command;
  j["config"] = config_text;
  if (timestamps) j["created_utc"] = utc_timestamp();
  return j;
}

}  // namespace cvbench

#endif  // CVBENCH_IO_HPP
