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

#include <gtest/gtest.h>

#include <algorithm>

#include "cvbench/benchmark.hpp"

namespace {

using namespace cvbench;

SweepRow row(double alpha, double rate) {
  SweepRow r;
  r.alpha = alpha;
  r.rate = rate;
  r.band_rates = {rate / 2};
  return r;
}

WorkingPointReport report_of(std::vector<SweepRow> rows) {
  WorkingPointReport rep;
  rep.k_sigmas = {3.0};
  rep.rows = std::move(rows);
  return rep;
}

SweepSpec model_spec(std::vector<double> amps) {
  SweepSpec s;
  s.channel = channel_preset("20km");
  s.amplitudes = std::move(amps);
  s.source = MomentSource::model;
  s.k_sigmas = {};
  return s;
}

TEST(EntanglementRate, ScalesLogNegativityByPulseRate) {
  EXPECT_NEAR(entanglement_rate(0.19, kDefaultPulseRate), 166250.0, 1e-9);
  EXPECT_NEAR(entanglement_rate(0.017, kDefaultPulseRate), 14875.0, 1e-9);
  EXPECT_EQ(entanglement_rate(0.0, 1.0), 0.0);
  EXPECT_THROW(entanglement_rate(-0.1, 1.0), InvalidInput);
  EXPECT_THROW(entanglement_rate(0.1, 0.0), InvalidInput);
}

TEST(ChannelPresets, KnownAndUnknown) {
  const auto names = preset_names();
  EXPECT_NE(std::find(names.begin(), names.end(), "20km"), names.end());
  EXPECT_NE(std::find(names.begin(), names.end(), "40km"), names.end());
  EXPECT_DOUBLE_EQ(channel_preset("20km").transmission, 0.24);
  EXPECT_DOUBLE_EQ(channel_preset("40km").excess_noise, 0.04);
  EXPECT_FALSE(channel_preset("40km").calibration_amplitude.has_value());
  EXPECT_THROW(channel_preset("80km"), InvalidInput);
}

TEST(LinearGrid, InclusiveInBothDirections) {
  const auto a = default_amplitude_grid();
  ASSERT_EQ(a.size(), 20u);
  EXPECT_NEAR(a.back(), 1.0, 1e-12);
  const auto c = default_calibration_grid();
  ASSERT_EQ(c.size(), 25u);
  EXPECT_NEAR(c.back(), 0.0, 1e-12);
  EXPECT_EQ(linear_grid(0.3, 0.3, 0.1).size(), 1u);
  EXPECT_THROW(linear_grid(0.0, 1.0, -0.1), InvalidInput);
  EXPECT_THROW(linear_grid(0.0, 1.0, 0.0), InvalidInput);
}

TEST(WorkingPoint, PicksMaximumWithTiesToSmallerAlpha) {
  EXPECT_EQ(working_point(report_of({row(0.1, 5), row(0.2, 9), row(0.3, 7)})), 1u);
  EXPECT_EQ(working_point(report_of({row(0.3, 9), row(0.2, 9), row(0.4, 1)})), 1u);
  EXPECT_EQ(working_point(report_of({row(0.5, 3)})), 0u);
}

TEST(WorkingPoint, NoneWhenNothingIsCertified) {
  EXPECT_FALSE(working_point(report_of({row(0.1, 0), row(0.2, 0)})).has_value());
  EXPECT_THROW(working_point(report_of({})), InvalidInput);
}

TEST(WorkingPoint, BandReading) {
  auto rep = report_of({row(0.1, 5), row(0.2, 9)});
  rep.rows[0].band_rates = {6};
  EXPECT_EQ(working_point(rep, 3.0), 0u);
  EXPECT_THROW(working_point(rep, 2.0), InvalidInput);
}

TEST(EntanglementThreshold, FirstTuningOfTheSeparableTail) {
  std::vector<SweepRow> rows;
  for (double t : {0.0, 1.0, 2.0, 3.0}) {
    SweepRow r;
    r.tuning = t;
    r.rate = t < 2.0 ? 1.0 : 0.0;
    rows.push_back(r);
  }
  EXPECT_EQ(*entanglement_threshold(report_of(rows)), 2.0);
  rows.back().rate = 1.0;
  EXPECT_FALSE(entanglement_threshold(report_of(rows)).has_value());
}

TEST(SweepSpec, Validation) {
  auto s = model_spec({0.3});
  s.pulses = 100;
  EXPECT_THROW(amplitude_sweep(s), InvalidInput);
  s = model_spec({});
  EXPECT_THROW(amplitude_sweep(s), InvalidInput);
  s = model_spec({-0.1});
  EXPECT_THROW(amplitude_sweep(s), InvalidInput);
  s = model_spec({0.3});
  EXPECT_THROW(phase_noise_sweep(s), InvalidInput);  // empty calibration grid
}

TEST(AmplitudeSweep, RateIsPulseRateTimesLogNegativity) {
  const auto rep = amplitude_sweep(model_spec({0.2, 0.3}));
  for (const auto& r : rep.rows) {
    ASSERT_TRUE(r.error.empty()) << r.error;
    const double n = r.result.certified_negativity();
    ASSERT_GT(n, 0.0);
    EXPECT_NEAR(r.rate / log_negativity(n), kDefaultPulseRate, 1e-6);
    EXPECT_DOUBLE_EQ(r.overlap, std::exp(-2.0 * r.alpha * r.alpha));
  }
}

TEST(AmplitudeSweep, VacuumProbeCertifiesNothing) {
  auto s = model_spec({0.0});
  s.k_sigmas = {1.0};
  const auto rep = amplitude_sweep(s);
  EXPECT_EQ(rep.rows[0].rate, 0.0);
  EXPECT_EQ(rep.rows[0].band_rates[0], 0.0);
  EXPECT_FALSE(working_point(rep).has_value());
  EXPECT_EQ(to_json(rep).at("working_point"), "no quantum working point");
}

TEST(AmplitudeSweep, BandRatesBelowCentralRate) {
  auto s = model_spec({0.3});
  s.k_sigmas = {1.0, 3.0};
  const auto rep = amplitude_sweep(s);
  const auto& r = rep.rows[0];
  ASSERT_EQ(r.band_rates.size(), 2u);
  EXPECT_LE(r.band_rates[0], r.rate);
  EXPECT_LE(r.band_rates[1], r.band_rates[0]);
  EXPECT_GT(r.band_rates[1], 0.0);
}

TEST(AmplitudeSweep, ThreadCountDoesNotChangeSampledReport) {
  SweepSpec s;
  s.channel = channel_preset("20km");
  s.amplitudes = {0.2, 0.3};
  s.pulses = 20'000;
  s.k_sigmas = {};
  s.seed = 5;
  s.threads = 1;
  const auto one = to_json(amplitude_sweep(s)).dump();
  s.threads = 3;
  const auto three = to_json(amplitude_sweep(s)).dump();
  EXPECT_EQ(one, three);
}

TEST(PhaseSweep, MoreDephasingMeansMoreNoiseAndLessRate) {
  SweepSpec s;
  s.channel = channel_preset("20km");
  s.calibration_amplitudes = {6.0, 4.0, 2.0, 1.0, 0.0};
  s.source = MomentSource::model;
  s.k_sigmas = {};
  const auto rep = phase_noise_sweep(s);
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    const auto& a = rep.rows[i - 1];
    const auto& b = rep.rows[i];
    EXPECT_GT(b.tuning, a.tuning);
    EXPECT_GE(b.moments.symbol[0].var_x, a.moments.symbol[0].var_x - 1e-12);
    EXPECT_GE(b.moments.symbol[0].var_p, a.moments.symbol[0].var_p - 1e-12);
    EXPECT_LE(b.rate, a.rate + 1e-6);
  }
  EXPECT_GT(rep.rows.front().rate, 0.0);
  EXPECT_EQ(rep.rows.back().rate, 0.0);
  EXPECT_TRUE(entanglement_threshold(rep).has_value());
}

TEST(ReportSerialization, CsvHeadersAndJsonFields) {
  auto s = model_spec({0.3});
  s.k_sigmas = {1.0, 2.0, 3.0};
  const auto rep = amplitude_sweep(s);
  const auto csv = to_csv(rep);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "alpha,N,E_N,rate,rate_1sigma,rate_2sigma,rate_3sigma");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  const auto j = to_json(rep);
  EXPECT_EQ(j.at("rate_units"), "log-neg units per second");
  EXPECT_EQ(j.at("working_point").at("index"), 0);
  EXPECT_EQ(j.at("minimal_rate_working_point").at("k"), 3.0);
  EXPECT_EQ(j.at("rows").at(0).at("bands").size(), 3u);
  EXPECT_FALSE(j.at("rows").at(0).at("result").contains("wall_seconds"));

  WorkingPointReport phase;
  phase.kind = SweepKind::phase;
  phase.rows.resize(1);
  EXPECT_EQ(to_csv(phase).substr(0, 22), "tuning,var_x,var_p,rat");
}

}  // namespace
