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

// Acceptance run: one PASS/FAIL line per criterion. Exits nonzero only on an
// unexpected failure, or on any failure with --strict.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cvbench/benchmark.hpp"
#include "cvbench/moments.hpp"
#include "cvbench/quantifier.hpp"
#include "cvbench/sampling.hpp"
#include "oracles.hpp"

namespace {

using namespace cvbench;

// Criteria whose band the exact model value lies outside of.
const std::set<int> kExpectedFailures{2};

struct Outcome {
  bool pass = false;
  std::string detail;
};

MomentRecord symmetric_record(double alpha, double t, double v) {
  MomentRecord r;
  r.transmission = t;
  const double m = std::sqrt(2.0 * t) * alpha;
  for (int k = 0; k < 2; ++k) {
    r.symbol[k].mean_x = symbol_sign(k) * m;
    r.symbol[k].var_x = r.symbol[k].var_p = v;
    r.symbol[k].count = 1'000'000;
  }
  return r;
}

double overlap(double alpha) { return std::exp(-2.0 * alpha * alpha); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Every converged solve is re-run at d + 4 for criterion 10.
struct StabilityProbe {
  double worst = 0.0;
  int runs = 0;
  std::string worst_case;

  void check(const std::string& label, const MomentRecord& rec, double s, const NegativityResult& r) {
    if (r.status != SolveStatus::optimal) {
      worst = std::max(worst, 1.0);
      worst_case = label + " (not optimal)";
      ++runs;
      return;
    }
    const auto up = min_negativity(build_constraints(rec, s, FockDim(r.dim_used + 4)));
    const double delta = std::abs(up.negativity - r.negativity);
    ++runs;
    if (delta >= worst) {
      worst = delta;
      worst_case = fmt("%s d=%d->%d", label.c_str(), r.dim_used, r.dim_used + 4);
    }
  }
};

StabilityProbe stability;

Outcome table_row(double t, double alpha, double v, double lo, double hi, const char* label) {
  const auto rec = symmetric_record(alpha, t, v);
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = truncation_converge(rec, overlap(alpha));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  stability.check(label, rec, overlap(alpha), r);
  const double n = r.certified_negativity();
  const double en = n > 0.0 ? log_negativity(n) : 0.0;
  const bool en_ok = std::abs(en - std::log2(2.0 * n + 1.0)) <= 1e-6;
  const bool pass = n >= lo && n <= hi && en_ok && secs < 60.0 && r.dim_used <= 20;
  return {pass, fmt("N=%.7f band=[%g, %g] E_N=%.6f d=%d status=%s %.2fs", n, lo, hi, en, r.dim_used,
                    to_string(r.status), secs)};
}

Outcome criterion1() { return table_row(0.24, 0.3, 1.02, 0.05, 0.09, "20km"); }
Outcome criterion2() { return table_row(0.09, 0.17, 1.04, 0.003, 0.009, "40km"); }

Outcome criterion3() {
  const double r20 = entanglement_rate(0.19, 0.875e6);
  const double r40 = entanglement_rate(0.017, 0.875e6);
  const bool pass = std::abs(r20 - 166250.0) < 1e-6 && std::abs(r40 - 14875.0) < 1e-6 &&
                    std::abs(r20 / 166000.0 - 1.0) <= 0.01 && std::abs(r40 / 15000.0 - 1.0) <= 0.01;
  return {pass, fmt("20km %.1f/s (vs 166000), 40km %.1f/s (vs 15000)", r20, r40)};
}

Outcome criterion4() {
  const double e = log_negativity(0.5);
  return {e == 1.0, fmt("E_N(0.5)=%.17g", e)};
}

Outcome criterion5() {
  double worst = 0.0;
  std::ostringstream cases;
  for (double alpha : {0.3, 0.5})
    for (double t : {0.24, 1.0}) {
      const auto rec = symmetric_record(alpha, t, 1.0);
      const auto r = truncation_converge(rec, overlap(alpha));
      stability.check(fmt("oracle a=%.1f T=%.2f", alpha, t), rec, overlap(alpha), r);
      const double exact = oracle::negativity(oracle::two_block_state(alpha, t, 40), 40);
      const double diff = r.status == SolveStatus::optimal ? std::abs(r.negativity - exact) : 1.0;
      worst = std::max(worst, diff);
      cases << fmt(" (%.1f,%.2f):%.7f/%.7f", alpha, t, r.negativity, exact);
    }
  return {worst <= 1e-4, fmt("max |diff|=%.2e;", worst) + cases.str()};
}

Outcome criterion6() {
  const ChannelModel c = channel_preset("20km");
  double worst = 0.0;
  double worst_alpha = 0.0;
  const auto grid = default_amplitude_grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const ProbeAlphabet a{grid[i], kDefaultPulseRate};
    const auto batch = simulate_mp_channel(a, c.transmission, 1'000'000, derive_key(606, i));
    const auto [rec, unc] = estimate_moments(batch, c.transmission);
    const auto r = truncation_converge(rec, overlap(grid[i]));
    stability.check(fmt("mp a=%.2f", grid[i]), rec, overlap(grid[i]), r);
    const double n = r.certified_negativity();
    if (n >= worst) {
      worst = n;
      worst_alpha = grid[i];
    }
  }
  return {worst <= SolverConfig{}.objective_tolerance,
          fmt("max N=%.2e at alpha=%.2f over %zu grid points (T=0.24, 1e6 pulses)", worst, worst_alpha,
              grid.size())};
}

Outcome criterion7() {
  SweepSpec s;
  s.channel = channel_preset("20km");
  s.calibration_amplitudes = default_calibration_grid();
  s.probe_alpha = 0.5;
  s.source = MomentSource::model;
  s.k_sigmas = {};
  const auto rep = phase_noise_sweep(s);
  bool var_mono = true, rate_mono = true;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    stability.check(fmt("phase tuning=%.2f", r.tuning), r.moments, r.overlap, r.result);
    if (i == 0) continue;
    const auto& p = rep.rows[i - 1];
    for (int k = 0; k < 2; ++k)
      var_mono = var_mono && r.moments.symbol[k].var_x >= p.moments.symbol[k].var_x - 1e-12 &&
                 r.moments.symbol[k].var_p >= p.moments.symbol[k].var_p - 1e-12;
    rate_mono = rate_mono && r.rate <= p.rate + 1e-9;
  }
  const auto threshold = entanglement_threshold(rep);

  double quad = 0.0;
  for (double cal : {1.0, 2.5, 4.0}) {
    const Complex beta(std::sqrt(0.24) * 0.5, 0.0);
    const auto m = phase_diffused_moments(beta, phase_distribution(cal));
    const auto b = oracle::brute_force_q_moments(beta, cal, 10 * kDefaultPhaseGrid);
    quad = std::max({quad, std::abs(m.mean_x - b.mean_x), std::abs(m.mean_p - b.mean_p),
                     std::abs(m.qvar_x - b.qvar_x), std::abs(m.qvar_p - b.qvar_p)});
  }
  const bool pass = var_mono && rate_mono && threshold && *threshold < kTuningOrigin && quad <= 1e-6;
  return {pass, fmt("variances monotone=%d rate monotone=%d threshold tuning=%s quadrature diff=%.1e",
                    var_mono, rate_mono, threshold ? fmt("%.2f", *threshold).c_str() : "none", quad)};
}

Outcome criterion8() {
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> ua(0.0, 1.0), ut(0.05, 1.0), ue(0.0, 0.1), uc(1.0, 6.0);
  double worst = 0.0;
  int checks = 0;
  for (int i = 0; i < 27; ++i) {
    ChannelModel c;
    c.transmission = ut(rng);
    c.excess_noise = ue(rng);
    if (i % 3 == 2) c.calibration_amplitude = uc(rng);
    const ProbeAlphabet a{ua(rng), 1.0};
    const auto [rec, unc] = estimate_moments(sample_heterodyne(a, c, 100'000, derive_key(808, i)), c.transmission);
    for (int k = 0; k < 2; ++k) {
      const auto m = model_output_moments(k, a, c);
      const auto& e = rec.symbol[k];
      const auto& u = unc.symbol[k];
      for (auto [est, want, se] : {std::tuple{e.mean_x, m.mean_x, u.mean_x}, std::tuple{e.mean_p, m.mean_p, u.mean_p},
                                   std::tuple{e.var_x, m.var_x, u.var_x}, std::tuple{e.var_p, m.var_p, u.var_p}}) {
        worst = std::max(worst, std::abs(est - want) / se);
        ++checks;
      }
    }
  }
  return {worst <= 5.0, fmt("max deviation %.2f SE over %d checks (27 points, n=1e5)", worst, checks)};
}

Outcome criterion9() {
  const ChannelModel c = channel_preset("20km");
  auto csv_of = [&](std::uint64_t seed, int shards) {
    std::ostringstream os;
    const auto b = sample_heterodyne({0.3, kDefaultPulseRate}, c, 200'000, seed, {shards});
    write_samples_csv(b, os);
    return os.str() + metadata_json(b.meta, 200'000).dump();
  };
  const bool samples = csv_of(9, 1) == csv_of(9, 1) && csv_of(9, 1) == csv_of(9, 8);

  SweepSpec s;
  s.channel = c;
  s.amplitudes = {0.2, 0.3, 0.4};
  s.pulses = 20'000;
  s.k_sigmas = {1.0};
  s.seed = 9;
  auto report = [&](int threads) {
    s.threads = threads;
    const auto r = amplitude_sweep(s);
    return to_json(r).dump() + to_csv(r);
  };
  const std::string one = report(1);
  const bool reports = one == report(1) && one == report(4);
  return {samples && reports, fmt("sample files identical=%d, sweep reports identical across 1/4 threads=%d",
                                  samples, reports)};
}

Outcome criterion10() {
  return {stability.runs > 0 && stability.worst < 1e-6,
          fmt("max |N(d+4) - N(d)|=%.2e over %d runs (worst: %s)", stability.worst, stability.runs,
              stability.worst_case.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  const bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                       criterion5, criterion6, criterion7, criterion8,
                                                       criterion9, criterion10};
  int unexpected = 0, failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const bool expected = kExpectedFailures.count(id) > 0;
    if (!o.pass) {
      ++failed;
      if (!expected) ++unexpected;
    }
    std::printf("criterion %2d: %s%s  %s\n", id, o.pass ? "PASS" : "FAIL",
                !o.pass && expected ? " (expected)" : "", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return (strict ? failed : unexpected) > 0 ? 1 : 0;
}
