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

// Finds the rate-optimal probe amplitude for the 20 km channel from expected
// (noise-free) moments, then certifies one point from simulated data.

#include <cstdio>

#include "cvbench/benchmark.hpp"
#include "cvbench/moments.hpp"
#include "cvbench/quantifier.hpp"
#include "cvbench/sampling.hpp"

int main() {
  using namespace cvbench;

  SweepSpec spec;
  spec.channel = channel_preset("20km");
  spec.amplitudes = linear_grid(0.1, 0.6, 0.1);
  spec.source = MomentSource::model;
  spec.k_sigmas = {3.0};
  const WorkingPointReport report = amplitude_sweep(spec);

  std::printf("%6s %10s %10s %12s %12s\n", "alpha", "N", "E_N", "rate", "rate_3sigma");
  for (const auto& row : report.rows) {
    const double n = row.result.certified_negativity();
    std::printf("%6.2f %10.6f %10.6f %12.1f %12.1f\n", row.alpha, n, log_negativity(n), row.rate,
                row.band_rates.front());
  }
  if (const auto wp = working_point(report)) std::printf("working point: alpha = %.2f\n", report.rows[*wp].alpha);

  const ProbeAlphabet alphabet{0.3, kDefaultPulseRate};
  const SampleBatch batch = sample_heterodyne(alphabet, spec.channel, 200'000, 42);
  const auto [record, unc] = estimate_moments(batch, spec.channel.transmission);
  const NegativityResult r = truncation_converge(record, std::exp(-2.0 * 0.3 * 0.3));
  std::printf("simulated alpha = 0.3: N = %.5f (%s, d = %d), var_x = %.4f +- %.4f\n", r.negativity,
              to_string(r.status), r.dim_used, record.symbol[0].var_x, unc.symbol[0].var_x);
  return 0;
}
