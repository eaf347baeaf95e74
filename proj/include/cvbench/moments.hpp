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

#ifndef CVBENCH_MOMENTS_HPP
#define CVBENCH_MOMENTS_HPP

#include <nlohmann/json.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>

#include "cvbench/errors.hpp"
#include "cvbench/fock.hpp"
#include "cvbench/sampling.hpp"

namespace cvbench {

/// Shot-noise units subtracted from Q-marginal variances to obtain state
/// variances (double homodyne adds one vacuum unit).
inline constexpr double kHeterodyneConstant = 1.0;

/// Floor applied to sub-shot variances before they reach the quantifier.
inline constexpr double kVarianceFloor = 1e-6;

struct SymbolMoments {
  double mean_x = 0.0;
  double mean_p = 0.0;
  double var_x = 1.0;  // state variance, shot-noise units
  double var_p = 1.0;
  std::int64_t count = 0;
  bool sub_shot = false;  // a variance came out <= 0 after subtraction
};

struct MomentRecord {
  std::array<SymbolMoments, 2> symbol;
  double transmission = 1.0;
  double frame_rotation = 0.0;  // angle removed to put symbol 0 on +x

  bool flagged() const { return symbol[0].sub_shot || symbol[1].sub_shot; }

  void validate() const {
    detail::require(std::isfinite(transmission) && transmission > 0.0 && transmission <= 1.0,
                    "moment record: transmission must lie in (0, 1]");
    for (const auto& s : symbol) {
      detail::require(s.count >= 2, "moment record: need at least 2 samples per symbol");
      detail::require(std::isfinite(s.mean_x) && std::isfinite(s.mean_p) &&
                          std::isfinite(s.var_x) && std::isfinite(s.var_p),
                      "moment record: non-finite entry");
    }
  }
};

struct SymbolUncertainty {
  double mean_x = 0.0;
  double mean_p = 0.0;
  double var_x = 0.0;
  double var_p = 0.0;
};

/// Standard errors matching MomentRecord entry by entry.
struct MomentUncertainty {
  std::array<SymbolUncertainty, 2> symbol;
};

struct AlphabetEstimate {
  std::array<Complex, 2> beta;
  double alpha_hat = 0.0;
  double overlap_s = 1.0;
  double asymmetry = 0.0;  // | |beta_0| - |beta_1| | / sqrt(T), diagnostic only
};

/// One-pass mean and covariance of (x, p). Merging follows the pairwise
/// update of Chan, Golub and LeVeque, so sharded accumulation matches a
/// sequential pass to rounding.
class MomentAccumulator {
 public:
  void add(double x, double p) {
    ++n_;
    const double dx = x - mx_;
    const double dp = p - mp_;
    mx_ += dx / static_cast<double>(n_);
    mp_ += dp / static_cast<double>(n_);
    sxx_ += dx * (x - mx_);
    spp_ += dp * (p - mp_);
    sxp_ += dx * (p - mp_);
  }

  void merge(const MomentAccumulator& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
      *this = o;
      return;
    }
    const double n = static_cast<double>(n_ + o.n_);
    const double dx = o.mx_ - mx_;
    const double dp = o.mp_ - mp_;
    const double f = static_cast<double>(n_) * static_cast<double>(o.n_) / n;
    sxx_ += o.sxx_ + dx * dx * f;
    spp_ += o.spp_ + dp * dp * f;
    sxp_ += o.sxp_ + dx * dp * f;
    mx_ += dx * static_cast<double>(o.n_) / n;
    mp_ += dp * static_cast<double>(o.n_) / n;
    n_ += o.n_;
  }

  std::int64_t count() const { return n_; }
  double mean_x() const { return mx_; }
  double mean_p() const { return mp_; }
  // Unbiased (n - 1) estimators.
  double var_x() const { return sxx_ / static_cast<double>(n_ - 1); }
  double var_p() const { return spp_ / static_cast<double>(n_ - 1); }
  double cov_xp() const { return sxp_ / static_cast<double>(n_ - 1); }

 private:
  std::int64_t n_ = 0;
  double mx_ = 0.0, mp_ = 0.0;
  double sxx_ = 0.0, spp_ = 0.0, sxp_ = 0.0;
};

/// Turns per-symbol accumulators into a record: rotate the frame so the
/// symbol-0 mean lies on +x, subtract the heterodyne constant and attach
/// standard errors se(mean) = s/sqrt(n), se(var) = s^2 sqrt(2/(n-1)).
inline std::pair<MomentRecord, MomentUncertainty> finalize_moments(
    const std::array<MomentAccumulator, 2>& acc, double transmission) {
  detail::require(std::isfinite(transmission) && transmission > 0.0 && transmission <= 1.0,
                  "transmission must lie in (0, 1]");
  for (int k = 0; k < 2; ++k)
    if (acc[k].count() < 2)
      throw InsufficientData("symbol " + std::to_string(k) + " has " +
                             std::to_string(acc[k].count()) + " samples, need at least 2");

  MomentRecord rec;
  MomentUncertainty unc;
  rec.transmission = transmission;
  const double theta = (acc[0].mean_x() == 0.0 && acc[0].mean_p() == 0.0)
                           ? 0.0
                           : std::atan2(acc[0].mean_p(), acc[0].mean_x());
  rec.frame_rotation = theta;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  for (int k = 0; k < 2; ++k) {
    const auto& a = acc[k];
    const double mx = c * a.mean_x() + s * a.mean_p();
    const double mp = k == 0 ? 0.0 : -s * a.mean_x() + c * a.mean_p();
    const double qxx = c * c * a.var_x() + 2 * c * s * a.cov_xp() + s * s * a.var_p();
    const double qpp = s * s * a.var_x() - 2 * c * s * a.cov_xp() + c * c * a.var_p();
    const double n = static_cast<double>(a.count());
    auto& m = rec.symbol[k];
    m.mean_x = mx;
    m.mean_p = mp;
    m.var_x = qxx - kHeterodyneConstant;
    m.var_p = qpp - kHeterodyneConstant;
    m.count = a.count();
    m.sub_shot = m.var_x <= 0.0 || m.var_p <= 0.0;
    auto& u = unc.symbol[k];
    u.mean_x = std::sqrt(qxx / n);
    u.mean_p = std::sqrt(qpp / n);
    u.var_x = qxx * std::sqrt(2.0 / (n - 1.0));
    u.var_p = qpp * std::sqrt(2.0 / (n - 1.0));
  }
  return {rec, unc};
}

inline std::pair<MomentRecord, MomentUncertainty> estimate_moments(
    std::span<const SampleRecord> records, double transmission) {
  std::array<MomentAccumulator, 2> acc;
  for (const auto& r : records) {
    detail::require(r.symbol == 0 || r.symbol == 1, "sample symbol must be 0 or 1");
    acc[r.symbol].add(r.x, r.p);
  }
  return finalize_moments(acc, transmission);
}

inline std::pair<MomentRecord, MomentUncertainty> estimate_moments(const SampleBatch& batch,
                                                                   double transmission) {
  return estimate_moments(std::span<const SampleRecord>(batch.records), transmission);
}

/// beta_k = (mean_x + i mean_p)/sqrt(2)
inline std::array<Complex, 2> extract_beta(const MomentRecord& record) {
  std::array<Complex, 2> out;
  for (int k = 0; k < 2; ++k)
    out[k] = Complex(record.symbol[k].mean_x, record.symbol[k].mean_p) / std::numbers::sqrt2;
  return out;
}

/// Sender amplitude from the mean output amplitudes and the total
/// transmission; overlap s = <alpha|-alpha> = exp(-2 alpha^2).
inline AlphabetEstimate infer_overlap(const std::array<Complex, 2>& beta, double transmission) {
  detail::require(std::isfinite(transmission) && transmission > 0.0 && transmission <= 1.0,
                  "transmission must lie in (0, 1]");
  AlphabetEstimate e;
  e.beta = beta;
  const double root_t = std::sqrt(transmission);
  e.alpha_hat = 0.5 * (std::abs(beta[0]) + std::abs(beta[1])) / root_t;
  e.overlap_s = std::exp(-2.0 * e.alpha_hat * e.alpha_hat);
  e.asymmetry = std::abs(std::abs(beta[0]) - std::abs(beta[1])) / root_t;
  return e;
}

inline nlohmann::ordered_json to_json(const MomentRecord& r) {
  nlohmann::ordered_json j;
  j["units"] = "snl";
  j["transmission"] = r.transmission;
  j["frame_rotation"] = r.frame_rotation;
  for (int k = 0; k < 2; ++k) {
    const std::string s = "symbol" + std::to_string(k) + "_";
    const auto& m = r.symbol[k];
    j[s + "mean_x"] = m.mean_x;
    j[s + "mean_p"] = m.mean_p;
    j[s + "var_x"] = m.var_x;
    j[s + "var_p"] = m.var_p;
    j[s + "count"] = m.count;
    j[s + "sub_shot"] = m.sub_shot;
  }
  return j;
}

inline nlohmann::ordered_json to_json(const MomentUncertainty& u) {
  nlohmann::ordered_json j;
  j["units"] = "snl";
  for (int k = 0; k < 2; ++k) {
    const std::string s = "symbol" + std::to_string(k) + "_";
    j[s + "se_mean_x"] = u.symbol[k].mean_x;
    j[s + "se_mean_p"] = u.symbol[k].mean_p;
    j[s + "se_var_x"] = u.symbol[k].var_x;
    j[s + "se_var_p"] = u.symbol[k].var_p;
  }
  return j;
}

}  // namespace cvbench

#endif  // CVBENCH_MOMENTS_HPP
