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

#ifndef CVBENCH_QUANTIFIER_HPP
#define CVBENCH_QUANTIFIER_HPP

// Effective-entanglement quantifier. Given the sender-side reduced state
// rho_A = (1/2)[[1, s], [s, 1]] and per-symbol first and second quadrature
// moments of the channel outputs, find the smallest negativity of any
// qubit-mode state rho_AB reproducing that data:
//
//   minimize   Tr Y
//   subject to rho >= 0, P >= 0, Y >= 0,  rho^{T_A} = P - Y,
//              Tr_B rho = rho_A,  Tr[(|k><k| (x) z) rho] = w_k <z>_k,
//              Tr[(|k><k| (x) z^2) rho] = w_k <z^2>_k,  z in {x, p}.
//
// The Fock mode is truncated at d photons; the projected squares P z^2 P are
// used so that any state supported below d meets the targets exactly and the
// truncated optimum can only decrease as d grows.

#include <nlohmann/json.hpp>

#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cvbench/errors.hpp"
#include "cvbench/fock.hpp"
#include "cvbench/moments.hpp"
#include "cvbench/sdp.hpp"

namespace cvbench {

class ReducedQubitState {
 public:
  explicit ReducedQubitState(double overlap) : s_(overlap) {
    detail::require(std::isfinite(overlap) && overlap >= 0.0 && overlap <= 1.0,
                    "overlap s must lie in [0, 1]");
  }
  double overlap() const noexcept { return s_; }
  Eigen::Matrix2d matrix() const { return 0.5 * Eigen::Matrix2d{{1.0, s_}, {s_, 1.0}}; }

 private:
  double s_;
};

/// Conditional quadrature moments of one output state in the internal
/// convention (vacuum variance 1/2).
struct QuadratureTargets {
  double mean_x = 0.0;
  double mean_p = 0.0;
  double second_x = 0.5;  // <x^2>
  double second_p = 0.5;
};

struct ConstraintSet {
  ReducedQubitState rho_a{1.0};
  std::array<QuadratureTargets, 2> targets;
  std::array<double, 2> weights{0.5, 0.5};
  FockDim dim{12};
  bool clamped = false;  // a sub-shot variance was raised to the floor

  static constexpr int moment_constraint_count() { return 8; }
  static constexpr int marginal_constraint_count() { return 4; }

  void validate() const {
    detail::require(std::abs(weights[0] + weights[1] - 1.0) <= 1e-12, "symbol weights must sum to 1");
    for (const auto& t : targets) {
      detail::require(std::isfinite(t.mean_x) && std::isfinite(t.mean_p) &&
                          std::isfinite(t.second_x) && std::isfinite(t.second_p),
                      "constraint targets must be finite");
      detail::require(t.second_x >= t.mean_x * t.mean_x && t.second_p >= t.mean_p * t.mean_p,
                      "second moments must dominate squared means");
    }
  }
};

struct SolverConfig {
  double feasibility_tolerance = 1e-7;
  double objective_tolerance = 1e-6;
  int max_iterations = 120;
  int start_dim = 0;  // 0: derived from the data
  int dim_step = 4;
  int max_dim = 48;
  bool keep_state = false;
  std::function<void(const sdp::IterationInfo&)> trace;

  void validate() const {
    detail::require(feasibility_tolerance > 0.0 && objective_tolerance > 0.0,
                    "solver tolerances must be > 0");
    detail::require(max_iterations > 0, "iteration cap must be > 0");
    detail::require(dim_step > 0 && max_dim >= 3, "invalid truncation schedule");
    detail::require(start_dim == 0 || start_dim >= 3, "start dimension must be >= 3");
  }
};

enum class SolveStatus { optimal, infeasible, max_iter };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::max_iter: return "max_iter";
  }
  return "max_iter";
}

struct NegativityResult {
  double negativity = 0.0;
  double log_negativity = 0.0;
  SolveStatus status = SolveStatus::max_iter;
  double primal_residual = 0.0;  // max relative violation of the data constraints
  double min_eigenvalue = 0.0;   // of the returned state
  std::optional<double> lower_bound;
  int dim_used = 0;
  int iterations = 0;
  double wall_seconds = 0.0;
  bool clamped = false;
  std::vector<std::pair<int, double>> convergence;  // (d, N) per level
  std::optional<BipartiteState> state;

  /// Nothing is certified unless the solve succeeded.
  double certified_negativity() const { return status == SolveStatus::optimal ? negativity : 0.0; }
};

/// SNL record -> internal targets. Means are already in the <a> convention
/// and pass through; variances are halved.
inline ConstraintSet build_constraints(const MomentRecord& record, double s, FockDim dim) {
  detail::require(std::isfinite(s) && s >= 0.0 && s <= 1.0, "overlap s must lie in [0, 1]");
  record.validate();
  ConstraintSet c;
  c.rho_a = ReducedQubitState(s);
  c.dim = dim;
  for (int k = 0; k < 2; ++k) {
    const auto& m = record.symbol[k];
    double vx = m.var_x, vp = m.var_p;
    if (vx <= 0.0 || vp <= 0.0 || m.sub_shot) {
      c.clamped = c.clamped || vx < kVarianceFloor || vp < kVarianceFloor;
      vx = std::max(vx, kVarianceFloor);
      vp = std::max(vp, kVarianceFloor);
    }
    auto& t = c.targets[k];
    t.mean_x = m.mean_x;
    t.mean_p = m.mean_p;
    t.second_x = 0.5 * vx + m.mean_x * m.mean_x;
    t.second_p = 0.5 * vp + m.mean_p * m.mean_p;
  }
  c.validate();
  return c;
}

/// Mean photon number of the conditional states, (<x^2> + <p^2> - 1)/2.
inline double max_photon_number(const ConstraintSet& c) {
  double n = 0.0;
  for (const auto& t : c.targets) n = std::max(n, 0.5 * (t.second_x + t.second_p - 1.0));
  return n;
}

/// max(12, ceil(10 + 10 n)), n the largest conditional mean photon number
/// (|beta|^2 for coherent outputs).
inline int default_dimension(const MomentRecord& record) {
  const ConstraintSet c = build_constraints(record, 1.0, FockDim(3));
  return std::max(12, static_cast<int>(std::ceil(10.0 + 10.0 * max_photon_number(c))));
}

namespace detail {

// Total excess noise <(x - <x>)^2> + <(p - <p>)^2> - 1 of a conditional state;
// zero only for a coherent state.
inline double excess_noise(const QuadratureTargets& t) {
  return (t.second_x - t.mean_x * t.mean_x) + (t.second_p - t.mean_p * t.mean_p) - 1.0;
}

inline constexpr double kFaceTolerance = 1e-12;

// The state variable is rho = V R V^dag. For a symbol at the vacuum-noise
// floor the data admit only the coherent state, so its block of V is the
// ground vector of the displaced truncated number operator (one column);
// otherwise it is the identity. Every row of V has exactly one nonzero.
struct Face {
  int full = 0;
  int reduced = 0;
  std::vector<int> col;       // per full index
  std::vector<Complex> coef;  // per full index
  std::array<bool, 2> pinned{false, false};

  CMatrix expand(const CMatrix& r) const {
    CMatrix v = CMatrix::Zero(full, reduced);
    for (int a = 0; a < full; ++a) v(a, col[a]) = coef[a];
    return v * r * v.adjoint();
  }
};

inline CVector ground_vector(const QuadratureTargets& t, FockDim dim) {
  const auto [xo, po] = quadrature_ops(dim);
  const auto [x2, p2] = quadrature_squares(dim);
  const int d = dim.value();
  const CMatrix h = x2.matrix() + p2.matrix() - 2.0 * t.mean_x * xo.matrix() -
                    2.0 * t.mean_p * po.matrix() +
                    (t.mean_x * t.mean_x + t.mean_p * t.mean_p) * CMatrix::Identity(d, d);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
  CVector g = eig.eigenvectors().col(0);
  const Complex lead = g(0);
  if (std::abs(lead) > 0.0) g *= std::conj(lead) / std::abs(lead);
  return g;
}

inline Face make_face(const ConstraintSet& c) {
  const int d = c.dim.value();
  Face f;
  f.full = 2 * d;
  f.col.resize(f.full);
  f.coef.resize(f.full);
  int offset = 0;
  for (int k = 0; k < 2; ++k) {
    f.pinned[k] = std::abs(excess_noise(c.targets[k])) <= kFaceTolerance;
    if (f.pinned[k]) {
      const CVector g = ground_vector(c.targets[k], c.dim);
      for (int m = 0; m < d; ++m) {
        f.col[k * d + m] = offset;
        f.coef[k * d + m] = g(m);
      }
      offset += 1;
    } else {
      for (int m = 0; m < d; ++m) {
        f.col[k * d + m] = offset + m;
        f.coef[k * d + m] = 1.0;
      }
      offset += d;
    }
  }
  f.reduced = offset;
  return f;
}

// Full-space operator entries on the state block, mapped through the face and
// merged.
template <typename Scalar>
void push_state_entries(sdp::SparseMatrix<Scalar>& out, const Face& f,
                        const std::vector<std::tuple<int, int, Complex>>& entries) {
  std::map<std::pair<int, int>, Complex> acc;
  for (const auto& [a, b, v] : entries) acc[{f.col[a], f.col[b]}] += std::conj(f.coef[a]) * v * f.coef[b];
  for (const auto& [rc, v] : acc) {
    if (std::abs(v) < 1e-300) continue;
    if constexpr (std::is_same_v<Scalar, double>) {
      out.push_back({0, rc.first, rc.second, v.real()});
    } else {
      out.push_back({0, rc.first, rc.second, v});
    }
  }
}

inline void block_entries(std::vector<std::tuple<int, int, Complex>>& out, int bi, int bj, int d,
                          const CMatrix& op) {
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      if (op(r, c) != Complex(0.0)) out.emplace_back(bi * d + r, bj * d + c, op(r, c));
}

// Complex data is needed only when a <p> target is nonzero: p is purely
// imaginary, so its expectation vanishes on real states, and the optimum of a
// problem invariant under complex conjugation is attained on real states.
inline bool needs_complex(const ConstraintSet& c) {
  for (const auto& t : c.targets)
    if (std::abs(t.mean_p) > 1e-13 * (1.0 + std::abs(t.mean_x))) return true;
  return false;
}

template <typename Scalar>
struct Assembly {
  sdp::Problem<Scalar> problem;
  Face face;
  // Data constraints in the full space, for residual checks on V R V^dag.
  std::vector<std::vector<std::tuple<int, int, Complex>>> data;
  std::vector<double> data_rhs;
};

template <typename Scalar>
Assembly<Scalar> assemble(const ConstraintSet& c) {
  constexpr bool complex_mode = !std::is_same_v<Scalar, double>;
  const int d = c.dim.value();
  const int n = 2 * d;
  Assembly<Scalar> a;
  a.face = make_face(c);
  auto& p = a.problem;
  p.block_sizes = {a.face.reduced, n, n};  // R, P, Y
  std::vector<double> rhs;
  using Terms = std::vector<std::tuple<int, int, Complex>>;
  // Constraints a pinned block satisfies by construction are checked but not
  // imposed; imposing them would only add truncation-level inconsistency.
  auto add = [&](Terms t, double target, bool impose) {
    if (impose) {
      sdp::SparseMatrix<Scalar> m;
      push_state_entries(m, a.face, t);
      p.constraints.push_back(std::move(m));
      rhs.push_back(target);
    }
    a.data.push_back(std::move(t));
    a.data_rhs.push_back(target);
  };

  const CMatrix id = CMatrix::Identity(d, d);
  for (int k = 0; k < 2; ++k) {
    Terms t;
    block_entries(t, k, k, d, id);
    add(std::move(t), c.weights[k], true);
  }
  {
    Terms t;
    block_entries(t, 0, 1, d, 0.5 * id);
    block_entries(t, 1, 0, d, 0.5 * id);
    add(std::move(t), 0.5 * c.rho_a.overlap(), true);
  }
  {
    Terms t;
    block_entries(t, 0, 1, d, Complex(0.0, 0.5) * id);
    block_entries(t, 1, 0, d, Complex(0.0, -0.5) * id);
    add(std::move(t), 0.0, complex_mode);
  }
  const auto [xo, po] = quadrature_ops(c.dim);
  const auto [x2, p2] = quadrature_squares(c.dim);
  for (int k = 0; k < 2; ++k) {
    const double w = c.weights[k];
    const auto& tg = c.targets[k];
    const bool free_block = !a.face.pinned[k];
    auto push = [&](const CMatrix& op, double target, bool impose) {
      Terms t;
      block_entries(t, k, k, d, op);
      add(std::move(t), w * target, impose && free_block);
    };
    push(xo.matrix(), tg.mean_x, true);
    push(po.matrix(), tg.mean_p, complex_mode);
    push(x2.matrix(), tg.second_x, true);
    push(p2.matrix(), tg.second_p, true);
  }

  // rho^{T_A} - P + Y = 0 against an orthonormal Hermitian basis E:
  // <E^{T_A}, rho> - <E, P> + <E, Y> = 0.
  auto pt_index = [d](int r, int c2) {
    const int i = r / d, m = r % d, j = c2 / d, nn = c2 % d;
    return std::pair{j * d + m, i * d + nn};
  };
  auto basis = [&](const std::vector<std::tuple<int, int, Complex>>& entries) {
    sdp::SparseMatrix<Scalar> m;
    Terms pt;
    for (const auto& [r, cc, v] : entries) {
      const auto [pr, pc] = pt_index(r, cc);
      pt.emplace_back(pr, pc, v);
    }
    push_state_entries(m, a.face, pt);
    for (const auto& [r, cc, v] : entries) {
      Scalar s;
      if constexpr (complex_mode) s = v; else s = v.real();
      m.push_back({1, r, cc, -s});
      m.push_back({2, r, cc, s});
    }
    p.constraints.push_back(std::move(m));
    rhs.push_back(0.0);
  };
  const double r2 = std::numbers::sqrt2 / 2.0;
  for (int i = 0; i < n; ++i) {
    basis({{i, i, 1.0}});
    for (int j = i + 1; j < n; ++j) {
      basis({{i, j, r2}, {j, i, r2}});
      if constexpr (complex_mode) basis({{i, j, Complex(0.0, r2)}, {j, i, Complex(0.0, -r2)}});
    }
  }
  for (int i = 0; i < n; ++i) p.objective.push_back({2, i, i, Scalar(1.0)});
  p.rhs = Eigen::Map<Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  return a;
}

inline double min_eigenvalue(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

// Negativity of an arbitrary (possibly slightly non-normalized) solver state.
inline double raw_negativity(const CMatrix& rho, int d) {
  CMatrix pt = partial_transpose(rho, 2, d);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (pt + pt.adjoint()), Eigen::EigenvaluesOnly);
  double neg = 0.0;
  for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k)
    neg -= std::min(0.0, eig.eigenvalues()(k));
  return neg;
}

template <typename Scalar>
NegativityResult solve_assembled(const ConstraintSet& c, const SolverConfig& cfg) {
  const Assembly<Scalar> a = assemble<Scalar>(c);
  const int d = c.dim.value();
  sdp::Options opt;
  opt.max_iterations = cfg.max_iterations;
  opt.primal_tolerance = std::min(1e-10, 1e-3 * cfg.feasibility_tolerance);
  opt.dual_tolerance = 1e-10;
  opt.gap_tolerance = std::min(1e-10, 1e-3 * cfg.objective_tolerance);
  opt.on_iteration = cfg.trace;
  const auto sol = sdp::solve(a.problem, opt);

  NegativityResult r;
  r.dim_used = d;
  r.iterations = sol.iterations;
  r.clamped = c.clamped;
  const CMatrix rho = a.face.expand(sol.primal[0].template cast<Complex>());

  // Relative violation of the data constraints, measured on the state itself.
  double resid = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    double v = 0.0;
    for (const auto& [row, col, val] : a.data[i]) v += (std::conj(val) * rho(row, col)).real();
    resid = std::max(resid, std::abs(v - a.data_rhs[i]) / (1.0 + std::abs(a.data_rhs[i])));
  }
  r.primal_residual = resid;
  r.min_eigenvalue = min_eigenvalue(rho);

  // Dual certificate. For any feasible X, Tr X = Tr rho + Tr P + Tr Y
  // = 2 + 2 Tr Y, so <C, X> >= b.y + lambda (2 + 2 <C, X>) with
  // lambda = min(0, lambda_min(C - A^T y)).
  {
    double lambda = 0.0;
    for (std::size_t b = 0; b < sol.slack.size(); ++b) {
      using M = typename sdp::Solution<Scalar>::Matrix;
      M cmat = M::Zero(sol.slack[b].rows(), sol.slack[b].cols());
      for (const auto& e : a.problem.objective)
        if (e.block == static_cast<int>(b)) cmat(e.row, e.col) += e.value;
      for (std::size_t i = 0; i < a.problem.constraints.size(); ++i)
        for (const auto& e : a.problem.constraints[i])
          if (e.block == static_cast<int>(b)) cmat(e.row, e.col) -= sol.dual(i) * e.value;
      Eigen::SelfAdjointEigenSolver<M> eig(0.5 * (cmat + cmat.adjoint()), Eigen::EigenvaluesOnly);
      lambda = std::min(lambda, eig.eigenvalues().minCoeff());
    }
    const double bound = (sol.dual_objective + 2.0 * lambda) / (1.0 - 2.0 * lambda);
    if (std::isfinite(bound)) r.lower_bound = std::max(0.0, bound);
  }

  const bool feasible = resid <= cfg.feasibility_tolerance &&
                        r.min_eigenvalue >= -cfg.feasibility_tolerance;
  switch (sol.status) {
    case sdp::Status::optimal:
      r.status = feasible ? SolveStatus::optimal : SolveStatus::infeasible;
      break;
    case sdp::Status::primal_infeasible:
      r.status = SolveStatus::infeasible;
      break;
    case sdp::Status::max_iterations:
      r.status = feasible ? SolveStatus::max_iter : SolveStatus::infeasible;
      break;
    case sdp::Status::numerical_failure:
      if (!feasible)
        throw NumericalError("interior-point solve broke down at d=" + std::to_string(d) +
                             " with constraint violation " + std::to_string(resid));
      r.status = SolveStatus::max_iter;
      break;
  }
  const double n_state = raw_negativity(rho, d);
  if (r.status == SolveStatus::optimal && r.lower_bound &&
      n_state - *r.lower_bound > cfg.objective_tolerance)
    r.status = SolveStatus::max_iter;

  r.negativity = r.status == SolveStatus::infeasible ? 0.0 : n_state;
  r.log_negativity = log_negativity(std::max(r.negativity, 0.0));
  if (cfg.keep_state && r.status != SolveStatus::infeasible) {
    CMatrix h = 0.5 * (rho + rho.adjoint());
    r.state.emplace(std::move(h), c.dim);
  }
  return r;
}

}  // namespace detail

/// Minimal negativity over all states consistent with the constraint set at
/// its truncation. An infeasible set reports status `infeasible`, the largest
/// violation in `primal_residual`, and certifies nothing (N = 0).
inline NegativityResult min_negativity(const ConstraintSet& constraints, const SolverConfig& cfg = {}) {
  constraints.validate();
  cfg.validate();
  detail::require(constraints.dim.value() >= 3, "quantifier needs a truncation of at least 3");
  const auto t0 = std::chrono::steady_clock::now();
  NegativityResult r = detail::needs_complex(constraints)
                           ? detail::solve_assembled<Complex>(constraints, cfg)
                           : detail::solve_assembled<double>(constraints, cfg);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.convergence = {{r.dim_used, r.negativity}};
  return r;
}

/// Solves at d0, d0 + step, ... until consecutive levels agree within the
/// objective tolerance.
inline NegativityResult truncation_converge(const MomentRecord& record, double s,
                                            const SolverConfig& cfg = {}) {
  cfg.validate();
  int d = cfg.start_dim > 0 ? cfg.start_dim : default_dimension(record);
  std::vector<std::pair<int, double>> trace;
  double wall = 0.0;
  std::optional<NegativityResult> prev;
  while (true) {
    NegativityResult cur = min_negativity(build_constraints(record, s, FockDim(d)), cfg);
    wall += cur.wall_seconds;
    trace.emplace_back(d, cur.negativity);
    // N is non-increasing in d, so a vanishing optimum stays vanishing.
    if (cur.status == SolveStatus::optimal && cur.negativity <= 0.5 * cfg.objective_tolerance) {
      cur.convergence = trace;
      cur.wall_seconds = wall;
      return cur;
    }
    if (prev) {
      const bool both_infeasible =
          prev->status == SolveStatus::infeasible && cur.status == SolveStatus::infeasible;
      const bool settled = prev->status == SolveStatus::optimal && cur.status == SolveStatus::optimal &&
                           std::abs(cur.negativity - prev->negativity) < cfg.objective_tolerance;
      if (both_infeasible || settled) {
        cur.convergence = trace;
        cur.wall_seconds = wall;
        return cur;
      }
    }
    if (d + cfg.dim_step > cfg.max_dim) {
      cur.convergence = trace;
      cur.wall_seconds = wall;
      if (cur.status == SolveStatus::optimal) cur.status = SolveStatus::max_iter;
      return cur;
    }
    prev = std::move(cur);
    d += cfg.dim_step;
  }
}

/// Shifts the record against entanglement by k standard errors: variances
/// up by k se(var), mean magnitudes down by k se(mean) (never past zero).
inline MomentRecord perturb_adversarially(const MomentRecord& record, const MomentUncertainty& unc,
                                          double k) {
  detail::require(std::isfinite(k) && k >= 0.0, "k-sigma must be >= 0");
  MomentRecord out = record;
  auto shrink = [k](double m, double se) {
    const double mag = std::max(0.0, std::abs(m) - k * se);
    return std::copysign(mag, m);
  };
  for (int i = 0; i < 2; ++i) {
    auto& m = out.symbol[i];
    const auto& u = unc.symbol[i];
    m.var_x += k * u.var_x;
    m.var_p += k * u.var_p;
    m.mean_x = shrink(m.mean_x, u.mean_x);
    m.mean_p = shrink(m.mean_p, u.mean_p);
    m.sub_shot = m.var_x <= 0.0 || m.var_p <= 0.0;
  }
  return out;
}

/// One converged solve per k; the overlap s stays that of the unperturbed data.
inline std::vector<NegativityResult> quantify_with_error_bars(const MomentRecord& record,
                                                              const MomentUncertainty& unc, double s,
                                                              const std::vector<double>& k_sigmas,
                                                              const SolverConfig& cfg = {}) {
  std::vector<NegativityResult> out;
  out.reserve(k_sigmas.size());
  for (double k : k_sigmas) out.push_back(truncation_converge(perturb_adversarially(record, unc, k), s, cfg));
  return out;
}

inline nlohmann::ordered_json to_json(const NegativityResult& r, bool include_timing = false) {
  nlohmann::ordered_json j;
  j["negativity"] = r.negativity;
  j["log_negativity"] = r.log_negativity;
  j["status"] = to_string(r.status);
  j["primal_residual"] = r.primal_residual;
  j["min_eigenvalue"] = r.min_eigenvalue;
  if (r.lower_bound)
    j["lower_bound"] = *r.lower_bound;
  else
    j["lower_bound"] = nullptr;
  j["gap"] = r.lower_bound ? nlohmann::ordered_json(r.negativity - *r.lower_bound)
                           : nlohmann::ordered_json(nullptr);
  j["d_used"] = r.dim_used;
  j["iterations"] = r.iterations;
  j["clamped"] = r.clamped;
  nlohmann::ordered_json conv = nlohmann::ordered_json::array();
  for (const auto& [d, n] : r.convergence) conv.push_back({{"d", d}, {"negativity", n}});
  j["convergence"] = conv;
  if (include_timing) j["wall_seconds"] = r.wall_seconds;
  return j;
}

}  // namespace cvbench

#endif  // CVBENCH_QUANTIFIER_HPP
