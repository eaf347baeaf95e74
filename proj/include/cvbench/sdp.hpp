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

#ifndef CVBENCH_SDP_HPP
#define CVBENCH_SDP_HPP

// Primal-dual interior-point solver for small block-diagonal semidefinite
// programs with sparse Hermitian data:
//
//   minimize  <C, X>   subject to  <A_i, X> = b_i,  X >= 0 (blockwise)
//   maximize  b.y      subject to  C - sum_i y_i A_i = S >= 0
//
// with <A, X> = Re Tr(A^dag X). Search directions are the HKM directions with
// Mehrotra predictor-corrector steps from an infeasible starting point.
// Scalar is double (real symmetric blocks) or std::complex<double>.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <type_traits>
#include <vector>

#include "cvbench/errors.hpp"

namespace cvbench::sdp {

template <typename Scalar>
struct Entry {
  int block;
  int row;
  int col;
  Scalar value;
};

/// Hermitian sparse matrix over the block structure. Every stored nonzero is
/// listed, both (r, c) and (c, r) for off-diagonal entries.
template <typename Scalar>
using SparseMatrix = std::vector<Entry<Scalar>>;

template <typename Scalar>
struct Problem {
  std::vector<int> block_sizes;
  SparseMatrix<Scalar> objective;
  std::vector<SparseMatrix<Scalar>> constraints;
  Eigen::VectorXd rhs;
};

struct IterationInfo {
  int iteration;
  double primal_objective;
  double dual_objective;
  double primal_infeasibility;
  double dual_infeasibility;
  double mu;
};

struct Options {
  double primal_tolerance = 1e-10;
  double dual_tolerance = 1e-10;
  double gap_tolerance = 1e-10;
  // Accepted when progress stalls before the strict tolerances are met.
  double acceptable_tolerance = 1e-8;
  int stall_window = 8;
  int max_iterations = 120;
  std::function<void(const IterationInfo&)> on_iteration;
};

enum class Status { optimal, primal_infeasible, max_iterations, numerical_failure };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::primal_infeasible: return "infeasible";
    case Status::max_iterations: return "max_iter";
    case Status::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

template <typename Scalar>
struct Solution {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Status status = Status::numerical_failure;
  std::vector<Matrix> primal;
  std::vector<Matrix> slack;
  Eigen::VectorXd dual;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_infeasibility = INFINITY;
  double dual_infeasibility = INFINITY;
  int iterations = 0;
};

namespace detail {

inline double re(double v) { return v; }
inline double re(const std::complex<double>& v) { return v.real(); }
inline double cj(double v) { return v; }
inline std::complex<double> cj(const std::complex<double>& v) { return std::conj(v); }

template <typename Matrix>
Matrix herm(const Matrix& m) {
  return (m + m.adjoint()) * 0.5;
}

template <typename Matrix>
double inner(const Matrix& a, const Matrix& b) {
  return re((a.adjoint() * b).trace());
}

// Largest t with X + t dX >= 0 (infinity if dX keeps X in the cone).
template <typename Matrix>
double max_step(const Matrix& x, const Matrix& dx) {
  Eigen::LLT<Matrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  Matrix b = llt.matrixL().solve(dx);
  b = llt.matrixL().solve(b.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(herm(b), Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  return lmin >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

// Constraint data regrouped per block for the Schur complement loops.
template <typename Scalar>
struct BlockTerms {
  std::vector<int> constraint;  // constraint id per group
  std::vector<int> offset;      // group g spans [offset[g], offset[g + 1])
  std::vector<int> row;
  std::vector<int> col;
  std::vector<Scalar> value;
};

template <typename Scalar>
class Engine {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Blocks = std::vector<Matrix>;

  explicit Engine(const Problem<Scalar>& p) : p_(p), m_(static_cast<int>(p.constraints.size())) {
    validate();
    const int nb = static_cast<int>(p_.block_sizes.size());
    terms_.resize(nb);
    for (int b = 0; b < nb; ++b) terms_[b].offset.push_back(0);
    for (int i = 0; i < m_; ++i) {
      for (int b = 0; b < nb; ++b) {
        auto& t = terms_[b];
        const auto before = t.row.size();
        for (const auto& e : p_.constraints[i]) {
          if (e.block != b) continue;
          t.row.push_back(e.row);
          t.col.push_back(e.col);
          t.value.push_back(e.value);
        }
        if (t.row.size() != before) {
          t.constraint.push_back(i);
          t.offset.push_back(static_cast<int>(t.row.size()));
        }
      }
    }
    c_ = to_dense(p_.objective);
  }

  Blocks zeros() const {
    Blocks out;
    for (int n : p_.block_sizes) out.push_back(Matrix::Zero(n, n));
    return out;
  }

  Blocks to_dense(const SparseMatrix<Scalar>& s) const {
    Blocks out = zeros();
    for (const auto& e : s) out[e.block](e.row, e.col) += e.value;
    return out;
  }

  // A(W)_i = <A_i, W>
  Eigen::VectorXd apply(const Blocks& w) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(m_);
    for (std::size_t b = 0; b < terms_.size(); ++b) {
      const auto& t = terms_[b];
      for (std::size_t g = 0; g < t.constraint.size(); ++g) {
        double acc = 0.0;
        for (int k = t.offset[g]; k < t.offset[g + 1]; ++k)
          acc += re(cj(t.value[k]) * w[b](t.row[k], t.col[k]));
        out(t.constraint[g]) += acc;
      }
    }
    return out;
  }

  // sum_i y_i A_i
  Blocks adjoint(const Eigen::VectorXd& y) const {
    Blocks out = zeros();
    for (std::size_t b = 0; b < terms_.size(); ++b) {
      const auto& t = terms_[b];
      for (std::size_t g = 0; g < t.constraint.size(); ++g) {
        const double yi = y(t.constraint[g]);
        for (int k = t.offset[g]; k < t.offset[g + 1]; ++k)
          out[b](t.row[k], t.col[k]) += yi * t.value[k];
      }
    }
    return out;
  }

  // M_ij = sum_b Re Tr(A_i X A_j Z), Z = S^{-1}.
  Eigen::MatrixXd schur(const Blocks& x, const Blocks& z) const {
    Eigen::MatrixXd mm = Eigen::MatrixXd::Zero(m_, m_);
    for (std::size_t b = 0; b < terms_.size(); ++b) {
      const auto& t = terms_[b];
      const Matrix& xb = x[b];
      const Matrix& zb = z[b];
      const int groups = static_cast<int>(t.constraint.size());
      for (int g = 0; g < groups; ++g) {
        const int i = t.constraint[g];
        for (int h = g; h < groups; ++h) {
          const int j = t.constraint[h];
          Scalar acc = Scalar(0);
          for (int e = t.offset[g]; e < t.offset[g + 1]; ++e) {
            const int pr = t.row[e];
            const int qc = t.col[e];
            const Scalar a = t.value[e];
            for (int f = t.offset[h]; f < t.offset[h + 1]; ++f)
              acc += a * xb(qc, t.row[f]) * t.value[f] * zb(t.col[f], pr);
          }
          mm(std::min(i, j), std::max(i, j)) += re(acc);
        }
      }
    }
    return mm.selfadjointView<Eigen::Upper>();
  }

  Solution<Scalar> run(const Options& opt) const {
    const int nb = static_cast<int>(p_.block_sizes.size());
    int n_total = 0;
    for (int n : p_.block_sizes) n_total += n;
    const Eigen::VectorXd& b = p_.rhs;
    const double norm_b = b.norm();
    double norm_c = 0.0;
    for (const auto& cb : c_) norm_c += cb.squaredNorm();
    norm_c = std::sqrt(norm_c);

    // Starting point scaled to the data.
    double xi = 10.0;
    double eta = std::max(10.0, norm_c);
    for (int i = 0; i < m_; ++i) {
      double na = 0.0;
      for (const auto& e : p_.constraints[i]) na += std::norm(std::complex<double>(e.value));
      na = std::sqrt(na);
      int nmax = 0;
      for (int n : p_.block_sizes) nmax = std::max(nmax, n);
      xi = std::max(xi, nmax * (1.0 + std::abs(b(i))) / (1.0 + na));
      eta = std::max(eta, na);
    }
    Blocks x = zeros();
    Blocks s = zeros();
    for (int k = 0; k < nb; ++k) {
      x[k].diagonal().setConstant(Scalar(xi));
      s[k].diagonal().setConstant(Scalar(eta));
    }
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m_);

    Solution<Scalar> sol;
    int stalls = 0;
    // Best iterate by max(pinf, dinf, gap).
    Blocks best_x, best_s;
    Eigen::VectorXd best_y;
    Solution<Scalar> best_sol;
    double best_merit = std::numeric_limits<double>::infinity();
    int since_best = 0;
    bool restore_best = false;
    auto fail_to_best = [&] {
      restore_best = true;
      sol = best_sol;
      sol.status = best_merit <= opt.acceptable_tolerance ? Status::optimal : Status::numerical_failure;
    };
    for (int it = 0;; ++it) {
      const Eigen::VectorXd rp = b - apply(x);
      Blocks rd = adjoint(y);
      double rd_norm2 = 0.0;
      double pobj = 0.0;
      double xs = 0.0;
      for (int k = 0; k < nb; ++k) {
        rd[k] = c_[k] - rd[k] - s[k];
        rd_norm2 += rd[k].squaredNorm();
        pobj += inner(c_[k], x[k]);
        xs += inner(x[k], s[k]);
      }
      const double dobj = b.dot(y);
      const double pinf = rp.norm() / (1.0 + norm_b);
      const double dinf = std::sqrt(rd_norm2) / (1.0 + norm_c);
      const double mu = xs / n_total;
      sol.primal_objective = pobj;
      sol.dual_objective = dobj;
      sol.primal_infeasibility = pinf;
      sol.dual_infeasibility = dinf;
      sol.iterations = it;
      if (opt.on_iteration) opt.on_iteration({it, pobj, dobj, pinf, dinf, mu});

      const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
      const double merit = std::max({pinf, dinf, gap});
      if (merit < 0.9 * best_merit) since_best = 0; else ++since_best;
      if (merit < best_merit) {
        best_merit = merit;
        best_x = x;
        best_s = s;
        best_y = y;
        best_sol = sol;
      }
      if (since_best >= opt.stall_window || stalls >= 4 || it >= opt.max_iterations) {
        restore_best = true;
        sol = best_sol;
        sol.iterations = it;
        sol.status = best_merit <= opt.acceptable_tolerance ? Status::optimal : Status::max_iterations;
        break;
      }
      if (pinf <= opt.primal_tolerance && dinf <= opt.dual_tolerance &&
          gap <= opt.gap_tolerance && xs / (1.0 + std::abs(pobj)) <= 10 * opt.gap_tolerance) {
        sol.status = Status::optimal;
        break;
      }
      // b.y unbounded above on (nearly) dual-feasible points certifies that
      // the primal constraints cannot be met.
      if (dinf <= 1e-6 && dobj > 1e8 * std::max(1.0, norm_c)) {
        sol.status = Status::primal_infeasible;
        break;
      }

      Blocks z(nb);
      bool factored = true;
      for (int k = 0; k < nb && factored; ++k) {
        Eigen::LLT<Matrix> llt(s[k]);
        factored = llt.info() == Eigen::Success;
        if (!factored) break;
        z[k] = llt.solve(Matrix::Identity(s[k].rows(), s[k].cols()));
        z[k] = herm(z[k]);
      }
      if (!factored) {
        fail_to_best();
        break;
      }
      Eigen::MatrixXd schur_m = schur(x, z);
      Eigen::LLT<Eigen::MatrixXd> chol(schur_m);
      if (chol.info() != Eigen::Success) {
        const double shift = 1e-13 * std::max(1.0, schur_m.diagonal().maxCoeff());
        schur_m.diagonal().array() += shift;
        chol.compute(schur_m);
        if (chol.info() != Eigen::Success) {
          fail_to_best();
          break;
        }
      }

      // X Rd Z is shared by predictor and corrector.
      Blocks xrdz(nb);
      for (int k = 0; k < nb; ++k) xrdz[k] = x[k] * rd[k] * z[k];
      const Eigen::VectorXd a_xrdz = apply(xrdz);

      auto direction = [&](const Blocks& rcz, Blocks& dx, Blocks& ds, Eigen::VectorXd& dy) {
        const Eigen::VectorXd rhs = rp - apply(rcz) + a_xrdz;
        dy = chol.solve(rhs);
        ds = adjoint(dy);
        for (int k = 0; k < nb; ++k) {
          ds[k] = rd[k] - ds[k];
          dx[k] = herm(Matrix(rcz[k] - x[k] * ds[k] * z[k]));
        }
      };
      auto steps = [&](const Blocks& dx, const Blocks& ds, double& ap, double& ad) {
        ap = ad = std::numeric_limits<double>::infinity();
        for (int k = 0; k < nb; ++k) {
          ap = std::min(ap, max_step(x[k], dx[k]));
          ad = std::min(ad, max_step(s[k], ds[k]));
        }
      };

      // Predictor.
      Blocks rcz(nb);
      for (int k = 0; k < nb; ++k) rcz[k] = -x[k];
      Blocks dx(nb), ds(nb);
      Eigen::VectorXd dy;
      direction(rcz, dx, ds, dy);
      double ap = 0.0, ad = 0.0;
      steps(dx, ds, ap, ad);
      ap = std::min(1.0, ap);
      ad = std::min(1.0, ad);
      double xs_aff = 0.0;
      for (int k = 0; k < nb; ++k)
        xs_aff += inner(Matrix(x[k] + ap * dx[k]), Matrix(s[k] + ad * ds[k]));
      const double mu_aff = std::max(0.0, xs_aff / n_total);
      const double ratio = mu > 0.0 ? mu_aff / mu : 0.0;
      const double sigma = std::clamp(ratio * ratio * ratio, 0.0, 1.0);

      // Corrector.
      for (int k = 0; k < nb; ++k)
        rcz[k] = (sigma * mu) * z[k] - x[k] - dx[k] * ds[k] * z[k];
      direction(rcz, dx, ds, dy);
      steps(dx, ds, ap, ad);
      const double gamma = 0.9 + 0.09 * std::min({1.0, ap, ad});
      ap = std::min(1.0, gamma * ap);
      ad = std::min(1.0, gamma * ad);
      stalls = (ap < 1e-8 && ad < 1e-8) ? stalls + 1 : 0;

      for (int k = 0; k < nb; ++k) {
        x[k] = herm(Matrix(x[k] + ap * dx[k]));
        s[k] = herm(Matrix(s[k] + ad * ds[k]));
      }
      y += ad * dy;
    }
    if (restore_best)
      store(sol, best_x, best_s, best_y);
    else
      store(sol, x, s, y);
    return sol;
  }

 private:
  void validate() const {
    const int nb = static_cast<int>(p_.block_sizes.size());
    cvbench::detail::require(nb > 0, "sdp: no blocks");
    for (int n : p_.block_sizes) cvbench::detail::require(n > 0, "sdp: empty block");
    cvbench::detail::require(p_.rhs.size() == m_, "sdp: rhs size does not match constraints");
    auto check = [&](const SparseMatrix<Scalar>& s) {
      for (const auto& e : s) {
        cvbench::detail::require(e.block >= 0 && e.block < nb, "sdp: entry block out of range");
        const int n = p_.block_sizes[e.block];
        cvbench::detail::require(e.row >= 0 && e.row < n && e.col >= 0 && e.col < n,
                                 "sdp: entry index out of range");
      }
    };
    check(p_.objective);
    for (const auto& c : p_.constraints) check(c);
  }

  static void store(Solution<Scalar>& sol, const Blocks& x, const Blocks& s,
                    const Eigen::VectorXd& y) {
    sol.primal = x;
    sol.slack = s;
    sol.dual = y;
  }

  const Problem<Scalar>& p_;
  int m_;
  std::vector<BlockTerms<Scalar>> terms_;
  Blocks c_;
};

}  // namespace detail

template <typename Scalar>
Solution<Scalar> solve(const Problem<Scalar>& problem, const Options& options = {}) {
  return detail::Engine<Scalar>(problem).run(options);
}

}  // namespace cvbench::sdp

#endif  // CVBENCH_SDP_HPP
