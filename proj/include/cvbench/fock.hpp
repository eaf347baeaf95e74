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

#ifndef CVBENCH_FOCK_HPP
#define CVBENCH_FOCK_HPP

// Truncated Fock-space linear algebra: coherent states, quadrature operators,
// partial transposition and the negativity measures.
//
// Quadrature convention: x = (a + a^dag)/sqrt(2), p = -i(a - a^dag)/sqrt(2), so
// the vacuum variance is 1/2 per quadrature and <a> = (<x> + i<p>)/sqrt(2).
// Reported variances are rescaled to shot-noise units (vacuum = 1) elsewhere.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include "cvbench/errors.hpp"

namespace cvbench {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Fock-space truncation: photon numbers 0..d-1.
class FockDim {
 public:
  explicit FockDim(int d) : d_(d) {
    detail::require(d >= 2, "Fock truncation dimension must be >= 2, got " + std::to_string(d));
  }

  int value() const noexcept { return d_; }
  friend bool operator==(FockDim, FockDim) = default;

 private:
  int d_;
};

namespace detail {

inline double hermiticity_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline bool all_finite(const CMatrix& m) { return m.allFinite(); }

}  // namespace detail

class StateVector {
 public:
  explicit StateVector(CVector amplitudes) : amps_(std::move(amplitudes)) {
    detail::require(amps_.size() >= 2, "state vector needs at least two amplitudes");
    detail::require(amps_.allFinite(), "state vector has non-finite amplitudes");
    detail::require(amps_.squaredNorm() <= 1.0 + 1e-12, "state vector norm exceeds 1");
  }

  const CVector& amplitudes() const noexcept { return amps_; }
  int dim() const noexcept { return static_cast<int>(amps_.size()); }
  double squared_norm() const { return amps_.squaredNorm(); }

  /// <this|other>
  Complex inner(const StateVector& other) const {
    detail::require(other.dim() == dim(), "inner product of states with different truncation");
    return amps_.dot(other.amps_);
  }

 private:
  CVector amps_;
};

class HermitianOperator {
 public:
  static constexpr double kTolerance = 1e-12;

  explicit HermitianOperator(CMatrix entries) : m_(std::move(entries)) {
    detail::require(m_.rows() == m_.cols() && m_.rows() >= 1, "operator must be square");
    detail::require(m_.allFinite(), "operator has non-finite entries");
    detail::require(detail::hermiticity_defect(m_) <= kTolerance, "operator is not Hermitian");
  }

  const CMatrix& matrix() const noexcept { return m_; }
  int dim() const noexcept { return static_cast<int>(m_.rows()); }

  double expectation(const StateVector& psi) const {
    detail::require(psi.dim() == dim(), "expectation with mismatched truncation");
    return psi.amplitudes().dot(m_ * psi.amplitudes()).real();
  }

 private:
  CMatrix m_;
};

/// Qubit (A) times truncated mode (B). Entries are 2x2 blocks of d x d
/// operators; block (i, j) is <i|_A rho |j>_A.
class BipartiteState {
 public:
  BipartiteState(CMatrix entries, FockDim dim) : m_(std::move(entries)), d_(dim.value()) {
    detail::require(m_.rows() == 2 * d_ && m_.cols() == 2 * d_,
                    "bipartite state must be (2d)x(2d)");
    detail::require(m_.allFinite(), "bipartite state has non-finite entries");
    const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
    detail::require(detail::hermiticity_defect(m_) <= 1e-10 * scale,
                    "bipartite state is not Hermitian");
  }

  const CMatrix& matrix() const noexcept { return m_; }
  FockDim dim() const { return FockDim(d_); }

  auto block(int i, int j) const { return m_.block(i * d_, j * d_, d_, d_); }
  double trace() const { return m_.trace().real(); }

 private:
  CMatrix m_;
  int d_;
};

struct QuadraturePair {
  HermitianOperator x;
  HermitianOperator p;
};

/// Truncated ladder operator, a|n> = sqrt(n)|n-1>.
inline CMatrix annihilation(FockDim dim) {
  const int d = dim.value();
  CMatrix a = CMatrix::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

/// Coherent state amplitudes exp(-|alpha|^2/2) alpha^n / sqrt(n!), n < d.
/// Not renormalized: the truncation loss stays visible in the norm.
inline StateVector coherent_state(Complex alpha, FockDim dim) {
  detail::require(std::isfinite(alpha.real()) && std::isfinite(alpha.imag()),
                  "coherent amplitude must be finite");
  const int d = dim.value();
  CVector c(d);
  c(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < d; ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return StateVector(std::move(c));
}

/// x and p built from the truncated ladder operator. The commutator equals
/// i on photon numbers below d-1 and deviates in the top corner.
inline QuadraturePair quadrature_ops(FockDim dim) {
  const CMatrix a = annihilation(dim);
  const CMatrix ad = a.adjoint();
  const double r = 1.0 / std::sqrt(2.0);
  CMatrix x = r * (a + ad);
  CMatrix p = Complex(0.0, -r) * (a - ad);
  return {HermitianOperator(std::move(x)), HermitianOperator(std::move(p))};
}

/// Projections P x^2 P and P p^2 P of the untruncated squares onto the
/// truncated space. Unlike (PxP)^2 these give exact second moments for any
/// state supported on photon numbers below d.
inline QuadraturePair quadrature_squares(FockDim dim) {
  const int d = dim.value();
  CMatrix x2 = CMatrix::Zero(d, d);
  CMatrix p2 = CMatrix::Zero(d, d);
  for (int n = 0; n < d; ++n) {
    x2(n, n) = p2(n, n) = n + 0.5;
    if (n + 2 < d) {
      const double v = 0.5 * std::sqrt(static_cast<double>((n + 1) * (n + 2)));
      x2(n, n + 2) = x2(n + 2, n) = v;
      p2(n, n + 2) = p2(n + 2, n) = -v;
    }
  }
  return {HermitianOperator(std::move(x2)), HermitianOperator(std::move(p2))};
}

/// Partial transpose on the first factor of a (dim_a * dim_b)-dimensional
/// operator: <i m| M^T_A |j n> = <j m| M |i n>.
inline CMatrix partial_transpose(const CMatrix& m, int dim_a, int dim_b) {
  detail::require(m.rows() == dim_a * dim_b && m.cols() == dim_a * dim_b,
                  "partial transpose: shape does not match subsystem dimensions");
  CMatrix out(m.rows(), m.cols());
  for (int i = 0; i < dim_a; ++i)
    for (int j = 0; j < dim_a; ++j)
      out.block(i * dim_b, j * dim_b, dim_b, dim_b) = m.block(j * dim_b, i * dim_b, dim_b, dim_b);
  return out;
}

/// Swaps the off-diagonal qubit blocks.
inline CMatrix partial_transpose_a(const BipartiteState& rho) {
  return partial_transpose(rho.matrix(), 2, rho.dim().value());
}

/// Absolute sum of the negative eigenvalues of the partial transpose, for an
/// arbitrary bipartition. Equals (||M^T_A||_1 - 1)/2 at unit trace.
inline double negativity(const CMatrix& m, int dim_a, int dim_b) {
  detail::require(m.allFinite(), "negativity: non-finite input");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  detail::require(detail::hermiticity_defect(m) <= 1e-10 * scale,
                  "negativity: input is not Hermitian");
  detail::require(std::abs(m.trace().real() - 1.0) <= 1e-8, "negativity: trace is not 1");
  CMatrix pt = partial_transpose(m, dim_a, dim_b);
  pt = 0.5 * (pt + pt.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(pt, Eigen::EigenvaluesOnly);
  double neg = 0.0;
  for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k)
    if (eig.eigenvalues()(k) < 0.0) neg -= eig.eigenvalues()(k);
  return neg;
}

inline double negativity(const BipartiteState& rho) {
  return negativity(rho.matrix(), 2, rho.dim().value());
}

/// log2(2N + 1): one unit for a maximally entangled qubit pair.
inline double log_negativity(double n) {
  detail::require(std::isfinite(n) && n >= 0.0, "log-negativity needs N >= 0");
  return std::log2(2.0 * n + 1.0);
}

}  // namespace cvbench

#endif  // CVBENCH_FOCK_HPP
