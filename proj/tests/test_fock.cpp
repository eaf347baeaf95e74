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

#include <cmath>
#include <random>

#include "cvbench/fock.hpp"
#include "oracles.hpp"

namespace {

using namespace cvbench;

TEST(FockDim, RejectsBelowTwo) {
  EXPECT_THROW(FockDim(1), InvalidInput);
  EXPECT_THROW(FockDim(-3), InvalidInput);
  EXPECT_EQ(FockDim(2).value(), 2);
}

TEST(StateVector, RejectsNormAboveOne) {
  CVector v(2);
  v << 1.0, 0.1;
  EXPECT_THROW(StateVector{v}, InvalidInput);
}

TEST(HermitianOperator, RejectsNonHermitian) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(HermitianOperator{m}, InvalidInput);
}

TEST(CoherentState, OverlapOfOppositeAmplitudes) {
  for (double a : {0.1, 0.3, 0.5, 1.0}) {
    const auto plus = coherent_state(a, FockDim(30));
    const auto minus = coherent_state(-a, FockDim(30));
    EXPECT_NEAR(minus.inner(plus).real(), std::exp(-2.0 * a * a), 1e-12);
    EXPECT_NEAR(plus.squared_norm(), 1.0, 1e-12);
  }
}

TEST(CoherentState, TruncationLossVisibleInNorm) {
  const auto psi = coherent_state(2.0, FockDim(4));
  EXPECT_LT(psi.squared_norm(), 0.5);
}

TEST(Quadratures, CommutatorBelowCut) {
  const FockDim d(10);
  const auto [x, p] = quadrature_ops(d);
  const CMatrix comm = x.matrix() * p.matrix() - p.matrix() * x.matrix();
  for (int n = 0; n < 9; ++n) EXPECT_NEAR(std::abs(comm(n, n) - Complex(0.0, 1.0)), 0.0, 1e-12);
}

TEST(Quadratures, CoherentMomentsMatchVacuumNoise) {
  const Complex beta(0.4, -0.3);
  const FockDim d(40);
  const auto psi = coherent_state(beta, d);
  const auto [x, p] = quadrature_ops(d);
  const auto [x2, p2] = quadrature_squares(d);
  EXPECT_NEAR(x.expectation(psi), std::sqrt(2.0) * beta.real(), 1e-12);
  EXPECT_NEAR(p.expectation(psi), std::sqrt(2.0) * beta.imag(), 1e-12);
  EXPECT_NEAR(x2.expectation(psi) - std::pow(x.expectation(psi), 2), 0.5, 1e-12);
  EXPECT_NEAR(p2.expectation(psi) - std::pow(p.expectation(psi), 2), 0.5, 1e-12);
}

TEST(Quadratures, ProjectedSquaresMatchIndependentLadderAlgebra) {
  std::mt19937_64 rng(5);
  const auto rho = oracle::random_consistent_state(rng, 6, 3);
  const auto blk = rho.block(0, 0, 6, 6);
  const auto ref = oracle::block_moments(blk);
  const auto [x2, p2] = quadrature_squares(FockDim(6));
  const double tr = blk.trace().real();
  EXPECT_NEAR((blk * x2.matrix()).trace().real() / tr, ref.x2, 1e-12);
  EXPECT_NEAR((blk * p2.matrix()).trace().real() / tr, ref.p2, 1e-12);
}

TEST(PartialTranspose, IsAnInvolution) {
  std::mt19937_64 rng(1);
  const auto rho = oracle::random_consistent_state(rng, 5, 4);
  EXPECT_LT((partial_transpose(partial_transpose(rho, 2, 5), 2, 5) - rho).norm(), 1e-15);
}

TEST(PartialTranspose, RejectsShapeMismatch) {
  EXPECT_THROW(partial_transpose(CMatrix::Identity(6, 6), 2, 4), InvalidInput);
}

TEST(Negativity, BellStateIsOneHalf) {
  CMatrix rho = CMatrix::Zero(4, 4);
  rho(0, 0) = rho(0, 3) = rho(3, 0) = rho(3, 3) = 0.5;
  EXPECT_NEAR(negativity(rho, 2, 2), 0.5, 1e-14);
  EXPECT_NEAR(log_negativity(0.5), 1.0, 1e-15);
}

TEST(Negativity, ProductStateIsZero) {
  const auto psi = coherent_state(0.7, FockDim(20));
  CMatrix rho = CMatrix::Zero(40, 40);
  const CMatrix b = psi.amplitudes() * psi.amplitudes().adjoint() / psi.squared_norm();
  rho.block(0, 0, 20, 20) = 0.5 * b;
  rho.block(20, 20, 20, 20) = 0.5 * b;
  EXPECT_NEAR(negativity(rho, 2, 20), 0.0, 1e-14);
}

TEST(Negativity, MatchesIndependentOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const auto rho = oracle::random_consistent_state(rng, 4, 1 + trial);
    EXPECT_NEAR(negativity(rho, 2, 4), oracle::negativity(rho, 4), 1e-12);
  }
}

TEST(Negativity, PureSchmidtFormula) {
  // (|0>|b> + |1>|-b>)/sqrt 2 has N = sqrt(1 - s^2)/2, s = <-b|b>.
  const double b = 0.5;
  const auto rho = oracle::two_block_state(b, 1.0, 30);
  const double s = std::exp(-2.0 * b * b);
  EXPECT_NEAR(negativity(rho, 2, 30), std::sqrt(1.0 - s * s) / 2.0, 1e-12);
}

TEST(Negativity, RejectsBadInput) {
  CMatrix m = CMatrix::Identity(4, 4);
  EXPECT_THROW(negativity(m, 2, 2), InvalidInput);  // trace 4
  m = 0.25 * CMatrix::Identity(4, 4);
  m(0, 1) = 0.1;
  EXPECT_THROW(negativity(m, 2, 2), InvalidInput);  // not Hermitian
  m = 0.25 * CMatrix::Identity(4, 4);
  m(0, 0) = std::nan("");
  EXPECT_THROW(negativity(m, 2, 2), InvalidInput);
}

TEST(LogNegativity, Fixtures) {
  EXPECT_EQ(log_negativity(0.0), 0.0);
  EXPECT_DOUBLE_EQ(log_negativity(0.5), 1.0);
  EXPECT_THROW(log_negativity(-1e-3), InvalidInput);
}

TEST(BipartiteState, RejectsNonHermitian) {
  CMatrix m = 0.25 * CMatrix::Identity(4, 4);
  m(0, 3) = 0.2;
  EXPECT_THROW(BipartiteState(m, FockDim(2)), InvalidInput);
}

}  // namespace
