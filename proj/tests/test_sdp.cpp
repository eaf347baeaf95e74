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

#include <Eigen/Dense>

#include "cvbench/sdp.hpp"

namespace {

using namespace cvbench;

// min <C, X> s.t. Tr X = 1, X >= 0 has value lambda_min(C).
TEST(Sdp, SmallestEigenvalueReal) {
  Eigen::Matrix3d c;
  c << 2, -1, 0, -1, 2, -1, 0, -1, 2;
  sdp::Problem<double> p;
  p.block_sizes = {3};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (c(i, j) != 0.0) p.objective.push_back({0, i, j, c(i, j)});
  sdp::SparseMatrix<double> tr;
  for (int i = 0; i < 3; ++i) tr.push_back({0, i, i, 1.0});
  p.constraints.push_back(tr);
  p.rhs = Eigen::VectorXd::Ones(1);
  const auto sol = sdp::solve(p);
  ASSERT_EQ(sol.status, sdp::Status::optimal);
  EXPECT_NEAR(sol.primal_objective, 2.0 - std::sqrt(2.0), 1e-8);
  EXPECT_NEAR(sol.dual_objective, 2.0 - std::sqrt(2.0), 1e-8);
}

TEST(Sdp, SmallestEigenvalueComplex) {
  using C = std::complex<double>;
  Eigen::Matrix2cd c;
  c << 1.0, C(0.0, 1.0), C(0.0, -1.0), 1.0;  // eigenvalues 0 and 2
  sdp::Problem<C> p;
  p.block_sizes = {2};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) p.objective.push_back({0, i, j, c(i, j)});
  p.constraints.push_back({{0, 0, 0, 1.0}, {0, 1, 1, 1.0}});
  p.rhs = Eigen::VectorXd::Ones(1);
  const auto sol = sdp::solve(p);
  ASSERT_EQ(sol.status, sdp::Status::optimal);
  EXPECT_NEAR(sol.primal_objective, 0.0, 1e-8);
}

// Two blocks acting as LP variables: min x + 2y, x + y = 1.
TEST(Sdp, LinearProgramAsDiagonalBlocks) {
  sdp::Problem<double> p;
  p.block_sizes = {1, 1};
  p.objective = {{0, 0, 0, 1.0}, {1, 0, 0, 2.0}};
  p.constraints.push_back({{0, 0, 0, 1.0}, {1, 0, 0, 1.0}});
  p.rhs = Eigen::VectorXd::Ones(1);
  const auto sol = sdp::solve(p);
  ASSERT_EQ(sol.status, sdp::Status::optimal);
  EXPECT_NEAR(sol.primal_objective, 1.0, 1e-8);
  EXPECT_NEAR(sol.primal[0](0, 0), 1.0, 1e-7);
}

// X >= 0 with X_00 = -1 cannot hold.
TEST(Sdp, DetectsInfeasibility) {
  sdp::Problem<double> p;
  p.block_sizes = {2};
  p.objective = {{0, 0, 0, 1.0}, {0, 1, 1, 1.0}};
  p.constraints.push_back({{0, 0, 0, 1.0}});
  p.rhs = Eigen::VectorXd::Constant(1, -1.0);
  const auto sol = sdp::solve(p);
  EXPECT_NE(sol.status, sdp::Status::optimal);
}

TEST(Sdp, ValidatesStructure) {
  sdp::Problem<double> p;
  p.block_sizes = {2};
  p.constraints.push_back({{0, 2, 0, 1.0}});
  p.rhs = Eigen::VectorXd::Ones(1);
  EXPECT_THROW(sdp::solve(p), InvalidInput);
  p.constraints = {{{1, 0, 0, 1.0}}};
  EXPECT_THROW(sdp::solve(p), InvalidInput);
  p.constraints = {{{0, 0, 0, 1.0}}};
  p.rhs = Eigen::VectorXd::Ones(2);
  EXPECT_THROW(sdp::solve(p), InvalidInput);
}

TEST(Sdp, ReportsIterationsThroughCallback) {
  sdp::Problem<double> p;
  p.block_sizes = {2};
  p.objective = {{0, 0, 0, 1.0}, {0, 1, 1, 3.0}};
  p.constraints.push_back({{0, 0, 0, 1.0}, {0, 1, 1, 1.0}});
  p.rhs = Eigen::VectorXd::Ones(1);
  int calls = 0;
  sdp::Options opt;
  opt.on_iteration = [&](const sdp::IterationInfo&) { ++calls; };
  const auto sol = sdp::solve(p, opt);
  EXPECT_EQ(sol.status, sdp::Status::optimal);
  EXPECT_GT(calls, 0);
  EXPECT_GE(calls, sol.iterations);
}

}  // namespace
