// Copyright 2026 The Phasebus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "phasebus/linalg.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"

using phasebus::Cplx;
using phasebus::Matrix;

namespace {

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

TEST(Kron, MatchesHandExpandedFourByFour) {
  // kron(sigma_z, sigma_x) written out by hand.
  Matrix expected(4, 4);
  expected << 0, 1, 0, 0,  //
      1, 0, 0, 0,          //
      0, 0, 0, -1,         //
      0, 0, -1, 0;
  EXPECT_NEAR(phasebus::max_abs(phasebus::kron(pauli_z(), pauli_x()) -
                                expected),
              0.0, 0.0);
}

TEST(Kron, LeftFactorIsSlowIndex) {
  // (e_1 e_1^T) kron I_3 must live in the second 3x3 diagonal block.
  Matrix p = Matrix::Zero(2, 2);
  p(1, 1) = 1;
  Matrix k = phasebus::kron(p, Matrix::Identity(3, 3));
  EXPECT_EQ(k.rows(), 6);
  EXPECT_DOUBLE_EQ(k(3, 3).real(), 1.0);
  EXPECT_DOUBLE_EQ(k(0, 0).real(), 0.0);
}

TEST(Kron, MixedProductLaw) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix a = oracles::random_matrix(rng, 3);
    Matrix b = oracles::random_matrix(rng, 2);
    Matrix c = oracles::random_matrix(rng, 3);
    Matrix d = oracles::random_matrix(rng, 2);
    Matrix lhs = phasebus::kron(a, b) * phasebus::kron(c, d);
    Matrix rhs = phasebus::kron((a * c).eval(), (b * d).eval());
    EXPECT_LT(phasebus::max_abs(lhs - rhs), 1e-12 * (1 + phasebus::max_abs(rhs)));
  }
}

TEST(Kron, DimensionCapExceeded) {
  Matrix big = Matrix::Identity(1024, 1024);
  try {
    phasebus::kron(big, big, /*cap=*/1 << 18);
    FAIL() << "expected InputError";
  } catch (const phasebus::InputError& e) {
    EXPECT_NE(std::string(e.what()).find("dimension cap exceeded"),
              std::string::npos);
  }
}

TEST(ExpmHermitian, PauliXQuarterTurn) {
  // exp(-i sigma_x pi/4) = cos(pi/4) I - i sin(pi/4) sigma_x.
  Matrix got = phasebus::expm_hermitian(pauli_x(), phasebus::kPi / 4);
  Matrix expected = std::cos(phasebus::kPi / 4) * Matrix::Identity(2, 2) -
                    phasebus::kI * std::sin(phasebus::kPi / 4) * pauli_x();
  EXPECT_LT(phasebus::max_abs(got - expected), 1e-14);
}

TEST(ExpmHermitian, MatchesTaylorSeries) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    Matrix h = oracles::random_hermitian(rng, 5);
    double t = 0.3;
    Matrix got = phasebus::expm_hermitian(h, t);
    Matrix want = oracles::taylor_expm(h, t);
    EXPECT_LT(phasebus::max_abs(got - want), 1e-12);
  }
}

TEST(ExpmHermitian, ForwardBackwardIsIdentity) {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    Matrix h = oracles::random_hermitian(rng, 6);
    Matrix round_trip = phasebus::expm_hermitian(h, 1.7) *
                        phasebus::expm_hermitian(h, -1.7);
    EXPECT_LT(phasebus::max_abs(round_trip - Matrix::Identity(6, 6)), 1e-10);
  }
}

TEST(ExpmHermitian, RejectsNonHermitian) {
  Matrix m(2, 2);
  m << 0, 1, 0, 0;
  try {
    phasebus::expm_hermitian(m, 1.0);
    FAIL() << "expected InputError";
  } catch (const phasebus::InputError& e) {
    EXPECT_NE(std::string(e.what()).find("hermiticity violation"),
              std::string::npos);
  }
}

TEST(ProcessFidelity, IdenticalAndGlobalPhase) {
  std::mt19937 rng(17);
  Matrix u = oracles::random_unitary(rng, 6);
  EXPECT_NEAR(phasebus::process_fidelity(u, u), 1.0, 1e-13);
  Matrix v = std::exp(Cplx(0.0, 0.83)) * u;
  EXPECT_NEAR(phasebus::process_fidelity(u, v), 1.0, 1e-13);
}

TEST(ProcessFidelity, OrthogonalPair) {
  EXPECT_NEAR(phasebus::process_fidelity(Matrix::Identity(2, 2), pauli_x()),
              0.0, 1e-15);
}

TEST(ProcessFidelity, StaysInUnitInterval) {
  std::mt19937 rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix u = oracles::random_unitary(rng, 4);
    Matrix v = oracles::random_unitary(rng, 4);
    double f = phasebus::process_fidelity(u, v);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0 + 1e-12);
  }
}

TEST(ProcessFidelity, DimensionMismatch) {
  try {
    phasebus::process_fidelity(Matrix::Identity(2, 2),
                               Matrix::Identity(3, 3));
    FAIL() << "expected InputError";
  } catch (const phasebus::InputError& e) {
    EXPECT_NE(std::string(e.what()).find("dimension mismatch"),
              std::string::npos);
  }
}

TEST(PhaseDistance, ReadsOffCommutingGeneratorError) {
  // U = exp(-i H), V = exp(-i (H + eps D)) with diagonal H, D: the distance
  // must equal the largest |eps D| deviation after global-phase removal.
  Matrix h = Matrix::Zero(3, 3);
  h(0, 0) = 0.3;
  h(1, 1) = -0.2;
  h(2, 2) = 0.9;
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = -1.0;  // traceless, so no global-phase component
  Matrix u = phasebus::expm_hermitian(h, 1.0);
  Matrix v = phasebus::expm_hermitian(h + 1e-3 * d, 1.0);
  EXPECT_NEAR(phasebus::phase_distance(u, v), 1e-3, 1e-6);
  EXPECT_NEAR(phasebus::phase_distance(u, u), 0.0, 1e-12);
}

}  // namespace
