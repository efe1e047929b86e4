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

#include "phasebus/hybrid.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "phasebus/codes.hpp"
#include "oracles.hpp"

namespace phasebus {
namespace {

Matrix hadamard2() {
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

// Joint-space matrix built independently of the engine: spectral sum with
// only kron() and displacement() as ingredients.
Matrix oracle_conditional(const QubitOperator& control, Cplx amp, double angle,
                          bool is_displacement, const HybridSpace& space) {
  Matrix h = control.to_dense();
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Matrix out = Matrix::Zero(space.dim(), space.dim());
  for (Eigen::Index k = 0; k < h.rows(); ++k) {
    Vector v = es.eigenvectors().col(k);
    Matrix proj = v * v.adjoint();
    double lambda = es.eigenvalues()[k];
    Matrix fock_op = is_displacement
                         ? displacement(lambda * amp, space.fock)
                         : rotation(lambda * angle, space.fock);
    out += kron(proj, fock_op);
  }
  return out;
}

TEST(HybridState, FlattenMatchesKronOrdering) {
  HybridSpace space(2, FockSpace(5));
  HybridState st = HybridState::basis(space, 3, 2);
  Vector flat = st.flatten();
  for (Eigen::Index i = 0; i < flat.size(); ++i)
    EXPECT_NEAR(std::abs(flat[i] - (i == 3 * 5 + 2 ? 1.0 : 0.0)), 0.0, 0.0);
  EXPECT_THROW(HybridState::basis(space, 4, 0), InputError);
  EXPECT_THROW(HybridState::basis(space, 0, 5), InputError);
}

TEST(MatrixBackend, ConditionalDisplacementMatchesSpectralOracle) {
  HybridSpace space(1, FockSpace(16));
  QubitOperator z = QubitOperator::single_site(Pauli::Z, 1, 1);
  Cplx amp(0.4, -0.3);
  Matrix engine = conditional_displacement_matrix(z, amp, space);
  Matrix oracle = oracle_conditional(z, amp, 0.0, true, space);
  EXPECT_LT(max_abs(engine - oracle), 1e-10);
  EXPECT_TRUE(is_unitary(engine, 1e-10));

  // Explicit block check: sigma_z branches are D(+amp) on |0>, D(-amp) on |1>.
  Matrix top = engine.block(0, 0, 16, 16);
  Matrix bottom = engine.block(16, 16, 16, 16);
  EXPECT_LT(max_abs(top - displacement(amp, space.fock)), 1e-10);
  EXPECT_LT(max_abs(bottom - displacement(-amp, space.fock)), 1e-10);
}

TEST(MatrixBackend, ConditionalRotationMatchesSpectralOracle) {
  HybridSpace space(2, FockSpace(8));
  QubitOperator c = QubitOperator::single_site(Pauli::X, 1, 2) +
                    QubitOperator::single_site(Pauli::Z, 2, 2, 0.5);
  Matrix engine = conditional_rotation_matrix(c, 0.7, space);
  Matrix oracle = oracle_conditional(c, 0.0, 0.7, false, space);
  EXPECT_LT(max_abs(engine - oracle), 1e-10);
}

TEST(MatrixBackend, LocalStepEmbedsSingleQubitGate) {
  HybridSpace space(3, FockSpace(4));
  PulseStep step = PulseStep::local(2, hadamard2());
  Matrix engine = step_matrix(step, space);
  Matrix i2 = Matrix::Identity(2, 2);
  Matrix i4 = Matrix::Identity(4, 4);
  Matrix expected = kron(kron(i2, hadamard2()), kron(i2, i4));
  EXPECT_LT(max_abs(engine - expected), 1e-14);
}

TEST(MatrixBackend, GlobalPhaseStep) {
  HybridSpace space(1, FockSpace(3));
  Matrix engine = step_matrix(PulseStep::global_phase(0.3), space);
  Matrix expected = std::exp(kI * 0.3) * Matrix::Identity(6, 6);
  EXPECT_LT(max_abs(engine - expected), 1e-14);
}

// The core correctness test: random programs mixing every step kind and all
// three control strategies, vector backend vs dense product.
TEST(BackendEquivalence, RandomProgramsAgree) {
  std::mt19937 rng(20260825);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  for (int trial = 0; trial < 30; ++trial) {
    int n = 1 + static_cast<int>(rng() % 3);
    Eigen::Index cutoff = 12;
    HybridSpace space(n, FockSpace(cutoff));
    PulseProgram program(space);

    auto random_control = [&](int flavor) -> QubitOperator {
      switch (flavor % 3) {
        case 0: {  // diagonal mixture
          QubitOperator op = QubitOperator::single_site(Pauli::Z, 1, n,
                                                        0.5 + 0.5 * unit(rng));
          if (n > 1)
            op = op + QubitOperator::uniform_string(Pauli::Z, n,
                                                    0.3 * unit(rng));
          return op;
        }
        case 1:  // single non-diagonal string
          return QubitOperator::uniform_string(Pauli::X, n,
                                               0.5 + 0.4 * unit(rng));
        default: {  // generic sum forcing the spectral path
          QubitOperator op = QubitOperator::single_site(Pauli::X, 1, n,
                                                        unit(rng));
          op = op + QubitOperator::single_site(Pauli::Z, 1, n, unit(rng));
          if (n > 1) op = op + QubitOperator::single_site(Pauli::Y, 2, n, 0.4);
          return op;
        }
      }
    };

    int num_steps = 3 + static_cast<int>(rng() % 4);
    for (int s = 0; s < num_steps; ++s) {
      switch (rng() % 4) {
        case 0:
          program.steps.push_back(PulseStep::conditional_displacement(
              random_control(static_cast<int>(rng())),
              Cplx(0.4 * unit(rng), 0.4 * unit(rng))));
          break;
        case 1:
          program.steps.push_back(PulseStep::conditional_rotation(
              random_control(static_cast<int>(rng())), 0.8 * unit(rng)));
          break;
        case 2: {
          int q = 1 + static_cast<int>(rng() % n);
          program.steps.push_back(
              PulseStep::local(q, oracles::random_unitary(rng, 2)));
          break;
        }
        default:
          program.steps.push_back(PulseStep::global_phase(unit(rng)));
          break;
      }
    }

    Matrix dense = program_unitary(program);
    ASSERT_TRUE(is_unitary(dense, 1e-9));
    for (Eigen::Index q = 0; q < space.qubit_dim(); ++q) {
      // Start from |q>|m0> for a couple of fock levels.
      for (Eigen::Index m0 : {Eigen::Index{0}, Eigen::Index{3}}) {
        HybridState st =
            apply_program(program, HybridState::basis(space, q, m0));
        Vector via_dense = dense.col(q * cutoff + m0);
        EXPECT_LT((st.flatten() - via_dense).cwiseAbs().maxCoeff(), 1e-9)
            << "trial " << trial << " input (" << q << "," << m0 << ")";
      }
    }
  }
}

TEST(VectorBackend, RotationFrameChangesDisplacementPhase) {
  // R(-theta) D(c a) R(theta) = D(c a e^{-i theta}): a displacement entering
  // after the frame has rotated by theta acts at the rotated position.
  HybridSpace space(1, FockSpace(24));
  QubitOperator z = QubitOperator::single_site(Pauli::Z, 1, 1);
  QubitOperator id = QubitOperator::identity(1);
  double theta = 0.6;
  Cplx alpha(0.5, 0.2);

  PulseProgram program(space);
  program.steps.push_back(PulseStep::conditional_rotation(id, theta));
  program.steps.push_back(PulseStep::conditional_displacement(z, alpha));
  program.steps.push_back(PulseStep::conditional_rotation(id, -theta));

  Matrix lhs = program_unitary(program);
  Matrix rhs = conditional_displacement_matrix(
      z, alpha * std::exp(-kI * theta), space);
  EXPECT_LT(max_abs(lhs - rhs), 1e-10);
}

TEST(VectorBackend, FourStepLoopImplementsPairExponential) {
  // D(-b B) D(-a A) D(b B) D(a A) on commuting +/-1 controls leaves the mode
  // alone and applies exp(2 i Im(b conj(a)) A B) to the register.
  HybridSpace space(2, FockSpace(32));
  QubitOperator a_op = QubitOperator::single_site(Pauli::Z, 1, 2);
  QubitOperator b_op = QubitOperator::single_site(Pauli::Z, 2, 2);
  Cplx alpha(0.55, 0.0), beta(0.0, 0.4);
  double theta = 2.0 * std::imag(beta * std::conj(alpha));

  PulseProgram program(space);
  program.steps.push_back(PulseStep::conditional_displacement(a_op, alpha));
  program.steps.push_back(PulseStep::conditional_displacement(b_op, beta));
  program.steps.push_back(PulseStep::conditional_displacement(a_op, -alpha));
  program.steps.push_back(PulseStep::conditional_displacement(b_op, -beta));
  program.cyclic = true;
  program.expected_qubit_unitary =
      expm_hermitian(kron(pauli_matrix(Pauli::Z), pauli_matrix(Pauli::Z)),
                     -theta);

  VerificationReport report = effective_qubit_unitary(program);
  ASSERT_TRUE(report.fidelity.has_value());
  EXPECT_GT(*report.fidelity, 1.0 - 1e-10);
  EXPECT_LT(report.disentangle_residual, 1e-10);
  EXPECT_TRUE(report.passed(1e-8, 1e-8));
  EXPECT_TRUE(report.diagnostic.empty());
  EXPECT_GE(report.wall_time_ms, 0.0);
}

TEST(VectorBackend, StringBranchStrategyLoopMatchesExponential) {
  // Same loop with X X and Y-type controls: exercises the bitwise +/- branch
  // path end to end against the dense exponential.
  HybridSpace space(2, FockSpace(32));
  QubitOperator a_op = QubitOperator::uniform_string(Pauli::X, 2);
  QubitOperator b_op = QubitOperator::uniform_string(Pauli::Y, 2);
  ASSERT_EQ(commutation_check(a_op, b_op).relation,
            CommutationRelation::Commute);
  Cplx alpha(0.5, 0.1), beta(-0.2, 0.45);
  double theta = 2.0 * std::imag(beta * std::conj(alpha));

  PulseProgram program(space);
  program.steps.push_back(PulseStep::conditional_displacement(a_op, alpha));
  program.steps.push_back(PulseStep::conditional_displacement(b_op, beta));
  program.steps.push_back(PulseStep::conditional_displacement(a_op, -alpha));
  program.steps.push_back(PulseStep::conditional_displacement(b_op, -beta));
  program.expected_qubit_unitary =
      expm_hermitian(a_op.to_dense() * b_op.to_dense(), -theta);

  VerificationReport report = effective_qubit_unitary(program);
  ASSERT_TRUE(report.fidelity.has_value());
  EXPECT_GT(*report.fidelity, 1.0 - 1e-10);
  EXPECT_LT(report.disentangle_residual, 1e-10);
}

TEST(VectorBackend, DiagonalStrategyScalesToTwelveQubits) {
  // A 12-qubit Z-string loop runs on the vector backend without ever forming
  // a 4096 x 4096 matrix; each computational branch picks up e^{i theta par}.
  const int n = 12;
  HybridSpace space(n, FockSpace(16));
  QubitOperator a_op = QubitOperator::uniform_string(Pauli::Z, n);
  QubitOperator b_op = QubitOperator::single_site(Pauli::Z, 1, n);
  Cplx alpha(0.4, 0.0), beta(0.0, 0.35);
  double theta = 2.0 * std::imag(beta * std::conj(alpha));

  PulseProgram program(space);
  program.steps.push_back(PulseStep::conditional_displacement(a_op, alpha));
  program.steps.push_back(PulseStep::conditional_displacement(b_op, beta));
  program.steps.push_back(PulseStep::conditional_displacement(a_op, -alpha));
  program.steps.push_back(PulseStep::conditional_displacement(b_op, -beta));

  HybridState st(space);
  std::vector<Eigen::Index> inputs = {0, 4095, 1365, 2730};
  for (Eigen::Index q : inputs) st.block(q, 0) = 0.5;

  HybridState out = apply_program(program, st);
  for (Eigen::Index q : inputs) {
    int ones = 0;
    for (int b = 0; b < n; ++b) ones += (q >> b) & 1;
    double string_val = (ones % 2 == 0) ? 1.0 : -1.0;     // Z^12 branch
    double site_val = ((q >> (n - 1)) & 1) ? -1.0 : 1.0;  // Z on qubit 1
    Cplx expected = 0.5 * std::exp(kI * theta * string_val * site_val);
    EXPECT_LT(std::abs(out.block(q, 0) - expected), 1e-10) << "q=" << q;
  }
  EXPECT_NEAR(out.norm(), st.norm(), 1e-10);
}

TEST(VectorBackend, TruncationWarningsSurfaceLargeAmplitudes) {
  HybridSpace space(1, FockSpace(8));
  QubitOperator z = QubitOperator::single_site(Pauli::Z, 1, 1);
  PulseProgram program(space);
  program.steps.push_back(PulseStep::conditional_displacement(z, 3.0));

  std::vector<std::string> warnings;
  apply_program(program, HybridState::basis(space, 0, 0), &warnings);
  ASSERT_FALSE(warnings.empty());
  EXPECT_NE(warnings[0].find("step 0"), std::string::npos);
}

TEST(VectorBackend, EntangledResultIsReportedWithWorstInput)
{
  // An open (non-cyclic) program leaves the mode displaced; the report must
  // flag it and name the worst-affected register basis state.
  HybridSpace space(1, FockSpace(16));
  QubitOperator z = QubitOperator::single_site(Pauli::Z, 1, 1);
  // Displace only the |1> branch: control (1 - Z)/2 has eigenvalues {0, 1}.
  QubitOperator projector_one =
      QubitOperator::identity(1, 0.5) +
      QubitOperator::single_site(Pauli::Z, 1, 1, -0.5);
  PulseProgram program(space);
  program.steps.push_back(
      PulseStep::conditional_displacement(projector_one, Cplx(0.8, 0.0)));

  VerificationReport report = effective_qubit_unitary(program);
  EXPECT_GT(report.disentangle_residual, 0.4);
  EXPECT_EQ(report.worst_qubit_state, 1);
  EXPECT_FALSE(report.diagnostic.empty());
  EXPECT_FALSE(report.passed(1e-8, 1e-8));
}

TEST(LoopAudit, ClosedLoopsHaveZeroResidual) {
  HybridSpace space(2, FockSpace(8));
  QubitOperator a_op = QubitOperator::single_site(Pauli::Z, 1, 2);
  QubitOperator b_op = QubitOperator::single_site(Pauli::Z, 2, 2);
  QubitOperator c_op = QubitOperator::uniform_string(Pauli::Z, 2);

  PulseProgram program(space);
  double theta = 1.1;
  Cplx alpha(0.3, 0.2), beta(0.5, -0.1);
  program.steps.push_back(PulseStep::conditional_rotation(c_op, -theta));
  program.steps.push_back(PulseStep::conditional_displacement(a_op, alpha));
  program.steps.push_back(PulseStep::conditional_rotation(c_op, theta));
  program.steps.push_back(PulseStep::conditional_displacement(b_op, beta));
  program.steps.push_back(PulseStep::conditional_rotation(c_op, -theta));
  program.steps.push_back(PulseStep::conditional_displacement(a_op, -alpha));
  program.steps.push_back(PulseStep::conditional_rotation(c_op, theta));
  program.steps.push_back(PulseStep::conditional_displacement(b_op, -beta));

  // Closure is floating-point exact up to summation rounding.
  EXPECT_LT(branch_loop_residual(program), 1e-14);

  // Dropping the last return displacement opens the loop on every branch.
  program.steps.pop_back();
  EXPECT_GT(branch_loop_residual(program), 0.3);
}

TEST(LoopAudit, RotationChangesTheReturnPath) {
  // With a rotation between the outgoing and return displacement, the naive
  // return amplitude no longer closes the loop; the audit must see that.
  HybridSpace space(1, FockSpace(8));
  QubitOperator z = QubitOperator::single_site(Pauli::Z, 1, 1);
  QubitOperator id = QubitOperator::identity(1);

  PulseProgram open_loop(space);
  open_loop.steps.push_back(
      PulseStep::conditional_displacement(z, Cplx(0.5, 0.0)));
  open_loop.steps.push_back(PulseStep::conditional_rotation(id, 0.9));
  open_loop.steps.push_back(
      PulseStep::conditional_displacement(z, Cplx(-0.5, 0.0)));
  double expected_gap = std::abs(0.5 - 0.5 * std::exp(-kI * 0.9));
  EXPECT_NEAR(branch_loop_residual(open_loop), expected_gap, 1e-12);

  // Closing it properly: the return leg must be rotated by the same frame.
  PulseProgram closed(space);
  closed.steps.push_back(
      PulseStep::conditional_displacement(z, Cplx(0.5, 0.0)));
  closed.steps.push_back(PulseStep::conditional_rotation(id, 0.9));
  closed.steps.push_back(PulseStep::conditional_displacement(
      z, -0.5 * std::exp(kI * 0.9)));
  EXPECT_LT(branch_loop_residual(closed), 1e-15);
}

TEST(LoopAudit, LocalStepsSplitSegments) {
  HybridSpace space(1, FockSpace(8));
  QubitOperator z = QubitOperator::single_site(Pauli::Z, 1, 1);
  QubitOperator x = QubitOperator::single_site(Pauli::X, 1, 1);

  // Non-commuting controls in one segment: refused.
  PulseProgram bad(space);
  bad.steps.push_back(PulseStep::conditional_displacement(z, Cplx(0.3, 0.0)));
  bad.steps.push_back(PulseStep::conditional_displacement(x, Cplx(0.2, 0.0)));
  EXPECT_THROW(branch_loop_residual(bad), InputError);

  // The same controls in separate closed segments: fine.
  PulseProgram good(space);
  good.steps.push_back(PulseStep::conditional_displacement(z, Cplx(0.3, 0.0)));
  good.steps.push_back(
      PulseStep::conditional_displacement(z, Cplx(-0.3, 0.0)));
  good.steps.push_back(PulseStep::local(1, hadamard2()));
  good.steps.push_back(PulseStep::conditional_displacement(x, Cplx(0.2, 0.0)));
  good.steps.push_back(
      PulseStep::conditional_displacement(x, Cplx(-0.2, 0.0)));
  EXPECT_LT(branch_loop_residual(good), 1e-15);
}

TEST(LoopAudit, CommutingNonDiagonalControlsAuditInJointBasis) {
  HybridSpace space(2, FockSpace(8));
  QubitOperator xx = QubitOperator::uniform_string(Pauli::X, 2);
  QubitOperator yy = QubitOperator::uniform_string(Pauli::Y, 2);
  ASSERT_EQ(commutation_check(xx, yy).relation,
            CommutationRelation::Commute);

  PulseProgram program(space);
  program.steps.push_back(
      PulseStep::conditional_displacement(xx, Cplx(0.3, 0.1)));
  program.steps.push_back(
      PulseStep::conditional_displacement(yy, Cplx(-0.1, 0.2)));
  program.steps.push_back(
      PulseStep::conditional_displacement(xx, Cplx(-0.3, -0.1)));
  program.steps.push_back(
      PulseStep::conditional_displacement(yy, Cplx(0.1, -0.2)));
  EXPECT_LT(branch_loop_residual(program), 1e-12);

  program.steps.pop_back();
  EXPECT_GT(branch_loop_residual(program), 0.2);
}

TEST(ProgramAlgebra, InverseProgramInvertsTheUnitary) {
  std::mt19937 rng(7);
  HybridSpace space(2, FockSpace(10));
  QubitOperator z1 = QubitOperator::single_site(Pauli::Z, 1, 2);
  QubitOperator xx = QubitOperator::uniform_string(Pauli::X, 2);

  PulseProgram program(space);
  program.steps.push_back(
      PulseStep::conditional_displacement(z1, Cplx(0.3, -0.2)));
  program.steps.push_back(
      PulseStep::local(2, oracles::random_unitary(rng, 2)));
  program.steps.push_back(PulseStep::conditional_rotation(xx, 0.45));
  program.steps.push_back(PulseStep::global_phase(0.8));

  Matrix u = program_unitary(program);
  Matrix u_inv = program_unitary(invert_program(program));
  EXPECT_LT(max_abs(u_inv * u - Matrix::Identity(u.rows(), u.cols())), 1e-9);
}

TEST(ProgramAlgebra, AppendRejectsMismatchedSpaces) {
  PulseProgram a(HybridSpace(2, FockSpace(8)));
  PulseProgram b(HybridSpace(2, FockSpace(16)));
  EXPECT_THROW(append_program(a, b), InputError);
  PulseProgram c(HybridSpace(3, FockSpace(8)));
  EXPECT_THROW(append_program(a, c), InputError);
}

TEST(ProgramAlgebra, StepValidationRejectsBadInput) {
  HybridSpace space(2, FockSpace(8));
  PulseProgram program(space);

  // Wrong-register control.
  program.steps.push_back(PulseStep::conditional_displacement(
      QubitOperator::single_site(Pauli::Z, 1, 3), Cplx(0.1, 0.0)));
  EXPECT_THROW(prepare_program(program), InputError);

  // Non-unitary local matrix.
  program.steps.clear();
  Matrix bad(2, 2);
  bad << 1, 0, 0, 2;
  program.steps.push_back(PulseStep::local(1, bad));
  EXPECT_THROW(prepare_program(program), InputError);

  // Local matrix of the wrong shape.
  program.steps.clear();
  program.steps.push_back(PulseStep::local(0, hadamard2()));
  EXPECT_THROW(prepare_program(program), InputError);
}

}  // namespace
}  // namespace phasebus
