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

// Named gate constructions. Every gate is written as the exponential of a
// product of (1 +/- sigma) factors, expanded into a commuting Pauli-string
// sum, and lowered to displacement loops through the synthesizer. The
// reference unitary is built independently (as a permutation or diagonal
// matrix), never from the exponent, so the program and the reference can
// disagree if either is wrong.

#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "phasebus/codes.hpp"
#include "phasebus/common.hpp"
#include "phasebus/hybrid.hpp"
#include "phasebus/linalg.hpp"
#include "phasebus/pauli.hpp"
#include "phasebus/synth.hpp"

namespace phasebus {

struct GateSpec {
  std::string name;
  std::vector<double> parameters;
  int num_qubits;
  /// Logical action: dense 2^N x 2^N for plain gates, 4 x 4 on the code
  /// basis for encoded gates.
  Matrix reference_unitary;
  PulseProgram program;
  std::vector<std::string> local_equivalences;
  /// Columns spanning the protected subspace, for encoded gates.
  std::optional<Matrix> encoded_basis;
  std::string code_name;

  explicit GateSpec(PulseProgram p) : num_qubits(0), program(std::move(p)) {}
};

struct EncodedActionReport {
  Matrix logical;  // k x k matrix of the program restricted to the basis
  double leakage;  // worst column weight lost to mode or code-space leakage
};

/// Runs a program on each column of `basis` (tensored with |fock_init>) and
/// projects the results back onto the basis and the initial Fock state.
inline EncodedActionReport encoded_action(const PulseProgram& program,
                                          const Matrix& basis,
                                          Eigen::Index fock_init = 0) {
  const HybridSpace& space = program.space;
  require_input(basis.rows() == space.qubit_dim(),
                "basis dimension mismatch");
  PreparedProgram prepared = prepare_program(program);
  const Eigen::Index k = basis.cols();

  EncodedActionReport report;
  report.logical = Matrix::Zero(k, k);
  report.leakage = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    HybridState state(space);
    state.block.col(fock_init) = basis.col(j);
    for (const auto& step : prepared.steps)
      detail::apply_prepared_step(step, state.block);
    Vector kept = state.block.col(fock_init);
    report.logical.col(j) = basis.adjoint() * kept;
    double survived = report.logical.col(j).squaredNorm();
    report.leakage = std::max(report.leakage, 1.0 - survived);
  }
  return report;
}

namespace detail {

/// (1 + sign * op) as an operator, the ubiquitous projector-style factor.
inline QubitOperator one_plus(const QubitOperator& op, double sign) {
  return QubitOperator::identity(op.num_qubits()) + sign * op;
}

/// Projector onto |1...1> of qubits [1, n] inside a larger register:
/// product of (1 - Z_j) / 2.
inline QubitOperator all_ones_projector(int n, int total_qubits) {
  QubitOperator p = QubitOperator::identity(total_qubits);
  for (int j = 1; j <= n; ++j)
    p = 0.5 * (p * one_plus(QubitOperator::single_site(Pauli::Z, j,
                                                       total_qubits),
                            -1.0));
  return p;
}

inline Matrix permutation_swapping(Eigen::Index dim, Eigen::Index i,
                                   Eigen::Index j) {
  Matrix m = Matrix::Identity(dim, dim);
  m(i, i) = 0.0;
  m(j, j) = 0.0;
  m(i, j) = 1.0;
  m(j, i) = 1.0;
  return m;
}

inline QubitOperator sigma_dot_sigma(int q1, int q2, int total_qubits) {
  QubitOperator sum = QubitOperator::identity(total_qubits, 0.0);
  for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
    sum = sum + QubitOperator::single_site(p, q1, total_qubits) *
                    QubitOperator::single_site(p, q2, total_qubits);
  }
  return sum;
}

}  // namespace detail

/// CNOT with control 1, target 2: exp[-i (pi/4) (1 - Z_1)(1 - X_2)].
inline GateSpec gate_cnot(Eigen::Index cutoff = 64) {
  HybridSpace space(2, FockSpace(cutoff));
  QubitOperator h =
      detail::one_plus(QubitOperator::single_site(Pauli::Z, 1, 2), -1.0) *
      detail::one_plus(QubitOperator::single_site(Pauli::X, 2, 2), -1.0);
  GateSpec spec(synth_commuting_sum({{h, kPi / 4}}, space));
  spec.name = "cnot";
  spec.num_qubits = 2;
  spec.reference_unitary = detail::permutation_swapping(4, 2, 3);
  spec.local_equivalences = {
      "exp(-i pi/4 Y_2) . cphase . exp(+i pi/4 Y_2) = cnot (exact)"};
  return spec;
}

/// Controlled phase diag(1, 1, 1, -1): exp[-i (pi/4) (1 - Z_1)(1 - Z_2)].
inline GateSpec gate_cphase(Eigen::Index cutoff = 64) {
  HybridSpace space(2, FockSpace(cutoff));
  QubitOperator h =
      detail::one_plus(QubitOperator::single_site(Pauli::Z, 1, 2), -1.0) *
      detail::one_plus(QubitOperator::single_site(Pauli::Z, 2, 2), -1.0);
  GateSpec spec(synth_commuting_sum({{h, kPi / 4}}, space));
  spec.name = "cphase";
  spec.num_qubits = 2;
  Matrix ref = Matrix::Identity(4, 4);
  ref(3, 3) = -1.0;
  spec.reference_unitary = ref;
  spec.local_equivalences = {
      "cnot = exp(-i pi/4 Y_2) . cphase . exp(+i pi/4 Y_2) (exact)"};
  return spec;
}

/// SWAP = (1 + sigma_1 . sigma_2) / 2: Heisenberg evolution
/// exp[-i (pi/4) (sigma_1 . sigma_2 - 1)].
inline GateSpec gate_swap(Eigen::Index cutoff = 64) {
  HybridSpace space(2, FockSpace(cutoff));
  QubitOperator h = detail::sigma_dot_sigma(1, 2, 2) +
                    QubitOperator::identity(2, -1.0);
  GateSpec spec(synth_commuting_sum({{h, kPi / 4}}, space));
  spec.name = "swap";
  spec.num_qubits = 2;
  spec.reference_unitary = detail::permutation_swapping(4, 1, 2);
  spec.local_equivalences = {
      "swap = (1 + sigma_1 . sigma_2) / 2 at the pi/4 Heisenberg point"};
  return spec;
}

/// Toffoli: exp[-i (pi/8) (1 - Z_1)(1 - Z_2)(1 - X_3)].
inline GateSpec gate_toffoli(Eigen::Index cutoff = 64) {
  HybridSpace space(3, FockSpace(cutoff));
  QubitOperator h =
      detail::one_plus(QubitOperator::single_site(Pauli::Z, 1, 3), -1.0) *
      detail::one_plus(QubitOperator::single_site(Pauli::Z, 2, 3), -1.0) *
      detail::one_plus(QubitOperator::single_site(Pauli::X, 3, 3), -1.0);
  GateSpec spec(synth_commuting_sum({{h, kPi / 8}}, space));
  spec.name = "toffoli";
  spec.num_qubits = 3;
  spec.reference_unitary = detail::permutation_swapping(8, 6, 7);
  return spec;
}

/// Fredkin (controlled SWAP): exp[-i (pi/8) (1 - Z_1)(sigma_2 . sigma_3 -
/// 1)].
inline GateSpec gate_fredkin(Eigen::Index cutoff = 64) {
  HybridSpace space(3, FockSpace(cutoff));
  QubitOperator h =
      detail::one_plus(QubitOperator::single_site(Pauli::Z, 1, 3), -1.0) *
      (detail::sigma_dot_sigma(2, 3, 3) + QubitOperator::identity(3, -1.0));
  GateSpec spec(synth_commuting_sum({{h, kPi / 8}}, space));
  spec.name = "fredkin";
  spec.num_qubits = 3;
  spec.reference_unitary = detail::permutation_swapping(8, 5, 6);
  return spec;
}

/// N-controlled NOT on N + 1 qubits: reference 1 - P_N + P_N X_{N+1},
/// program from exp[-i (pi/2) P_N (1 - X_{N+1})] with P_N the all-ones
/// projector of the controls, expanded into 2^{N+1} commuting strings.
inline GateSpec gate_cn_not(int n, Eigen::Index cutoff = 64) {
  require_input(n >= 1, "cn_not needs at least one control");
  require_input(n <= 10, "cn_not control count too large for expansion");
  const int total = n + 1;
  HybridSpace space(total, FockSpace(cutoff));
  QubitOperator p = detail::all_ones_projector(n, total);
  QubitOperator h =
      p * detail::one_plus(QubitOperator::single_site(Pauli::X, total, total),
                           -1.0);
  GateSpec spec(synth_commuting_sum({{h, kPi / 2}}, space));
  std::ostringstream name;
  name << "cn_not(" << n << ")";
  spec.name = name.str();
  spec.parameters = {static_cast<double>(n)};
  spec.num_qubits = total;
  Eigen::Index dim = Eigen::Index{1} << total;
  spec.reference_unitary = detail::permutation_swapping(dim, dim - 2,
                                                        dim - 1);
  spec.local_equivalences = {
      "cn_not(N) = exp(-i pi/4 Y_target) . exp(-i pi P_{N+1}) . "
      "exp(+i pi/4 Y_target), the squared all-ones projector phase"};
  return spec;
}

/// U_{P_N} = exp(-i pi P_N / 2): a quarter phase on the all-ones state,
/// synthesized directly as a basis projector program.
inline GateSpec gate_u_pn(int n, Eigen::Index cutoff = 64) {
  require_input(n >= 1, "u_pn needs at least one qubit");
  HybridSpace space(n, FockSpace(cutoff));
  GateSpec spec(
      synth_basis_projector(std::string(static_cast<size_t>(n), '1'),
                            kPi / 2, space));
  std::ostringstream name;
  name << "u_pn(" << n << ")";
  spec.name = name.str();
  spec.parameters = {static_cast<double>(n)};
  spec.num_qubits = n;
  Eigen::Index dim = Eigen::Index{1} << n;
  Matrix ref = Matrix::Identity(dim, dim);
  ref(dim - 1, dim - 1) = Cplx(0.0, -1.0);  // e^{-i pi/2}
  spec.reference_unitary = ref;
  spec.local_equivalences = {
      "u_pn(N)^2 = exp(-i pi P_N), the ingredient of cn_not(N - 1)"};
  return spec;
}

/// Controlled phase between two encoded qubits:
/// exp[-i pi ((1 - z1~) / 2)((1 - z2~) / 2)] with z~ the code's logical Z,
/// expanded into the four-term commuting sum
/// (pi/4)(1 - z1~ - z2~ + z1~ z2~). The reference is the logical
/// diag(1, 1, 1, -1) on the code basis.
inline GateSpec gate_encoded_cphase(const std::string& code_name,
                                    Eigen::Index cutoff = 64) {
  Code code = build_code(code_name);
  const int n = code.physical_qubits;
  const int total = 2 * n;
  HybridSpace space(total, FockSpace(cutoff));

  QubitOperator z1 = code.z_tilde.embedded(total, 0);
  QubitOperator z2 = code.z_tilde.embedded(total, n);
  QubitOperator h = detail::one_plus(z1, -1.0) * detail::one_plus(z2, -1.0);
  GateSpec spec(synth_commuting_sum({{h, kPi / 4}}, space));
  spec.name = "encoded_cphase(" + code_name + ")";
  spec.num_qubits = total;
  spec.code_name = code_name;

  Matrix logical_cz = Matrix::Identity(4, 4);
  logical_cz(3, 3) = -1.0;
  spec.reference_unitary = logical_cz;

  Matrix basis(Eigen::Index{1} << total, 4);
  const Vector* words[2] = {&code.zero_codeword, &code.one_codeword};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      basis.col(2 * a + b) = kron(Matrix(*words[a]), Matrix(*words[b]),
                                  Eigen::Index{1} << total);
  spec.encoded_basis = basis;
  return spec;
}

/// Gate factory by name: "cnot", "cphase", "swap", "toffoli", "fredkin",
/// "cn_not(N)", "u_pn(N)", "encoded_cphase(code)".
inline GateSpec gate(const std::string& name, Eigen::Index cutoff = 64) {
  auto open = name.find('(');
  std::string head = name.substr(0, open);
  std::string arg;
  if (open != std::string::npos) {
    auto close = name.find(')', open);
    require_input(close != std::string::npos && close == name.size() - 1,
                  "malformed gate name '" + name + "'");
    arg = name.substr(open + 1, close - open - 1);
  }

  auto int_arg = [&]() {
    require_input(!arg.empty(), "gate '" + head + "' needs an argument");
    for (char ch : arg)
      require_input(ch >= '0' && ch <= '9',
                    "gate argument must be a positive integer");
    return std::stoi(arg);
  };

  if (head == "cnot") return gate_cnot(cutoff);
  if (head == "cphase") return gate_cphase(cutoff);
  if (head == "swap") return gate_swap(cutoff);
  if (head == "toffoli") return gate_toffoli(cutoff);
  if (head == "fredkin") return gate_fredkin(cutoff);
  if (head == "cn_not") return gate_cn_not(int_arg(), cutoff);
  if (head == "u_pn") return gate_u_pn(int_arg(), cutoff);
  if (head == "encoded_cphase") {
    require_input(!arg.empty(), "encoded_cphase needs a code name");
    return gate_encoded_cphase(arg, cutoff);
  }
  throw UnsupportedError("unknown gate '" + name + "'");
}

}  // namespace phasebus
