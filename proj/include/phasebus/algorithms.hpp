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

// Register-level algorithms driven entirely by pulse programs: GHZ-state
// preparation from a single collective loop, and amplitude amplification
// whose reflections are the synthesized projector-phase programs.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phasebus/common.hpp"
#include "phasebus/hybrid.hpp"
#include "phasebus/synth.hpp"

namespace phasebus {

namespace detail {

/// Row index of |bits> with the register convention used throughout: the
/// leftmost character is qubit 1 and occupies the most significant bit.
inline Eigen::Index basis_index(const std::string& bits) {
  Eigen::Index index = 0;
  for (std::size_t j = 0; j < bits.size(); ++j)
    if (bits[j] == '1')
      index |= Eigen::Index{1} << (bits.size() - 1 - j);
  return index;
}

inline void require_distinct_marked(const std::vector<std::string>& marked) {
  require_input(!marked.empty(), "marked-state list must be nonempty");
  std::vector<std::string> sorted = marked;
  std::sort(sorted.begin(), sorted.end());
  require_input(std::adjacent_find(sorted.begin(), sorted.end()) ==
                    sorted.end(),
                "marked states must be distinct");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// GHZ preparation

struct GhzResult {
  /// Register amplitudes left on the vacuum column of the mode.
  Vector qubit_state;
  /// |<closed form|result>|^2 against cos(t)|0..0> - i sin(t)|1..1>.
  double fidelity = 0.0;
  PulseProgram program;
};

/// Prepares |theta, N> = cos(theta)|0..0> - i sin(theta)|1..1> by running the
/// uniform X-string loop e^{-i theta X_1..X_N} on |0..0>|vacuum> through the
/// vector backend. A single eight-pulse loop entangles all N qubits.
inline GhzResult ghz_prepare(int num_qubits, double theta,
                             const FockSpace& fock = FockSpace(64)) {
  require_input(num_qubits >= 2, "GHZ preparation needs at least two qubits");
  HybridSpace space(num_qubits, fock);
  PulseProgram program = synth_pauli_string(Pauli::X, +1, theta, space);
  HybridState state =
      apply_program(program, HybridState::basis(space, 0, 0));

  Vector closed = Vector::Zero(space.qubit_dim());
  closed[0] = std::cos(theta);
  closed[space.qubit_dim() - 1] = -kI * std::sin(theta);

  GhzResult result{state.block.col(0), 0.0, std::move(program)};
  result.fidelity = std::norm(closed.dot(result.qubit_state));
  return result;
}

// ---------------------------------------------------------------------------
// Projector phase oracles

/// e^{+i phi |0..0><0..0|}: the zero-state reflection used inside every
/// amplification round, as the weight-0 sector phase program.
inline PulseProgram phase_oracle_s0(double phi, const HybridSpace& space) {
  return synth_projector(0, -phi, space);
}

/// e^{+i vartheta sum_k |tau_k><tau_k|}: one basis-projector block per marked
/// state. Distinct basis projectors commute, so concatenation is exact.
inline PulseProgram phase_oracle_schi(const std::vector<std::string>& marked,
                                      double vartheta,
                                      const HybridSpace& space) {
  detail::require_distinct_marked(marked);
  PulseProgram program(space);
  program.cyclic = true;
  for (const std::string& bits : marked)
    append_program(program, synth_basis_projector(bits, -vartheta, space));
  if (space.qubit_dim() <= kOracleDimensionCap) {
    Vector diag = Vector::Ones(space.qubit_dim());
    for (const std::string& bits : marked)
      diag[detail::basis_index(bits)] = std::exp(kI * vartheta);
    program.expected_qubit_unitary = Matrix(diag.asDiagonal());
  }
  return program;
}

/// e^{+i (pi - 2 vartheta) |tau><tau|}: the tunable single-state reflection.
/// At vartheta = 0 this is the plain reflection about |tau>; at vartheta =
/// pi/2 the exponent vanishes and the program is the identity loop.
inline PulseProgram s_tau_variant(const std::string& tau, double vartheta,
                                  const HybridSpace& space) {
  return synth_basis_projector(tau, -(kPi - 2.0 * vartheta), space);
}

// ---------------------------------------------------------------------------
// Amplitude amplification

/// One amplification problem: mark `marked_states`, reflect with phases
/// (phi, vartheta), prepare with `algorithm_a` (empty = Walsh-Hadamard on
/// every qubit), and run `iterations` rounds of
///   Q = -A S0^phi A^{-1} Schi^vartheta.
struct AASpec {
  int num_qubits = 0;
  std::vector<std::string> marked_states;
  double phi = kPi;
  double vartheta = kPi;
  /// Preparation unitary on the full register; empty selects Walsh-Hadamard.
  std::optional<Matrix> algorithm_a;
  int iterations = 0;
};

struct AAIteration {
  int k = 0;
  double marked_probability = 0.0;
  /// Register amplitudes on the vacuum column, when snapshots are requested.
  std::optional<Vector> state;
};

struct AATrace {
  std::vector<AAIteration> iterations;
};

namespace detail {

inline Matrix walsh_hadamard_local() {
  Matrix h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  return h / std::sqrt(2.0);
}

/// Steps applying the preparation unitary A (or its inverse). Walsh-Hadamard
/// is applied qubit by qubit; a custom unitary becomes one register-wide
/// local step.
inline std::vector<PulseStep> preparation_steps(const AASpec& spec,
                                                bool inverse) {
  std::vector<PulseStep> steps;
  if (spec.algorithm_a) {
    Matrix u = inverse ? spec.algorithm_a->adjoint() : *spec.algorithm_a;
    steps.push_back(PulseStep::local_register(std::move(u)));
    return steps;
  }
  for (int q = 1; q <= spec.num_qubits; ++q)
    steps.push_back(PulseStep::local(q, walsh_hadamard_local()));
  return steps;
}

inline void validate_aa_spec(const AASpec& spec) {
  require_input(spec.num_qubits >= 1, "amplification needs at least 1 qubit");
  require_input(spec.iterations >= 0, "iteration count must be nonnegative");
  require_distinct_marked(spec.marked_states);
  for (const std::string& bits : spec.marked_states)
    require_input(static_cast<int>(bits.size()) == spec.num_qubits,
                  "marked state length must match the register");
}

}  // namespace detail

/// The full amplification round Q = -A S0^phi A^{-1} Schi^vartheta as one
/// pulse program (applied order: Schi, A^{-1}, S0, A, global -1).
inline PulseProgram aa_iteration_program(const AASpec& spec,
                                         const HybridSpace& space) {
  detail::validate_aa_spec(spec);
  require_input(space.num_qubits == spec.num_qubits,
                "space does not match the amplification spec");

  PulseProgram program(space);
  program.cyclic = true;
  append_program(program,
                 phase_oracle_schi(spec.marked_states, spec.vartheta, space));
  for (PulseStep& s : detail::preparation_steps(spec, true))
    program.steps.push_back(std::move(s));
  append_program(program, phase_oracle_s0(spec.phi, space));
  for (PulseStep& s : detail::preparation_steps(spec, false))
    program.steps.push_back(std::move(s));
  program.steps.push_back(PulseStep::global_phase(kPi));

  if (space.qubit_dim() <= kOracleDimensionCap) {
    const Eigen::Index dim = space.qubit_dim();
    Matrix a;
    if (spec.algorithm_a) {
      a = *spec.algorithm_a;
    } else {
      a = Matrix::Identity(1, 1);
      for (int q = 0; q < spec.num_qubits; ++q)
        a = kron(a, detail::walsh_hadamard_local());
    }
    Matrix s0 = Matrix::Identity(dim, dim);
    s0(0, 0) = std::exp(kI * spec.phi);
    Matrix schi = Matrix::Identity(dim, dim);
    for (const std::string& bits : spec.marked_states)
      schi(detail::basis_index(bits), detail::basis_index(bits)) =
          std::exp(kI * spec.vartheta);
    program.expected_qubit_unitary = -(a * s0 * a.adjoint() * schi);
  }
  return program;
}

/// Runs amplitude amplification through the pulse engine: prepares
/// A|0..0>|vacuum>, applies the round program `iterations` times, and records
/// the marked-subspace probability after each round (row k = 0 is the
/// prepared state before any round).
inline AATrace aa_run(const AASpec& spec,
                      const FockSpace& fock = FockSpace(64),
                      bool record_states = false) {
  detail::validate_aa_spec(spec);
  HybridSpace space(spec.num_qubits, fock);

  std::vector<Eigen::Index> marked_rows;
  marked_rows.reserve(spec.marked_states.size());
  for (const std::string& bits : spec.marked_states)
    marked_rows.push_back(detail::basis_index(bits));

  PulseProgram prepare(space);
  for (PulseStep& s : detail::preparation_steps(spec, false))
    prepare.steps.push_back(std::move(s));
  HybridState state =
      apply_program(prepare, HybridState::basis(space, 0, 0));

  auto record = [&](int k) {
    AAIteration row;
    row.k = k;
    for (Eigen::Index q : marked_rows)
      row.marked_probability += state.block.row(q).squaredNorm();
    if (record_states) row.state = state.block.col(0);
    return row;
  };

  AATrace trace;
  trace.iterations.push_back(record(0));
  PulseProgram round = aa_iteration_program(spec, space);
  for (int k = 1; k <= spec.iterations; ++k) {
    state = apply_program(round, std::move(state));
    trace.iterations.push_back(record(k));
  }
  return trace;
}

}  // namespace phasebus
