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

// Pulse-sequence synthesis: compiles multi-qubit exponentials into loops of
// conditional displacements and conditional rotations of one bosonic mode.
//
// Everything here rests on two phase-space facts:
//
//  * A displacement loop D(-d2) D(-d1) D(d2) D(d1) closes in phase space and
//    leaves behind the geometric phase e^{2 i Im(d2 conj(d1))}. Making the
//    amplitudes conditional on commuting register operators A and B turns
//    that scalar phase into the entangling unitary e^{i theta A B}.
//
//  * Sandwiching a displacement between conditional rotations R(-theta C),
//    R(theta C) multiplies its amplitude by e^{i theta C} branchwise. The
//    interference of a rotated and an unrotated leg then produces phases
//    proportional to sin(theta c + phi) per branch, i.e. trigonometric
//    functions of register operators, from which exact polynomial and
//    projector evolutions are assembled.
//
// Every synthesized program is cyclic (the mode returns to its initial
// state on every branch), carries its SynthesisTarget, and, when the
// register is small enough, a dense expected unitary for direct comparison.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "phasebus/common.hpp"
#include "phasebus/fock.hpp"
#include "phasebus/hybrid.hpp"
#include "phasebus/linalg.hpp"
#include "phasebus/pauli.hpp"
#include "phasebus/target.hpp"

namespace phasebus {

/// Registers at or below this size get a dense expected_qubit_unitary
/// attached to synthesized programs. Kept small: the oracle costs an
/// eigendecomposition per synthesized loop, and large-register programs are
/// verified against rebuilt targets instead.
inline constexpr Eigen::Index kOracleDimensionCap = Eigen::Index{1} << 6;

namespace detail {

inline double spectral_radius(const QubitOperator& op) {
  double r = 0.0;
  for (double lam : op.eigenvalues_merged()) r = std::max(r, std::abs(lam));
  return r;
}

/// Largest displacement amplitude a loop may use before it gets split into
/// repetitions. Keeps every branch's mean photon number at or below
/// cutoff / 8, half the truncation-warning threshold, so split programs
/// stay deep inside the truncated space (Poisson tail ~1e-13 at the guard).
inline double displacement_guard(const FockSpace& fock) {
  return std::sqrt(static_cast<double>(fock.cutoff) / 8.0);
}

/// Number of loop repetitions needed to keep the worst branch amplitude at
/// or under the guard. Amplitudes scale as sqrt(angle), so splitting the
/// angle over m loops shrinks them by sqrt(m).
inline int split_count(double worst_amplitude, const FockSpace& fock) {
  double guard = displacement_guard(fock);
  if (worst_amplitude <= guard) return 1;
  double ratio = worst_amplitude / guard;
  return static_cast<int>(std::ceil(ratio * ratio - 1e-12));
}

inline void require_same_register(const QubitOperator& op,
                                  const HybridSpace& space,
                                  const char* what) {
  require_input(op.num_qubits() == space.num_qubits,
                std::string(what) + ": operator register size mismatch");
}

/// Commutation precondition. Dense check when feasible; above the dense
/// range the terms must commute stringwise, which is sufficient.
inline void require_commuting(const QubitOperator& a, const QubitOperator& b,
                              const char* what) {
  // Stringwise commutation is sufficient and cheap; it settles the common
  // cases (single strings, identities) without touching dense matrices.
  if (terms_pairwise_commute(a, b)) return;
  if (a.dimension() <= (Eigen::Index{1} << 10)) {
    CommutationResult res = commutation_check(a, b);
    if (res.relation != CommutationRelation::Commute) {
      throw InputError(std::string(what) +
                       ": operators must commute (||[A,B]|| = " +
                       std::to_string(res.commutator_residual) + ")");
    }
    return;
  }
  throw InputError(std::string(what) +
                   ": operators must commute termwise on large registers");
}

inline void attach_target(PulseProgram& program, SynthesisTarget target) {
  program.target =
      std::make_shared<const SynthesisTarget>(std::move(target));
}

/// Dense sin(theta_rot C + phi) through the eigendecomposition of C.
inline Matrix operator_sine(const Matrix& c, double theta_rot, double phi) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(c);
  Vector d(c.rows());
  for (Eigen::Index k = 0; k < c.rows(); ++k)
    d[k] = std::sin(theta_rot * es.eigenvalues()[k] + phi);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

/// Excitation-number operator: diagonal, counts the Hamming weight of the
/// computational basis state. Equals N/2 - J_z.
inline QubitOperator excitation_number(int num_qubits) {
  QubitOperator half_n =
      QubitOperator::identity(num_qubits, 0.5 * num_qubits);
  return half_n + (-1.0) * collective_j(Pauli::Z, num_qubits);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Pair loop

/// Four-displacement loop implementing e^{i theta A B} for commuting
/// Hermitian A and B. One loop encloses the phase-space area theta / 2 per
/// unit of the product eigenvalue ab; large angles or large eigenvalues are
/// split across repetitions so no branch outruns the Fock cutoff.
inline PulseProgram synth_pair(const QubitOperator& a, const QubitOperator& b,
                               double theta, const HybridSpace& space) {
  detail::require_same_register(a, space, "pair synthesis");
  detail::require_same_register(b, space, "pair synthesis");
  detail::require_commuting(a, b, "pair synthesis");

  double rho = std::max(detail::spectral_radius(a),
                        detail::spectral_radius(b));
  double worst = rho * std::sqrt(std::abs(theta) / 2.0);
  int m = detail::split_count(worst, space.fock);

  double per_loop = theta / m;
  Cplx alpha = std::sqrt(std::abs(per_loop) / 2.0);
  Cplx beta = kI * (per_loop < 0 ? -1.0 : 1.0) *
              std::sqrt(std::abs(per_loop) / 2.0);

  PulseProgram program(space);
  for (int rep = 0; rep < m; ++rep) {
    program.steps.push_back(PulseStep::conditional_displacement(a, alpha));
    program.steps.push_back(PulseStep::conditional_displacement(b, beta));
    program.steps.push_back(PulseStep::conditional_displacement(a, -alpha));
    program.steps.push_back(PulseStep::conditional_displacement(b, -beta));
  }
  program.cyclic = true;
  detail::attach_target(program, SynthesisTarget{PairTarget{a, b, theta}});
  if (space.qubit_dim() <= kOracleDimensionCap)
    program.expected_qubit_unitary =
        expm_hermitian(Matrix(a.to_dense() * b.to_dense()), -theta);
  return program;
}

// ---------------------------------------------------------------------------
// Triple loop: trigonometric coupling through a rotation sandwich

/// Eight-step loop implementing e^{-i tau A B sin(theta_rot C + phi)} for
/// pairwise-commuting A, B, C. The displacement legs conditioned on A run
/// inside a rotation sandwich conditioned on C, so the enclosed area per
/// branch oscillates as sin(theta_rot c + phi).
inline PulseProgram synth_triple_sin(const QubitOperator& a,
                                     const QubitOperator& b,
                                     const QubitOperator& c, double theta_rot,
                                     double phi, double tau,
                                     const HybridSpace& space) {
  detail::require_same_register(a, space, "triple synthesis");
  detail::require_same_register(b, space, "triple synthesis");
  detail::require_same_register(c, space, "triple synthesis");
  detail::require_commuting(a, b, "triple synthesis");
  detail::require_commuting(a, c, "triple synthesis");
  detail::require_commuting(b, c, "triple synthesis");

  double rho = std::max(detail::spectral_radius(a),
                        detail::spectral_radius(b));
  double worst = rho * std::sqrt(std::abs(tau) / 2.0);
  int m = detail::split_count(worst, space.fock);

  double per_loop = tau / m;
  double r = std::sqrt(std::abs(per_loop) / 2.0);
  Cplx alpha = (per_loop < 0 ? -r : r) * std::exp(kI * phi);
  Cplx beta = r;

  PulseProgram program(space);
  for (int rep = 0; rep < m; ++rep) {
    program.steps.push_back(PulseStep::conditional_rotation(c, -theta_rot));
    program.steps.push_back(PulseStep::conditional_displacement(a, alpha));
    program.steps.push_back(PulseStep::conditional_rotation(c, theta_rot));
    program.steps.push_back(PulseStep::conditional_displacement(b, beta));
    program.steps.push_back(PulseStep::conditional_rotation(c, -theta_rot));
    program.steps.push_back(PulseStep::conditional_displacement(a, -alpha));
    program.steps.push_back(PulseStep::conditional_rotation(c, theta_rot));
    program.steps.push_back(PulseStep::conditional_displacement(b, -beta));
  }
  program.cyclic = true;
  detail::attach_target(
      program, SynthesisTarget{TripleSinTarget{a, b, c, theta_rot, phi, tau}});
  if (space.qubit_dim() <= kOracleDimensionCap) {
    Matrix s = detail::operator_sine(c.to_dense(), theta_rot, phi);
    program.expected_qubit_unitary =
        expm_hermitian(Matrix(a.to_dense() * b.to_dense() * s), tau);
  }
  return program;
}

/// e^{-i lambda_t A B C}, exact. Requires C self-inverse (C^2 = I) or
/// idempotent (C^2 = C): for both, sin(theta C) = sin(theta) C holds as an
/// operator identity, so one triple loop with tau = lambda_t / sin(theta_rot)
/// lands the cubic coupling with no error.
inline PulseProgram synth_triple_exact(const QubitOperator& a,
                                       const QubitOperator& b,
                                       const QubitOperator& c,
                                       double lambda_t,
                                       const HybridSpace& space,
                                       double theta_rot = kPi / 2) {
  require_input(std::abs(std::sin(theta_rot)) > 1e-12,
                "exact triple synthesis needs sin(theta_rot) != 0");
  OperatorClass cls = classify(c);
  if (cls == OperatorClass::Generic) {
    throw UnsupportedError(
        "exact triple synthesis classification failure: the third operator "
        "must be self-inverse or idempotent, got spectrum outside "
        "{-1, 0, 1} / {0, 1}");
  }
  double tau = lambda_t / std::sin(theta_rot);
  PulseProgram program =
      synth_triple_sin(a, b, c, theta_rot, 0.0, tau, space);
  detail::attach_target(
      program,
      SynthesisTarget{TripleExactTarget{a, b, c, lambda_t, theta_rot}});
  if (space.qubit_dim() <= kOracleDimensionCap)
    program.expected_qubit_unitary = expm_hermitian(
        Matrix(a.to_dense() * b.to_dense() * c.to_dense()), lambda_t);
  return program;
}

struct TripleApproxResult {
  PulseProgram program;
  /// Upper bound on the effective-Hamiltonian error in operator norm,
  /// |tau| rho(A) rho(B) max_c |sin(theta_rot c) - theta_rot c|. Shrinks as
  /// theta_rot^2 at fixed lambda_prime_t.
  double error_bound;
};

/// e^{-i lambda_prime_t A B C} for arbitrary commuting C, approximated by
/// linearizing the sine at small rotation angle: tau = lambda_prime_t /
/// theta_rot.
inline TripleApproxResult synth_triple_approx(const QubitOperator& a,
                                              const QubitOperator& b,
                                              const QubitOperator& c,
                                              double lambda_prime_t,
                                              double theta_rot,
                                              const HybridSpace& space) {
  require_input(std::abs(theta_rot) > 1e-12,
                "approximate triple synthesis needs theta_rot != 0");
  double tau = lambda_prime_t / theta_rot;
  PulseProgram program =
      synth_triple_sin(a, b, c, theta_rot, 0.0, tau, space);
  detail::attach_target(
      program, SynthesisTarget{TripleApproxTarget{a, b, c, lambda_prime_t,
                                                  theta_rot}});
  if (space.qubit_dim() <= kOracleDimensionCap)
    program.expected_qubit_unitary = expm_hermitian(
        Matrix(a.to_dense() * b.to_dense() * c.to_dense()), lambda_prime_t);

  double sine_gap = 0.0;
  for (double lam : c.eigenvalues_merged())
    sine_gap = std::max(sine_gap, std::abs(std::sin(theta_rot * lam) -
                                           theta_rot * lam));
  double bound = std::abs(tau) * detail::spectral_radius(a) *
                 detail::spectral_radius(b) * sine_gap;
  return {std::move(program), bound};
}

// ---------------------------------------------------------------------------
// Collective-spin couplings

/// e^{-i lambda_t sin(theta_rot J_axis + phi)}: one triple loop with
/// identity displacement controls, so only the rotation is conditional.
inline PulseProgram synth_trig_collective(Pauli axis, double theta_rot,
                                          double phi, double lambda_t,
                                          const HybridSpace& space) {
  require_input(axis != Pauli::I, "collective axis must be X, Y, or Z");
  QubitOperator id = QubitOperator::identity(space.num_qubits);
  QubitOperator j = collective_j(axis, space.num_qubits);
  PulseProgram program =
      synth_triple_sin(id, id, j, theta_rot, phi, lambda_t, space);
  detail::attach_target(
      program,
      SynthesisTarget{TrigCollectiveTarget{axis, theta_rot, phi, lambda_t}});
  return program;
}

/// e^{-i sign lambda_t sigma_axis^{(x) N}}: the uniform N-body Pauli string
/// from a single collective loop. At theta_rot = pi the sine of pi J_axis
/// (+ pi/2 for even N) takes the value +/-1 exactly on every J sector, and
/// those signs reproduce the N-fold tensor-product eigenvalue up to the
/// parity constant c_N in {+1, -1}.
inline PulseProgram synth_pauli_string(Pauli axis, int sign, double lambda_t,
                                       const HybridSpace& space) {
  require_input(axis != Pauli::I, "string axis must be X, Y, or Z");
  require_input(sign == 1 || sign == -1, "sign must be +1 or -1");
  const int n = space.num_qubits;
  const bool even = (n % 2 == 0);
  const double phi = even ? kPi / 2 : 0.0;
  const double c_n = even ? std::cos(kPi * n / 2.0) : std::sin(kPi * n / 2.0);
  // c_n is +/-1, so dividing and multiplying by it are the same thing.
  const double tau = sign * lambda_t * c_n;

  QubitOperator id = QubitOperator::identity(n);
  QubitOperator j = collective_j(axis, n);
  PulseProgram program = synth_triple_sin(id, id, j, kPi, phi, tau, space);
  detail::attach_target(
      program, SynthesisTarget{PauliStringTarget{axis, sign, lambda_t}});
  if (space.qubit_dim() <= kOracleDimensionCap)
    program.expected_qubit_unitary = expm_hermitian(
        QubitOperator::uniform_string(axis, n).to_dense(), sign * lambda_t);
  return program;
}

// ---------------------------------------------------------------------------
// Commuting sums and conjugation

/// e^{-i sum_k coeff_k H_k} for pairwise-commuting terms: one pair loop per
/// Pauli string, identity terms folded into a global phase. Multi-string
/// operators are expanded stringwise; every string in the flattened family
/// must commute with every other.
inline PulseProgram synth_commuting_sum(
    const std::vector<std::pair<QubitOperator, double>>& parts,
    const HybridSpace& space) {
  require_input(!parts.empty(), "commuting sum needs at least one term");
  for (const auto& [op, coeff] : parts) {
    (void)coeff;
    detail::require_same_register(op, space, "commuting sum");
  }

  // Flatten to (string, weight) and check commutation across the family.
  std::vector<std::pair<PauliString, double>> strings;
  double phase_accum = 0.0;
  for (const auto& [op, coeff] : parts) {
    for (const PauliString& term : op.terms()) {
      if (term.is_identity()) {
        phase_accum += coeff * term.coefficient.real();
      } else {
        strings.push_back({term, coeff * term.coefficient.real()});
      }
    }
  }
  for (std::size_t i = 0; i < strings.size(); ++i)
    for (std::size_t j = i + 1; j < strings.size(); ++j)
      require_input(strings[i].first.commutes_with(strings[j].first),
                    "commuting sum: terms '" +
                        QubitOperator(space.num_qubits, {strings[i].first})
                            .to_text() +
                        "' and '" +
                        QubitOperator(space.num_qubits, {strings[j].first})
                            .to_text() +
                        "' do not commute");

  PulseProgram program(space);
  QubitOperator id = QubitOperator::identity(space.num_qubits);
  for (const auto& [term, weight] : strings) {
    PauliString unit = term;
    unit.coefficient = 1.0;
    QubitOperator s(space.num_qubits, {unit});
    // e^{-i w S} is the pair loop e^{i theta S . I} at theta = -w.
    PulseProgram loop = synth_pair(s, id, -weight, space);
    append_program(program, loop);
  }
  if (phase_accum != 0.0)
    program.steps.push_back(PulseStep::global_phase(-phase_accum));

  program.cyclic = true;
  detail::attach_target(program, SynthesisTarget{CommutingSumTarget{parts}});
  if (space.qubit_dim() <= kOracleDimensionCap) {
    QubitOperator total = QubitOperator::identity(space.num_qubits, 0.0);
    for (const auto& [op, coeff] : parts) total = total + coeff * op;
    program.expected_qubit_unitary = expm_hermitian(total.to_dense(), 1.0);
  }
  return program;
}

/// outer . inner . outer^{-1}. The outer program is any already-synthesized
/// (or hand-written) program; its register action conjugates the inner
/// target, turning e.g. diagonal couplings into rotated-frame ones.
inline PulseProgram synth_conjugated(const PulseProgram& outer,
                                     const PulseProgram& inner) {
  PulseProgram program = invert_program(outer);
  append_program(program, inner);
  append_program(program, outer);
  program.cyclic = outer.cyclic && inner.cyclic;
  if (inner.target) {
    ConjugatedTarget target;
    target.outer = std::make_shared<const PulseProgram>(outer);
    target.inner = inner.target;
    program.target =
        std::make_shared<const SynthesisTarget>(SynthesisTarget{target});
  }
  if (outer.expected_qubit_unitary && inner.expected_qubit_unitary) {
    const Matrix& v = *outer.expected_qubit_unitary;
    program.expected_qubit_unitary =
        v * (*inner.expected_qubit_unitary) * v.adjoint();
  }
  return program;
}

// ---------------------------------------------------------------------------
// Weight-sector projectors and diagonal functions

/// e^{-i phase P_n} with P_n the projector onto Hamming weight n. Uses the
/// discrete delta
///   P_n = (1/(N+1)) sum_{k=0}^{N} cos(theta_k (W - n)),  theta_k = 2 pi k /
///   (N+1),
/// where W is the excitation-number operator; the k = 0 term is a global
/// phase and each k >= 1 cosine is one triple loop, for 8N + 1 steps total.
inline PulseProgram synth_projector(int n, double phase,
                                    const HybridSpace& space) {
  const int num_qubits = space.num_qubits;
  require_input(n >= 0 && n <= num_qubits,
                "projector weight must lie in [0, N]");

  QubitOperator id = QubitOperator::identity(num_qubits);
  QubitOperator offset_weight =
      detail::excitation_number(num_qubits) +
      QubitOperator::identity(num_qubits, -static_cast<double>(n));

  const double slice = phase / (num_qubits + 1);
  PulseProgram program(space);
  program.steps.push_back(PulseStep::global_phase(-slice));
  for (int k = 1; k <= num_qubits; ++k) {
    double theta_k = 2.0 * kPi * k / (num_qubits + 1);
    // cos(x) = sin(x + pi/2).
    PulseProgram loop = synth_triple_sin(id, id, offset_weight, theta_k,
                                         kPi / 2, slice, space);
    append_program(program, loop);
  }
  program.cyclic = true;
  detail::attach_target(program, SynthesisTarget{ProjectorTarget{n, phase}});
  if (space.qubit_dim() <= kOracleDimensionCap) {
    Vector diag = Vector::Ones(space.qubit_dim());
    for (Eigen::Index q = 0; q < space.qubit_dim(); ++q) {
      int weight = 0;
      for (int b = 0; b < num_qubits; ++b) weight += (q >> b) & 1;
      if (weight == n) diag[q] = std::exp(-kI * phase);
    }
    program.expected_qubit_unitary = Matrix(diag.asDiagonal());
  }
  return program;
}

/// e^{-i t F(J_z)} for an arbitrary real F given per weight sector
/// (values[n] on Hamming weight n). F is expanded in the discrete Fourier
/// basis over the N + 1 sectors; each cosine/sine component is one triple
/// loop on the excitation-number operator, so the step count stays linear
/// in N regardless of F.
inline PulseProgram synth_f_jz(const std::vector<double>& values, double t,
                               const HybridSpace& space) {
  const int num_qubits = space.num_qubits;
  const int sectors = num_qubits + 1;
  require_input(static_cast<int>(values.size()) == sectors,
                "need exactly N + 1 sector values");

  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  const double drop = 1e-14 * (1.0 + std::abs(t) * scale);

  QubitOperator id = QubitOperator::identity(num_qubits);
  QubitOperator weight_op = detail::excitation_number(num_qubits);

  PulseProgram program(space);
  for (int k = 0; k < sectors; ++k) {
    const double theta_k = 2.0 * kPi * k / sectors;
    Cplx coeff{0.0, 0.0};
    for (int w = 0; w < sectors; ++w)
      coeff += values[w] * std::exp(-kI * (theta_k * w));
    coeff /= static_cast<double>(sectors);

    if (k == 0) {
      if (std::abs(t * coeff.real()) > drop)
        program.steps.push_back(PulseStep::global_phase(-t * coeff.real()));
      continue;
    }
    // F(w) = sum_k [Re c_k cos(theta_k w) - Im c_k sin(theta_k w)].
    double tau_cos = t * coeff.real();
    double tau_sin = -t * coeff.imag();
    if (std::abs(tau_cos) > drop)
      append_program(program, synth_triple_sin(id, id, weight_op, theta_k,
                                               kPi / 2, tau_cos, space));
    if (std::abs(tau_sin) > drop)
      append_program(program, synth_triple_sin(id, id, weight_op, theta_k,
                                               0.0, tau_sin, space));
  }
  program.cyclic = true;
  detail::attach_target(program, SynthesisTarget{FJzTarget{values, t}});
  if (space.qubit_dim() <= kOracleDimensionCap) {
    Vector diag(space.qubit_dim());
    for (Eigen::Index q = 0; q < space.qubit_dim(); ++q) {
      int weight = 0;
      for (int b = 0; b < num_qubits; ++b) weight += (q >> b) & 1;
      diag[q] = std::exp(-kI * (t * values[weight]));
    }
    program.expected_qubit_unitary = Matrix(diag.asDiagonal());
  }
  return program;
}

/// e^{-i phase |bits><bits|}: the weight-sector projector machinery run on
/// the Hamming-distance-from-bits operator, which is again a diagonal
/// single-body sum with integer spectrum 0..N vanishing exactly on |bits>.
inline PulseProgram synth_basis_projector(const std::string& bits,
                                          double phase,
                                          const HybridSpace& space) {
  const int num_qubits = space.num_qubits;
  require_input(static_cast<int>(bits.size()) == num_qubits,
                "bit string length must match the register");
  for (char ch : bits)
    require_input(ch == '0' || ch == '1',
                  "bit string may only contain '0' and '1'");

  // Distance operator: sum_j (1 - (-1)^{b_j} Z_j) / 2.
  QubitOperator distance =
      QubitOperator::identity(num_qubits, 0.5 * num_qubits);
  for (int j = 0; j < num_qubits; ++j) {
    double sign = (bits[j] == '0') ? 1.0 : -1.0;
    distance = distance + QubitOperator::single_site(Pauli::Z, j + 1,
                                                     num_qubits, -0.5 * sign);
  }

  QubitOperator id = QubitOperator::identity(num_qubits);
  const int sectors = num_qubits + 1;
  const double slice = phase / sectors;
  PulseProgram program(space);
  program.steps.push_back(PulseStep::global_phase(-slice));
  for (int k = 1; k <= num_qubits; ++k) {
    double theta_k = 2.0 * kPi * k / sectors;
    append_program(program, synth_triple_sin(id, id, distance, theta_k,
                                             kPi / 2, slice, space));
  }
  program.cyclic = true;
  detail::attach_target(program,
                        SynthesisTarget{BasisProjectorTarget{bits, phase}});
  if (space.qubit_dim() <= kOracleDimensionCap) {
    Eigen::Index index = 0;
    for (int j = 0; j < num_qubits; ++j)
      if (bits[j] == '1') index |= Eigen::Index{1} << (num_qubits - 1 - j);
    Vector diag = Vector::Ones(space.qubit_dim());
    diag[index] = std::exp(-kI * phase);
    program.expected_qubit_unitary = Matrix(diag.asDiagonal());
  }
  return program;
}

// ---------------------------------------------------------------------------
// General two-leg loop with independent rotation controls

/// Twelve-step loop implementing
///   e^{-i tau_jk A_j A_k sin(theta_j C_j - theta_k C_k + phi_jk)}
/// with tau_jk = 2 |alpha_j alpha_k| and phi_jk = arg(alpha_j) -
/// arg(alpha_k): each displacement leg sits in its own rotation sandwich,
/// so the two legs interfere at a phase-space angle set by both controls.
inline PulseProgram synth_general_pair(const GeneralPairTarget& t,
                                       const HybridSpace& space) {
  const char* what = "general pair synthesis";
  for (const QubitOperator* op : {&t.a_j, &t.a_k, &t.c_j, &t.c_k})
    detail::require_same_register(*op, space, what);
  const std::vector<const QubitOperator*> family = {&t.a_j, &t.a_k, &t.c_j,
                                                    &t.c_k};
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = i + 1; j < family.size(); ++j)
      detail::require_commuting(*family[i], *family[j], what);

  PulseProgram program(space);
  program.steps.push_back(PulseStep::conditional_rotation(t.c_j, -t.theta_j));
  program.steps.push_back(
      PulseStep::conditional_displacement(t.a_j, t.alpha_j));
  program.steps.push_back(PulseStep::conditional_rotation(t.c_j, t.theta_j));
  program.steps.push_back(PulseStep::conditional_rotation(t.c_k, -t.theta_k));
  program.steps.push_back(
      PulseStep::conditional_displacement(t.a_k, t.alpha_k));
  program.steps.push_back(PulseStep::conditional_rotation(t.c_k, t.theta_k));
  program.steps.push_back(PulseStep::conditional_rotation(t.c_j, -t.theta_j));
  program.steps.push_back(
      PulseStep::conditional_displacement(t.a_j, -t.alpha_j));
  program.steps.push_back(PulseStep::conditional_rotation(t.c_j, t.theta_j));
  program.steps.push_back(PulseStep::conditional_rotation(t.c_k, -t.theta_k));
  program.steps.push_back(
      PulseStep::conditional_displacement(t.a_k, -t.alpha_k));
  program.steps.push_back(PulseStep::conditional_rotation(t.c_k, t.theta_k));
  program.cyclic = true;
  detail::attach_target(program, SynthesisTarget{t});

  if (space.qubit_dim() <= kOracleDimensionCap) {
    double tau = 2.0 * std::abs(t.alpha_j) * std::abs(t.alpha_k);
    double phi = std::arg(t.alpha_j) - std::arg(t.alpha_k);
    Matrix arg_op = t.theta_j * t.c_j.to_dense() -
                    t.theta_k * t.c_k.to_dense();
    Matrix s = detail::operator_sine(arg_op, 1.0, phi);
    program.expected_qubit_unitary = expm_hermitian(
        Matrix(t.a_j.to_dense() * t.a_k.to_dense() * s), tau);
  }
  return program;
}

// ---------------------------------------------------------------------------
// Target dispatch

inline PulseProgram synth_target(const SynthesisTarget& target,
                                 const HybridSpace& space);

/// Dense reference unitary for a target, rebuilt independently of any
/// program claiming to implement it. Conjugated targets recurse; the outer
/// program's register action comes from the vector backend.
inline Matrix target_unitary(const SynthesisTarget& target, int num_qubits,
                             Eigen::Index dimension_cap = kDenseDimensionCap);

namespace detail {

struct SynthVisitor {
  const HybridSpace& space;

  PulseProgram operator()(const PairTarget& t) const {
    return synth_pair(t.a, t.b, t.theta, space);
  }
  PulseProgram operator()(const TripleSinTarget& t) const {
    return synth_triple_sin(t.a, t.b, t.c, t.theta_rot, t.phi, t.tau, space);
  }
  PulseProgram operator()(const TripleExactTarget& t) const {
    return synth_triple_exact(t.a, t.b, t.c, t.lambda_t, space, t.theta_rot);
  }
  PulseProgram operator()(const TripleApproxTarget& t) const {
    return synth_triple_approx(t.a, t.b, t.c, t.lambda_prime_t, t.theta_rot,
                               space)
        .program;
  }
  PulseProgram operator()(const TrigCollectiveTarget& t) const {
    return synth_trig_collective(t.axis, t.theta_rot, t.phi, t.lambda_t,
                                 space);
  }
  PulseProgram operator()(const PauliStringTarget& t) const {
    return synth_pauli_string(t.axis, t.sign, t.lambda_t, space);
  }
  PulseProgram operator()(const CommutingSumTarget& t) const {
    return synth_commuting_sum(t.parts, space);
  }
  PulseProgram operator()(const ConjugatedTarget& t) const {
    require_input(t.outer != nullptr && t.inner != nullptr,
                  "conjugated target missing outer program or inner target");
    return synth_conjugated(*t.outer, synth_target(*t.inner, space));
  }
  PulseProgram operator()(const ProjectorTarget& t) const {
    return synth_projector(t.n, t.phase, space);
  }
  PulseProgram operator()(const FJzTarget& t) const {
    return synth_f_jz(t.values, t.t, space);
  }
  PulseProgram operator()(const BasisProjectorTarget& t) const {
    return synth_basis_projector(t.bits, t.phase, space);
  }
  PulseProgram operator()(const GeneralPairTarget& t) const {
    return synth_general_pair(t, space);
  }
};

struct TargetUnitaryVisitor {
  int num_qubits;
  Eigen::Index cap;

  Eigen::Index dim() const { return Eigen::Index{1} << num_qubits; }

  void check_cap() const {
    require_input(dim() <= cap,
                  "dimension cap exceeded while building a reference "
                  "unitary");
  }

  Matrix diagonal_phase(const std::vector<Cplx>& entries) const {
    Vector d(dim());
    for (Eigen::Index q = 0; q < dim(); ++q) d[q] = entries[q];
    return Matrix(d.asDiagonal());
  }

  int weight_of(Eigen::Index q) const {
    int w = 0;
    for (int b = 0; b < num_qubits; ++b) w += (q >> b) & 1;
    return w;
  }

  Matrix operator()(const PairTarget& t) const {
    check_cap();
    return expm_hermitian(Matrix(t.a.to_dense() * t.b.to_dense()), -t.theta);
  }
  Matrix operator()(const TripleSinTarget& t) const {
    check_cap();
    Matrix s = operator_sine(t.c.to_dense(), t.theta_rot, t.phi);
    return expm_hermitian(Matrix(t.a.to_dense() * t.b.to_dense() * s), t.tau);
  }
  Matrix operator()(const TripleExactTarget& t) const {
    check_cap();
    return expm_hermitian(
        Matrix(t.a.to_dense() * t.b.to_dense() * t.c.to_dense()), t.lambda_t);
  }
  Matrix operator()(const TripleApproxTarget& t) const {
    check_cap();
    return expm_hermitian(
        Matrix(t.a.to_dense() * t.b.to_dense() * t.c.to_dense()),
        t.lambda_prime_t);
  }
  Matrix operator()(const TrigCollectiveTarget& t) const {
    check_cap();
    Matrix j = collective_j(t.axis, num_qubits).to_dense();
    return expm_hermitian(operator_sine(j, t.theta_rot, t.phi), t.lambda_t);
  }
  Matrix operator()(const PauliStringTarget& t) const {
    check_cap();
    return expm_hermitian(
        QubitOperator::uniform_string(t.axis, num_qubits).to_dense(),
        t.sign * t.lambda_t);
  }
  Matrix operator()(const CommutingSumTarget& t) const {
    check_cap();
    require_input(!t.parts.empty(), "commuting sum needs at least one term");
    QubitOperator total = QubitOperator::identity(num_qubits, 0.0);
    for (const auto& [op, coeff] : t.parts) total = total + coeff * op;
    return expm_hermitian(total.to_dense(), 1.0);
  }
  Matrix operator()(const ConjugatedTarget& t) const;
  Matrix operator()(const ProjectorTarget& t) const {
    check_cap();
    std::vector<Cplx> entries(dim(), Cplx{1.0, 0.0});
    for (Eigen::Index q = 0; q < dim(); ++q)
      if (weight_of(q) == t.n) entries[q] = std::exp(-kI * t.phase);
    return diagonal_phase(entries);
  }
  Matrix operator()(const FJzTarget& t) const {
    check_cap();
    require_input(static_cast<int>(t.values.size()) == num_qubits + 1,
                  "need exactly N + 1 sector values");
    std::vector<Cplx> entries(dim());
    for (Eigen::Index q = 0; q < dim(); ++q)
      entries[q] = std::exp(-kI * (t.t * t.values[weight_of(q)]));
    return diagonal_phase(entries);
  }
  Matrix operator()(const BasisProjectorTarget& t) const {
    check_cap();
    require_input(static_cast<int>(t.bits.size()) == num_qubits,
                  "bit string length must match the register");
    Eigen::Index index = 0;
    for (int j = 0; j < num_qubits; ++j)
      if (t.bits[j] == '1') index |= Eigen::Index{1} << (num_qubits - 1 - j);
    std::vector<Cplx> entries(dim(), Cplx{1.0, 0.0});
    entries[index] = std::exp(-kI * t.phase);
    return diagonal_phase(entries);
  }
  Matrix operator()(const GeneralPairTarget& t) const {
    check_cap();
    double tau = 2.0 * std::abs(t.alpha_j) * std::abs(t.alpha_k);
    double phi = std::arg(t.alpha_j) - std::arg(t.alpha_k);
    Matrix arg_op =
        t.theta_j * t.c_j.to_dense() - t.theta_k * t.c_k.to_dense();
    Matrix s = operator_sine(arg_op, 1.0, phi);
    return expm_hermitian(Matrix(t.a_j.to_dense() * t.a_k.to_dense() * s),
                          tau);
  }
};

inline Matrix TargetUnitaryVisitor::operator()(const ConjugatedTarget& t)
    const {
  require_input(t.outer != nullptr && t.inner != nullptr,
                "conjugated target missing outer program or inner target");
  check_cap();
  Matrix inner = target_unitary(*t.inner, num_qubits, cap);
  Matrix v = effective_qubit_unitary(*t.outer).effective_unitary;
  return v * inner * v.adjoint();
}

}  // namespace detail

inline PulseProgram synth_target(const SynthesisTarget& target,
                                 const HybridSpace& space) {
  return std::visit(detail::SynthVisitor{space}, target.value);
}

inline Matrix target_unitary(const SynthesisTarget& target, int num_qubits,
                             Eigen::Index dimension_cap) {
  return std::visit(
      detail::TargetUnitaryVisitor{num_qubits, dimension_cap}, target.value);
}

}  // namespace phasebus
