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

// Synthesis target descriptors: plain data recording which unitary a pulse
// program is meant to implement. The synthesizer consumes these; programs
// carry them so a verifier can rebuild the reference unitary without
// trusting the program that claims to implement it.

#pragma once

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "phasebus/pauli.hpp"

namespace phasebus {

struct PulseProgram;     // hybrid.hpp
struct SynthesisTarget;  // defined at the end of this header

/// e^{i theta A B} for commuting Hermitian A, B.
struct PairTarget {
  QubitOperator a{1}, b{1};
  double theta = 0.0;
};

/// e^{-i tau A B sin(theta_rot C + phi)} for pairwise-commuting A, B, C;
/// the sine of an operator is defined on its eigenvalues.
struct TripleSinTarget {
  QubitOperator a{1}, b{1}, c{1};
  double theta_rot = 0.0;
  double phi = 0.0;
  double tau = 0.0;
};

/// e^{-i lambda_t A B C}, exact; requires C self-inverse or idempotent.
struct TripleExactTarget {
  QubitOperator a{1}, b{1}, c{1};
  double lambda_t = 0.0;
  double theta_rot = kPi / 2;
};

/// e^{-i lambda_prime_t A B C} approximated at small theta_rot; any C.
struct TripleApproxTarget {
  QubitOperator a{1}, b{1}, c{1};
  double lambda_prime_t = 0.0;
  double theta_rot = 0.0;
};

/// e^{-i lambda_t sin(theta_rot J_axis + phi)} on the register's collective
/// spin component J_axis = (1/2) sum_j sigma_axis,j.
struct TrigCollectiveTarget {
  Pauli axis;
  double theta_rot;
  double phi;
  double lambda_t;
};

/// e^{-i sign lambda_t sigma_axis^{(x) N}}, the uniform Pauli string on the
/// whole register.
struct PauliStringTarget {
  Pauli axis;
  int sign;  // +1 or -1
  double lambda_t;
};

/// e^{-i sum_k coeff_k H_k} for pairwise-commuting Hamiltonian terms.
struct CommutingSumTarget {
  std::vector<std::pair<QubitOperator, double>> parts;
};

/// outer . inner . outer^{-1}: the inner target conjugated by the register
/// action of an already-synthesized outer program.
struct ConjugatedTarget {
  std::shared_ptr<const PulseProgram> outer;
  std::shared_ptr<const SynthesisTarget> inner;
};

/// e^{-i phase P_n}, with P_n the projector onto the Hamming-weight-n
/// sector of the register.
struct ProjectorTarget {
  int n;
  double phase;
};

/// e^{-i t F(J_z)} with F given by its value on each weight sector:
/// values[n] applies to Hamming weight n, i.e. J_z eigenvalue N/2 - n.
struct FJzTarget {
  std::vector<double> values;
  double t;
};

/// e^{-i phase |bits><bits|} on one computational basis state.
struct BasisProjectorTarget {
  std::string bits;
  double phase;
};

/// e^{-i tau_jk A_j A_k sin(theta_j C_j - theta_k C_k + phi_jk)} with
/// tau_jk = 2 |alpha_j alpha_k| and phi_jk = arg(alpha_j) - arg(alpha_k),
/// for a pairwise-commuting family {A_j, A_k, C_j, C_k}.
struct GeneralPairTarget {
  QubitOperator a_j{1}, a_k{1}, c_j{1}, c_k{1};
  double theta_j = 0.0, theta_k = 0.0;
  Cplx alpha_j{0.0, 0.0}, alpha_k{0.0, 0.0};
};

struct SynthesisTarget {
  std::variant<PairTarget, TripleSinTarget, TripleExactTarget,
               TripleApproxTarget, TrigCollectiveTarget, PauliStringTarget,
               CommutingSumTarget, ConjugatedTarget, ProjectorTarget,
               FJzTarget, BasisProjectorTarget, GeneralPairTarget>
      value;
};

}  // namespace phasebus
