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

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace phasebus {

using Cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

constexpr Cplx kI{0.0, 1.0};
constexpr double kPi = 3.14159265358979323846;

/// Hard ceiling on any dense matrix dimension produced by this library.
/// Protects desk-scale runs from accidental exponential blowups; overridable
/// per call site where a cap parameter is exposed.
constexpr Eigen::Index kDenseDimensionCap = 1 << 18;

/// Tolerance used when deciding whether a matrix is Hermitian.
constexpr double kHermiticityTol = 1e-10;

/// Nearby eigenvalues are merged into one spectral block within this
/// tolerance, so conditional operations see one branch per physical value.
constexpr double kEigenvalueMergeTol = 1e-9;

/// A displacement loop counts as closed when the amplitudes sum to less
/// than this in absolute value.
constexpr double kLoopClosureTol = 1e-12;

/// Raised for malformed or inconsistent caller input (bad dimensions,
/// violated algebraic preconditions, unparseable text). CLI maps it to
/// exit code 2.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Raised for well-formed requests that fall outside what the synthesis
/// scheme can do (unknown variants, exact synthesis of a generic triple).
/// CLI maps it to exit code 3.
class UnsupportedError : public std::runtime_error {
 public:
  explicit UnsupportedError(const std::string& msg)
      : std::runtime_error(msg) {}
};

inline void require_input(bool cond, const std::string& msg) {
  if (!cond) throw InputError(msg);
}

}  // namespace phasebus
