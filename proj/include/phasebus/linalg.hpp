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

#include <cmath>
#include <string>

#include "phasebus/common.hpp"

namespace phasebus {

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Kronecker product with the global ordering convention used everywhere in
/// this library: the left factor is the slow (most significant) index. For a
/// hybrid register this means qubits on the left, Fock mode on the right.
inline Matrix kron(const Matrix& a, const Matrix& b,
                   Eigen::Index cap = kDenseDimensionCap) {
  if (a.rows() * b.rows() > cap || a.cols() * b.cols() > cap) {
    throw InputError("dimension cap exceeded: kron would produce " +
                     std::to_string(a.rows() * b.rows()) + " x " +
                     std::to_string(a.cols() * b.cols()) +
                     " (cap = " + std::to_string(cap) + ")");
  }
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// exp(-i H t) for Hermitian H, evaluated through the eigendecomposition so
/// the result is unitary to machine precision at any dimension. This is the
/// only matrix-exponential route in the library; there is deliberately no
/// scaling-and-squaring fallback.
inline Matrix expm_hermitian(const Matrix& h, double t) {
  require_input(h.rows() == h.cols(),
                "hermiticity violation: matrix is not square");
  const double herm_defect = max_abs(h - h.adjoint());
  if (herm_defect > kHermiticityTol) {
    throw InputError("hermiticity violation: ||H - H^dag||_max = " +
                     std::to_string(herm_defect));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Eigen::Index d = h.rows();
  Vector phases(d);
  for (Eigen::Index k = 0; k < d; ++k)
    phases[k] = std::exp(Cplx(0.0, -es.eigenvalues()[k] * t));
  return es.eigenvectors() * phases.asDiagonal() *
         es.eigenvectors().adjoint();
}

/// Entanglement (process) fidelity |tr(U^dag V)|^2 / d^2 between two
/// same-sized unitaries. Invariant under a global phase on either argument;
/// equals 1 iff U = e^{i phi} V.
inline double process_fidelity(const Matrix& u, const Matrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols() || u.rows() != u.cols()) {
    throw InputError("dimension mismatch: process_fidelity got " +
                     std::to_string(u.rows()) + " x " +
                     std::to_string(u.cols()) + " vs " +
                     std::to_string(v.rows()) + " x " +
                     std::to_string(v.cols()));
  }
  const double d = static_cast<double>(u.rows());
  const Cplx tr = (u.adjoint() * v).trace();
  return std::norm(tr) / (d * d);
}

inline bool is_unitary(const Matrix& u, double tol = 1e-10) {
  if (u.rows() != u.cols()) return false;
  return max_abs(u.adjoint() * u -
                 Matrix::Identity(u.rows(), u.cols())) <= tol;
}

/// Largest eigenphase of U^dag V after removing the best global phase.
/// For U = exp(-i H1), V = exp(-i H2) with commuting, nearby generators this
/// is the operator-norm error of the effective Hamiltonian (it scales
/// linearly in ||H1 - H2||, where 1 - process_fidelity scales quadratically).
inline double phase_distance(const Matrix& u, const Matrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols() || u.rows() != u.cols()) {
    throw InputError("dimension mismatch: phase_distance got " +
                     std::to_string(u.rows()) + " x " + std::to_string(u.cols()) +
                     " vs " + std::to_string(v.rows()) + " x " +
                     std::to_string(v.cols()));
  }
  Matrix w = u.adjoint() * v;
  Cplx tr = w.trace();
  if (std::abs(tr) > 1e-14) w *= std::conj(tr) / std::abs(tr);
  Eigen::ComplexEigenSolver<Matrix> es(w);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < w.rows(); ++k)
    worst = std::max(worst, std::abs(std::arg(es.eigenvalues()[k])));
  return worst;
}

}  // namespace phasebus
