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

// Truncated single-mode bosonic phase space.
//
// Conventions (fixed library-wide):
//   * D(alpha) = exp(alpha a^dag - alpha^* a), the standard displacement.
//     Composition obeys D(beta) D(alpha) = e^{i Im(beta alpha^*)}
//     D(alpha + beta), and a closed rectangle picks up
//     e^{2 i Im(beta alpha^*)}: the phase is twice the enclosed area.
//     (Some references scale amplitudes so that the loop phase reads
//     Im(beta alpha^*); that convention is D(sqrt(2) alpha) in ours. The
//     factor-2 dictionary is applied once, here, and never again.)
//   * R(theta) = exp(i theta a^dag a), exact on the truncated space.
//   * Displacements are exponentials of the *truncated* generator, so they
//     are exactly unitary at every cutoff; truncation shows up as deviation
//     from the analytic (infinite-dimensional) matrix elements, which
//     truncation_residual measures on a low-lying probe block.

#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "phasebus/linalg.hpp"

namespace phasebus {

struct FockSpace {
  int cutoff;  // number of retained Fock levels |0> .. |cutoff-1>

  explicit FockSpace(int cutoff_levels) : cutoff(cutoff_levels) {
    require_input(cutoff >= 2, "FockSpace cutoff must be >= 2, got " +
                                   std::to_string(cutoff));
  }
};

/// Annihilation operator: a[n-1, n] = sqrt(n).
inline Matrix annihilation(const FockSpace& space) {
  Matrix a = Matrix::Zero(space.cutoff, space.cutoff);
  for (int n = 1; n < space.cutoff; ++n)
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

inline Matrix number_operator(const FockSpace& space) {
  Matrix n = Matrix::Zero(space.cutoff, space.cutoff);
  for (int k = 0; k < space.cutoff; ++k) n(k, k) = static_cast<double>(k);
  return n;
}

/// x = (a + a^dag)/sqrt(2), so [x, p] = i.
inline Matrix position_quadrature(const FockSpace& space) {
  Matrix a = annihilation(space);
  return (a + a.adjoint()) / std::sqrt(2.0);
}

/// p = -i (a - a^dag)/sqrt(2).
inline Matrix momentum_quadrature(const FockSpace& space) {
  Matrix a = annihilation(space);
  return -kI * (a - a.adjoint()) / std::sqrt(2.0);
}

/// True displacement amplitude guard. Coherent amplitudes with
/// |alpha|^2 > cutoff/4 park too much population near the truncation edge
/// for the probe block to stay clean; callers record this as a warning and
/// keep going (it is never an error).
inline std::optional<std::string> truncation_warning(Cplx alpha,
                                                     const FockSpace& space) {
  const double photons = std::norm(alpha);
  if (photons <= space.cutoff / 4.0) return std::nullopt;
  return "displacement amplitude |alpha|^2 = " + std::to_string(photons) +
         " exceeds cutoff/4 = " + std::to_string(space.cutoff / 4.0) +
         "; probe-block fidelity is not protected";
}

/// D(alpha) = exp(alpha a^dag - alpha^* a) on the truncated space, via the
/// Hermitian exponential of the truncated generator. Exactly unitary at any
/// cutoff.
inline Matrix displacement(Cplx alpha, const FockSpace& space) {
  Matrix a = annihilation(space);
  // alpha a^dag - alpha^* a is anti-Hermitian; i * it is Hermitian.
  Matrix k = kI * (alpha * a.adjoint() - std::conj(alpha) * a);
  return expm_hermitian(k, 1.0);
}

/// R(theta) = exp(i theta a^dag a): diagonal, exact at any cutoff.
inline Matrix rotation(double theta, const FockSpace& space) {
  Matrix r = Matrix::Zero(space.cutoff, space.cutoff);
  for (int n = 0; n < space.cutoff; ++n)
    r(n, n) = std::exp(Cplx(0.0, theta * n));
  return r;
}

/// Infinite-dimensional matrix elements <m|D(alpha)|n> (associated-Laguerre
/// closed form), evaluated on the truncated index range. Used as the
/// comparison target when measuring truncation error; never used as a
/// propagation path.
inline Matrix analytic_displacement(Cplx alpha, const FockSpace& space) {
  const double x = std::norm(alpha);
  const double envelope = std::exp(-x / 2.0);
  Matrix d(space.cutoff, space.cutoff);
  for (int m = 0; m < space.cutoff; ++m) {
    for (int n = 0; n < space.cutoff; ++n) {
      const int lo = std::min(m, n), hi = std::max(m, n);
      // prefactor sqrt(lo!/hi!) * step^(hi-lo), accumulated stably.
      Cplx step = (m >= n) ? alpha : -std::conj(alpha);
      Cplx pre = 1.0;
      for (int k = lo + 1; k <= hi; ++k) pre *= step / std::sqrt(double(k));
      d(m, n) = pre * envelope *
                std::assoc_laguerre(unsigned(lo), unsigned(hi - lo), x);
    }
  }
  return d;
}

/// Phase of the Weyl composition law: D(beta) D(alpha) =
/// e^{i compose_phase(beta, alpha)} D(alpha + beta).
inline double compose_phase(Cplx beta, Cplx alpha) {
  return std::imag(beta * std::conj(alpha));
}

/// An ordered list of displacement amplitudes forming a closed loop.
struct LoopSpec {
  std::vector<Cplx> amplitudes;

  explicit LoopSpec(std::vector<Cplx> amps) : amplitudes(std::move(amps)) {
    Cplx total{0.0, 0.0};
    for (const Cplx& a : amplitudes) total += a;
    if (std::abs(total) > kLoopClosureTol) {
      throw InputError("open loop: displacement amplitudes sum to |" +
                       std::to_string(std::abs(total)) + "| > 1e-12");
    }
  }
};

/// Accumulated geometric phase of a closed displacement loop: the sum of
/// pairwise composition phases against the running partial sum. Equals
/// twice the signed area enclosed by the polygon of partial sums.
inline double polygon_phase(const LoopSpec& loop) {
  double phase = 0.0;
  Cplx z{0.0, 0.0};
  for (const Cplx& step : loop.amplitudes) {
    phase += compose_phase(step, z);
    z += step;
  }
  return phase;
}

/// Worst deviation, over the first probe_dim Fock columns, of u from exact
/// unitarity and (when given) from an analytic target matrix. The probe
/// block must sit in the lower half of the retained space so that edge
/// effects cannot masquerade as convergence.
inline double truncation_residual(const Matrix& u, const FockSpace& space,
                                  int probe_dim,
                                  const Matrix* analytic_target = nullptr) {
  require_input(probe_dim >= 1 && 2 * probe_dim <= space.cutoff,
                "probe_dim must satisfy 1 <= probe_dim <= cutoff/2, got " +
                    std::to_string(probe_dim) + " at cutoff " +
                    std::to_string(space.cutoff));
  require_input(u.rows() == space.cutoff && u.cols() == space.cutoff,
                "dimension mismatch: operator does not match Fock cutoff");
  Matrix gram_defect =
      (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()))
          .leftCols(probe_dim);
  double residual = max_abs(gram_defect);
  if (analytic_target != nullptr) {
    residual = std::max(
        residual, max_abs((u - *analytic_target).leftCols(probe_dim).eval()));
  }
  return residual;
}

/// Convenience form: residual of the truncated-generator displacement
/// against its analytic matrix elements.
inline double displacement_truncation_residual(Cplx alpha,
                                               const FockSpace& space,
                                               int probe_dim) {
  Matrix target = analytic_displacement(alpha, space);
  Matrix u = displacement(alpha, space);
  return truncation_residual(u, space, probe_dim, &target);
}

}  // namespace phasebus
