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

// Test-side oracles. Everything in this header is deliberately independent
// of the library's own computational paths: exponentials by Taylor series
// instead of eigendecomposition, areas by the shoelace formula instead of
// the incremental composition phase, search amplification by direct dense
// reflections instead of pulse programs. Tests compare library output
// against these.

#pragma once

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

using Cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// exp(-i H t) summed as a plain Taylor series. Only valid when ||H t|| is
// small enough for the series to converge quickly; callers keep ||H t|| < 4.
inline Matrix taylor_expm(const Matrix& h, double t, int terms = 64) {
  Matrix acc = Matrix::Identity(h.rows(), h.cols());
  Matrix term = Matrix::Identity(h.rows(), h.cols());
  const Cplx factor(0.0, -t);
  for (int k = 1; k <= terms; ++k) {
    term = (term * h) * (factor / static_cast<double>(k));
    acc += term;
  }
  return acc;
}

// Twice the signed area of the closed polygon traced by partial sums of
// `steps` starting at the origin, via the shoelace formula on vertices.
inline double twice_shoelace_area(const std::vector<Cplx>& steps) {
  std::vector<Cplx> vertices;
  vertices.emplace_back(0.0, 0.0);
  Cplx z{0.0, 0.0};
  for (const Cplx& s : steps) {
    z += s;
    vertices.push_back(z);
  }
  double twice_area = 0.0;
  for (size_t j = 0; j + 1 < vertices.size(); ++j) {
    const Cplx &a = vertices[j], &b = vertices[j + 1];
    twice_area += a.real() * b.imag() - b.real() * a.imag();
  }
  return twice_area;
}

inline Matrix random_matrix(std::mt19937& rng, int d) {
  std::normal_distribution<double> g;
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Cplx(g(rng), g(rng));
  return m;
}

inline Matrix random_hermitian(std::mt19937& rng, int d) {
  Matrix m = random_matrix(rng, d);
  return 0.5 * (m + m.adjoint()).eval();
}

// Haar-ish random unitary: QR of a Ginibre matrix with the phase of R's
// diagonal folded into Q.
inline Matrix random_unitary(std::mt19937& rng, int d) {
  Matrix m = random_matrix(rng, d);
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < d; ++k) {
    Cplx ph = r(k, k) / std::abs(r(k, k));
    q.col(k) *= ph;
  }
  return q;
}

// A commuting pair of Hermitian operators with a shared random eigenbasis;
// eigenvalues drawn uniformly from [-scale, scale].
inline std::pair<Matrix, Matrix> random_commuting_pair(std::mt19937& rng,
                                                       int d,
                                                       double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix v = random_unitary(rng, d);
  Eigen::VectorXcd d1(d), d2(d);
  for (int k = 0; k < d; ++k) {
    d1[k] = u(rng);
    d2[k] = u(rng);
  }
  Matrix a = v * d1.asDiagonal() * v.adjoint();
  Matrix b = v * d2.asDiagonal() * v.adjoint();
  // Symmetrize away the last few ulps so hermiticity checks never flake.
  a = 0.5 * (a + a.adjoint()).eval();
  b = 0.5 * (b + b.adjoint()).eval();
  return {a, b};
}

// Expands a Hermitian matrix on n qubits in the Pauli-string basis by
// projecting with traces: coeff(S) = tr(S M) / 2^n. Exhaustive over all 4^n
// strings, so only for small n.
template <typename PauliEnum, typename OperatorType, typename StringType>
inline OperatorType pauli_expand(const Matrix& m, int n) {
  const int dim = 1 << n;
  std::vector<StringType> terms;
  std::vector<PauliEnum> letters = {PauliEnum::I, PauliEnum::X, PauliEnum::Y,
                                    PauliEnum::Z};
  const long total = 1L << (2 * n);
  for (long code = 0; code < total; ++code) {
    std::vector<PauliEnum> factors(n);
    long c = code;
    for (int j = 0; j < n; ++j) {
      factors[j] = letters[c % 4];
      c /= 4;
    }
    StringType s(factors, Cplx{1.0, 0.0});
    Cplx coeff = (s.to_dense() * m).trace() / static_cast<double>(dim);
    if (std::abs(coeff) < 1e-13) continue;
    s.coefficient = coeff.real();
    terms.push_back(std::move(s));
  }
  return OperatorType(n, std::move(terms));
}

// Dense amplitude-amplification iteration built from explicit reflections,
// with no pulse machinery: A = Walsh-Hadamard, S0/Schi as diagonal phase
// matrices, Q = -A S0 A^{-1} Schi.
struct DenseAA {
  int n_qubits;
  Matrix a;        // preparation operator
  Matrix s0;       // e^{i phi |0><0|}
  Matrix schi;     // prod over marked of e^{i vartheta |m><m|}
  Vector state;    // current state

  DenseAA(int n, const std::vector<int>& marked, double phi, double vartheta)
      : n_qubits(n) {
    const int d = 1 << n;
    Matrix h1(2, 2);
    h1 << 1, 1, 1, -1;
    h1 /= std::sqrt(2.0);
    a = Matrix::Identity(1, 1);
    for (int q = 0; q < n; ++q) {
      Matrix next(a.rows() * 2, a.cols() * 2);
      for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
          next.block(i * 2, j * 2, 2, 2) = a(i, j) * h1;
      a = next;
    }
    s0 = Matrix::Identity(d, d);
    s0(0, 0) = std::exp(Cplx(0.0, phi));
    schi = Matrix::Identity(d, d);
    for (int m : marked) schi(m, m) = std::exp(Cplx(0.0, vartheta));
    state = a * Vector::Unit(d, 0);
  }

  void iterate() {
    state = -(a * (s0 * (a.adjoint() * (schi * state))));
  }

  double marked_probability(const std::vector<int>& marked) const {
    double p = 0.0;
    for (int m : marked) p += std::norm(state[m]);
    return p;
  }
};

}  // namespace oracles
