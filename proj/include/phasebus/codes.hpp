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

// Encoded qubits: a pair of orthonormal codewords plus an su(2) triple of
// encoded Pauli operators acting on them the way X, Y, Z act on a bare
// qubit. The triples come from uniform/near-uniform Pauli strings, so every
// encoded rotation can be driven through the same loop synthesis as a bare
// one.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "phasebus/pauli.hpp"

namespace phasebus {

struct Code {
  std::string name;
  int physical_qubits = 0;
  Vector zero_codeword;  // dimension 2^physical_qubits
  Vector one_codeword;
  QubitOperator x_tilde{1}, y_tilde{1}, z_tilde{1};
};

namespace detail {

/// Basis index of |b1 b2 ... bn> with qubit 1 most significant.
inline Eigen::Index bits_index(const std::string& bits) {
  Eigen::Index idx = 0;
  for (char c : bits) {
    require_input(c == '0' || c == '1', "codeword bits must be 0/1");
    idx = (idx << 1) | (c == '1' ? 1 : 0);
  }
  return idx;
}

inline Vector superposition(int num_qubits,
                            const std::vector<std::string>& kets,
                            double amplitude) {
  Vector v = Vector::Zero(Eigen::Index(1) << num_qubits);
  for (const auto& bits : kets) v[bits_index(bits)] += amplitude;
  return v;
}

inline void check_code_invariants(const Code& code) {
  const double n0 = code.zero_codeword.norm();
  const double n1 = code.one_codeword.norm();
  require_input(std::abs(n0 - 1.0) <= 1e-12 && std::abs(n1 - 1.0) <= 1e-12,
                "codewords of '" + code.name + "' are not normalized");
  require_input(std::abs(code.zero_codeword.dot(code.one_codeword)) <= 1e-12,
                "codewords of '" + code.name + "' are not orthogonal");
  // x_tilde must map |0_C> to |1_C> exactly, and z_tilde must split them
  // with eigenvalues +1 / -1.
  Matrix x = code.x_tilde.to_dense();
  Matrix z = code.z_tilde.to_dense();
  require_input((x * code.zero_codeword - code.one_codeword).norm() <= 1e-12,
                "x_tilde of '" + code.name + "' does not flip |0_C>");
  require_input((z * code.zero_codeword - code.zero_codeword).norm() <=
                    1e-12,
                "z_tilde of '" + code.name + "' does not fix |0_C>");
  require_input((z * code.one_codeword + code.one_codeword).norm() <= 1e-12,
                "z_tilde of '" + code.name + "' does not negate |1_C>");
}

}  // namespace detail

inline std::vector<std::string> known_codes() {
  return {"steane3", "steane7", "five_qubit", "dfs2", "dfs4"};
}

/// Builds one of the known encoded qubits:
///   steane3    3-qubit majority-style code
///   steane7    7-qubit CSS code
///   five_qubit 5-qubit cyclic stabilizer code
///   dfs2       2-qubit decoherence-free pair {|01>, |10>}
///   dfs4       4-qubit decoherence-free subspace (weight-2 sectors)
inline Code build_code(const std::string& name) {
  Code code;
  code.name = name;
  if (name == "steane3") {
    code.physical_qubits = 3;
    code.zero_codeword =
        detail::superposition(3, {"111", "100", "010", "001"}, 0.5);
    code.one_codeword =
        detail::superposition(3, {"000", "011", "101", "110"}, 0.5);
  } else if (name == "steane7") {
    code.physical_qubits = 7;
    const double a = 1.0 / std::sqrt(8.0);
    code.zero_codeword = detail::superposition(
        7,
        {"1111111", "0101010", "1001100", "0011001", "1110000", "0100101",
         "1000011", "0010110"},
        a);
    // |1_C> = X^{tensor 7} |0_C>: complement every ket.
    code.one_codeword = detail::superposition(
        7,
        {"0000000", "1010101", "0110011", "1100110", "0001111", "1011010",
         "0111100", "1101001"},
        a);
  } else if (name == "five_qubit") {
    code.physical_qubits = 5;
    // Q = (1/4)[ 1 + sum_cyc X_i X_{i+1} - sum_cyc X_i X_{i+2}
    //              - sum_cyc X_i X_{i+1} X_{i+2} X_{i+3} ],
    // |0_C> = Q|00000>, |1_C> = Q|11111>; Q commutes with every
    // sigma_axis^{tensor 5}.
    std::vector<PauliString> q_terms;
    q_terms.emplace_back(std::vector<Pauli>(5, Pauli::I), 0.25);
    auto x_string = [](std::initializer_list<int> sites, double c) {
      std::vector<Pauli> f(5, Pauli::I);
      for (int s : sites) f[s % 5] = Pauli::X;
      return PauliString(std::move(f), c);
    };
    for (int i = 0; i < 5; ++i) {
      q_terms.push_back(x_string({i, i + 1}, 0.25));
      q_terms.push_back(x_string({i, i + 2}, -0.25));
      q_terms.push_back(x_string({i, i + 1, i + 2, i + 3}, -0.25));
    }
    QubitOperator q(5, std::move(q_terms));
    Matrix qd = q.to_dense();
    code.zero_codeword = qd.col(detail::bits_index("00000"));
    code.one_codeword = qd.col(detail::bits_index("11111"));
  } else if (name == "dfs2") {
    code.physical_qubits = 2;
    code.zero_codeword = detail::superposition(2, {"01"}, 1.0);
    code.one_codeword = detail::superposition(2, {"10"}, 1.0);
  } else if (name == "dfs4") {
    code.physical_qubits = 4;
    const double a = 1.0 / std::sqrt(3.0);
    code.zero_codeword =
        detail::superposition(4, {"0011", "0110", "0101"}, a);
    code.one_codeword =
        detail::superposition(4, {"1100", "1001", "1010"}, a);
  } else {
    throw UnsupportedError("unknown code '" + name + "'");
  }
  Su2Triple triple = su2_triple(code.physical_qubits);
  code.x_tilde = triple.x;
  code.y_tilde = triple.y;
  code.z_tilde = triple.z;
  detail::check_code_invariants(code);
  return code;
}

}  // namespace phasebus
