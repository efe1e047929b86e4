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

// Pauli-string algebra and Hermitian qubit operators.
//
// Conventions (fixed library-wide):
//   * Tensor order: qubit 1 is the leftmost (most significant) factor.
//   * |0> is the +1 eigenstate of sigma_z.
//   * Text format: terms like "0.5 * Z1 X3" joined with " + "; unlisted
//     qubits carry identity; "I" stands for the identity term. Qubit
//     indices are 1-based in text.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "phasebus/linalg.hpp"

namespace phasebus {

enum class Pauli : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_letter(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

inline Matrix pauli_matrix(Pauli p) {
  Matrix m(2, 2);
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, Cplx(0, -1), Cplx(0, 1), 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

/// Shortest round-trip decimal text for a double; the canonical float
/// format used by every serializer in this library.
inline std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  require_input(res.ec == std::errc() && res.ptr == s.data() + s.size(),
                "could not parse number '" + s + "'");
  return v;
}

/// A scalar multiple of a tensor product of Pauli matrices. Products track
/// the algebraic phase exactly (coefficients stay in {1, i, -1, -i} times
/// the operand coefficients).
struct PauliString {
  std::vector<Pauli> factors;  // index j = qubit j+1
  Cplx coefficient{1.0, 0.0};

  PauliString() = default;
  PauliString(std::vector<Pauli> f, Cplx c)
      : factors(std::move(f)), coefficient(c) {}

  int num_qubits() const { return static_cast<int>(factors.size()); }

  bool is_identity() const {
    return std::all_of(factors.begin(), factors.end(),
                       [](Pauli p) { return p == Pauli::I; });
  }

  bool is_diagonal() const {
    return std::all_of(factors.begin(), factors.end(), [](Pauli p) {
      return p == Pauli::I || p == Pauli::Z;
    });
  }

  /// Single-site product table: returns the resulting Pauli and writes the
  /// phase exponent k (i^k) into `phase_quarter_turns`.
  static Pauli site_product(Pauli a, Pauli b, int& phase_quarter_turns) {
    if (a == Pauli::I) return b;
    if (b == Pauli::I) return a;
    if (a == b) return Pauli::I;
    // Cyclic: XY = iZ, YZ = iX, ZX = iY; reversed order picks up -i.
    static constexpr int kNext[4] = {0, 2, 3, 1};  // X->Y, Y->Z, Z->X
    phase_quarter_turns +=
        (kNext[static_cast<int>(a)] == static_cast<int>(b)) ? 1 : 3;
    for (Pauli c : {Pauli::X, Pauli::Y, Pauli::Z})
      if (c != a && c != b) return c;
    return Pauli::I;  // unreachable
  }

  friend PauliString operator*(const PauliString& lhs,
                               const PauliString& rhs) {
    require_input(lhs.factors.size() == rhs.factors.size(),
                  "dimension mismatch: Pauli strings act on different "
                  "register sizes");
    PauliString out;
    out.factors.resize(lhs.factors.size());
    int quarter_turns = 0;
    for (size_t j = 0; j < lhs.factors.size(); ++j)
      out.factors[j] =
          site_product(lhs.factors[j], rhs.factors[j], quarter_turns);
    static constexpr Cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    out.coefficient =
        lhs.coefficient * rhs.coefficient * kIPow[quarter_turns % 4];
    return out;
  }

  /// Strings commute iff they disagree on an even number of non-identity
  /// sites.
  bool commutes_with(const PauliString& other) const {
    int anti = 0;
    for (size_t j = 0; j < factors.size(); ++j) {
      Pauli a = factors[j], b = other.factors[j];
      if (a != Pauli::I && b != Pauli::I && a != b) ++anti;
    }
    return anti % 2 == 0;
  }

  Matrix to_dense() const {
    Matrix m = Matrix::Identity(1, 1) * coefficient;
    for (Pauli p : factors) m = kron(m, pauli_matrix(p));
    return m;
  }

  /// Applies this string to every column of a qubit-register block (rows
  /// indexed by computational basis states) without forming a matrix.
  void apply_to_columns(const Matrix& in, Matrix& out) const {
    const int n = num_qubits();
    const Eigen::Index rows = Eigen::Index(1) << n;
    require_input(in.rows() == rows, "dimension mismatch: register size");
    out.resize(in.rows(), in.cols());
    Eigen::Index flip_mask = 0;
    for (int j = 0; j < n; ++j) {
      Pauli p = factors[j];
      if (p == Pauli::X || p == Pauli::Y)
        flip_mask |= Eigen::Index(1) << (n - 1 - j);
    }
    for (Eigen::Index q = 0; q < rows; ++q) {
      Cplx phase = coefficient;
      for (int j = 0; j < n; ++j) {
        const int bit = (q >> (n - 1 - j)) & 1;
        switch (factors[j]) {
          case Pauli::Y: phase *= bit ? Cplx(0, -1) : Cplx(0, 1); break;
          case Pauli::Z: phase *= bit ? -1.0 : 1.0; break;
          default: break;
        }
      }
      out.row(q ^ flip_mask) = phase * in.row(q);
    }
  }
};

enum class OperatorClass { SelfInverse, Idempotent, Generic };

inline std::string to_string(OperatorClass c) {
  switch (c) {
    case OperatorClass::SelfInverse: return "self_inverse";
    case OperatorClass::Idempotent: return "idempotent";
    case OperatorClass::Generic: return "generic";
  }
  return "generic";
}

/// Hermitian operator on an n-qubit register, stored as a real combination
/// of Pauli strings in canonical form (terms sorted lexicographically by
/// factors, like terms combined, zero terms dropped). The spectral
/// decomposition is computed once on demand and cached; eigenvalues closer
/// than 1e-9 are merged into a single branch.
class QubitOperator {
 public:
  struct Spectral {
    std::vector<double> eigenvalues;  // ascending, merged
    std::vector<Matrix> projectors;   // rank-preserving, same length
  };

  explicit QubitOperator(int num_qubits) : num_qubits_(num_qubits) {
    require_input(num_qubits >= 1, "operator needs at least one qubit");
  }

  QubitOperator(int num_qubits, std::vector<PauliString> terms)
      : num_qubits_(num_qubits) {
    require_input(num_qubits >= 1, "operator needs at least one qubit");
    for (auto& t : terms) {
      require_input(t.num_qubits() == num_qubits_,
                    "dimension mismatch: term register size");
      terms_.push_back(std::move(t));
    }
    canonicalize();
  }

  static QubitOperator identity(int num_qubits, double scale = 1.0) {
    PauliString id(std::vector<Pauli>(num_qubits, Pauli::I), scale);
    return QubitOperator(num_qubits, {id});
  }

  static QubitOperator single_site(Pauli p, int qubit_1based,
                                   int num_qubits, double scale = 1.0) {
    require_input(qubit_1based >= 1 && qubit_1based <= num_qubits,
                  "qubit index out of range");
    std::vector<Pauli> f(num_qubits, Pauli::I);
    f[qubit_1based - 1] = p;
    return QubitOperator(num_qubits, {PauliString(std::move(f), scale)});
  }

  /// sigma_axis applied to every qubit: sigma^{tensor N}.
  static QubitOperator uniform_string(Pauli p, int num_qubits,
                                      double scale = 1.0) {
    return QubitOperator(num_qubits,
                         {PauliString(std::vector<Pauli>(num_qubits, p),
                                      scale)});
  }

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dimension() const { return Eigen::Index(1) << num_qubits_; }
  const std::vector<PauliString>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }

  bool is_identity_multiple(double* scale = nullptr) const {
    if (terms_.size() != 1 || !terms_[0].is_identity()) return false;
    if (scale != nullptr) *scale = terms_[0].coefficient.real();
    return true;
  }

  bool is_diagonal() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const PauliString& t) { return t.is_diagonal(); });
  }

  const PauliString* single_string() const {
    return terms_.size() == 1 ? &terms_[0] : nullptr;
  }

  friend QubitOperator operator+(const QubitOperator& a,
                                 const QubitOperator& b) {
    require_input(a.num_qubits_ == b.num_qubits_,
                  "dimension mismatch: operator sum");
    std::vector<PauliString> all = a.terms_;
    all.insert(all.end(), b.terms_.begin(), b.terms_.end());
    return QubitOperator(a.num_qubits_, std::move(all));
  }

  friend QubitOperator operator-(const QubitOperator& a,
                                 const QubitOperator& b) {
    return a + (b * -1.0);
  }

  friend QubitOperator operator*(const QubitOperator& a, double scale) {
    QubitOperator out(a.num_qubits_);
    out.terms_ = a.terms_;
    for (auto& t : out.terms_) t.coefficient *= scale;
    out.canonicalize();
    return out;
  }

  friend QubitOperator operator*(double scale, const QubitOperator& a) {
    return a * scale;
  }

  /// Operator product, expanded term by term with exact Pauli phases. The
  /// result must come out Hermitian (real coefficients) or construction
  /// fails; products of commuting Hermitian operators always do.
  friend QubitOperator operator*(const QubitOperator& a,
                                 const QubitOperator& b) {
    require_input(a.num_qubits_ == b.num_qubits_,
                  "dimension mismatch: operator product");
    std::vector<PauliString> products;
    products.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& ta : a.terms_)
      for (const auto& tb : b.terms_) products.push_back(ta * tb);
    return QubitOperator(a.num_qubits_, std::move(products));
  }

  /// Same operator on a wider register, occupying qubits
  /// [offset+1, offset+num_qubits] (1-based).
  QubitOperator embedded(int total_qubits, int offset) const {
    require_input(offset >= 0 && offset + num_qubits_ <= total_qubits,
                  "embedding window out of range");
    std::vector<PauliString> shifted;
    shifted.reserve(terms_.size());
    for (const auto& t : terms_) {
      std::vector<Pauli> f(total_qubits, Pauli::I);
      std::copy(t.factors.begin(), t.factors.end(), f.begin() + offset);
      shifted.emplace_back(std::move(f), t.coefficient);
    }
    return QubitOperator(total_qubits, std::move(shifted));
  }

  Matrix to_dense(Eigen::Index cap = kDenseDimensionCap) const {
    if (dimension() > cap) {
      throw InputError("dimension cap exceeded: dense form would be " +
                       std::to_string(dimension()) + "-dimensional");
    }
    Matrix m = Matrix::Zero(dimension(), dimension());
    for (const auto& t : terms_) m += t.to_dense();
    return m;
  }

  /// Diagonal of the operator in the computational basis; only valid when
  /// is_diagonal(). Scales to large registers (no dense matrix is formed).
  RealVector diagonal() const {
    require_input(is_diagonal(), "operator is not diagonal");
    const Eigen::Index d = dimension();
    RealVector diag = RealVector::Zero(d);
    for (const auto& t : terms_) {
      Eigen::Index z_mask = 0;
      for (int j = 0; j < num_qubits_; ++j)
        if (t.factors[j] == Pauli::Z)
          z_mask |= Eigen::Index(1) << (num_qubits_ - 1 - j);
      const double c = t.coefficient.real();
      for (Eigen::Index q = 0; q < d; ++q) {
        // parity of set bits under the Z mask flips the sign
        const int par = __builtin_popcountll(
                            static_cast<unsigned long long>(q & z_mask)) &
                        1;
        diag[q] += par ? -c : c;
      }
    }
    return diag;
  }

  /// Eigenvalues only, without projectors: cheap for diagonal operators and
  /// unit strings at any size, dense otherwise.
  std::vector<double> eigenvalues_merged() const {
    if (is_diagonal()) {
      RealVector diag = diagonal();
      std::vector<double> v(diag.data(), diag.data() + diag.size());
      std::sort(v.begin(), v.end());
      return merge_close(v);
    }
    if (const PauliString* s = single_string()) {
      const double c = s->coefficient.real();
      std::vector<double> v{-std::abs(c), std::abs(c)};
      return merge_close(v);
    }
    const Spectral& sp = spectral();
    return sp.eigenvalues;
  }

  const Spectral& spectral() const {
    if (!spectral_) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(to_dense());
      auto sp = std::make_shared<Spectral>();
      Eigen::Index k = 0;
      while (k < es.eigenvalues().size()) {
        Eigen::Index start = k;
        const double base = es.eigenvalues()[start];
        while (k < es.eigenvalues().size() &&
               es.eigenvalues()[k] - base <= kEigenvalueMergeTol)
          ++k;
        Matrix block = es.eigenvectors().middleCols(start, k - start);
        sp->eigenvalues.push_back(
            es.eigenvalues().segment(start, k - start).mean());
        sp->projectors.push_back(block * block.adjoint());
      }
      spectral_ = std::move(sp);
    }
    return *spectral_;
  }

  /// Canonical text, of the shape "-0.5 * Z1 X3 + 1 * I".
  std::string to_text() const {
    if (terms_.empty()) return "0 * I";
    std::string out;
    for (size_t i = 0; i < terms_.size(); ++i) {
      if (i) out += " + ";
      out += format_double(terms_[i].coefficient.real());
      out += " * ";
      if (terms_[i].is_identity()) {
        out += "I";
        continue;
      }
      bool first = true;
      for (int j = 0; j < num_qubits_; ++j) {
        if (terms_[i].factors[j] == Pauli::I) continue;
        if (!first) out += " ";
        first = false;
        out += pauli_letter(terms_[i].factors[j]);
        out += std::to_string(j + 1);
      }
    }
    return out;
  }

  /// Parses the text format. When num_qubits is zero the register size is
  /// inferred from the largest index mentioned.
  static QubitOperator from_text(const std::string& text,
                                 int num_qubits = 0);

 private:
  void canonicalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const PauliString& a, const PauliString& b) {
                return a.factors < b.factors;
              });
    std::vector<PauliString> merged;
    for (auto& t : terms_) {
      if (!merged.empty() && merged.back().factors == t.factors)
        merged.back().coefficient += t.coefficient;
      else
        merged.push_back(std::move(t));
    }
    double scale = 0.0;
    for (const auto& t : merged)
      scale = std::max(scale, std::abs(t.coefficient));
    terms_.clear();
    for (auto& t : merged) {
      if (std::abs(t.coefficient) <= 1e-14 * (1.0 + scale)) continue;
      require_input(std::abs(t.coefficient.imag()) <=
                        1e-12 * (1.0 + scale),
                    "operator is not Hermitian: complex coefficient on " +
                        std::string(1, '[') + "term]");
      t.coefficient = Cplx(t.coefficient.real(), 0.0);
      terms_.push_back(std::move(t));
    }
    spectral_.reset();
  }

  static std::vector<double> merge_close(std::vector<double> sorted) {
    std::vector<double> out;
    size_t k = 0;
    while (k < sorted.size()) {
      size_t start = k;
      double sum = 0.0;
      while (k < sorted.size() &&
             sorted[k] - sorted[start] <= kEigenvalueMergeTol)
        sum += sorted[k++];
      out.push_back(sum / static_cast<double>(k - start));
    }
    return out;
  }

  int num_qubits_;
  std::vector<PauliString> terms_;
  mutable std::shared_ptr<const Spectral> spectral_;
};

namespace detail {

inline std::vector<std::string> split(const std::string& text,
                                      const std::string& sep) {
  std::vector<std::string> parts;
  size_t pos = 0;
  while (true) {
    size_t next = text.find(sep, pos);
    if (next == std::string::npos) {
      parts.push_back(text.substr(pos));
      return parts;
    }
    parts.push_back(text.substr(pos, next - pos));
    pos = next + sep.size();
  }
}

inline std::string strip(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

inline QubitOperator QubitOperator::from_text(const std::string& text,
                                              int num_qubits) {
  struct RawTerm {
    double coeff;
    std::vector<std::pair<int, Pauli>> sites;  // 1-based
  };
  std::vector<RawTerm> raw;
  int max_index = 0;
  for (const std::string& chunk : detail::split(text, " + ")) {
    const std::string term = detail::strip(chunk);
    require_input(!term.empty(), "empty term in operator text");
    auto star = term.find('*');
    require_input(star != std::string::npos,
                  "missing '*' in operator term '" + term + "'");
    RawTerm rt;
    rt.coeff = parse_double(detail::strip(term.substr(0, star)));
    const std::string sites = detail::strip(term.substr(star + 1));
    require_input(!sites.empty(), "missing factors in term '" + term + "'");
    if (sites != "I") {
      for (const std::string& tok : detail::split(sites, " ")) {
        if (tok.empty()) continue;
        Pauli p;
        switch (tok[0]) {
          case 'X': p = Pauli::X; break;
          case 'Y': p = Pauli::Y; break;
          case 'Z': p = Pauli::Z; break;
          case 'I': p = Pauli::I; break;
          default:
            throw InputError("unknown Pauli letter in '" + tok + "'");
        }
        require_input(tok.size() > 1, "missing qubit index in '" + tok + "'");
        int idx = 0;
        auto res = std::from_chars(tok.data() + 1, tok.data() + tok.size(),
                                   idx);
        require_input(res.ec == std::errc() &&
                          res.ptr == tok.data() + tok.size() && idx >= 1,
                      "bad qubit index in '" + tok + "'");
        rt.sites.emplace_back(idx, p);
        max_index = std::max(max_index, idx);
      }
    }
    raw.push_back(std::move(rt));
  }
  const int n = num_qubits > 0 ? num_qubits : std::max(max_index, 1);
  require_input(max_index <= n, "operator text mentions qubit " +
                                    std::to_string(max_index) +
                                    " beyond register size " +
                                    std::to_string(n));
  std::vector<PauliString> terms;
  for (const auto& rt : raw) {
    std::vector<Pauli> f(n, Pauli::I);
    for (auto [idx, p] : rt.sites) {
      require_input(f[idx - 1] == Pauli::I,
                    "qubit " + std::to_string(idx) + " listed twice in term");
      f[idx - 1] = p;
    }
    terms.emplace_back(std::move(f), rt.coeff);
  }
  return QubitOperator(n, std::move(terms));
}

/// Collective spin component (1/2) sum_i sigma_axis^(i).
inline QubitOperator collective_j(Pauli axis, int num_qubits) {
  require_input(axis != Pauli::I, "collective spin needs a real axis");
  QubitOperator out(num_qubits);
  std::vector<PauliString> terms;
  for (int q = 1; q <= num_qubits; ++q) {
    std::vector<Pauli> f(num_qubits, Pauli::I);
    f[q - 1] = axis;
    terms.emplace_back(std::move(f), 0.5);
  }
  return QubitOperator(num_qubits, std::move(terms));
}

/// Classifies an operator by its spectrum: all eigenvalues in {-1, +1}
/// (self-inverse, sin(theta A) = sin(theta) A), all in {0, 1} (idempotent,
/// same reduction), anything else generic.
inline OperatorClass classify(const QubitOperator& op, double tol = 1e-10) {
  double worst_involution = 0.0, worst_projector = 0.0;
  for (double lam : op.eigenvalues_merged()) {
    worst_involution = std::max(worst_involution,
                                std::abs(lam * lam - 1.0));
    worst_projector = std::max(worst_projector, std::abs(lam * lam - lam));
  }
  if (worst_involution <= tol) return OperatorClass::SelfInverse;
  if (worst_projector <= tol) return OperatorClass::Idempotent;
  return OperatorClass::Generic;
}

enum class CommutationRelation { Commute, Anticommute, Neither };

struct CommutationResult {
  CommutationRelation relation;
  double commutator_residual;
  double anticommutator_residual;
};

/// Dense commutator/anticommutator check (register must fit under the dense
/// cap). For sums of Pauli strings on large registers use
/// terms_pairwise_commute, which needs no dense form.
inline CommutationResult commutation_check(const QubitOperator& a,
                                           const QubitOperator& b,
                                           double tol = 1e-10) {
  require_input(a.num_qubits() == b.num_qubits(),
                "dimension mismatch: commutation check");
  Matrix da = a.to_dense(), db = b.to_dense();
  CommutationResult res{};
  res.commutator_residual = max_abs(da * db - db * da);
  res.anticommutator_residual = max_abs(da * db + db * da);
  if (res.commutator_residual <= tol)
    res.relation = CommutationRelation::Commute;
  else if (res.anticommutator_residual <= tol)
    res.relation = CommutationRelation::Anticommute;
  else
    res.relation = CommutationRelation::Neither;
  return res;
}

/// Sufficient commutation certificate for large registers: every pair of
/// Pauli terms commutes string-wise.
inline bool terms_pairwise_commute(const QubitOperator& a,
                                   const QubitOperator& b) {
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms())
      if (!ta.commutes_with(tb)) return false;
  return true;
}

/// An su(2) triple of encoded Pauli operators on N qubits, satisfying
/// [x, y] = 2iz and cyclic permutations:
///   N = 4m+1: (X^N, Y^N, Z^N)
///   N = 4m+3: (X^N, Y^N, -Z^N)
///   N = 2k:   (X^{2k}, Y X^{2k-1}, Z I^{2k-1})
struct Su2Triple {
  QubitOperator x, y, z;
};

inline Su2Triple su2_triple(int num_qubits) {
  require_input(num_qubits >= 1, "su(2) triple needs at least one qubit");
  const auto uniform = [&](Pauli p, double scale) {
    return QubitOperator::uniform_string(p, num_qubits, scale);
  };
  if (num_qubits % 2 == 0) {
    std::vector<Pauli> yx(num_qubits, Pauli::X);
    yx[0] = Pauli::Y;
    return Su2Triple{
        uniform(Pauli::X, 1.0),
        QubitOperator(num_qubits, {PauliString(std::move(yx), 1.0)}),
        QubitOperator::single_site(Pauli::Z, 1, num_qubits)};
  }
  const double z_sign = (num_qubits % 4 == 1) ? 1.0 : -1.0;
  return Su2Triple{uniform(Pauli::X, 1.0), uniform(Pauli::Y, 1.0),
                   uniform(Pauli::Z, z_sign)};
}

}  // namespace phasebus
