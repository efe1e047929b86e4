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

// JSON wire formats for programs, synthesis targets, gate specs, and run
// reports. One canonical writer is used everywhere so that emitted artifacts
// are byte-stable: parse(text) followed by the corresponding serializer
// reproduces `text` exactly.

#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "phasebus/algorithms.hpp"
#include "phasebus/common.hpp"
#include "phasebus/gates.hpp"
#include "phasebus/hybrid.hpp"
#include "phasebus/synth.hpp"
#include "phasebus/target.hpp"

namespace phasebus {

/// Field order is meaningful in the wire format, so all JSON values are
/// built as ordered objects.
using Json = nlohmann::ordered_json;

/// The one canonical text form: two-space indentation, trailing newline,
/// shortest round-trip float representation (nlohmann's writer).
inline std::string canonical_text(const Json& j) { return j.dump(2) + "\n"; }

inline Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

namespace detail {

inline Json complex_json(Cplx z) { return Json::array({z.real(), z.imag()}); }

inline Cplx complex_from(const Json& j) {
  require_input(j.is_array() && j.size() == 2,
                "complex values are [re, im] pairs");
  return Cplx(j[0].get<double>(), j[1].get<double>());
}

inline Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from(const Json& j) {
  require_input(j.is_array() && !j.empty(),
                "matrix must be a nonempty array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  require_input(j[0].is_array() && !j[0].empty(),
                "matrix rows must be nonempty arrays");
  const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    require_input(j[r].is_array() &&
                      static_cast<Eigen::Index>(j[r].size()) == cols,
                  "matrix rows must all have the same length");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from(j[r][c]);
  }
  return m;
}

inline const char* axis_name(Pauli axis) {
  switch (axis) {
    case Pauli::X:
      return "x";
    case Pauli::Y:
      return "y";
    case Pauli::Z:
      return "z";
    default:
      return "i";
  }
}

inline Pauli axis_from(const std::string& name) {
  if (name == "x") return Pauli::X;
  if (name == "y") return Pauli::Y;
  if (name == "z") return Pauli::Z;
  throw InputError("axis must be one of \"x\", \"y\", \"z\"");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Synthesis targets

Json target_to_json(const SynthesisTarget& target);
SynthesisTarget target_from_json(const Json& j, int num_qubits);
Json program_to_json(const PulseProgram& program);
PulseProgram program_from_json(const Json& j);

namespace detail {

struct TargetJsonVisitor {
  Json operator()(const PairTarget& t) const {
    Json j;
    j["variant"] = "pair";
    j["a"] = t.a.to_text();
    j["b"] = t.b.to_text();
    j["theta"] = t.theta;
    return j;
  }
  Json operator()(const TripleSinTarget& t) const {
    Json j;
    j["variant"] = "triple_sin";
    j["a"] = t.a.to_text();
    j["b"] = t.b.to_text();
    j["c"] = t.c.to_text();
    j["theta_rot"] = t.theta_rot;
    j["phi"] = t.phi;
    j["tau"] = t.tau;
    return j;
  }
  Json operator()(const TripleExactTarget& t) const {
    Json j;
    j["variant"] = "triple_exact";
    j["a"] = t.a.to_text();
    j["b"] = t.b.to_text();
    j["c"] = t.c.to_text();
    j["lambda_t"] = t.lambda_t;
    j["theta_rot"] = t.theta_rot;
    return j;
  }
  Json operator()(const TripleApproxTarget& t) const {
    Json j;
    j["variant"] = "triple_approx";
    j["a"] = t.a.to_text();
    j["b"] = t.b.to_text();
    j["c"] = t.c.to_text();
    j["lambda_prime_t"] = t.lambda_prime_t;
    j["theta_rot"] = t.theta_rot;
    return j;
  }
  Json operator()(const TrigCollectiveTarget& t) const {
    Json j;
    j["variant"] = "trig_collective";
    j["axis"] = axis_name(t.axis);
    j["theta_rot"] = t.theta_rot;
    j["phi"] = t.phi;
    j["lambda_t"] = t.lambda_t;
    return j;
  }
  Json operator()(const PauliStringTarget& t) const {
    Json j;
    j["variant"] = "pauli_string";
    j["axis"] = axis_name(t.axis);
    j["sign"] = t.sign;
    j["lambda_t"] = t.lambda_t;
    return j;
  }
  Json operator()(const CommutingSumTarget& t) const {
    Json j;
    j["variant"] = "commuting_sum";
    Json parts = Json::array();
    for (const auto& [op, weight] : t.parts) {
      Json part;
      part["op"] = op.to_text();
      part["weight"] = weight;
      parts.push_back(std::move(part));
    }
    j["parts"] = std::move(parts);
    return j;
  }
  Json operator()(const ConjugatedTarget& t) const {
    Json j;
    j["variant"] = "conjugated";
    j["outer"] = program_to_json(*t.outer);
    j["inner"] = target_to_json(*t.inner);
    return j;
  }
  Json operator()(const ProjectorTarget& t) const {
    Json j;
    j["variant"] = "projector";
    j["n"] = t.n;
    j["phase"] = t.phase;
    return j;
  }
  Json operator()(const FJzTarget& t) const {
    Json j;
    j["variant"] = "f_jz";
    j["values"] = t.values;
    j["t"] = t.t;
    return j;
  }
  Json operator()(const BasisProjectorTarget& t) const {
    Json j;
    j["variant"] = "basis_projector";
    j["bits"] = t.bits;
    j["phase"] = t.phase;
    return j;
  }
  Json operator()(const GeneralPairTarget& t) const {
    Json j;
    j["variant"] = "general_pair";
    j["a_j"] = t.a_j.to_text();
    j["a_k"] = t.a_k.to_text();
    j["c_j"] = t.c_j.to_text();
    j["c_k"] = t.c_k.to_text();
    j["theta_j"] = t.theta_j;
    j["theta_k"] = t.theta_k;
    j["alpha_j"] = complex_json(t.alpha_j);
    j["alpha_k"] = complex_json(t.alpha_k);
    return j;
  }
};

}  // namespace detail

inline Json target_to_json(const SynthesisTarget& target) {
  return std::visit(detail::TargetJsonVisitor{}, target.value);
}

inline SynthesisTarget target_from_json(const Json& j, int num_qubits) {
  std::string variant;
  try {
    variant = j.at("variant").get<std::string>();
    auto op = [&](const char* field) {
      return QubitOperator::from_text(j.at(field).get<std::string>(),
                                      num_qubits);
    };
    if (variant == "pair")
      return SynthesisTarget{
          PairTarget{op("a"), op("b"), j.at("theta").get<double>()}};
    if (variant == "triple_sin")
      return SynthesisTarget{TripleSinTarget{
          op("a"), op("b"), op("c"), j.at("theta_rot").get<double>(),
          j.at("phi").get<double>(), j.at("tau").get<double>()}};
    if (variant == "triple_exact")
      return SynthesisTarget{TripleExactTarget{
          op("a"), op("b"), op("c"), j.at("lambda_t").get<double>(),
          j.at("theta_rot").get<double>()}};
    if (variant == "triple_approx")
      return SynthesisTarget{TripleApproxTarget{
          op("a"), op("b"), op("c"), j.at("lambda_prime_t").get<double>(),
          j.at("theta_rot").get<double>()}};
    if (variant == "trig_collective")
      return SynthesisTarget{TrigCollectiveTarget{
          detail::axis_from(j.at("axis").get<std::string>()),
          j.at("theta_rot").get<double>(), j.at("phi").get<double>(),
          j.at("lambda_t").get<double>()}};
    if (variant == "pauli_string")
      return SynthesisTarget{PauliStringTarget{
          detail::axis_from(j.at("axis").get<std::string>()),
          j.at("sign").get<int>(), j.at("lambda_t").get<double>()}};
    if (variant == "commuting_sum") {
      CommutingSumTarget t;
      for (const Json& part : j.at("parts"))
        t.parts.emplace_back(
            QubitOperator::from_text(part.at("op").get<std::string>(),
                                     num_qubits),
            part.at("weight").get<double>());
      return SynthesisTarget{std::move(t)};
    }
    if (variant == "conjugated") {
      PulseProgram outer = program_from_json(j.at("outer"));
      SynthesisTarget inner =
          target_from_json(j.at("inner"), outer.space.num_qubits);
      ConjugatedTarget t{
          std::make_shared<const PulseProgram>(std::move(outer)),
          std::make_shared<const SynthesisTarget>(std::move(inner))};
      return SynthesisTarget{std::move(t)};
    }
    if (variant == "projector")
      return SynthesisTarget{
          ProjectorTarget{j.at("n").get<int>(), j.at("phase").get<double>()}};
    if (variant == "f_jz")
      return SynthesisTarget{
          FJzTarget{j.at("values").get<std::vector<double>>(),
                    j.at("t").get<double>()}};
    if (variant == "basis_projector")
      return SynthesisTarget{
          BasisProjectorTarget{j.at("bits").get<std::string>(),
                               j.at("phase").get<double>()}};
    if (variant == "general_pair")
      return SynthesisTarget{GeneralPairTarget{
          op("a_j"), op("a_k"), op("c_j"), op("c_k"),
          j.at("theta_j").get<double>(), j.at("theta_k").get<double>(),
          detail::complex_from(j.at("alpha_j")),
          detail::complex_from(j.at("alpha_k"))}};
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed target JSON: ") + e.what());
  }
  throw UnsupportedError("unsupported target variant: " + variant);
}

// ---------------------------------------------------------------------------
// Pulse programs

inline Json step_to_json(const PulseStep& step) {
  Json j;
  switch (step.kind) {
    case PulseStep::Kind::ConditionalDisplacement:
      j["kind"] = "cdisp";
      j["control"] = step.control->to_text();
      j["amp"] = detail::complex_json(step.amplitude);
      break;
    case PulseStep::Kind::ConditionalRotation:
      j["kind"] = "crot";
      j["control"] = step.control->to_text();
      j["angle"] = step.angle;
      break;
    case PulseStep::Kind::LocalUnitary:
      j["kind"] = "local";
      j["qubit"] = step.qubit;
      j["matrix"] = detail::matrix_json(step.matrix);
      break;
    case PulseStep::Kind::GlobalPhase:
      j["kind"] = "gphase";
      j["phase"] = step.phase;
      break;
  }
  return j;
}

inline PulseStep step_from_json(const Json& j, int num_qubits) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "cdisp")
    return PulseStep::conditional_displacement(
        QubitOperator::from_text(j.at("control").get<std::string>(),
                                 num_qubits),
        detail::complex_from(j.at("amp")));
  if (kind == "crot")
    return PulseStep::conditional_rotation(
        QubitOperator::from_text(j.at("control").get<std::string>(),
                                 num_qubits),
        j.at("angle").get<double>());
  if (kind == "local")
    return PulseStep::local(j.at("qubit").get<int>(),
                            detail::matrix_from(j.at("matrix")));
  if (kind == "gphase")
    return PulseStep::global_phase(j.at("phase").get<double>());
  throw InputError("unknown step kind: " + kind);
}

inline Json program_to_json(const PulseProgram& program) {
  Json j;
  j["space"] = Json{{"qubits", program.space.num_qubits},
                    {"cutoff", program.space.fock.cutoff}};
  // Applied order of the steps array, stated in-band on every program.
  j["order"] = "steps[0] acts first";
  Json steps = Json::array();
  for (const PulseStep& s : program.steps) steps.push_back(step_to_json(s));
  j["steps"] = std::move(steps);
  j["cyclic"] = program.cyclic;
  j["target"] = program.target ? target_to_json(*program.target) : Json();
  return j;
}

inline PulseProgram program_from_json(const Json& j) {
  try {
    const Json& sp = j.at("space");
    const int qubits = sp.at("qubits").get<int>();
    const auto cutoff = sp.at("cutoff").get<Eigen::Index>();
    PulseProgram program(HybridSpace(qubits, FockSpace(cutoff)));
    for (const Json& s : j.at("steps"))
      program.steps.push_back(step_from_json(s, qubits));
    program.cyclic = j.at("cyclic").get<bool>();
    if (j.contains("target") && !j.at("target").is_null())
      program.target = std::make_shared<const SynthesisTarget>(
          target_from_json(j.at("target"), qubits));
    return program;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed program JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Gate specs

inline Json gate_to_json(const GateSpec& gate) {
  Json j;
  j["name"] = gate.name;
  j["parameters"] = gate.parameters;
  j["numQubits"] = gate.num_qubits;
  j["referenceUnitary"] = detail::matrix_json(gate.reference_unitary);
  j["program"] = program_to_json(gate.program);
  j["localEquivalences"] = gate.local_equivalences;
  if (!gate.code_name.empty()) j["codeName"] = gate.code_name;
  if (gate.encoded_basis)
    j["encodedBasis"] = detail::matrix_json(*gate.encoded_basis);
  return j;
}

inline GateSpec gate_from_json(const Json& j) {
  try {
    GateSpec gate(program_from_json(j.at("program")));
    gate.name = j.at("name").get<std::string>();
    gate.parameters = j.at("parameters").get<std::vector<double>>();
    gate.num_qubits = j.at("numQubits").get<int>();
    gate.reference_unitary = detail::matrix_from(j.at("referenceUnitary"));
    gate.local_equivalences =
        j.at("localEquivalences").get<std::vector<std::string>>();
    if (j.contains("codeName"))
      gate.code_name = j.at("codeName").get<std::string>();
    if (j.contains("encodedBasis"))
      gate.encoded_basis = detail::matrix_from(j.at("encodedBasis"));
    return gate;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed gate JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Amplitude-amplification reports

inline Json aa_spec_to_json(const AASpec& spec) {
  Json j;
  j["qubits"] = spec.num_qubits;
  j["marked"] = spec.marked_states;
  j["phi"] = spec.phi;
  j["vartheta"] = spec.vartheta;
  j["algorithm"] = spec.algorithm_a
                       ? Json(detail::matrix_json(*spec.algorithm_a))
                       : Json("walsh_hadamard");
  j["iterations"] = spec.iterations;
  return j;
}

inline AASpec aa_spec_from_json(const Json& j) {
  try {
    AASpec spec;
    spec.num_qubits = j.at("qubits").get<int>();
    spec.marked_states = j.at("marked").get<std::vector<std::string>>();
    spec.phi = j.at("phi").get<double>();
    spec.vartheta = j.at("vartheta").get<double>();
    const Json& alg = j.at("algorithm");
    if (alg.is_string()) {
      require_input(alg.get<std::string>() == "walsh_hadamard",
                    "algorithm must be \"walsh_hadamard\" or a matrix");
    } else {
      spec.algorithm_a = detail::matrix_from(alg);
    }
    spec.iterations = j.at("iterations").get<int>();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed amplification spec JSON: ") +
                     e.what());
  }
}

inline Json aa_report_to_json(const AASpec& spec, const AATrace& trace) {
  Json j;
  Json rows = Json::array();
  for (const AAIteration& row : trace.iterations) {
    Json r;
    r["k"] = row.k;
    r["p_marked"] = row.marked_probability;
    rows.push_back(std::move(r));
  }
  j["iterations"] = std::move(rows);
  j["spec"] = aa_spec_to_json(spec);
  return j;
}

// ---------------------------------------------------------------------------
// Run configuration and verification reports

/// Knobs shared by every command-line run; embedded verbatim in reports so
/// every reported number is traceable to the tolerances that produced it.
struct RunConfig {
  Eigen::Index fock_cutoff = 64;
  Eigen::Index probe_dim = 16;
  double fidelity_tol = 1e-8;      // bound on 1 - fidelity
  double disentangle_tol = 1e-8;   // bound on mode-leakage residual
  Eigen::Index dense_cap = kDenseDimensionCap;
  std::string output_path;

  void validate() const {
    require_input(fock_cutoff >= 2, "fockCutoff must be at least 2");
    require_input(probe_dim >= 1 && 2 * probe_dim <= fock_cutoff,
                  "probeDim must be at most fockCutoff/2");
    require_input(fidelity_tol >= 0.0 && disentangle_tol >= 0.0,
                  "tolerances must be nonnegative");
    require_input(dense_cap >= 2, "denseCap must be at least 2");
  }
};

inline Json run_config_to_json(const RunConfig& config) {
  Json j;
  j["fockCutoff"] = config.fock_cutoff;
  j["probeDim"] = config.probe_dim;
  j["fidelityTol"] = config.fidelity_tol;
  j["disentangleTol"] = config.disentangle_tol;
  j["denseCap"] = config.dense_cap;
  j["outputPath"] = config.output_path;
  return j;
}

inline RunConfig run_config_from_json(const Json& j) {
  try {
    RunConfig config;
    config.fock_cutoff = j.at("fockCutoff").get<Eigen::Index>();
    config.probe_dim = j.at("probeDim").get<Eigen::Index>();
    config.fidelity_tol = j.at("fidelityTol").get<double>();
    config.disentangle_tol = j.at("disentangleTol").get<double>();
    config.dense_cap = j.at("denseCap").get<Eigen::Index>();
    config.output_path = j.at("outputPath").get<std::string>();
    return config;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed config JSON: ") + e.what());
  }
}

/// Wall time is deliberately excluded: reports are byte-deterministic.
inline Json verification_report_to_json(const VerificationReport& report,
                                        const RunConfig& config) {
  Json j;
  j["fidelity"] = report.fidelity ? Json(*report.fidelity) : Json();
  j["disentangleResidual"] = report.disentangle_residual;
  j["worstQubitState"] = report.worst_qubit_state;
  j["warnings"] = report.warnings;
  j["diagnostic"] = report.diagnostic;
  j["passed"] = report.passed(config.fidelity_tol, config.disentangle_tol);
  j["config"] = run_config_to_json(config);
  return j;
}

}  // namespace phasebus
