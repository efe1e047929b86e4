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

// phasebus command line: synthesize pulse programs from target specs, verify
// programs against their targets, emit gate specs, prepare GHZ states, and
// run amplitude amplification.
//
// Exit codes: 0 = pass, 1 = verification failure, 2 = input error,
// 3 = unsupported request. stdout carries the artifact (or the path it was
// written to); everything else goes to stderr.

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "phasebus/serialize.hpp"

namespace phasebus {
namespace {

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  require_input(in.good(), "cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Reports go to --out/--report when given (stdout then names the file),
/// otherwise to stdout directly.
void emit(const Json& artifact, const RunConfig& config) {
  const std::string text = canonical_text(artifact);
  if (config.output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(config.output_path, std::ios::binary);
  require_input(out.good(),
                "cannot open output file: " + config.output_path);
  out << text;
  out.flush();
  require_input(out.good(), "failed writing: " + config.output_path);
  std::cout << config.output_path << "\n";
}

struct CommonFlags {
  RunConfig config;
  int jobs = 1;
};

void add_config_flags(CLI::App* cmd, CommonFlags* flags,
                      const std::string& out_flag) {
  cmd->add_option("--cutoff", flags->config.fock_cutoff,
                  "Fock-space cutoff for synthesis and propagation")
      ->capture_default_str();
  cmd->add_option("--probe-dim", flags->config.probe_dim,
                  "number of initial Fock levels probed during verification")
      ->capture_default_str();
  cmd->add_option("--fidelity-tol", flags->config.fidelity_tol,
                  "largest acceptable 1 - fidelity")
      ->capture_default_str();
  cmd->add_option("--disentangle-tol", flags->config.disentangle_tol,
                  "largest acceptable mode-leakage residual")
      ->capture_default_str();
  cmd->add_option("--dense-cap", flags->config.dense_cap,
                  "largest register dimension handled densely")
      ->capture_default_str();
  cmd->add_option(out_flag, flags->config.output_path,
                  "write the artifact to this file instead of stdout");
}

// ---------------------------------------------------------------------------
// synth

int cmd_synth(const std::string& input, const CommonFlags& flags) {
  Json j = parse_text(read_file(input));
  int qubits = 0;
  Eigen::Index cutoff = flags.config.fock_cutoff;
  Json target_json;
  try {
    qubits = j.at("space").at("qubits").get<int>();
    if (j.at("space").contains("cutoff"))
      cutoff = j.at("space").at("cutoff").get<Eigen::Index>();
    target_json = j.at("target");
  } catch (const nlohmann::json::exception& e) {
    throw InputError(
        std::string("target spec must carry {\"space\": {\"qubits\": n}, "
                    "\"target\": {...}}: ") +
        e.what());
  }
  HybridSpace space(qubits, FockSpace(cutoff));
  SynthesisTarget target = target_from_json(target_json, qubits);
  PulseProgram program = synth_target(target, space);
  emit(program_to_json(program), flags.config);
  return 0;
}

// ---------------------------------------------------------------------------
// verify

VerificationReport verify_program(PulseProgram program,
                                  const RunConfig& config) {
  require_input(program.space.qubit_dim() <= config.dense_cap,
                "register too large for dense verification; raise "
                "--dense-cap if this is intentional");
  if (!program.expected_qubit_unitary && program.target)
    program.expected_qubit_unitary = target_unitary(
        *program.target, program.space.num_qubits, config.dense_cap);

  // Probe several initial Fock levels: a faithful program implements the
  // same register unitary from every one of them. Probes are clamped to
  // half the program's own cutoff so the displaced probe states keep the
  // headroom the probeDim <= fockCutoff/2 invariant promises.
  const Eigen::Index probes = std::max<Eigen::Index>(
      1, std::min<Eigen::Index>(config.probe_dim,
                                program.space.fock.cutoff / 2));
  VerificationReport worst = effective_qubit_unitary(program, 0);
  for (Eigen::Index f = 1; f < probes; ++f) {
    VerificationReport r = effective_qubit_unitary(program, f);
    if (r.disentangle_residual > worst.disentangle_residual) {
      worst.disentangle_residual = r.disentangle_residual;
      worst.worst_qubit_state = r.worst_qubit_state;
      worst.diagnostic = r.diagnostic;
    }
    if (r.fidelity && (!worst.fidelity || *r.fidelity < *worst.fidelity))
      worst.fidelity = r.fidelity;
  }
  return worst;
}

int cmd_verify(const std::vector<std::string>& paths,
               const CommonFlags& flags) {
  if (paths.size() == 1) {
    VerificationReport report = verify_program(
        program_from_json(parse_text(read_file(paths[0]))), flags.config);
    emit(verification_report_to_json(report, flags.config), flags.config);
    return report.passed(flags.config.fidelity_tol,
                         flags.config.disentangle_tol)
               ? 0
               : 1;
  }

  // Multiple programs: independent jobs, merged in input order.
  struct Slot {
    Json report;
    int code = 0;
    std::string error;
  };
  std::vector<Slot> slots(paths.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < paths.size();
         i = next.fetch_add(1)) {
      try {
        VerificationReport report = verify_program(
            program_from_json(parse_text(read_file(paths[i]))),
            flags.config);
        slots[i].report =
            verification_report_to_json(report, flags.config);
        slots[i].code = report.passed(flags.config.fidelity_tol,
                                      flags.config.disentangle_tol)
                            ? 0
                            : 1;
      } catch (const UnsupportedError& e) {
        slots[i].code = 3;
        slots[i].error = e.what();
      } catch (const InputError& e) {
        slots[i].code = 2;
        slots[i].error = e.what();
      }
    }
  };
  const int jobs = std::max(
      1, std::min<int>(flags.jobs, static_cast<int>(paths.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  Json merged = Json::array();
  int exit_code = 0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    Json entry;
    entry["program"] = paths[i];
    entry["exitCode"] = slots[i].code;
    if (slots[i].error.empty())
      entry["report"] = std::move(slots[i].report);
    else
      entry["error"] = slots[i].error;
    merged.push_back(std::move(entry));
    exit_code = std::max(exit_code, slots[i].code);
  }
  emit(merged, flags.config);
  return exit_code;
}

// ---------------------------------------------------------------------------
// gate

int cmd_gate(const std::string& name, int n, const std::string& code,
             const CommonFlags& flags) {
  std::string full = name;
  if (n > 0)
    full += "(" + std::to_string(n) + ")";
  else if (!code.empty())
    full += "(" + code + ")";
  GateSpec spec = gate(full, flags.config.fock_cutoff);
  emit(gate_to_json(spec), flags.config);
  return 0;
}

// ---------------------------------------------------------------------------
// ghz

int cmd_ghz(int qubits, double theta, const CommonFlags& flags) {
  GhzResult result =
      ghz_prepare(qubits, theta, FockSpace(flags.config.fock_cutoff));
  Json j;
  j["qubits"] = qubits;
  j["theta"] = theta;
  j["fidelity"] = result.fidelity;
  Json state = Json::array();
  for (Eigen::Index q = 0; q < result.qubit_state.size(); ++q)
    state.push_back(detail::complex_json(result.qubit_state[q]));
  j["state"] = std::move(state);
  j["config"] = run_config_to_json(flags.config);
  emit(j, flags.config);
  return (1.0 - result.fidelity <= flags.config.fidelity_tol) ? 0 : 1;
}

// ---------------------------------------------------------------------------
// run-aa

int cmd_run_aa(int qubits, const std::string& marked_csv, double phi,
               double vartheta, int iters, const CommonFlags& flags) {
  AASpec spec;
  spec.num_qubits = qubits;
  spec.phi = phi;
  spec.vartheta = vartheta;
  spec.iterations = iters;
  std::stringstream ss(marked_csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) spec.marked_states.push_back(item);
  AATrace trace = aa_run(spec, FockSpace(flags.config.fock_cutoff));
  emit(aa_report_to_json(spec, trace), flags.config);
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{
      "phasebus: synthesize and verify conditional-displacement pulse "
      "programs for multi-qubit gates and algorithms"};
  app.require_subcommand(1);

  CommonFlags flags;

  // synth
  auto* synth = app.add_subcommand(
      "synth", "compile a synthesis-target spec into a pulse program");
  std::string synth_input;
  synth->add_option("input", synth_input,
                    "target spec JSON file (\"-\" for stdin)")
      ->required();
  add_config_flags(synth, &flags, "--out");

  // verify
  auto* verify = app.add_subcommand(
      "verify", "check that a pulse program implements its target");
  std::vector<std::string> verify_inputs;
  verify->add_option("programs", verify_inputs, "program JSON file(s)")
      ->required();
  verify->add_option("--jobs", flags.jobs,
                     "verify programs in parallel with this many threads")
      ->capture_default_str();
  add_config_flags(verify, &flags, "--report");

  // gate
  auto* gate_cmd =
      app.add_subcommand("gate", "emit a named gate construction");
  std::string gate_name, gate_code;
  int gate_n = 0;
  gate_cmd->add_option("--name", gate_name, "gate name, e.g. cnot, toffoli")
      ->required();
  gate_cmd->add_option("--n", gate_n, "qubit count for cn_not / u_pn");
  gate_cmd->add_option("--code", gate_code,
                       "code name for encoded_cphase");
  add_config_flags(gate_cmd, &flags, "--out");

  // ghz
  auto* ghz = app.add_subcommand(
      "ghz", "prepare a GHZ-type state with one collective loop");
  int ghz_qubits = 0;
  double ghz_theta = 0.0;
  ghz->add_option("--qubits", ghz_qubits, "register size")->required();
  ghz->add_option("--theta", ghz_theta, "rotation angle in radians")
      ->required();
  add_config_flags(ghz, &flags, "--report");

  // run-aa
  auto* aa = app.add_subcommand(
      "run-aa", "run amplitude amplification with projector-phase oracles");
  int aa_qubits = 0, aa_iters = 1;
  double aa_phi = kPi, aa_vartheta = kPi;
  std::string aa_marked;
  aa->add_option("--qubits", aa_qubits, "register size")->required();
  aa->add_option("--marked", aa_marked,
                 "comma-separated marked bitstrings, e.g. 101,011")
      ->required();
  aa->add_option("--phi", aa_phi, "zero-state reflection phase")
      ->capture_default_str();
  aa->add_option("--vartheta", aa_vartheta, "marked-state reflection phase")
      ->capture_default_str();
  aa->add_option("--iters", aa_iters, "number of amplification rounds")
      ->capture_default_str();
  add_config_flags(aa, &flags, "--report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    flags.config.validate();
    if (synth->parsed()) return cmd_synth(synth_input, flags);
    if (verify->parsed()) return cmd_verify(verify_inputs, flags);
    if (gate_cmd->parsed())
      return cmd_gate(gate_name, gate_n, gate_code, flags);
    if (ghz->parsed()) return cmd_ghz(ghz_qubits, ghz_theta, flags);
    if (aa->parsed())
      return cmd_run_aa(aa_qubits, aa_marked, aa_phi, aa_vartheta, aa_iters,
                        flags);
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return 3;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace
}  // namespace phasebus

int main(int argc, char** argv) { return phasebus::run(argc, argv); }
