// qcircuit.hpp — a small gate network that realizes the symmetrization
// machine with unitaries and one measured ancilla: EPR preparation, the two
// Bell-rotation boxes, a Toffoli onto the ancilla, and the Z measurement
// whose outcome selects teleportation or symmetrization.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "uqm/qcore.hpp"

namespace uqm::circuit {

enum class GateKind { H, X, Y, Z, CNOT, Toffoli };

// targets are register labels; controls come first for CNOT (control,
// target) and Toffoli (control, control, target).
struct Gate {
  GateKind kind = GateKind::H;
  std::vector<std::string> targets;
};

struct Measurement {
  std::string label;
  std::string basis = "Z";  // only Z is supported
};

struct Network {
  std::vector<Gate> gates;
  Measurement measure;
};

// H on A then CNOT(A -> B); turns |1>_A |1>_B into the singlet.
std::vector<Gate> epr_prepare(const std::string& a = "A",
                              const std::string& b = "B");

// CNOT(S -> A) then H on S.  Maps the Bell basis to the computational basis
// with unit phases: Psi- -> |11>, Psi+ -> |01>, Phi- -> |10>, Phi+ -> |00>.
// (With this convention the fourth branch of the pre-measurement state
// carries sigma_X sigma_Z, fixing the sign that the operator order leaves
// open; box 2 is the exact inverse.)
std::vector<Gate> bell_rotation_box1(const std::string& s = "S",
                                     const std::string& a = "A");
std::vector<Gate> bell_rotation_box2(const std::string& s = "S",
                                     const std::string& a = "A");

// Full network on registers S, A, B and ancilla anc.
Network cloning_network();

// Applies the gates in order; validates labels and arities.
PureState apply_gates(PureState psi, const std::vector<Gate>& gates);

struct NetworkResult {
  double prob_teleported = 0.0;    // ancilla read 1
  PureState teleported_state;      // S,A,B conditional state
  PureState bob_qubit;             // the teleported input, extracted from B
  double prob_symmetrized = 0.0;   // ancilla read 0
  PureState symmetrized_state;     // S,A,B conditional state
};

// Runs the cloning network on |phi>_S |1>_A |1>_B |0>_anc and resolves both
// measurement branches exactly.
NetworkResult run_network(const PureState& phi);

// Measurement sampling with a seeded generator; returns (zeros, ones).
std::pair<long, long> sample_network(const PureState& phi, int shots,
                                     std::uint64_t seed);

// Branch-by-branch comparison of the pre-measurement state against the
// four-term reference (computational S,A tags carrying -|phi>, -Z|phi>,
// X|phi>, XZ|phi> with the ancilla flipped on the 11 branch only).
struct BranchCheck {
  std::string sa_bits;
  double amplitude_norm = 0.0;  // 1/2 for every branch
  bool ancilla_one = false;
  double deviation = 0.0;
};

struct IntermediateReport {
  bool ok = false;
  double max_deviation = 0.0;
  std::vector<BranchCheck> branches;
};

IntermediateReport intermediate_state_check(const PureState& phi);

// {"gates":[{"kind":"CNOT","targets":["S","A"]},...],
//  "measure":{"label":"anc","basis":"Z"}}
nlohmann::json to_json(const Network& network);
Network network_from_json(const nlohmann::json& j);

}  // namespace uqm::circuit
