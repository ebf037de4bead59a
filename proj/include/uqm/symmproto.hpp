// symmproto.hpp — the projector-based machines built from the two-qubit
// symmetric projector: 1->2 cloning with an entangled or maximally mixed
// ancilla, purification of identically aligned mixed qubits, and programmed
// teleportation of anti-unitary maps.
#pragma once

#include <map>
#include <string>
#include <variant>

#include "uqm/qcore.hpp"

namespace uqm::proto {

// Per-run record: the success probability of the selective projection, the
// conditional output state, single-qubit reductions by register label, and
// named figures of merit.  The monostate alternative only exists so the
// record is default-constructible; every protocol fills in a state.
struct ProtocolOutcome {
  double success_probability = 0.0;
  std::variant<std::monostate, PureState, DensityMatrix> post_state;
  std::map<std::string, DensityMatrix> reduced;
  std::map<std::string, double> fidelities;
};

// I - |Psi-><Psi-| on two qubits: rank 3, idempotent, Hermitian.
Matrix symmetric_projector_2q();

// Projects S and A of |phi>_S |Psi->_AB onto the symmetric subspace.
// Success probability 3/4; clones S,A at fidelity 5/6 and the anti-clone B
// at fidelity 2/3 against the orthogonal state.
ProtocolOutcome run_cloning_teleunot(const PureState& phi);

// Same projection on |phi><phi|_S x I/2_A: the entangled pair is not needed
// for cloning alone.  Clone fidelities match the three-qubit run.
ProtocolOutcome run_cloning_mixed_ancilla(const PureState& phi);

// Two mixed qubits aligned along the same pure state with Bloch lengths
// lambda_s and lambda_a.
struct PurificationInput {
  double lambda_s = 1.0;
  double lambda_a = 0.0;
  PureState phi = PureState::single_qubit(1, 0, "phi");
};

// Success probability (3 + lambda_a lambda_s)/4; both reduced outputs have
// Bloch length (lambda_a + lambda_s)/2 divided by the success probability.
ProtocolOutcome run_purification(const PurificationInput& in);

// An anti-unitary map factored as A = u . K with K complex conjugation in
// the computational basis.
struct AntiUnitarySpec {
  Matrix u;  // 2x2 unitary
};

// Factors v (unitary part) and an optional trailing conjugation into the
// canonical u . K form; conjugation = false describes v itself, which is
// not anti-unitary, so it is rejected.
AntiUnitarySpec antiunitary_decompose(const Matrix& v, bool conjugation);

// Exact action A|phi> = u K|phi> (the verification target, not the channel).
PureState apply_antiunitary(const AntiUnitarySpec& a, const PureState& phi);

// Best completely positive approximation of the anti-unitary map: the
// universal-NOT channel conjugated by u sigma_Y, applied through its Kraus
// form.  Pure inputs reach fidelity 2/3 against A|phi>.
DensityMatrix optimal_antiunitary_map(const AntiUnitarySpec& a,
                                      const DensityMatrix& rho);

// Runs the three-qubit protocol with the shared pair (I x u^dagger)|Psi->.
// Bob's reduction equals u^dagger UNOT(rho_S) u: the machine teleports the
// anti-unitary family u^dagger sigma_Y K with fidelity 2/3, while Alice's
// clones are unaffected.
ProtocolOutcome programmable_teleport(const PureState& phi, const Matrix& u);

}  // namespace uqm::proto
