// angmom.hpp — angular-momentum tools behind the N -> M symmetrization
// machine: exact Clebsch-Gordan coefficients, Dicke states, symmetric-
// subspace projectors, and the many-copy cloning protocol whose output
// carries M clones and M-N anticlones.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uqm/qcore.hpp"

namespace uqm::angmom {

// Half-integer spin labels stored as doubled values, so HalfInt::halves(3)
// is 3/2 and HalfInt::of(2) is 2.
struct HalfInt {
  int twice = 0;
  static constexpr HalfInt of(int whole) { return {2 * whole}; }
  static constexpr HalfInt halves(int doubled) { return {doubled}; }
  double value() const { return 0.5 * twice; }
};

// <j1 m1; j2 m2 | j m> in the Condon-Shortley convention.  The alternating
// sum is carried out in exact integer rationals, so the result is accurate
// to rounding even where terms nearly cancel.  Zero when the quantum
// numbers are incompatible; throws std::domain_error when a factorial
// argument would exceed the exact table (33!).
double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2,
                      HalfInt j, HalfInt m);

// Expansion coefficient b_k of the N -> M cloning output over the joint
// clone/anticlone excitation basis, k = 0 .. M-N:
//   b_k = (-1)^k sqrt((N+1)/(M+1)) sqrt((M-N)! (M-k)! / (M! (M-N-k)!)).
double bk_coefficient(int n, int m, int k);
std::vector<double> bk_vector(int n, int m);

// Symmetric Dicke state on num_qubits qubits with the given number of |1>
// excitations.  Labels default to q0, q1, ...
PureState dicke_state(int num_qubits, int excitations,
                      std::vector<std::string> labels = {});

// Projector onto the symmetric subspace, as the sum of Dicke projectors.
// Dense; limited to m <= 10.
Matrix symmetric_projector_m(int m);

// The same projector built as the average of all qubit-permutation
// unitaries.  Exponentially slower; limited to m <= 6.  Used to cross-check
// the Dicke construction.
Matrix symmetric_projector_by_permutations(int m);

// Applies one single-qubit unitary to every qubit of a register.
PureState apply_product_unitary(const PureState& psi, const Matrix& u);

// Program pair for the machine ancillas: the singlet drives cloning plus
// state inversion on the B side; the plus triplet turns the B side into
// clones of the conjugate state instead.
enum class ProgramState { Singlet, Triplet };

struct CloningSpec {
  int n = 1;
  int m = 2;
  PureState phi = PureState::single_qubit(1.0, 0.0, "phi");
  ProgramState program = ProgramState::Singlet;
};

struct NMOutcome {
  double success_probability = 0.0;
  // Expansion coefficients over the excitation basis, phase-fixed so the
  // k = 0 entry is positive; matches bk_vector for both program choices.
  std::vector<double> b;
  double clone_fidelity = 0.0;
  // Overlap of one B qubit with the orthogonal state (singlet program) or
  // with the conjugate state (triplet program); NaN when m == n.
  double anticlone_fidelity = 0.0;
  DensityMatrix reduced_clone;                    // first clone qubit
  std::optional<DensityMatrix> reduced_anticlone; // first B qubit, if any
  PureState post_state;  // register S1..Sn, A1..A(m-n), B1..B(m-n)
};

// Runs the N -> M machine: n copies of phi plus m-n program pairs, with the
// first m qubits projected onto the symmetric subspace.  The register size
// 2m-n is limited to 22 qubits.
NMOutcome run_nm_protocol(const CloningSpec& spec);

struct ClosedForms {
  double success_probability = 0.0;
  double clone_fidelity = 0.0;
  double anticlone_fidelity = 0.0;  // NaN when m == n
};

// Exact expressions the simulation must reproduce:
//   p = 2^{-(M-N)} (M+1)/(N+1),
//   F_clone = (N+1+N/M)/(N+2),
//   F_anti  = (N+1)/(N+2).
ClosedForms closed_form_fidelities(int n, int m);

}  // namespace uqm::angmom
