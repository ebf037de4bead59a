#include "uqm/symmproto.hpp"

#include <cmath>
#include <stdexcept>

#include "uqm/channels.hpp"

namespace uqm::proto {

namespace {

void require_single_qubit(const PureState& phi, const char* who) {
  if (phi.num_qubits() != 1) {
    throw std::invalid_argument(std::string(who) + ": input must be one qubit");
  }
}

// lambda |phi><phi| + (1 - lambda) |perp><perp| ... as Bloch length:
// (1 + lambda)/2 on phi, (1 - lambda)/2 on perp.
Matrix aligned_mixed(const PureState& phi, double lambda) {
  const Vector& p = phi.amplitudes();
  const Vector q = perp(phi).amplitudes();
  return 0.5 * (1.0 + lambda) * (p * p.adjoint()) +
         0.5 * (1.0 - lambda) * (q * q.adjoint());
}

// Shared three-qubit run: project S,A of |phi>_S x |pair>_AB onto the
// symmetric subspace and collect reductions.
ProtocolOutcome project_triple(const PureState& phi, const PureState& pair) {
  const PureState omega = tensor(phi.relabeled({"S"}), pair);
  const Matrix p_full = kron(symmetric_projector_2q(), identity_matrix(2));
  const Vector projected = p_full * omega.amplitudes();
  const double p = projected.squaredNorm();
  ProtocolOutcome out;
  out.success_probability = p;
  PureState post =
      PureState(projected / std::sqrt(p), omega.labels()).canonicalized();
  out.reduced.emplace("S", partial_trace(post, {"S"}));
  out.reduced.emplace("A", partial_trace(post, {"A"}));
  out.reduced.emplace("B", partial_trace(post, {"B"}));
  out.post_state = std::move(post);
  return out;
}

}  // namespace

Matrix symmetric_projector_2q() {
  const Vector psi = bell_state(BellKind::PsiMinus).amplitudes();
  return Matrix::Identity(4, 4) - psi * psi.adjoint();
}

ProtocolOutcome run_cloning_teleunot(const PureState& phi) {
  require_single_qubit(phi, "run_cloning_teleunot");
  ProtocolOutcome out = project_triple(phi, bell_state(BellKind::PsiMinus));
  out.fidelities["clone"] =
      fidelity_pure(out.reduced.at("S"), phi.relabeled({"S"}));
  out.fidelities["unot"] =
      fidelity_pure(out.reduced.at("B"), perp(phi).relabeled({"B"}));
  return out;
}

ProtocolOutcome run_cloning_mixed_ancilla(const PureState& phi) {
  require_single_qubit(phi, "run_cloning_mixed_ancilla");
  const DensityMatrix input =
      tensor(DensityMatrix::from_pure(phi.relabeled({"S"})),
             DensityMatrix::maximally_mixed(1).relabeled({"A"}));
  const Matrix p = symmetric_projector_2q();
  const Matrix projected = p * input.matrix() * p;
  const double prob = projected.trace().real();
  ProtocolOutcome out;
  out.success_probability = prob;
  DensityMatrix post(projected / prob, input.labels());
  out.reduced.emplace("S", partial_trace(post, {"S"}));
  out.reduced.emplace("A", partial_trace(post, {"A"}));
  out.fidelities["clone"] =
      fidelity_pure(out.reduced.at("S"), phi.relabeled({"S"}));
  out.post_state = std::move(post);
  return out;
}

ProtocolOutcome run_purification(const PurificationInput& in) {
  require_single_qubit(in.phi, "run_purification");
  if (in.lambda_s < 0.0 || in.lambda_s > 1.0 || in.lambda_a < 0.0 ||
      in.lambda_a > 1.0) {
    throw std::invalid_argument("run_purification: Bloch lengths must lie in [0, 1]");
  }
  const DensityMatrix input(
      kron(aligned_mixed(in.phi, in.lambda_s), aligned_mixed(in.phi, in.lambda_a)),
      {"S", "A"});
  const Matrix p = symmetric_projector_2q();
  const Matrix projected = p * input.matrix() * p;
  const double prob = projected.trace().real();
  ProtocolOutcome out;
  out.success_probability = prob;
  DensityMatrix post(projected / prob, input.labels());
  out.reduced.emplace("S", partial_trace(post, {"S"}));
  out.reduced.emplace("A", partial_trace(post, {"A"}));
  const PureState phi_s = in.phi.relabeled({"S"});
  out.fidelities["f_in"] =
      0.5 * ((1.0 + in.lambda_s) / 2.0 + (1.0 + in.lambda_a) / 2.0);
  const double f_out = fidelity_pure(out.reduced.at("S"), phi_s);
  out.fidelities["f_out"] = f_out;
  out.fidelities["lambda_out"] = 2.0 * f_out - 1.0;
  out.post_state = std::move(post);
  return out;
}

AntiUnitarySpec antiunitary_decompose(const Matrix& v, bool conjugation) {
  if (v.rows() != 2 || v.cols() != 2 || !is_unitary(v)) {
    throw std::invalid_argument("antiunitary_decompose: v must be 2x2 unitary");
  }
  if (!conjugation) {
    throw std::invalid_argument(
        "antiunitary_decompose: a map without conjugation is unitary, not anti-unitary");
  }
  return AntiUnitarySpec{v};
}

PureState apply_antiunitary(const AntiUnitarySpec& a, const PureState& phi) {
  require_single_qubit(phi, "apply_antiunitary");
  return PureState(a.u * phi.amplitudes().conjugate(), phi.labels());
}

DensityMatrix optimal_antiunitary_map(const AntiUnitarySpec& a,
                                      const DensityMatrix& rho) {
  if (rho.num_qubits() != 1) {
    throw std::invalid_argument("optimal_antiunitary_map: single-qubit states only");
  }
  if (!is_unitary(a.u)) {
    throw std::invalid_argument("optimal_antiunitary_map: u must be unitary");
  }
  // u sigma_Y UNOT(rho) sigma_Y u^dagger, assembled as one Kraus channel so
  // the linear extension to mixed inputs is inherited from the channel form.
  const Matrix w = a.u * pauli(2);
  std::vector<channels::KrausTerm> terms;
  for (int i = 1; i <= 3; ++i) {
    terms.push_back({1.0 / 3.0, w * pauli(i)});
  }
  return channels::apply(channels::KrausChannel(std::move(terms)), rho);
}

ProtocolOutcome programmable_teleport(const PureState& phi, const Matrix& u) {
  require_single_qubit(phi, "programmable_teleport");
  if (u.rows() != 2 || u.cols() != 2 || !is_unitary(u)) {
    throw std::invalid_argument("programmable_teleport: u must be 2x2 unitary");
  }
  const PureState pair = bell_state(BellKind::PsiMinus, "A", "B");
  Vector program = kron(identity_matrix(2), u.adjoint()) * pair.amplitudes();
  ProtocolOutcome out =
      project_triple(phi, PureState(std::move(program), pair.labels()));
  out.fidelities["clone"] =
      fidelity_pure(out.reduced.at("S"), phi.relabeled({"S"}));
  // The programmed machine approximates A = u^dagger sigma_Y K.
  const AntiUnitarySpec target{u.adjoint() * pauli(2)};
  out.fidelities["anti_unitary"] = fidelity_pure(
      out.reduced.at("B"), apply_antiunitary(target, phi).relabeled({"B"}));
  return out;
}

}  // namespace uqm::proto
