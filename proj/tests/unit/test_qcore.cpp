#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "test_util.hpp"
#include "uqm/qcore.hpp"
#include "uqm/random.hpp"

using namespace uqm;
using test::check_matrix_near;
using test::check_near;
using test::check_state_near;

namespace {

// sqrt(2/3)|phi phi>|perp> - sqrt(1/6)(|phi perp> + |perp phi>)|phi>,
// written out directly from the closed form; the reduction oracles below
// are frozen against this construction.
PureState symmetrized_triple(const PureState& phi) {
  const PureState phi_s = phi.relabeled({"S"});
  const PureState phi_a = phi.relabeled({"A"});
  const PureState phi_b = phi.relabeled({"B"});
  const PureState perp_s = perp(phi).relabeled({"S"});
  const PureState perp_a = perp(phi).relabeled({"A"});
  const PureState perp_b = perp(phi).relabeled({"B"});
  Vector v = std::sqrt(2.0 / 3.0) *
                 tensor(tensor(phi_s, phi_a), perp_b).amplitudes() -
             std::sqrt(1.0 / 6.0) *
                 (tensor(tensor(phi_s, perp_a), phi_b).amplitudes() +
                  tensor(tensor(perp_s, phi_a), phi_b).amplitudes());
  return PureState(std::move(v), {"S", "A", "B"});
}

}  // namespace

TEST_CASE("pauli matrices and kron") {
  check_matrix_near(pauli(1) * pauli(1), identity_matrix(2));
  check_matrix_near(pauli(1) * pauli(2), Complex(0, 1) * pauli(3));
  CHECK(is_hermitian(pauli(2)));
  CHECK(is_unitary(pauli(2)));
  CHECK_THROWS_AS(pauli(4), std::invalid_argument);

  Matrix zx = kron(pauli(3), pauli(1));
  CHECK(zx.rows() == 4);
  check_near(zx(0, 1).real(), 1.0);
  check_near(zx(2, 3).real(), -1.0);
}

TEST_CASE("tensor builds labeled product states") {
  const PureState zero = PureState::single_qubit(1, 0, "a");
  const PureState one = PureState::single_qubit(0, 1, "b");
  const PureState prod = tensor(zero, one);
  CHECK(prod.labels() == std::vector<std::string>{"a", "b"});
  check_near(std::abs(prod.amplitudes()(1)), 1.0);

  // |phi>_S (|01> - |10>)/sqrt(2) for phi = |0>: weight on indices 1 and 2.
  const PureState omega = tensor(PureState::single_qubit(1, 0, "S"),
                                 bell_state(BellKind::PsiMinus, "A", "B"));
  const double s = 1.0 / std::sqrt(2.0);
  check_near(omega.amplitudes()(1).real(), s);
  check_near(omega.amplitudes()(2).real(), -s);
  check_near(omega.amplitudes().norm(), 1.0);

  CHECK_THROWS_AS(tensor(zero, zero.relabeled({"a"})), std::invalid_argument);
}

TEST_CASE("pure state validation and helpers") {
  Vector bad(2);
  bad << 1.0, 1.0;
  CHECK_THROWS_AS(PureState(bad, {"q0"}), std::invalid_argument);
  CHECK_THROWS_AS(
      PureState(bell_state(BellKind::PhiPlus).amplitudes(), {"x", "x"}),
      std::invalid_argument);

  const PureState phi = PureState::from_bloch_angles(0.7, 0.3);
  check_near(std::abs(phi.inner(phi)), 1.0);
  check_near(std::abs(phi.inner(perp(phi))), 0.0);

  const PureState rotated =
      PureState(phi.amplitudes() * std::exp(Complex(0, 1.234)), phi.labels());
  check_state_near(rotated, phi);

  const PureState ket01 =
      PureState::computational_basis({"a", "b"}, 1);  // |0>_a |1>_b
  const PureState swapped = ket01.permuted({"b", "a"});
  check_near(std::abs(swapped.amplitudes()(2)), 1.0);  // |1>_b |0>_a
  CHECK(swapped.labels() == std::vector<std::string>{"b", "a"});
}

TEST_CASE("density matrix validation") {
  Matrix not_herm(2, 2);
  not_herm << 0.5, 0.5, -0.5, 0.5;
  CHECK_THROWS_AS((DensityMatrix{not_herm}), std::invalid_argument);

  Matrix bad_trace = Matrix::Identity(2, 2);
  CHECK_THROWS_AS((DensityMatrix{bad_trace}), std::invalid_argument);

  Matrix not_psd(2, 2);
  not_psd << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS((DensityMatrix{not_psd}), std::invalid_argument);

  const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
  CHECK(mixed.num_qubits() == 2);
  check_near(mixed.matrix().trace().real(), 1.0);
}

TEST_CASE("partial trace of the singlet gives the maximally mixed qubit") {
  const DensityMatrix rho =
      DensityMatrix::from_pure(bell_state(BellKind::PsiMinus));
  check_matrix_near(partial_trace(rho, {"A"}).matrix(),
                    Matrix::Identity(2, 2) / 2.0);
  check_matrix_near(partial_trace(rho, {"B"}).matrix(),
                    Matrix::Identity(2, 2) / 2.0);
  CHECK_THROWS_AS(partial_trace(rho, {"C"}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(rho, {}), std::invalid_argument);
}

TEST_CASE("partial trace of the symmetrized triple") {
  const PureState phi = PureState::from_bloch_angles(0.7, 0.3);
  const PureState xi = symmetrized_triple(phi);
  const Matrix proj_phi =
      phi.amplitudes() * phi.amplitudes().adjoint();
  const Matrix proj_perp =
      perp(phi).amplitudes() * perp(phi).amplitudes().adjoint();

  // Clones: 5/6 phi + 1/6 perp.  Anti-clone: 1/3 phi + 2/3 perp.
  const Matrix clone = (5.0 / 6.0) * proj_phi + (1.0 / 6.0) * proj_perp;
  const Matrix anti = (1.0 / 3.0) * proj_phi + (2.0 / 3.0) * proj_perp;
  check_matrix_near(partial_trace(xi, {"S"}).matrix(), clone);
  check_matrix_near(partial_trace(xi, {"A"}).matrix(), clone);
  check_matrix_near(partial_trace(xi, {"B"}).matrix(), anti);

  // The pure-state reduction agrees with the density-matrix route.
  const DensityMatrix full = DensityMatrix::from_pure(xi);
  check_matrix_near(partial_trace(xi, {"S", "B"}).matrix(),
                    partial_trace(full, {"S", "B"}).matrix());
  CHECK(partial_trace(full, {"S", "B"}).labels() ==
        std::vector<std::string>{"S", "B"});
}

TEST_CASE("fidelity against a pure target") {
  const PureState phi = PureState::from_bloch_angles(1.1, -0.4);
  const Matrix proj_phi = phi.amplitudes() * phi.amplitudes().adjoint();
  const Matrix proj_perp =
      perp(phi).amplitudes() * perp(phi).amplitudes().adjoint();
  const DensityMatrix rho((5.0 / 6.0) * proj_phi + (1.0 / 6.0) * proj_perp,
                          {"S"});
  check_near(fidelity_pure(rho, phi.relabeled({"S"})), 5.0 / 6.0);
  check_near(fidelity_pure(rho, perp(phi).relabeled({"S"})), 1.0 / 6.0);
  CHECK_THROWS_AS(fidelity_pure(DensityMatrix::maximally_mixed(2), phi),
                  std::invalid_argument);

  // Invariant under a joint unitary rotation.
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const Matrix u = rng.haar_su2();
    const DensityMatrix rot(u * rho.matrix() * u.adjoint(), {"S"});
    const PureState target(u * phi.amplitudes(), {"S"});
    check_near(fidelity_pure(rot, target), fidelity_pure(rho, phi.relabeled({"S"})));
  }
}

TEST_CASE("bloch round trip and expectations") {
  const DensityMatrix zero = DensityMatrix::from_pure(
      PureState::single_qubit(1, 0));
  const BlochVector r0 = to_bloch(zero);
  check_near(r0.x, 0.0);
  check_near(r0.y, 0.0);
  check_near(r0.z, 1.0);

  Matrix diag(2, 2);
  diag << 5.0 / 6.0, 0, 0, 1.0 / 6.0;
  check_near(to_bloch(DensityMatrix(diag)).z, 2.0 / 3.0);

  Rng rng(13);
  for (int i = 0; i < 20; ++i) {
    const auto [theta, ph] = rng.bloch_angles();
    const double scale = rng.uniform();
    const BlochVector r{scale * std::sin(theta) * std::cos(ph),
                        scale * std::sin(theta) * std::sin(ph),
                        scale * std::cos(theta)};
    const BlochVector back = to_bloch(from_bloch(r));
    check_near(back.x, r.x);
    check_near(back.y, r.y);
    check_near(back.z, r.z);
  }

  CHECK_THROWS_AS(from_bloch(BlochVector{1.0, 1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(to_bloch(DensityMatrix::maximally_mixed(2)),
                  std::invalid_argument);

  const DensityMatrix singlet =
      DensityMatrix::from_pure(bell_state(BellKind::PsiMinus));
  check_near(pauli_expectation(singlet, {1, 1}), -1.0);
  check_near(pauli_expectation(singlet, {2, 2}), -1.0);
  check_near(pauli_expectation(singlet, {3, 3}), -1.0);
  check_near(pauli_expectation(singlet, {0, 0}), 1.0);
  const DensityMatrix zz = DensityMatrix::from_pure(
      PureState::computational_basis({"a", "b"}, 0));
  check_near(pauli_expectation(zz, {3, 3}), 1.0);
  CHECK_THROWS_AS(pauli_expectation(zz, {3}), std::invalid_argument);
}

TEST_CASE("trace distance and werner states") {
  const DensityMatrix a =
      DensityMatrix::from_pure(PureState::single_qubit(1, 0));
  const DensityMatrix b =
      DensityMatrix::from_pure(PureState::single_qubit(0, 1));
  check_near(trace_distance(a, a), 0.0);
  check_near(trace_distance(a, b), 1.0);

  check_matrix_near(werner_state(0.0).matrix(), Matrix::Identity(4, 4) / 4.0);
  const PureState psi = bell_state(BellKind::PsiMinus);
  check_matrix_near(werner_state(1.0).matrix(),
                    psi.amplitudes() * psi.amplitudes().adjoint());
  CHECK_THROWS_AS(werner_state(1.5), std::invalid_argument);
}
