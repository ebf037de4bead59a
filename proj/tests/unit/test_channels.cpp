#include <cmath>
#include <stdexcept>

#include <doctest.h>
#include <json.hpp>

#include "test_util.hpp"
#include "uqm/channels.hpp"
#include "uqm/qcore.hpp"
#include "uqm/random.hpp"

using namespace uqm;
using namespace uqm::channels;
using test::check_matrix_near;
using test::check_near;

namespace {

DensityMatrix random_qubit_state(Rng& rng) {
  const PureState phi = rng.haar_qubit();
  const double lambda = rng.uniform();
  const Vector q = perp(phi).amplitudes();
  Matrix m = 0.5 * (1.0 + lambda) *
                 (phi.amplitudes() * phi.amplitudes().adjoint()) +
             0.5 * (1.0 - lambda) * (q * q.adjoint());
  return DensityMatrix(std::move(m));
}

}  // namespace

TEST_CASE("kraus channel construction and application") {
  CHECK_THROWS_AS(KrausChannel({}), std::invalid_argument);
  CHECK_THROWS_AS(KrausChannel({{0.5, pauli(1)}}), std::invalid_argument);
  CHECK_THROWS_AS(KrausChannel({{-1.0, pauli(1)}, {2.0, pauli(0)}}),
                  std::invalid_argument);

  const DensityMatrix zero =
      DensityMatrix::from_pure(PureState::single_qubit(1, 0));
  Matrix expected(2, 2);
  expected << 2.0 / 3.0, 0, 0, 1.0 / 3.0;
  check_matrix_near(apply(transpose_channel(), zero).matrix(), expected);

  expected << 1.0 / 3.0, 0, 0, 2.0 / 3.0;
  check_matrix_near(apply(unot_channel(), zero).matrix(), expected);
  check_matrix_near(apply(depolarizing_channel(), zero).matrix(),
                    Matrix::Identity(2, 2) / 2.0);
  check_matrix_near(apply(identity_channel(), zero).matrix(), zero.matrix());

  // As a linear map the transpose approximation is (rho^T + Tr[rho] I)/3.
  Rng rng(5);
  for (int i = 0; i < 10; ++i) {
    const DensityMatrix rho = random_qubit_state(rng);
    check_matrix_near(
        apply(transpose_channel(), rho).matrix(),
        (rho.matrix().transpose() + Matrix::Identity(2, 2)) / 3.0);
  }
}

TEST_CASE("channel lifted onto one side of a register") {
  const DensityMatrix singlet =
      DensityMatrix::from_pure(bell_state(BellKind::PsiMinus));
  const DensityMatrix mapped =
      apply_on_qubit(depolarizing_channel(), singlet, "B");
  check_matrix_near(mapped.matrix(), Matrix::Identity(4, 4) / 4.0);
  CHECK_THROWS_AS(apply_on_qubit(depolarizing_channel(), singlet, "C"),
                  std::invalid_argument);
}

TEST_CASE("pauli transfer matrices") {
  const Eigen::Vector4d tr_diag(1.0, 1.0 / 3.0, -1.0 / 3.0, 1.0 / 3.0);
  const Eigen::Vector4d unot_diag(1.0, -1.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0);
  const Eigen::Vector4d dep_diag(1.0, 0.0, 0.0, 0.0);
  CHECK((kraus_to_ptm(transpose_channel()).matrix() -
         Eigen::Matrix4d(tr_diag.asDiagonal()))
            .cwiseAbs()
            .maxCoeff() <= 1e-12);
  CHECK((kraus_to_ptm(unot_channel()).matrix() -
         Eigen::Matrix4d(unot_diag.asDiagonal()))
            .cwiseAbs()
            .maxCoeff() <= 1e-12);
  CHECK((kraus_to_ptm(depolarizing_channel()).matrix() -
         Eigen::Matrix4d(dep_diag.asDiagonal()))
            .cwiseAbs()
            .maxCoeff() <= 1e-12);
  CHECK(kraus_to_ptm(transpose_channel()).trace_preserving());

  // Dual route: transfer-matrix application equals Kraus application.
  Rng rng(17);
  for (int i = 0; i < 10; ++i) {
    const DensityMatrix rho = random_qubit_state(rng);
    check_matrix_near(
        ptm_apply(kraus_to_ptm(transpose_channel()), rho).matrix(),
        apply(transpose_channel(), rho).matrix());
    check_matrix_near(ptm_apply(kraus_to_ptm(unot_channel()), rho).matrix(),
                      apply(unot_channel(), rho).matrix());
  }

  // Composition in Kraus form multiplies the transfer matrices.
  const KrausChannel outer = transpose_channel();
  const KrausChannel inner = depolarizing_channel();
  std::vector<KrausTerm> composed;
  for (const auto& a : outer.terms()) {
    for (const auto& b : inner.terms()) {
      composed.push_back({a.weight * b.weight, a.op * b.op});
    }
  }
  const Eigen::Matrix4d lhs = kraus_to_ptm(KrausChannel(composed)).matrix();
  const Eigen::Matrix4d rhs = kraus_to_ptm(transpose_channel()).matrix() *
                              kraus_to_ptm(depolarizing_channel()).matrix();
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);

  // Non trace-preserving matrices are rejected on application.
  Eigen::Matrix4d bad = Eigen::Matrix4d::Identity();
  bad(0, 1) = 0.5;
  CHECK_THROWS_AS(
      ptm_apply(PauliTransferMatrix(bad), DensityMatrix::maximally_mixed(1)),
      std::invalid_argument);
}

TEST_CASE("partial transpose and the PPT criterion") {
  const DensityMatrix singlet =
      DensityMatrix::from_pure(bell_state(BellKind::PsiMinus));
  const Matrix pt = partial_transpose(singlet, Side::B);
  CHECK(is_hermitian(pt));
  Eigen::SelfAdjointEigenSolver<Matrix> es(pt, Eigen::EigenvaluesOnly);
  check_near(es.eigenvalues()(0), -0.5);
  check_near(es.eigenvalues()(3), 0.5);

  // Product states transpose factor-wise.
  Rng rng(29);
  const DensityMatrix a = random_qubit_state(rng);
  const DensityMatrix b = random_qubit_state(rng);
  const DensityMatrix prod = tensor(a.relabeled({"A"}), b.relabeled({"B"}));
  check_matrix_near(partial_transpose(prod, Side::B),
                    kron(a.matrix(), b.matrix().transpose()));
  check_matrix_near(partial_transpose(prod, Side::A),
                    kron(a.matrix().transpose(), b.matrix()));

  const auto singlet_report = ppt_test(singlet);
  CHECK(singlet_report.entangled);
  check_near(singlet_report.eigenvalues(0), -0.5);

  const auto product_report = ppt_test(
      DensityMatrix::from_pure(PureState::computational_basis({"A", "B"}, 0)));
  CHECK_FALSE(product_report.entangled);

  // Werner family: smallest transposed eigenvalue is (1 - 3w)/4.
  for (double w = 0.0; w <= 1.0; w += 0.1) {
    const auto report = ppt_test(werner_state(w));
    check_near(report.eigenvalues(0), (1.0 - 3.0 * w) / 4.0);
    CHECK(report.entangled == (w > 1.0 / 3.0));
  }
  CHECK(ppt_test(werner_state(1.0 / 3.0 + 1e-9)).entangled);
  CHECK_FALSE(ppt_test(werner_state(1.0 / 3.0 - 1e-9)).entangled);

  CHECK_THROWS_AS(partial_transpose(DensityMatrix::maximally_mixed(1), Side::B),
                  std::invalid_argument);
}

TEST_CASE("structural approximation map") {
  const DensityMatrix singlet =
      DensityMatrix::from_pure(bell_state(BellKind::PsiMinus));
  const auto on_singlet = spa_map(singlet);
  check_near(on_singlet.lambda_min, 1.0 / 12.0);
  CHECK(on_singlet.syndrome);

  const auto on_mixed = spa_map(DensityMatrix::maximally_mixed(2));
  check_near(on_mixed.lambda_min, 0.25);
  CHECK_FALSE(on_mixed.syndrome);

  // Known blind spot of the fixed weights: the separable |00><00| lands
  // below the syndrome threshold as well.
  const auto on_product = spa_map(
      DensityMatrix::from_pure(PureState::computational_basis({"A", "B"}, 0)));
  check_near(on_product.lambda_min, 1.0 / 9.0);
  CHECK(on_product.syndrome);
  CHECK_FALSE(ppt_test(DensityMatrix::from_pure(
                           PureState::computational_basis({"A", "B"}, 0)))
                  .entangled);

  // Alternative weights stay available; the pure transpose limit sends the
  // singlet to an eigenvalue of exactly zero.
  const auto transpose_only = spa_map(singlet, 0.0, 1.0);
  check_near(transpose_only.lambda_min, 0.0);
  CHECK_THROWS_AS(spa_map(singlet, 0.4, 0.4), std::invalid_argument);
  CHECK_THROWS_AS(spa_map(DensityMatrix::maximally_mixed(1)),
                  std::invalid_argument);
}

TEST_CASE("stochastic sampling converges and repeats per seed") {
  Rng rng(41);
  const DensityMatrix rho = random_qubit_state(rng);
  const DensityMatrix exact = apply(transpose_channel(), rho);
  const DensityMatrix sampled =
      sample_stochastic(transpose_channel(), rho, 100000, 7);
  CHECK(trace_distance(sampled, exact) < 0.01);

  const DensityMatrix repeat =
      sample_stochastic(transpose_channel(), rho, 100000, 7);
  CHECK((sampled.matrix().array() == repeat.matrix().array()).all());

  const DensityMatrix other =
      sample_stochastic(transpose_channel(), rho, 100000, 8);
  CHECK_FALSE((sampled.matrix().array() == other.matrix().array()).all());

  CHECK_THROWS_AS(sample_stochastic(transpose_channel(), rho, 0, 7),
                  std::invalid_argument);
}

TEST_CASE("channel and transfer-matrix serialization") {
  const KrausChannel ch = transpose_channel();
  const nlohmann::json j = to_json(ch);
  REQUIRE(j.contains("terms"));
  CHECK(j["terms"].size() == 3);
  const KrausChannel back = channel_from_json(j);
  REQUIRE(back.terms().size() == ch.terms().size());
  for (std::size_t i = 0; i < back.terms().size(); ++i) {
    check_near(back.terms()[i].weight, ch.terms()[i].weight);
    check_matrix_near(back.terms()[i].op, ch.terms()[i].op);
  }

  const PauliTransferMatrix ptm = kraus_to_ptm(unot_channel());
  const PauliTransferMatrix ptm_back = ptm_from_json(to_json(ptm));
  CHECK((ptm.matrix() - ptm_back.matrix()).cwiseAbs().maxCoeff() <= 1e-15);

  CHECK_THROWS_AS(channel_from_json(nlohmann::json::object()),
                  std::invalid_argument);
  CHECK_THROWS_AS(ptm_from_json(nlohmann::json::array({1, 2})),
                  std::invalid_argument);
}
