#include "uqm/optics.hpp"

#include <cmath>
#include <variant>

#include <doctest.h>

#include "uqm/qcore.hpp"
#include "uqm/random.hpp"
#include "uqm/symmproto.hpp"
#include "test_util.hpp"

using namespace uqm;
using namespace uqm::optics;
using uqm::test::check_near;
using uqm::test::kTol;

namespace {

// Independent two-boson oracle: the norm of a_u^dag a_w^dag |0> for
// normalized single-photon modes u, w is 1 + |<u|w>|^2 (two-mode permanent).
double two_boson_norm(const Vector& u, const Vector& w) {
  return 1.0 + std::norm(u.dot(w));
}

Vector mode(const Vector& polarization, const Vector& temporal) {
  Vector out(polarization.size() * temporal.size());
  for (Eigen::Index i = 0; i < polarization.size(); ++i) {
    for (Eigen::Index j = 0; j < temporal.size(); ++j) {
      out(i * temporal.size() + j) = polarization(i) * temporal(j);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("gaussian mode overlap") {
  check_near(overlap(0.0, 1.0), 1.0);
  check_near(overlap(2.5, 2.5), std::exp(-1.0));
  check_near(overlap(-1.3, 1.0), overlap(1.3, 1.0));
  CHECK(overlap(5.0, 1.0) < 1.4e-11);
  CHECK_THROWS_AS(overlap(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(overlap(1.0, -2.0), std::invalid_argument);
}

TEST_CASE("coincidence probabilities follow the 1+v enhancement") {
  const PureState phi = PureState::from_bloch_angles(0.7, 0.3, "phi");

  const auto [p1_par, p1_orth] = coincidence_probabilities(phi, 1.0);
  check_near(p1_par, 2.0 / 3.0);
  check_near(p1_orth, 1.0 / 3.0);

  const auto [p0_par, p0_orth] = coincidence_probabilities(phi, 0.0);
  check_near(p0_par, 0.5);
  check_near(p0_orth, 0.5);

  const auto [ph_par, ph_orth] = coincidence_probabilities(phi, 0.5);
  check_near(ph_par / ph_orth, 1.5);
  check_near(ph_par + ph_orth, 1.0);

  CHECK_THROWS_AS(coincidence_probabilities(phi, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(coincidence_probabilities(phi, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(
      coincidence_probabilities(PureState::computational_basis({"a", "b"}, 0),
                                0.5),
      std::invalid_argument);
}

TEST_CASE("two-photon amplitude oracle reproduces the ratio exactly") {
  Rng rng(61);
  for (const double v : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const PureState phi = rng.haar_qubit("phi");
    const Vector pol = phi.amplitudes();
    const Vector pol_perp = perp(phi).amplitudes();

    // Temporal envelopes with overlap sqrt(v) give visibility v.
    Vector t1(2), t2(2);
    t1 << 1.0, 0.0;
    t2 << std::sqrt(v), std::sqrt(1.0 - v);

    const double rate_parallel =
        two_boson_norm(mode(pol, t1), mode(pol, t2));
    const double rate_orthogonal =
        two_boson_norm(mode(pol, t1), mode(pol_perp, t2));
    check_near(rate_parallel, 1.0 + v);
    check_near(rate_orthogonal, 1.0);

    const auto [p_par, p_orth] = coincidence_probabilities(phi, v);
    check_near(p_par / p_orth, rate_parallel / rate_orthogonal);
  }
}

TEST_CASE("symmetrized two-qubit output matches the v=1 coincidences") {
  Rng rng(67);
  for (int trial = 0; trial < 5; ++trial) {
    const PureState phi = rng.haar_qubit("phi");
    const proto::ProtocolOutcome out = proto::run_cloning_mixed_ancilla(phi);
    const auto& rho = std::get<DensityMatrix>(out.post_state);

    const PureState par = tensor(phi.relabeled({"S"}), phi.relabeled({"A"}));
    const PureState orth_sa =
        tensor(phi.relabeled({"S"}), perp(phi).relabeled({"A"}));
    const PureState orth_as =
        tensor(perp(phi).relabeled({"S"}), phi.relabeled({"A"}));

    const double w_par = fidelity_pure(rho, par);
    const double w_orth = fidelity_pure(rho, orth_sa) + fidelity_pure(rho, orth_as);

    const auto [p_par, p_orth] = coincidence_probabilities(phi, 1.0);
    check_near(w_par, p_par);
    check_near(w_orth, p_orth);
    check_near(w_par / w_orth, 2.0);
  }
}

TEST_CASE("coincidence counting estimates R") {
  HomConfig cfg;
  cfg.delay_z = 0.0;
  cfg.shots = 100000;
  cfg.seed = 7;
  const CoincidenceRecord at_dip = estimate_R(cfg);
  CHECK(at_dip.n_parallel + at_dip.n_orthogonal == cfg.shots);
  CHECK(std::abs(at_dip.r_hat - 2.0) < 3.0 * at_dip.r_err);
  CHECK(at_dip.r_err < 0.05);
  CHECK(!at_dip.orthogonal_starved);

  cfg.delay_z = 80.0;  // far off the dip: no interference left
  const CoincidenceRecord off_dip = estimate_R(cfg);
  CHECK(std::abs(off_dip.r_hat - 1.0) < 3.0 * off_dip.r_err);

  // Determinism per seed.
  cfg.delay_z = 0.0;
  const CoincidenceRecord again = estimate_R(cfg);
  CHECK(again.n_parallel == at_dip.n_parallel);
  cfg.seed = 8;
  const CoincidenceRecord other = estimate_R(cfg);
  CHECK(other.n_parallel != at_dip.n_parallel);

  cfg.shots = 0;
  CHECK_THROWS_AS(estimate_R(cfg), std::invalid_argument);
  cfg.shots = 10;
  cfg.xi = 0.0;
  CHECK_THROWS_AS(estimate_R(cfg), std::invalid_argument);
  cfg.xi = 1.2;
  CHECK_THROWS_AS(estimate_R(cfg), std::invalid_argument);
  cfg.xi = 1.0;
  cfg.sigma_z = 0.0;
  CHECK_THROWS_AS(estimate_R(cfg), std::invalid_argument);
}

TEST_CASE("starved orthogonal counts are flagged with infinite error") {
  HomConfig cfg;
  cfg.shots = 1;
  bool found = false;
  for (std::uint64_t seed = 0; seed < 64 && !found; ++seed) {
    cfg.seed = seed;
    const CoincidenceRecord rec = estimate_R(cfg);
    if (rec.n_orthogonal == 0) {
      found = true;
      CHECK(rec.orthogonal_starved);
      CHECK(std::isinf(rec.r_hat));
      CHECK(std::isinf(rec.r_err));
    }
  }
  CHECK(found);
}

TEST_CASE("fidelity estimators and the xi correction") {
  check_near(fidelity_from_R(2.0, FidelityMode::Clone), 5.0 / 6.0);
  check_near(fidelity_from_R(2.0, FidelityMode::Unot), 2.0 / 3.0);
  check_near(fidelity_from_R(1.0, FidelityMode::Clone), 3.0 / 4.0);
  check_near(fidelity_from_R(1.0, FidelityMode::Unot), 1.0 / 2.0);
  check_near(fidelity_from_R(0.0, FidelityMode::Clone), 0.5);
  CHECK(fidelity_from_R(std::numeric_limits<double>::infinity(),
                        FidelityMode::Clone) == 1.0);

  // Monotone, and the clone estimator stays inside [1/2, 1).
  double prev_clone = -1.0, prev_unot = -1.0;
  for (double r = 0.0; r <= 50.0; r += 0.5) {
    const double fc = fidelity_from_R(r, FidelityMode::Clone);
    const double fu = fidelity_from_R(r, FidelityMode::Unot);
    CHECK(fc > prev_clone);
    CHECK(fu > prev_unot);
    CHECK(fc >= 0.5);
    CHECK(fc < 1.0);
    prev_clone = fc;
    prev_unot = fu;
  }

  // The measured 0.7 signal-to-noise factor restores R = 2 exactly.
  CHECK(xi_correct(1.4, 0.7) == 2.0);
  CHECK(xi_correct(1.26, 0.7) == 1.8);
  check_near(fidelity_from_R(xi_correct(1.26, 0.7), FidelityMode::Clone),
             0.8214285714285714);
  check_near(xi_correct(1.7, 1.0), 1.7);

  CHECK_THROWS_AS(fidelity_from_R(-0.5, FidelityMode::Clone),
                  std::invalid_argument);
  CHECK_THROWS_AS(xi_correct(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(xi_correct(-1.0, 0.7), std::invalid_argument);
}

TEST_CASE("dip scan: symmetry, baseline recovery, serialization") {
  HomConfig base;
  base.sigma_z = 1.0;
  base.shots = 40000;
  base.seed = 11;
  const std::vector<double> delays = {-5.0, -1.0, -0.5, 0.0, 0.5, 1.0, 5.0};
  const std::vector<ScanPoint> scan = dip_scan(base, delays);
  REQUIRE(scan.size() == delays.size());

  // Mirror-image delays estimate the same ratio within Monte Carlo error.
  for (const auto& [left, right] : std::vector<std::pair<int, int>>{
           {0, 6}, {1, 5}, {2, 4}}) {
    const double gap = std::abs(scan[left].r_hat - scan[right].r_hat);
    CHECK(gap < 4.0 * (scan[left].r_err + scan[right].r_err));
  }
  // Off-dip points recover the no-interference baseline.
  CHECK(std::abs(scan.front().r_hat - 1.0) < 3.0 * scan.front().r_err);
  // Center reaches the bunching limit and maps onto both estimators.
  CHECK(std::abs(scan[3].r_hat - 2.0) < 3.0 * scan[3].r_err);
  CHECK(std::abs(scan[3].f_clone - 5.0 / 6.0) < 0.02);
  CHECK(std::abs(scan[3].f_unot - 2.0 / 3.0) < 0.02);

  const std::string csv = scan_to_csv(scan);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "delay_z,n_parallel,n_orthogonal,R_hat,R_err,F_clone,F_unot");
  CHECK(std::count(csv.begin(), csv.end(), '\n') ==
        static_cast<long>(delays.size()) + 1);
  CHECK(csv == scan_to_csv(dip_scan(base, delays)));  // byte-identical rerun

  const nlohmann::json j = scan_to_json(scan);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == delays.size());
  for (const char* key : {"delay_z", "n_parallel", "n_orthogonal", "R_hat",
                          "R_err", "F_clone", "F_unot"}) {
    CHECK(j[0].contains(key));
  }

  // A starved point serializes as the string "inf".
  std::vector<ScanPoint> starved(1);
  starved[0].delay_z = 0.0;
  starved[0].n_parallel = 3;
  starved[0].r_hat = std::numeric_limits<double>::infinity();
  starved[0].r_err = std::numeric_limits<double>::infinity();
  starved[0].f_clone = 1.0;
  starved[0].f_unot = 1.0;
  CHECK(scan_to_csv(starved).find(",inf,inf,") != std::string::npos);
  CHECK(scan_to_json(starved)[0]["R_hat"] == "inf");
}
