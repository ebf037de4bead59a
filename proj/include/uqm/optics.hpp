// optics.hpp — abstracted beam-splitter coalescence model: two photons meet
// at the monitored output port, partial distinguishability sets the
// interference visibility, and the parallel/orthogonal coincidence ratio R
// estimates cloning and state-inversion fidelities.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "uqm/qcore.hpp"

namespace uqm::optics {

// Gaussian mode overlap of two wave packets separated by delay_z, dip width
// sigma_z: v = exp(-(delay_z/sigma_z)^2).
double overlap(double delay_z, double sigma_z);

// Conditional probabilities of the two coincidence classes at the monitored
// port — both photons polarized along phi, or one along phi and one
// orthogonal — for interference visibility v.  Their ratio is 1+v: bosonic
// bunching doubles the parallel rate at v=1 and disappears at v=0.
std::pair<double, double> coincidence_probabilities(const PureState& phi,
                                                    double v);

struct HomConfig {
  PureState phi = PureState::single_qubit(1.0, 0.0, "phi");
  double delay_z = 0.0;
  double sigma_z = 1.0;
  long shots = 10000;
  std::uint64_t seed = 0;
  double xi = 1.0;  // signal-to-noise degradation: measured R = xi * ideal R
};

struct CoincidenceRecord {
  long n_parallel = 0;
  long n_orthogonal = 0;
  double r_hat = 0.0;  // n_parallel / n_orthogonal, as measured (xi-degraded)
  double r_err = 0.0;  // binomial propagation; infinite when starved
  bool orthogonal_starved = false;  // no orthogonal counts: r_hat, r_err inf
};

// Seeded Monte Carlo coincidence counting at one delay.
CoincidenceRecord estimate_R(const HomConfig& config);

enum class FidelityMode { Clone, Unot };

// Fidelity estimators: clone (2R+1)/(2R+2), inversion R/(R+1).  Both are
// monotone in R; an infinite R maps to the limit value 1.
double fidelity_from_R(double r, FidelityMode mode);

// Undoes the signal-to-noise reduction: R_corrected = R_raw / xi.
double xi_correct(double r_raw, double xi);

struct ScanPoint {
  double delay_z = 0.0;
  long n_parallel = 0;
  long n_orthogonal = 0;
  double r_hat = 0.0;
  double r_err = 0.0;
  double f_clone = 0.0;  // from the xi-corrected ratio
  double f_unot = 0.0;   // from the xi-corrected ratio
};

// Runs estimate_R at every delay with per-point seeds (base seed + index);
// fidelity columns apply the xi correction to the measured ratio first.
std::vector<ScanPoint> dip_scan(const HomConfig& base,
                                const std::vector<double>& delays);

// delay_z,n_parallel,n_orthogonal,R_hat,R_err,F_clone,F_unot — one header
// line plus one row per point; infinities render as "inf".
std::string scan_to_csv(const std::vector<ScanPoint>& scan);
nlohmann::json scan_to_json(const std::vector<ScanPoint>& scan);

}  // namespace uqm::optics
