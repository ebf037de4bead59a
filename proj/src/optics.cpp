#include "uqm/optics.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "uqm/random.hpp"

namespace uqm::optics {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_visibility(double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument("coincidence model: visibility outside [0,1]");
  }
}

// Shortest decimal form that round-trips, shared by the CSV and JSON
// writers; infinities become "inf".
std::string number_repr(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return nlohmann::json(x).dump();
}

}  // namespace

double overlap(double delay_z, double sigma_z) {
  if (!(sigma_z > 0.0)) {
    throw std::invalid_argument("overlap: sigma_z must be positive");
  }
  const double ratio = delay_z / sigma_z;
  return std::exp(-ratio * ratio);
}

std::pair<double, double> coincidence_probabilities(const PureState& phi,
                                                    double v) {
  if (phi.num_qubits() != 1) {
    throw std::invalid_argument(
        "coincidence_probabilities: polarization must be one qubit");
  }
  check_visibility(v);
  return {(1.0 + v) / (2.0 + v), 1.0 / (2.0 + v)};
}

CoincidenceRecord estimate_R(const HomConfig& config) {
  if (config.phi.num_qubits() != 1) {
    throw std::invalid_argument("estimate_R: polarization must be one qubit");
  }
  if (!(config.sigma_z > 0.0)) {
    throw std::invalid_argument("estimate_R: sigma_z must be positive");
  }
  if (config.shots < 1) {
    throw std::invalid_argument("estimate_R: shots must be positive");
  }
  if (!(config.xi > 0.0 && config.xi <= 1.0)) {
    throw std::invalid_argument("estimate_R: xi must lie in (0, 1]");
  }

  const double v = overlap(config.delay_z, config.sigma_z);
  const double r_measured = config.xi * (1.0 + v);
  const double p_parallel = r_measured / (1.0 + r_measured);

  Rng rng(config.seed);
  long parallel = 0;
  for (long s = 0; s < config.shots; ++s) {
    if (rng.bernoulli(p_parallel)) ++parallel;
  }
  const long orthogonal = config.shots - parallel;

  CoincidenceRecord rec;
  rec.n_parallel = parallel;
  rec.n_orthogonal = orthogonal;
  if (orthogonal == 0) {
    rec.r_hat = kInf;
    rec.r_err = kInf;
    rec.orthogonal_starved = true;
    return rec;
  }
  rec.r_hat = static_cast<double>(parallel) / orthogonal;
  rec.r_err = parallel == 0
                  ? 0.0
                  : rec.r_hat * std::sqrt(1.0 / parallel + 1.0 / orthogonal);
  return rec;
}

double fidelity_from_R(double r, FidelityMode mode) {
  if (std::isnan(r) || r < 0.0) {
    throw std::invalid_argument("fidelity_from_R: ratio must be non-negative");
  }
  if (std::isinf(r)) return 1.0;  // limit of both estimators
  return mode == FidelityMode::Clone ? (2.0 * r + 1.0) / (2.0 * r + 2.0)
                                     : r / (r + 1.0);
}

double xi_correct(double r_raw, double xi) {
  if (!(xi > 0.0)) {
    throw std::invalid_argument("xi_correct: xi must be positive");
  }
  if (std::isnan(r_raw) || r_raw < 0.0) {
    throw std::invalid_argument("xi_correct: ratio must be non-negative");
  }
  return r_raw / xi;
}

std::vector<ScanPoint> dip_scan(const HomConfig& base,
                                const std::vector<double>& delays) {
  std::vector<ScanPoint> scan;
  scan.reserve(delays.size());
  for (std::size_t i = 0; i < delays.size(); ++i) {
    HomConfig cfg = base;
    cfg.delay_z = delays[i];
    cfg.seed = base.seed + i;
    const CoincidenceRecord rec = estimate_R(cfg);
    const double corrected =
        rec.orthogonal_starved ? kInf : xi_correct(rec.r_hat, cfg.xi);
    scan.push_back(ScanPoint{delays[i], rec.n_parallel, rec.n_orthogonal,
                             rec.r_hat, rec.r_err,
                             fidelity_from_R(corrected, FidelityMode::Clone),
                             fidelity_from_R(corrected, FidelityMode::Unot)});
  }
  return scan;
}

std::string scan_to_csv(const std::vector<ScanPoint>& scan) {
  std::ostringstream out;
  out << "delay_z,n_parallel,n_orthogonal,R_hat,R_err,F_clone,F_unot\n";
  for (const ScanPoint& p : scan) {
    out << number_repr(p.delay_z) << ',' << p.n_parallel << ','
        << p.n_orthogonal << ',' << number_repr(p.r_hat) << ','
        << number_repr(p.r_err) << ',' << number_repr(p.f_clone) << ','
        << number_repr(p.f_unot) << '\n';
  }
  return out.str();
}

nlohmann::json scan_to_json(const std::vector<ScanPoint>& scan) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ScanPoint& p : scan) {
    nlohmann::json row = {{"delay_z", p.delay_z},
                          {"n_parallel", p.n_parallel},
                          {"n_orthogonal", p.n_orthogonal},
                          {"F_clone", p.f_clone},
                          {"F_unot", p.f_unot}};
    // JSON has no infinity: starved points carry the string "inf".
    if (std::isinf(p.r_hat)) {
      row["R_hat"] = "inf";
      row["R_err"] = "inf";
    } else {
      row["R_hat"] = p.r_hat;
      row["R_err"] = p.r_err;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace uqm::optics
