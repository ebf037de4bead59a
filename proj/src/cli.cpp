#include "uqm/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "uqm/angmom.hpp"
#include "uqm/channels.hpp"
#include "uqm/optics.hpp"
#include "uqm/qcore.hpp"
#include "uqm/symmproto.hpp"
#include "uqm/tomography.hpp"

namespace uqm::cli {
namespace {

using nlohmann::json;

constexpr double kExactTol = 1e-12;
constexpr double kSpectralTol = 1e-9;

// Non-finite values are not representable in JSON numbers; render them as
// strings so reports stay parseable.
json number_repr(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

std::string csv_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return json(x).dump();  // shortest round-trip decimal
}

struct ResultEntry {
  double value = 0.0;
  std::optional<double> tolerance;  // pass half-width when a target exists
  std::optional<double> std_error;  // sampling error, when estimated
  std::optional<double> target;     // reference value; absent renders "none"
};

struct Report {
  std::string subcommand;
  json parameters = json::object();
  std::vector<std::pair<std::string, ResultEntry>> results;
  json artifacts = json::object();

  void add(std::string key, ResultEntry entry) {
    results.emplace_back(std::move(key), entry);
  }

  // Every targeted result must sit within its declared tolerance; a result
  // without a target cannot fail.  Non-finite values never pass.
  bool pass() const {
    for (const auto& [key, e] : results) {
      if (!e.target) continue;
      const double tol = e.tolerance.value_or(0.0);
      if (!(std::abs(e.value - *e.target) <= tol) || !std::isfinite(e.value)) {
        return false;
      }
    }
    return true;
  }
};

json report_json(const Report& r) {
  json results = json::object();
  json targets = json::object();
  for (const auto& [key, e] : r.results) {
    json entry = json::object();
    entry["value"] = number_repr(e.value);
    if (e.tolerance) entry["tolerance"] = number_repr(*e.tolerance);
    if (e.std_error) entry["stderr"] = number_repr(*e.std_error);
    entry["target"] = e.target ? number_repr(*e.target) : json("none");
    results[key] = std::move(entry);
    if (e.target) targets[key] = number_repr(*e.target);
  }
  json j;
  j["schema_version"] = 1;
  j["subcommand"] = r.subcommand;
  j["parameters"] = r.parameters;
  j["results"] = std::move(results);
  j["paper_targets"] = std::move(targets);
  j["pass"] = r.pass();
  j["artifacts"] = r.artifacts;
  return j;
}

// Flat view: one row per parameter and per result; artifacts live only in
// the JSON rendering.
void render_csv(const Report& r, std::ostream& out) {
  out << "kind,key,value,tolerance,stderr,target\n";
  out << "meta,schema_version,1,,,\n";
  out << "meta,subcommand," << r.subcommand << ",,,\n";
  out << "meta,pass," << (r.pass() ? "true" : "false") << ",,,\n";
  for (const auto& [key, value] : r.parameters.items()) {
    out << "parameter," << key << ","
        << (value.is_string() ? value.get<std::string>() : value.dump())
        << ",,,\n";
  }
  for (const auto& [key, e] : r.results) {
    out << "result," << key << "," << csv_number(e.value) << ","
        << (e.tolerance ? csv_number(*e.tolerance) : "") << ","
        << (e.std_error ? csv_number(*e.std_error) : "") << ","
        << (e.target ? csv_number(*e.target) : "none") << "\n";
  }
}

json matrix_json(const Eigen::Matrix4d& m) {
  json rows = json::array();
  for (int r = 0; r < 4; ++r) {
    json row = json::array();
    for (int c = 0; c < 4; ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

PureState state_from_angles(const std::vector<double>& angles) {
  return PureState::from_bloch_angles(angles[0], angles[1], "phi");
}

channels::KrausChannel channel_by_name(const std::string& name) {
  if (name == "identity") return channels::identity_channel();
  if (name == "transpose") return channels::transpose_channel();
  if (name == "unot") return channels::unot_channel();
  if (name == "depolarizing") return channels::depolarizing_channel();
  throw std::invalid_argument("unknown channel kind: " + name);
}

Eigen::Matrix4d reference_ptm(const std::string& name) {
  Eigen::Vector4d d;
  if (name == "identity") d << 1, 1, 1, 1;
  else if (name == "transpose") d << 1, 1.0 / 3.0, -1.0 / 3.0, 1.0 / 3.0;
  else if (name == "unot") d << 1, -1.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0;
  else if (name == "depolarizing") d << 1, 0, 0, 0;
  else throw std::invalid_argument("unknown channel kind: " + name);
  return d.asDiagonal();
}

// ------------------------------ subcommand handlers ------------------------------

Report run_clone(const std::vector<double>& angles, double tol) {
  Report r;
  r.subcommand = "clone";
  r.parameters["phi"] = angles;
  const auto o = proto::run_cloning_teleunot(state_from_angles(angles));
  r.add("success_probability", {o.success_probability, tol, {}, 3.0 / 4.0});
  r.add("clone_fidelity", {o.fidelities.at("clone"), tol, {}, 5.0 / 6.0});
  r.add("unot_fidelity", {o.fidelities.at("unot"), tol, {}, 2.0 / 3.0});
  return r;
}

Report run_teleunot(const std::vector<double>& angles, double tol) {
  Report r;
  r.subcommand = "tele-unot";
  r.parameters["phi"] = angles;
  const PureState phi = state_from_angles(angles);
  const auto o = proto::run_cloning_teleunot(phi);
  const DensityMatrix best_flip = channels::apply(
      channels::unot_channel(), DensityMatrix::from_pure(phi.relabeled({"B"})));
  r.add("success_probability", {o.success_probability, tol, {}, 3.0 / 4.0});
  r.add("unot_fidelity", {o.fidelities.at("unot"), tol, {}, 2.0 / 3.0});
  r.add("remote_vs_optimal_flip",
        {tomo::state_fidelity(o.reduced.at("B").matrix(), best_flip.matrix()),
         tol,
         {},
         1.0});
  return r;
}

Report run_purify(const std::vector<double>& angles, double lambda_s,
                  double lambda_a, double tol) {
  Report r;
  r.subcommand = "purify";
  r.parameters["phi"] = angles;
  r.parameters["lambda_s"] = lambda_s;
  r.parameters["lambda_a"] = lambda_a;
  proto::PurificationInput in;
  in.lambda_s = lambda_s;
  in.lambda_a = lambda_a;
  in.phi = state_from_angles(angles);
  const auto o = proto::run_purification(in);
  const double p = (3.0 + lambda_a * lambda_s) / 4.0;
  const double lambda_out = (lambda_a + lambda_s) / 2.0 / p;
  r.add("success_probability", {o.success_probability, tol, {}, p});
  r.add("f_in", {o.fidelities.at("f_in"), tol, {},
                 (2.0 + lambda_s + lambda_a) / 4.0});
  r.add("f_out",
        {o.fidelities.at("f_out"), tol, {}, (1.0 + lambda_out) / 2.0});
  r.add("lambda_out", {o.fidelities.at("lambda_out"), tol, {}, lambda_out});
  return r;
}

Report run_program_teleport(const std::vector<double>& angles,
                            const std::string& program, double tol) {
  Report r;
  r.subcommand = "program-teleport";
  r.parameters["phi"] = angles;
  r.parameters["program"] = program;
  const Matrix u = program == "triplet"
                       ? pauli(2)
                       : static_cast<Matrix>(identity_matrix(2));
  const auto o = proto::programmable_teleport(state_from_angles(angles), u);
  r.add("success_probability", {o.success_probability, tol, {}, 3.0 / 4.0});
  r.add("clone_fidelity", {o.fidelities.at("clone"), tol, {}, 5.0 / 6.0});
  r.add("anti_unitary_fidelity",
        {o.fidelities.at("anti_unitary"), tol, {}, 2.0 / 3.0});
  return r;
}

Report run_nm(const std::vector<double>& angles, int n, int m,
              const std::string& program, std::optional<double> tol_override) {
  Report r;
  r.subcommand = "nm";
  r.parameters["phi"] = angles;
  r.parameters["n"] = n;
  r.parameters["m"] = m;
  r.parameters["program"] = program;
  angmom::CloningSpec spec;
  spec.n = n;
  spec.m = m;
  spec.phi = state_from_angles(angles);
  spec.program = program == "triplet" ? angmom::ProgramState::Triplet
                                      : angmom::ProgramState::Singlet;
  const auto o = angmom::run_nm_protocol(spec);
  const auto cf = angmom::closed_form_fidelities(n, m);

  const double sim_tol = tol_override.value_or(1e-10);
  const double coeff_tol = tol_override.value_or(kExactTol);
  r.add("success_probability",
        {o.success_probability, sim_tol, {}, cf.success_probability});
  r.add("clone_fidelity", {o.clone_fidelity, sim_tol, {}, cf.clone_fidelity});
  if (m > n) {
    r.add("anticlone_fidelity",
          {o.anticlone_fidelity, sim_tol, {}, cf.anticlone_fidelity});
  }
  double b_dev = 0.0;
  for (int k = 0; k <= m - n; ++k) {
    b_dev = std::max(b_dev,
                     std::abs(o.b[static_cast<std::size_t>(k)] -
                              angmom::bk_coefficient(n, m, k)));
  }
  r.add("coefficient_max_deviation", {b_dev, coeff_tol, {}, 0.0});
  r.artifacts["b"] = o.b;
  return r;
}

Report run_channel(const std::vector<double>& angles, const std::string& kind,
                   long shots, std::uint64_t seed,
                   std::optional<double> tol_override) {
  Report r;
  r.subcommand = "channel";
  r.parameters["kind"] = kind;
  const auto ch = channel_by_name(kind);
  const auto ptm = channels::kraus_to_ptm(ch);
  const Eigen::Matrix4d ref = reference_ptm(kind);
  const double dev = (ptm.matrix() - ref).cwiseAbs().maxCoeff();
  r.add("ptm_max_deviation", {dev, tol_override.value_or(kExactTol), {}, 0.0});
  r.artifacts["channel"] = channels::to_json(ch);
  r.artifacts["ptm"] = matrix_json(ptm.matrix());
  r.artifacts["trace_preserving"] = ptm.trace_preserving();
  if (shots > 0) {
    r.parameters["phi"] = angles;
    r.parameters["shots"] = shots;
    r.parameters["seed"] = seed;
    const DensityMatrix probe =
        DensityMatrix::from_pure(state_from_angles(angles));
    const DensityMatrix exact = channels::apply(ch, probe);
    const DensityMatrix sampled =
        channels::sample_stochastic(ch, probe, shots, seed);
    r.add("sampled_trace_distance",
          {trace_distance(sampled, exact),
           tol_override.value_or(5.0 / std::sqrt(static_cast<double>(shots))),
           {},
           0.0});
  }
  return r;
}

Report run_spa(const std::string& state, double w,
               std::optional<double> tol_override) {
  Report r;
  r.subcommand = "spa";
  r.parameters["state"] = state;
  DensityMatrix input = [&] {
    if (state == "singlet") {
      return DensityMatrix::from_pure(bell_state(BellKind::PsiMinus));
    }
    if (state == "product00") {
      return DensityMatrix::from_pure(
          PureState::computational_basis({"A", "B"}, 0));
    }
    if (state == "werner") {
      r.parameters["w"] = w;
      return werner_state(w);
    }
    throw std::invalid_argument("unknown input state: " + state);
  }();
  const auto res = channels::spa_map(input);
  std::optional<double> target;
  if (state == "singlet") target = 1.0 / 12.0;
  if (state == "product00") target = 1.0 / 9.0;
  r.add("lambda_min",
        {res.lambda_min, tol_override.value_or(kExactTol), {}, target});
  r.artifacts["syndrome"] = res.syndrome;
  r.artifacts["syndrome_threshold"] = channels::kSpaSyndromeThreshold;
  if (state == "product00") {
    r.artifacts["note"] =
        "separable input sits below the syndrome threshold (1/9 <= 2/9); "
        "the eigenvalue witness is sufficient, not necessary-and-sufficient, "
        "at the default mixture weights";
  }
  return r;
}

Report run_ppt(double w, std::optional<double> tol_override) {
  Report r;
  r.subcommand = "ppt";
  r.parameters["w"] = w;
  const auto rep = channels::ppt_test(werner_state(w));
  r.add("min_eigenvalue",
        {rep.eigenvalues(0), tol_override.value_or(kSpectralTol),
         {},
         (1.0 - 3.0 * w) / 4.0});
  r.artifacts["eigenvalues"] = std::vector<double>(
      rep.eigenvalues.data(), rep.eigenvalues.data() + 4);
  r.artifacts["entangled"] = rep.entangled;
  return r;
}

Report run_eaqpt(const std::string& kind, long shots, std::uint64_t seed,
                 int fidelity_samples, std::optional<double> tol_override) {
  Report r;
  r.subcommand = "eaqpt";
  r.parameters["channel"] = kind;
  r.parameters["shots"] = shots;
  if (shots > 0) r.parameters["seed"] = seed;
  const auto ch = channel_by_name(kind);
  const auto run = tomo::run_eaqpt(ch, static_cast<int>(shots), seed);
  const Eigen::Matrix4d ref = channels::kraus_to_ptm(ch).matrix();
  const double tol = tol_override.value_or(
      shots == 0 ? kSpectralTol : 5.0 / std::sqrt(static_cast<double>(shots)));
  r.add("ptm_max_entry_error",
        {(run.ptm - ref).cwiseAbs().maxCoeff(), tol, {}, 0.0});
  r.add("condition_number", {run.condition_number, {}, {}, {}});
  if (fidelity_samples > 0) {
    r.parameters["fidelity_samples"] = fidelity_samples;
    const auto fe =
        tomo::map_fidelity(channels::identity_channel(), run.ptm,
                           fidelity_samples, seed + 1);
    std::optional<double> target;
    if (kind == "transpose") target = 5.0 / 9.0;
    r.add("map_fidelity_vs_identity",
          {fe.mean, tol_override.value_or(5.0 * fe.std_error), fe.std_error,
           target});
  }
  r.artifacts["ptm_reconstructed"] = matrix_json(run.ptm);
  r.artifacts["ptm_reference"] = matrix_json(ref);
  return r;
}

struct HomArgs {
  std::vector<double> angles{0.0, 0.0};
  std::optional<double> v;
  double delay_z = 0.0;
  double sigma_z = 1.0;
  double xi = 1.0;
  long shots = 10000;
  std::uint64_t seed = 0;
  std::vector<double> scan;  // min, max, count when present
};

Report run_hom(const HomArgs& a, std::optional<double> tol_override,
               std::string* raw_csv) {
  Report r;
  r.subcommand = "hom";
  r.parameters["phi"] = a.angles;
  r.parameters["sigma_z"] = a.sigma_z;
  r.parameters["xi"] = a.xi;
  r.parameters["shots"] = a.shots;
  r.parameters["seed"] = a.seed;

  optics::HomConfig cfg;
  cfg.phi = state_from_angles(a.angles);
  cfg.sigma_z = a.sigma_z;
  cfg.shots = a.shots;
  cfg.seed = a.seed;
  cfg.xi = a.xi;
  if (a.v) {
    const double v = *a.v;
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("hom: --v must lie in [0, 1]");
    }
    // Invert the Gaussian overlap; 40 sigma underflows to exactly zero.
    cfg.delay_z = v == 0.0 ? 40.0 * a.sigma_z
                           : a.sigma_z * std::sqrt(std::abs(std::log(v)));
    r.parameters["v"] = v;
  } else {
    cfg.delay_z = a.delay_z;
  }
  r.parameters["delay_z"] = cfg.delay_z;

  if (!a.scan.empty()) {
    const double lo = a.scan[0], hi = a.scan[1];
    const int count = static_cast<int>(a.scan[2]);
    if (count < 1) throw std::invalid_argument("hom: scan count must be >= 1");
    std::vector<double> delays(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      delays[static_cast<std::size_t>(i)] =
          count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    }
    const auto scan = optics::dip_scan(cfg, delays);
    if (raw_csv) *raw_csv = optics::scan_to_csv(scan);
    r.parameters["scan"] = a.scan;
    r.artifacts["scan"] = optics::scan_to_json(scan);
    return r;
  }

  const auto rec = optics::estimate_R(cfg);
  const double v_eff = optics::overlap(cfg.delay_z, cfg.sigma_z);
  const double r_target = 1.0 + v_eff;
  const double r_hat = rec.orthogonal_starved
                           ? std::numeric_limits<double>::infinity()
                           : optics::xi_correct(rec.r_hat, a.xi);
  const double r_err = rec.orthogonal_starved
                           ? std::numeric_limits<double>::infinity()
                           : rec.r_err / a.xi;
  const auto stat_tol = [&](double scale) {
    if (tol_override) return *tol_override;
    return std::isfinite(scale) ? 5.0 * scale : 0.0;  // starved data fails
  };
  r.add("r_hat", {r_hat, stat_tol(r_err), r_err, r_target});
  const double fc = optics::fidelity_from_R(r_hat, optics::FidelityMode::Clone);
  const double fc_err = 2.0 * r_err / ((2.0 * r_hat + 2.0) * (2.0 * r_hat + 2.0));
  r.add("f_clone", {fc, stat_tol(fc_err), fc_err,
                    (2.0 * r_target + 1.0) / (2.0 * r_target + 2.0)});
  const double fu = optics::fidelity_from_R(r_hat, optics::FidelityMode::Unot);
  const double fu_err = r_err / ((r_hat + 1.0) * (r_hat + 1.0));
  r.add("f_unot",
        {fu, stat_tol(fu_err), fu_err, r_target / (r_target + 1.0)});
  r.artifacts["n_parallel"] = rec.n_parallel;
  r.artifacts["n_orthogonal"] = rec.n_orthogonal;
  r.artifacts["orthogonal_starved"] = rec.orthogonal_starved;
  return r;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"universal quantum machine toolbox", "uqm"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string format = "json";
  double tolerance_flag = 0.0;
  app.add_option("--seed", seed, "base RNG seed for sampled subcommands")
      ->capture_default_str();
  app.add_option("--format", format, "report rendering")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  auto* tol_opt = app.add_option(
      "--tolerance", tolerance_flag,
      "override every pass tolerance with this half-width");

  const auto tol_override = [&]() -> std::optional<double> {
    if (tol_opt->count() == 0) return std::nullopt;
    if (!(tolerance_flag > 0.0)) {
      throw std::invalid_argument("--tolerance must be positive");
    }
    return tolerance_flag;
  };

  std::optional<Report> report;
  std::string raw_csv;

  const auto add_phi = [](CLI::App* sub, std::vector<double>& angles) {
    sub->add_option("--phi", angles,
                    "input qubit as Bloch angles theta,phi (radians)")
        ->delimiter(',')
        ->expected(2);
  };

  // clone
  std::vector<double> clone_phi{0.0, 0.0};
  auto* clone = app.add_subcommand(
      "clone", "symmetrize one qubit with half a shared singlet");
  clone->fallthrough();
  add_phi(clone, clone_phi);
  clone->callback([&] {
    report = run_clone(clone_phi, tol_override().value_or(kExactTol));
  });

  // tele-unot
  std::vector<double> tu_phi{0.0, 0.0};
  auto* tu = app.add_subcommand(
      "tele-unot", "teleport the optimal spin flip to the remote pair half");
  tu->fallthrough();
  add_phi(tu, tu_phi);
  tu->callback([&] {
    report = run_teleunot(tu_phi, tol_override().value_or(kExactTol));
  });

  // purify
  std::vector<double> pu_phi{0.0, 0.0};
  double lambda_s = 1.0, lambda_a = 0.0;
  auto* pu = app.add_subcommand(
      "purify", "project two depolarized copies onto the symmetric subspace");
  pu->fallthrough();
  add_phi(pu, pu_phi);
  pu->add_option("--lambda-s", lambda_s, "Bloch length of the data copy")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  pu->add_option("--lambda-a", lambda_a, "Bloch length of the ancilla copy")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  pu->callback([&] {
    report = run_purify(pu_phi, lambda_s, lambda_a,
                        tol_override().value_or(kExactTol));
  });

  // program-teleport
  std::vector<double> pt_phi{0.0, 0.0};
  std::string pt_program = "singlet";
  auto* pt = app.add_subcommand(
      "program-teleport",
      "run the machine with a programmable two-qubit resource state");
  pt->fallthrough();
  add_phi(pt, pt_phi);
  pt->add_option("--program", pt_program, "resource pair family")
      ->check(CLI::IsMember({"singlet", "triplet"}))
      ->capture_default_str();
  pt->callback([&] {
    report = run_program_teleport(pt_phi, pt_program,
                                  tol_override().value_or(kExactTol));
  });

  // nm
  std::vector<double> nm_phi{0.0, 0.0};
  int nm_n = 1, nm_m = 2;
  std::string nm_program = "singlet";
  auto* nm = app.add_subcommand(
      "nm", "n-to-m symmetrization: simulation against closed forms");
  nm->fallthrough();
  add_phi(nm, nm_phi);
  nm->add_option("--n", nm_n, "input copies")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  nm->add_option("--m", nm_m, "output copies")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  nm->add_option("--program", nm_program, "resource pair family")
      ->check(CLI::IsMember({"singlet", "triplet"}))
      ->capture_default_str();
  nm->callback([&] {
    report = run_nm(nm_phi, nm_n, nm_m, nm_program, tol_override());
  });

  // channel
  std::vector<double> ch_phi{0.0, 0.0};
  std::string ch_kind = "transpose";
  long ch_shots = 0;
  auto* ch = app.add_subcommand(
      "channel", "transfer-matrix audit of a built-in qubit channel");
  ch->fallthrough();
  add_phi(ch, ch_phi);
  ch->add_option("--kind", ch_kind, "channel to audit")
      ->check(CLI::IsMember({"identity", "transpose", "unot", "depolarizing"}))
      ->capture_default_str();
  ch->add_option("--shots", ch_shots,
                 "when > 0, also sample the channel stochastically")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  ch->callback([&] {
    report = run_channel(ch_phi, ch_kind, ch_shots, seed, tol_override());
  });

  // spa
  std::string spa_state = "singlet";
  double spa_w = 1.0;
  auto* spa = app.add_subcommand(
      "spa", "physical-approximation entanglement witness on a named state");
  spa->fallthrough();
  spa->add_option("--state", spa_state, "input two-qubit state")
      ->check(CLI::IsMember({"singlet", "product00", "werner"}))
      ->capture_default_str();
  spa->add_option("--w", spa_w, "Werner weight when --state werner")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  spa->callback(
      [&] { report = run_spa(spa_state, spa_w, tol_override()); });

  // ppt
  double ppt_w = 1.0;
  auto* ppt = app.add_subcommand(
      "ppt", "partial-transpose spectrum of a Werner state");
  ppt->fallthrough();
  ppt->add_option("--w", ppt_w, "Werner weight")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  ppt->callback([&] { report = run_ppt(ppt_w, tol_override()); });

  // eaqpt
  std::string eq_kind = "transpose";
  long eq_shots = 0;
  int eq_fid_samples = 0;
  auto* eq = app.add_subcommand(
      "eaqpt", "reconstruct a channel from one half of an entangled probe");
  eq->fallthrough();
  eq->add_option("--channel", eq_kind, "channel applied to the probe half")
      ->check(CLI::IsMember({"identity", "transpose", "unot", "depolarizing"}))
      ->capture_default_str();
  eq->add_option("--shots", eq_shots, "shots per correlation setting; 0 = exact")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  eq->add_option("--fidelity-samples", eq_fid_samples,
                 "when > 0, Monte Carlo fidelity of the reconstruction "
                 "against the identity map")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  eq->callback([&] {
    report = run_eaqpt(eq_kind, eq_shots, seed, eq_fid_samples, tol_override());
  });

  // hom
  HomArgs hom;
  double hom_v = 1.0;
  auto* hm = app.add_subcommand(
      "hom", "two-photon coincidence estimate of the bunching ratio R");
  hm->fallthrough();
  add_phi(hm, hom.angles);
  auto* v_opt = hm->add_option("--v", hom_v, "interference visibility in [0,1]");
  auto* delay_opt =
      hm->add_option("--delay-z", hom.delay_z, "wave-packet delay")
          ->capture_default_str();
  v_opt->excludes(delay_opt);
  hm->add_option("--sigma-z", hom.sigma_z, "dip width")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  hm->add_option("--xi", hom.xi, "signal-to-noise degradation factor")
      ->capture_default_str();
  hm->add_option("--shots", hom.shots, "coincidence events per point")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  hm->add_option("--scan", hom.scan,
                 "delay scan as min,max,count; emits the dip table instead "
                 "of a single estimate")
      ->delimiter(',')
      ->expected(3);
  hm->callback([&] {
    if (v_opt->count() > 0) hom.v = hom_v;
    hom.seed = seed;
    report = run_hom(hom, tol_override(), &raw_csv);
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  if (!report) {
    err << "error: no subcommand selected\n";
    return 2;
  }
  if (format == "csv") {
    if (!raw_csv.empty()) {
      out << raw_csv;  // dip-scan table, already CSV
    } else {
      render_csv(*report, out);
    }
  } else {
    out << report_json(*report).dump(2) << "\n";
  }
  return report->pass() ? 0 : 1;
}

}  // namespace uqm::cli
