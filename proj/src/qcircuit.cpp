#include "uqm/qcircuit.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "uqm/random.hpp"

namespace uqm::circuit {

namespace {

int gate_arity(GateKind kind) {
  switch (kind) {
    case GateKind::H:
    case GateKind::X:
    case GateKind::Y:
    case GateKind::Z:
      return 1;
    case GateKind::CNOT:
      return 2;
    case GateKind::Toffoli:
      return 3;
  }
  throw std::invalid_argument("gate_arity: unknown gate kind");
}

const Matrix& gate_matrix(GateKind kind) {
  static const Matrix h = [] {
    Matrix m(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
  }();
  static const Matrix cnot = [] {
    Matrix m = Matrix::Identity(4, 4);
    m(2, 2) = 0;
    m(3, 3) = 0;
    m(2, 3) = 1;
    m(3, 2) = 1;
    return m;
  }();
  static const Matrix toffoli = [] {
    Matrix m = Matrix::Identity(8, 8);
    m(6, 6) = 0;
    m(7, 7) = 0;
    m(6, 7) = 1;
    m(7, 6) = 1;
    return m;
  }();
  switch (kind) {
    case GateKind::H:
      return h;
    case GateKind::X:
      return pauli(1);
    case GateKind::Y:
      return pauli(2);
    case GateKind::Z:
      return pauli(3);
    case GateKind::CNOT:
      return cnot;
    case GateKind::Toffoli:
      return toffoli;
  }
  throw std::invalid_argument("gate_matrix: unknown gate kind");
}

// Applies a k-qubit gate at the given register positions.
Vector apply_at(const Vector& amps, const Matrix& g,
                const std::vector<int>& pos, int n) {
  const int k = static_cast<int>(pos.size());
  const std::uint64_t dim = std::uint64_t{1} << n;
  const std::uint64_t sub_dim = std::uint64_t{1} << k;
  Vector out = Vector::Zero(static_cast<Eigen::Index>(dim));
  for (std::uint64_t idx = 0; idx < dim; ++idx) {
    std::uint64_t s = 0;
    for (int i = 0; i < k; ++i) {
      s = (s << 1) | ((idx >> (n - 1 - pos[i])) & 1u);
    }
    Complex acc = 0.0;
    for (std::uint64_t sp = 0; sp < sub_dim; ++sp) {
      const Complex coeff = g(static_cast<Eigen::Index>(s),
                              static_cast<Eigen::Index>(sp));
      if (coeff == Complex(0.0, 0.0)) continue;
      std::uint64_t j = idx;
      for (int i = 0; i < k; ++i) {
        const std::uint64_t mask = std::uint64_t{1} << (n - 1 - pos[i]);
        if ((sp >> (k - 1 - i)) & 1u) {
          j |= mask;
        } else {
          j &= ~mask;
        }
      }
      acc += coeff * amps(static_cast<Eigen::Index>(j));
    }
    out(static_cast<Eigen::Index>(idx)) = acc;
  }
  return out;
}

const char* kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::H:
      return "H";
    case GateKind::X:
      return "X";
    case GateKind::Y:
      return "Y";
    case GateKind::Z:
      return "Z";
    case GateKind::CNOT:
      return "CNOT";
    case GateKind::Toffoli:
      return "TOFFOLI";
  }
  return "?";
}

GateKind kind_from_name(const std::string& name) {
  static const std::map<std::string, GateKind> table = {
      {"H", GateKind::H},       {"X", GateKind::X},
      {"Y", GateKind::Y},       {"Z", GateKind::Z},
      {"CNOT", GateKind::CNOT}, {"TOFFOLI", GateKind::Toffoli},
  };
  const auto it = table.find(name);
  if (it == table.end()) {
    throw std::invalid_argument("network_from_json: unknown gate kind: " + name);
  }
  return it->second;
}

// Initial register |phi>_S |1>_A |1>_B |0>_anc.
PureState initial_register(const PureState& phi) {
  PureState reg = tensor(phi.relabeled({"S"}),
                         PureState::computational_basis({"A"}, 1));
  reg = tensor(reg, PureState::computational_basis({"B"}, 1));
  return tensor(reg, PureState::computational_basis({"anc"}, 0));
}

// Pre-measurement state of the cloning network.
PureState pre_measurement_state(const PureState& phi) {
  const Network net = cloning_network();
  return apply_gates(initial_register(phi), net.gates);
}

PureState extract_pure_qubit(const PureState& state, const std::string& label) {
  const DensityMatrix reduced = partial_trace(state, {label});
  Eigen::SelfAdjointEigenSolver<Matrix> es(reduced.matrix());
  if (es.eigenvalues()(1) < 1.0 - 1e-9) {
    throw std::logic_error("extract_pure_qubit: reduction is not pure");
  }
  return PureState(es.eigenvectors().col(1), {label}).canonicalized();
}

}  // namespace

std::vector<Gate> epr_prepare(const std::string& a, const std::string& b) {
  return {{GateKind::H, {a}}, {GateKind::CNOT, {a, b}}};
}

std::vector<Gate> bell_rotation_box1(const std::string& s,
                                     const std::string& a) {
  return {{GateKind::CNOT, {s, a}}, {GateKind::H, {s}}};
}

std::vector<Gate> bell_rotation_box2(const std::string& s,
                                     const std::string& a) {
  return {{GateKind::H, {s}}, {GateKind::CNOT, {s, a}}};
}

Network cloning_network() {
  Network net;
  for (auto& g : epr_prepare()) net.gates.push_back(std::move(g));
  for (auto& g : bell_rotation_box1()) net.gates.push_back(std::move(g));
  net.gates.push_back({GateKind::Toffoli, {"S", "A", "anc"}});
  for (auto& g : bell_rotation_box2()) net.gates.push_back(std::move(g));
  net.measure = {"anc", "Z"};
  return net;
}

PureState apply_gates(PureState psi, const std::vector<Gate>& gates) {
  const int n = psi.num_qubits();
  Vector amps = psi.amplitudes();
  for (const auto& gate : gates) {
    if (static_cast<int>(gate.targets.size()) != gate_arity(gate.kind)) {
      throw std::invalid_argument(std::string("apply_gates: ") +
                                  kind_name(gate.kind) + " expects " +
                                  std::to_string(gate_arity(gate.kind)) +
                                  " targets");
    }
    std::vector<int> pos;
    pos.reserve(gate.targets.size());
    for (const auto& t : gate.targets) pos.push_back(psi.position_of(t));
    for (std::size_t i = 0; i < pos.size(); ++i) {
      for (std::size_t j = i + 1; j < pos.size(); ++j) {
        if (pos[i] == pos[j]) {
          throw std::invalid_argument("apply_gates: repeated gate target");
        }
      }
    }
    amps = apply_at(amps, gate_matrix(gate.kind), pos, n);
  }
  return PureState(std::move(amps), psi.labels());
}

NetworkResult run_network(const PureState& phi) {
  if (phi.num_qubits() != 1) {
    throw std::invalid_argument("run_network: input must be one qubit");
  }
  const PureState pre = pre_measurement_state(phi);
  const Vector& amps = pre.amplitudes();

  // The ancilla is the last label: its bit is the least significant.
  Vector branch0(8), branch1(8);
  for (Eigen::Index base = 0; base < 8; ++base) {
    branch0(base) = amps(2 * base);
    branch1(base) = amps(2 * base + 1);
  }
  const double p1 = branch1.squaredNorm();
  const double p0 = branch0.squaredNorm();

  PureState teleported =
      PureState(branch1 / std::sqrt(p1), {"S", "A", "B"}).canonicalized();
  PureState symmetrized =
      PureState(branch0 / std::sqrt(p0), {"S", "A", "B"}).canonicalized();
  PureState bob = extract_pure_qubit(teleported, "B");
  return NetworkResult{p1, std::move(teleported), std::move(bob), p0,
                       std::move(symmetrized)};
}

std::pair<long, long> sample_network(const PureState& phi, int shots,
                                     std::uint64_t seed) {
  if (shots < 1) {
    throw std::invalid_argument("sample_network: shots must be positive");
  }
  const PureState pre = pre_measurement_state(phi);
  double p1 = 0.0;
  for (Eigen::Index base = 0; base < 8; ++base) {
    p1 += std::norm(pre.amplitudes()(2 * base + 1));
  }
  Rng rng(seed);
  long ones = 0;
  for (int s = 0; s < shots; ++s) {
    if (rng.bernoulli(p1)) ++ones;
  }
  return {shots - ones, ones};
}

IntermediateReport intermediate_state_check(const PureState& phi) {
  if (phi.num_qubits() != 1) {
    throw std::invalid_argument("intermediate_state_check: input must be one qubit");
  }
  Network net = cloning_network();
  // Stop right after the Toffoli: drop the trailing box-2 gates.
  net.gates.resize(net.gates.size() - 2);
  const PureState sim = apply_gates(initial_register(phi), net.gates);

  // Reference branches: SA tag, Bob payload, ancilla bit.
  struct Branch {
    int s, a, anc;
    Vector payload;
  };
  const Vector& f = phi.amplitudes();
  const std::vector<Branch> reference = {
      {1, 1, 1, (-1.0 * f).eval()},
      {0, 1, 0, (-1.0 * (pauli(3) * f)).eval()},
      {1, 0, 0, (pauli(1) * f).eval()},
      {0, 0, 0, (pauli(1) * pauli(3) * f).eval()},
  };

  IntermediateReport report;
  report.ok = true;
  for (const auto& br : reference) {
    BranchCheck check;
    check.sa_bits = std::to_string(br.s) + std::to_string(br.a);
    check.ancilla_one = br.anc == 1;
    double norm2 = 0.0;
    double dev = 0.0;
    for (int b = 0; b < 2; ++b) {
      const Eigen::Index idx = 8 * br.s + 4 * br.a + 2 * b + br.anc;
      const Complex simulated = sim.amplitudes()(idx);
      norm2 += std::norm(simulated);
      dev = std::max(dev, std::abs(simulated - 0.5 * br.payload(b)));
      // The branch with the opposite ancilla value must be empty.
      const Eigen::Index off = 8 * br.s + 4 * br.a + 2 * b + (1 - br.anc);
      dev = std::max(dev, std::abs(sim.amplitudes()(off)));
    }
    check.amplitude_norm = std::sqrt(norm2);
    check.deviation = dev;
    report.max_deviation = std::max(report.max_deviation, dev);
    report.branches.push_back(std::move(check));
  }
  report.ok = report.max_deviation <= kAlgebraTol;
  return report;
}

nlohmann::json to_json(const Network& network) {
  nlohmann::json gates = nlohmann::json::array();
  for (const auto& g : network.gates) {
    gates.push_back({{"kind", kind_name(g.kind)}, {"targets", g.targets}});
  }
  return {{"gates", std::move(gates)},
          {"measure",
           {{"label", network.measure.label}, {"basis", network.measure.basis}}}};
}

Network network_from_json(const nlohmann::json& j) {
  Network net;
  if (!j.contains("gates") || !j["gates"].is_array()) {
    throw std::invalid_argument("network_from_json: missing gates array");
  }
  for (const auto& jg : j["gates"]) {
    Gate g;
    g.kind = kind_from_name(jg.at("kind").get<std::string>());
    g.targets = jg.at("targets").get<std::vector<std::string>>();
    if (static_cast<int>(g.targets.size()) != gate_arity(g.kind)) {
      throw std::invalid_argument("network_from_json: wrong target count for " +
                                  jg.at("kind").get<std::string>());
    }
    net.gates.push_back(std::move(g));
  }
  if (j.contains("measure")) {
    net.measure.label = j["measure"].at("label").get<std::string>();
    net.measure.basis = j["measure"].value("basis", std::string("Z"));
    if (net.measure.basis != "Z") {
      throw std::invalid_argument("network_from_json: only Z measurements are supported");
    }
  }
  return net;
}

}  // namespace uqm::circuit
