#include "uqm/channels.hpp"

#include <cmath>
#include <stdexcept>

#include "uqm/random.hpp"

namespace uqm::channels {

namespace {

// Raw Kraus action on an arbitrary 2x2 matrix (no state validation).
Matrix apply_raw(const KrausChannel& ch, const Matrix& m) {
  Matrix out = Matrix::Zero(2, 2);
  for (const auto& t : ch.terms()) {
    out += t.weight * t.op * m * t.op.adjoint();
  }
  return out;
}

KrausChannel pauli_mixture(std::initializer_list<int> indices, double weight) {
  std::vector<KrausTerm> terms;
  for (int i : indices) terms.push_back({weight, pauli(i)});
  return KrausChannel(std::move(terms));
}

}  // namespace

// ------------------------------ Kraus channels ------------------------------

KrausChannel::KrausChannel(std::vector<KrausTerm> terms)
    : terms_(std::move(terms)) {
  if (terms_.empty()) {
    throw std::invalid_argument("KrausChannel: no terms");
  }
  Matrix total = Matrix::Zero(2, 2);
  for (const auto& t : terms_) {
    if (t.weight < 0.0) {
      throw std::invalid_argument("KrausChannel: negative weight");
    }
    if (t.op.rows() != 2 || t.op.cols() != 2) {
      throw std::invalid_argument("KrausChannel: operators must be 2x2");
    }
    total += t.weight * t.op.adjoint() * t.op;
  }
  if ((total - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() > kAlgebraTol) {
    throw std::invalid_argument("KrausChannel: map is not trace preserving");
  }
}

KrausChannel identity_channel() { return pauli_mixture({0}, 1.0); }

KrausChannel transpose_channel() { return pauli_mixture({0, 1, 3}, 1.0 / 3.0); }

KrausChannel unot_channel() { return pauli_mixture({1, 2, 3}, 1.0 / 3.0); }

KrausChannel depolarizing_channel() {
  return pauli_mixture({0, 1, 2, 3}, 1.0 / 4.0);
}

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho) {
  if (rho.num_qubits() != 1) {
    throw std::invalid_argument("apply: single-qubit states only");
  }
  return DensityMatrix(apply_raw(ch, rho.matrix()), rho.labels());
}

DensityMatrix apply_on_qubit(const KrausChannel& ch, const DensityMatrix& rho,
                             const std::string& label) {
  const int n = rho.num_qubits();
  const int p = rho.position_of(label);
  const Eigen::Index pre = Eigen::Index{1} << p;
  const Eigen::Index post = Eigen::Index{1} << (n - 1 - p);
  Matrix out = Matrix::Zero(rho.dim(), rho.dim());
  for (const auto& t : ch.terms()) {
    const Matrix lifted =
        kron(kron(identity_matrix(pre), t.op), identity_matrix(post));
    out += t.weight * lifted * rho.matrix() * lifted.adjoint();
  }
  return DensityMatrix(std::move(out), rho.labels());
}

// ------------------------------ Pauli transfer matrices ------------------------------

PauliTransferMatrix::PauliTransferMatrix(Eigen::Matrix4d m) : m_(std::move(m)) {}

bool PauliTransferMatrix::trace_preserving(double tol) const {
  return std::abs(m_(0, 0) - 1.0) <= tol && std::abs(m_(0, 1)) <= tol &&
         std::abs(m_(0, 2)) <= tol && std::abs(m_(0, 3)) <= tol;
}

PauliTransferMatrix kraus_to_ptm(const KrausChannel& ch) {
  Eigen::Matrix4d m;
  for (int j = 0; j < 4; ++j) {
    const Matrix mapped = apply_raw(ch, pauli(j));
    for (int i = 0; i < 4; ++i) {
      m(i, j) = 0.5 * (pauli(i) * mapped).trace().real();
    }
  }
  return PauliTransferMatrix(m);
}

Matrix ptm_apply_raw(const Eigen::Matrix4d& m, const Matrix& rho) {
  Eigen::Vector4d t;
  for (int i = 0; i < 4; ++i) t(i) = (rho * pauli(i)).trace().real();
  const Eigen::Vector4d u = m * t;
  Matrix out = Matrix::Zero(2, 2);
  for (int i = 0; i < 4; ++i) out += 0.5 * u(i) * pauli(i);
  return out;
}

DensityMatrix ptm_apply(const PauliTransferMatrix& m, const DensityMatrix& rho) {
  if (rho.num_qubits() != 1) {
    throw std::invalid_argument("ptm_apply: single-qubit states only");
  }
  if (!m.trace_preserving()) {
    throw std::invalid_argument("ptm_apply: transfer matrix is not trace preserving");
  }
  return DensityMatrix(ptm_apply_raw(m.matrix(), rho.matrix()), rho.labels());
}

// ------------------------------ partial transpose and PPT ------------------------------

Matrix partial_transpose(const DensityMatrix& rho, Side side) {
  if (rho.num_qubits() != 2) {
    throw std::invalid_argument("partial_transpose: two-qubit states only");
  }
  Matrix out(4, 4);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int ap = 0; ap < 2; ++ap) {
        for (int bp = 0; bp < 2; ++bp) {
          const int r = 2 * a + b, c = 2 * ap + bp;
          const int rs = side == Side::A ? 2 * ap + b : 2 * a + bp;
          const int cs = side == Side::A ? 2 * a + bp : 2 * ap + b;
          out(r, c) = rho.matrix()(rs, cs);
        }
      }
    }
  }
  return out;
}

PptReport ppt_test(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(partial_transpose(rho, Side::B),
                                           Eigen::EigenvaluesOnly);
  PptReport report;
  report.eigenvalues = es.eigenvalues().real();
  report.entangled = report.eigenvalues(0) < kPsdFloor;
  return report;
}

// ------------------------------ structural approximation ------------------------------

SpaResult spa_map(const DensityMatrix& rho, double w_unot_dep, double w_id_tr) {
  if (rho.num_qubits() != 2) {
    throw std::invalid_argument("spa_map: two-qubit states only");
  }
  if (w_unot_dep < 0.0 || w_id_tr < 0.0 ||
      std::abs(w_unot_dep + w_id_tr - 1.0) > kAlgebraTol) {
    throw std::invalid_argument("spa_map: weights must be convex");
  }
  const std::string label_a = rho.labels()[0];
  const std::string label_b = rho.labels()[1];
  const DensityMatrix term1 = apply_on_qubit(
      unot_channel(), apply_on_qubit(depolarizing_channel(), rho, label_b),
      label_a);
  const DensityMatrix term2 = apply_on_qubit(transpose_channel(), rho, label_b);
  DensityMatrix out(w_unot_dep * term1.matrix() + w_id_tr * term2.matrix(),
                    rho.labels());
  Eigen::SelfAdjointEigenSolver<Matrix> es(out.matrix(), Eigen::EigenvaluesOnly);
  SpaResult result{std::move(out), es.eigenvalues().minCoeff(), false};
  result.syndrome = result.lambda_min <= kSpaSyndromeThreshold;
  return result;
}

// ------------------------------ stochastic sampling ------------------------------

DensityMatrix sample_stochastic(const KrausChannel& ch, const DensityMatrix& rho,
                                int shots, std::uint64_t seed) {
  if (rho.num_qubits() != 1) {
    throw std::invalid_argument("sample_stochastic: single-qubit states only");
  }
  if (shots < 1) {
    throw std::invalid_argument("sample_stochastic: shots must be positive");
  }
  const std::size_t nb = ch.terms().size();
  std::vector<double> prob(nb);
  std::vector<Matrix> branch(nb);
  double total = 0.0;
  for (std::size_t i = 0; i < nb; ++i) {
    const auto& t = ch.terms()[i];
    const Matrix mapped = t.op * rho.matrix() * t.op.adjoint();
    const double tr = mapped.trace().real();
    prob[i] = t.weight * tr;
    branch[i] = tr > 0.0 ? (mapped / tr).eval() : Matrix::Zero(2, 2).eval();
    total += prob[i];
  }
  if (total <= 0.0) {
    throw std::invalid_argument("sample_stochastic: channel annihilates the state");
  }

  Rng rng(seed);
  Matrix acc = Matrix::Zero(2, 2);
  for (int s = 0; s < shots; ++s) {
    double x = rng.uniform() * total;
    std::size_t pick = nb - 1;
    for (std::size_t i = 0; i < nb; ++i) {
      if (x < prob[i]) {
        pick = i;
        break;
      }
      x -= prob[i];
    }
    acc += branch[pick];
  }
  return DensityMatrix(acc / static_cast<double>(shots), rho.labels());
}

// ------------------------------ serialization ------------------------------

namespace {

nlohmann::json complex_to_json(const Complex& z) {
  return nlohmann::json::array({z.real(), z.imag()});
}

Complex complex_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw std::invalid_argument("channel_from_json: complex entries are [re, im]");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

}  // namespace

nlohmann::json to_json(const KrausChannel& ch) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : ch.terms()) {
    nlohmann::json op = nlohmann::json::array();
    for (int r = 0; r < 2; ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < 2; ++c) row.push_back(complex_to_json(t.op(r, c)));
      op.push_back(std::move(row));
    }
    terms.push_back({{"w", t.weight}, {"op", std::move(op)}});
  }
  return {{"terms", std::move(terms)}};
}

KrausChannel channel_from_json(const nlohmann::json& j) {
  if (!j.contains("terms") || !j["terms"].is_array()) {
    throw std::invalid_argument("channel_from_json: missing terms array");
  }
  std::vector<KrausTerm> terms;
  for (const auto& jt : j["terms"]) {
    KrausTerm t;
    t.weight = jt.at("w").get<double>();
    const auto& op = jt.at("op");
    if (!op.is_array() || op.size() != 2) {
      throw std::invalid_argument("channel_from_json: op must be a 2x2 array");
    }
    t.op = Matrix(2, 2);
    for (int r = 0; r < 2; ++r) {
      if (!op[r].is_array() || op[r].size() != 2) {
        throw std::invalid_argument("channel_from_json: op must be a 2x2 array");
      }
      for (int c = 0; c < 2; ++c) t.op(r, c) = complex_from_json(op[r][c]);
    }
    terms.push_back(std::move(t));
  }
  return KrausChannel(std::move(terms));
}

nlohmann::json to_json(const PauliTransferMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < 4; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < 4; ++c) row.push_back(m.matrix()(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

PauliTransferMatrix ptm_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 4) {
    throw std::invalid_argument("ptm_from_json: expected 4 rows");
  }
  Eigen::Matrix4d m;
  for (int r = 0; r < 4; ++r) {
    if (!j[r].is_array() || j[r].size() != 4) {
      throw std::invalid_argument("ptm_from_json: expected 4 columns per row");
    }
    for (int c = 0; c < 4; ++c) m(r, c) = j[r][c].get<double>();
  }
  return PauliTransferMatrix(m);
}

}  // namespace uqm::channels
