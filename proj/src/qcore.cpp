#include "uqm/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

namespace uqm {

namespace {

bool is_power_of_two(Eigen::Index d) { return d > 0 && (d & (d - 1)) == 0; }

int log2_dim(Eigen::Index d, const char* who) {
  if (!is_power_of_two(d)) {
    throw std::invalid_argument(std::string(who) + ": dimension is not a power of two");
  }
  int n = 0;
  while ((Eigen::Index{1} << n) < d) ++n;
  return n;
}

void check_labels(const std::vector<std::string>& labels, Eigen::Index dim,
                  const char* who) {
  if (labels.empty()) {
    throw std::invalid_argument(std::string(who) + ": empty label list");
  }
  if ((Eigen::Index{1} << labels.size()) != dim) {
    throw std::invalid_argument(std::string(who) +
                                ": label count does not match dimension");
  }
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size()) {
    throw std::invalid_argument(std::string(who) + ": duplicate qubit label");
  }
}

std::vector<std::string> default_labels(int n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (int i = 0; i < n; ++i) labels.push_back("q" + std::to_string(i));
  return labels;
}

// Builds a full register index from a sub-register index; positions are the
// register positions (ascending) of the sub-register's qubits, sub's first
// qubit being its most significant bit.
std::uint64_t scatter_bits(std::uint64_t sub, const std::vector<int>& positions,
                           int n) {
  std::uint64_t idx = 0;
  const int k = static_cast<int>(positions.size());
  for (int i = 0; i < k; ++i) {
    const std::uint64_t bit = (sub >> (k - 1 - i)) & 1u;
    idx |= bit << (n - 1 - positions[i]);
  }
  return idx;
}

// Splits a label set into kept and traced register positions.
struct TraceSplit {
  std::vector<int> kept;
  std::vector<int> traced;
  std::vector<std::string> kept_labels;
};

TraceSplit trace_split(const std::vector<std::string>& labels,
                       const std::vector<std::string>& keep, const char* who) {
  if (keep.empty()) {
    throw std::invalid_argument(std::string(who) + ": keep set is empty");
  }
  std::set<std::string> keep_set(keep.begin(), keep.end());
  if (keep_set.size() != keep.size()) {
    throw std::invalid_argument(std::string(who) + ": duplicate label in keep set");
  }
  TraceSplit split;
  for (int p = 0; p < static_cast<int>(labels.size()); ++p) {
    if (keep_set.count(labels[p])) {
      split.kept.push_back(p);
      split.kept_labels.push_back(labels[p]);
      keep_set.erase(labels[p]);
    } else {
      split.traced.push_back(p);
    }
  }
  if (!keep_set.empty()) {
    throw std::invalid_argument(std::string(who) + ": keep label not in register: " +
                                *keep_set.begin());
  }
  return split;
}

}  // namespace

// ------------------------------ operators ------------------------------

const Matrix& pauli(int i) {
  static const Matrix sigma[4] = {
      (Matrix(2, 2) << 1, 0, 0, 1).finished(),
      (Matrix(2, 2) << 0, 1, 1, 0).finished(),
      (Matrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished(),
      (Matrix(2, 2) << 1, 0, 0, -1).finished(),
  };
  if (i < 0 || i > 3) throw std::invalid_argument("pauli: index must be 0..3");
  return sigma[i];
}

Matrix identity_matrix(Eigen::Index dim) {
  if (dim <= 0) throw std::invalid_argument("identity_matrix: dim must be positive");
  return Matrix::Identity(dim, dim);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  Matrix d = m.adjoint() * m - Matrix::Identity(m.rows(), m.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

// ------------------------------ PureState ------------------------------

PureState::PureState(Vector amplitudes, std::vector<std::string> labels)
    : amps_(std::move(amplitudes)), labels_(std::move(labels)) {
  log2_dim(amps_.size(), "PureState");
  check_labels(labels_, amps_.size(), "PureState");
  if (std::abs(amps_.norm() - 1.0) > kAlgebraTol) {
    throw std::invalid_argument("PureState: amplitudes are not normalized");
  }
}

PureState PureState::computational_basis(std::vector<std::string> labels,
                                         std::uint64_t index) {
  const Eigen::Index dim = Eigen::Index{1} << labels.size();
  if (index >= static_cast<std::uint64_t>(dim)) {
    throw std::invalid_argument("computational_basis: index out of range");
  }
  Vector v = Vector::Zero(dim);
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(v), std::move(labels));
}

PureState PureState::single_qubit(Complex a0, Complex a1, std::string label) {
  Vector v(2);
  v << a0, a1;
  return PureState(std::move(v), {std::move(label)});
}

PureState PureState::from_bloch_angles(double theta, double phi,
                                       std::string label) {
  return single_qubit(std::cos(theta / 2.0),
                      std::exp(Complex(0, phi)) * std::sin(theta / 2.0),
                      std::move(label));
}

int PureState::position_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw std::invalid_argument("PureState: unknown label: " + label);
  }
  return static_cast<int>(it - labels_.begin());
}

Complex PureState::inner(const PureState& other) const {
  if (other.dim() != dim()) {
    throw std::invalid_argument("inner: dimension mismatch");
  }
  return amps_.dot(other.amps_);  // Eigen dot conjugates the left operand
}

PureState PureState::canonicalized() const {
  Eigen::Index imax = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < amps_.size(); ++i) {
    const double a = std::abs(amps_(i));
    if (a > best) {
      best = a;
      imax = i;
    }
  }
  Complex phase = std::conj(amps_(imax)) / best;
  return PureState(amps_ * phase, labels_);
}

PureState PureState::relabeled(std::vector<std::string> labels) const {
  return PureState(amps_, std::move(labels));
}

PureState PureState::permuted(const std::vector<std::string>& new_order) const {
  if (new_order.size() != labels_.size()) {
    throw std::invalid_argument("permuted: label count mismatch");
  }
  const int n = num_qubits();
  std::vector<int> old_pos(n);
  for (int i = 0; i < n; ++i) old_pos[i] = position_of(new_order[i]);
  Vector out = Vector::Zero(dim());
  for (std::uint64_t idx = 0; idx < static_cast<std::uint64_t>(dim()); ++idx) {
    std::uint64_t nidx = 0;
    for (int i = 0; i < n; ++i) {
      const std::uint64_t bit = (idx >> (n - 1 - old_pos[i])) & 1u;
      nidx |= bit << (n - 1 - i);
    }
    out(static_cast<Eigen::Index>(nidx)) = amps_(static_cast<Eigen::Index>(idx));
  }
  return PureState(std::move(out), new_order);
}

PureState tensor(const PureState& a, const PureState& b) {
  std::vector<std::string> labels = a.labels();
  for (const auto& l : b.labels()) {
    if (std::find(labels.begin(), labels.end(), l) != labels.end()) {
      throw std::invalid_argument("tensor: duplicate label across factors: " + l);
    }
    labels.push_back(l);
  }
  Vector out(a.dim() * b.dim());
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    out.segment(i * b.dim(), b.dim()) = a.amplitudes()(i) * b.amplitudes();
  }
  return PureState(std::move(out), std::move(labels));
}

PureState perp(const PureState& phi) {
  if (phi.num_qubits() != 1) {
    throw std::invalid_argument("perp: single-qubit states only");
  }
  const Vector& a = phi.amplitudes();
  return PureState::single_qubit(-std::conj(a(1)), std::conj(a(0)),
                                 phi.labels()[0]);
}

// ------------------------------ DensityMatrix ------------------------------

DensityMatrix::DensityMatrix(Matrix m, std::vector<std::string> labels)
    : m_(std::move(m)), labels_(std::move(labels)) {
  if (m_.rows() != m_.cols()) {
    throw std::invalid_argument("DensityMatrix: matrix is not square");
  }
  const int n = log2_dim(m_.rows(), "DensityMatrix");
  if (labels_.empty()) labels_ = default_labels(n);
  check_labels(labels_, m_.rows(), "DensityMatrix");
  if (!is_hermitian(m_)) {
    throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
  }
  if (std::abs(m_.trace().real() - 1.0) > kAlgebraTol ||
      std::abs(m_.trace().imag()) > kAlgebraTol) {
    throw std::invalid_argument("DensityMatrix: trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kPsdFloor) {
    throw std::invalid_argument("DensityMatrix: matrix is not positive semidefinite");
  }
}

DensityMatrix::DensityMatrix(Matrix m)
    : DensityMatrix(std::move(m), std::vector<std::string>{}) {}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  Matrix m = psi.amplitudes() * psi.amplitudes().adjoint();
  return DensityMatrix(std::move(m), psi.labels());
}

DensityMatrix DensityMatrix::maximally_mixed(int num_qubits) {
  if (num_qubits < 1) {
    throw std::invalid_argument("maximally_mixed: need at least one qubit");
  }
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim),
                       default_labels(num_qubits));
}

int DensityMatrix::position_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw std::invalid_argument("DensityMatrix: unknown label: " + label);
  }
  return static_cast<int>(it - labels_.begin());
}

DensityMatrix DensityMatrix::relabeled(std::vector<std::string> labels) const {
  return DensityMatrix(m_, std::move(labels));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<std::string> labels = a.labels();
  for (const auto& l : b.labels()) {
    if (std::find(labels.begin(), labels.end(), l) != labels.end()) {
      throw std::invalid_argument("tensor: duplicate label across factors: " + l);
    }
    labels.push_back(l);
  }
  return DensityMatrix(kron(a.matrix(), b.matrix()), std::move(labels));
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<std::string>& keep) {
  const auto split = trace_split(rho.labels(), keep, "partial_trace");
  const int n = rho.num_qubits();
  const Eigen::Index kd = Eigen::Index{1} << split.kept.size();
  const Eigen::Index td = Eigen::Index{1} << split.traced.size();
  Matrix out = Matrix::Zero(kd, kd);
  for (Eigen::Index r = 0; r < kd; ++r) {
    for (Eigen::Index c = 0; c < kd; ++c) {
      Complex sum = 0.0;
      for (Eigen::Index t = 0; t < td; ++t) {
        const auto ri = scatter_bits(r, split.kept, n) |
                        scatter_bits(t, split.traced, n);
        const auto ci = scatter_bits(c, split.kept, n) |
                        scatter_bits(t, split.traced, n);
        sum += rho.matrix()(static_cast<Eigen::Index>(ri),
                            static_cast<Eigen::Index>(ci));
      }
      out(r, c) = sum;
    }
  }
  return DensityMatrix(std::move(out), split.kept_labels);
}

DensityMatrix partial_trace(const PureState& psi,
                            const std::vector<std::string>& keep) {
  const auto split = trace_split(psi.labels(), keep, "partial_trace");
  const int n = psi.num_qubits();
  const Eigen::Index kd = Eigen::Index{1} << split.kept.size();
  const Eigen::Index td = Eigen::Index{1} << split.traced.size();
  Matrix out = Matrix::Zero(kd, kd);
  const Vector& a = psi.amplitudes();
  for (Eigen::Index r = 0; r < kd; ++r) {
    for (Eigen::Index c = 0; c < kd; ++c) {
      Complex sum = 0.0;
      for (Eigen::Index t = 0; t < td; ++t) {
        const auto ri = scatter_bits(r, split.kept, n) |
                        scatter_bits(t, split.traced, n);
        const auto ci = scatter_bits(c, split.kept, n) |
                        scatter_bits(t, split.traced, n);
        sum += a(static_cast<Eigen::Index>(ri)) *
               std::conj(a(static_cast<Eigen::Index>(ci)));
      }
      out(r, c) = sum;
    }
  }
  return DensityMatrix(std::move(out), split.kept_labels);
}

double fidelity_pure(const DensityMatrix& rho, const PureState& target) {
  if (rho.dim() != target.dim()) {
    throw std::invalid_argument("fidelity_pure: dimension mismatch");
  }
  const Complex f =
      target.amplitudes().adjoint() * rho.matrix() * target.amplitudes();
  return std::max(0.0, f.real());
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw std::invalid_argument("trace_distance: dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix() - sigma.matrix(),
                                           Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// ------------------------------ Bloch coordinates ------------------------------

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

BlochVector to_bloch(const DensityMatrix& rho) {
  if (rho.num_qubits() != 1) {
    throw std::invalid_argument("to_bloch: single-qubit states only");
  }
  BlochVector r;
  r.x = (rho.matrix() * pauli(1)).trace().real();
  r.y = (rho.matrix() * pauli(2)).trace().real();
  r.z = (rho.matrix() * pauli(3)).trace().real();
  return r;
}

DensityMatrix from_bloch(const BlochVector& r) {
  if (r.norm() > 1.0 + 1e-10) {
    throw std::invalid_argument("from_bloch: vector lies outside the Bloch ball");
  }
  Matrix m = 0.5 * (pauli(0) + r.x * pauli(1) + r.y * pauli(2) + r.z * pauli(3));
  // A norm within the 1e-10 ball guard may still put one eigenvalue a hair
  // below zero; the DensityMatrix floor tolerates exactly that band.
  return DensityMatrix(std::move(m), {"q0"});
}

double pauli_expectation(const DensityMatrix& rho, const std::vector<int>& ops) {
  if (static_cast<int>(ops.size()) != rho.num_qubits()) {
    throw std::invalid_argument(
        "pauli_expectation: need one Pauli index per qubit");
  }
  Matrix p = pauli(ops[0]);
  for (std::size_t i = 1; i < ops.size(); ++i) p = kron(p, pauli(ops[i]));
  return (rho.matrix() * p).trace().real();
}

// ------------------------------ standard two-qubit states ------------------------------

PureState bell_state(BellKind kind, std::string label_a, std::string label_b) {
  const double s = 1.0 / std::sqrt(2.0);
  Vector v = Vector::Zero(4);
  switch (kind) {
    case BellKind::PhiPlus:
      v(0) = s;
      v(3) = s;
      break;
    case BellKind::PhiMinus:
      v(0) = s;
      v(3) = -s;
      break;
    case BellKind::PsiPlus:
      v(1) = s;
      v(2) = s;
      break;
    case BellKind::PsiMinus:
      v(1) = s;
      v(2) = -s;
      break;
  }
  return PureState(std::move(v), {std::move(label_a), std::move(label_b)});
}

DensityMatrix werner_state(double w) {
  if (w < 0.0 || w > 1.0) {
    throw std::invalid_argument("werner_state: weight must lie in [0, 1]");
  }
  const PureState psi = bell_state(BellKind::PsiMinus);
  Matrix m = w * (psi.amplitudes() * psi.amplitudes().adjoint()) +
             (1.0 - w) * Matrix::Identity(4, 4) / 4.0;
  return DensityMatrix(std::move(m), psi.labels());
}

}  // namespace uqm
