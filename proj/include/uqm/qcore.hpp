// qcore.hpp — dense state/operator core: labeled pure states, density matrices,
// tensor products, partial traces, Bloch coordinates and Pauli expectations.
#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace uqm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Tolerance for algebraic identities (norms, Hermiticity, trace).
inline constexpr double kAlgebraTol = 1e-12;
// Eigenvalue floor below which a matrix is rejected as non-PSD.
inline constexpr double kPsdFloor = -1e-10;

// ------------------------------ operators ------------------------------

// sigma_0..sigma_3 = I, X, Y, Z.
const Matrix& pauli(int i);
Matrix identity_matrix(Eigen::Index dim);
Matrix kron(const Matrix& a, const Matrix& b);

bool is_hermitian(const Matrix& m, double tol = kAlgebraTol);
bool is_unitary(const Matrix& m, double tol = kAlgebraTol);

// ------------------------------ pure states ------------------------------

// Amplitude vector over an n-qubit register with one label per qubit.
// Qubit order is big-endian: labels.front() is the most significant bit of
// the basis index.  The label order is fixed at construction.
class PureState {
 public:
  PureState(Vector amplitudes, std::vector<std::string> labels);

  static PureState computational_basis(std::vector<std::string> labels,
                                       std::uint64_t index);
  static PureState single_qubit(Complex a0, Complex a1,
                                std::string label = "q0");
  // |phi> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
  static PureState from_bloch_angles(double theta, double phi,
                                     std::string label = "q0");

  int num_qubits() const { return static_cast<int>(labels_.size()); }
  Eigen::Index dim() const { return amps_.size(); }
  const Vector& amplitudes() const { return amps_; }
  const std::vector<std::string>& labels() const { return labels_; }
  // Position of a label in the register; throws std::invalid_argument.
  int position_of(const std::string& label) const;

  Complex inner(const PureState& other) const;  // <this|other>

  // Global phase fixed so the largest-magnitude amplitude is real positive.
  PureState canonicalized() const;
  PureState relabeled(std::vector<std::string> labels) const;
  // Reorders the register to the given label order (a permutation of labels).
  PureState permuted(const std::vector<std::string>& new_order) const;

 private:
  Vector amps_;
  std::vector<std::string> labels_;
};

PureState tensor(const PureState& a, const PureState& b);
// Single-qubit orthogonal partner: (a,b) -> (-conj(b), conj(a)).
PureState perp(const PureState& phi);

// ------------------------------ density matrices ------------------------------

// Hermitian, unit-trace, PSD matrix over a labeled register; validated on
// construction (Hermiticity/trace within 1e-12, eigenvalues >= -1e-10).
class DensityMatrix {
 public:
  DensityMatrix(Matrix m, std::vector<std::string> labels);
  explicit DensityMatrix(Matrix m);  // default labels q0..q{n-1}

  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(int num_qubits);

  int num_qubits() const { return static_cast<int>(labels_.size()); }
  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  const std::vector<std::string>& labels() const { return labels_; }
  int position_of(const std::string& label) const;

  DensityMatrix relabeled(std::vector<std::string> labels) const;

 private:
  Matrix m_;
  std::vector<std::string> labels_;
};

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

// Traces out every qubit not named in keep; kept qubits stay in their
// original register order.
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<std::string>& keep);
// Same reduction computed directly from amplitudes (avoids forming the full
// density matrix for wide registers).
DensityMatrix partial_trace(const PureState& psi,
                            const std::vector<std::string>& keep);

// <target|rho|target>; dimensions must match.
double fidelity_pure(const DensityMatrix& rho, const PureState& target);

// (1/2)||rho - sigma||_1.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

// ------------------------------ Bloch coordinates ------------------------------

struct BlochVector {
  double x = 0.0, y = 0.0, z = 0.0;
  double norm() const;
};

BlochVector to_bloch(const DensityMatrix& rho);  // single qubit only
DensityMatrix from_bloch(const BlochVector& r);  // requires |r| <= 1 + 1e-10

// Tr[rho (sigma_{ops[0]} x ... x sigma_{ops[n-1]})], ops[i] in 0..3 and
// ops.size() == num_qubits; ops follow the register's label order.
double pauli_expectation(const DensityMatrix& rho, const std::vector<int>& ops);

// ------------------------------ standard two-qubit states ------------------------------

enum class BellKind { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

PureState bell_state(BellKind kind, std::string label_a = "A",
                     std::string label_b = "B");
// w |Psi-><Psi-| + (1-w) I/4, 0 <= w <= 1.
DensityMatrix werner_state(double w);

}  // namespace uqm
