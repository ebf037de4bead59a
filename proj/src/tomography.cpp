#include "uqm/tomography.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace uqm::tomo {

namespace {

constexpr double kMaxCondition = 1e6;

// Clamped positive spectrum with unit trace; repairs mild reconstruction
// noise and is a no-op for genuine density matrices.
Matrix physical_projection(const Matrix& raw) {
  if (raw.rows() != raw.cols()) {
    throw std::invalid_argument("state_fidelity: matrix is not square");
  }
  const Matrix herm = 0.5 * (raw + raw.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
  Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0);
  const double tr = vals.sum();
  if (tr <= 0.0) {
    throw std::invalid_argument("state_fidelity: no positive spectral weight");
  }
  vals /= tr;
  return es.eigenvectors() * vals.asDiagonal() *
         es.eigenvectors().adjoint();
}

Matrix matrix_sqrt(const Matrix& psd) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(psd);
  const Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix apply_map(const MapRef& map, const Matrix& rho) {
  if (std::holds_alternative<channels::KrausChannel>(map)) {
    const DensityMatrix out = channels::apply(
        std::get<channels::KrausChannel>(map), DensityMatrix(rho));
    return out.matrix();
  }
  return channels::ptm_apply_raw(std::get<Eigen::Matrix4d>(map), rho);
}

}  // namespace

Eigen::Matrix4d correlation_matrix(const DensityMatrix& rho) {
  if (rho.num_qubits() != 2) {
    throw std::invalid_argument("correlation_matrix: need a two-qubit state");
  }
  Eigen::Matrix4d c;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      c(i, j) = pauli_expectation(rho, {i, j});
    }
  }
  return c;
}

Eigen::Matrix4d sampled_correlation_matrix(const DensityMatrix& rho,
                                           int shots, Rng& rng) {
  if (shots < 1) {
    throw std::invalid_argument(
        "sampled_correlation_matrix: shots must be positive");
  }
  const Eigen::Matrix4d exact = correlation_matrix(rho);
  Eigen::Matrix4d sampled;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double p_plus = 0.5 * (1.0 + exact(i, j));
      long plus = 0;
      for (int s = 0; s < shots; ++s) {
        if (rng.bernoulli(p_plus)) ++plus;
      }
      sampled(i, j) = 2.0 * static_cast<double>(plus) / shots - 1.0;
    }
  }
  return sampled;
}

Reconstruction eaqpt_reconstruct(const Eigen::Matrix4d& c_in,
                                 const Eigen::Matrix4d& c_out) {
  const Eigen::JacobiSVD<Eigen::Matrix4d> svd(
      c_in, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double s_min = svd.singularValues()(3);
  const double s_max = svd.singularValues()(0);
  const double cond = s_min > 0.0 ? s_max / s_min
                                  : std::numeric_limits<double>::infinity();
  if (!(cond <= kMaxCondition)) {
    throw std::runtime_error(
        "eaqpt_reconstruct: input correlations are numerically singular");
  }
  const Eigen::Matrix4d m_t = svd.solve(c_out);
  return Reconstruction{m_t.transpose(), cond};
}

double state_fidelity(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw std::invalid_argument("state_fidelity: dimension mismatch");
  }
  const Matrix a = physical_projection(rho);
  const Matrix b = physical_projection(sigma);
  const Matrix root = matrix_sqrt(a);
  Eigen::SelfAdjointEigenSolver<Matrix> es(
      (root * b * root).eval());
  const double sum = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::min(1.0, sum * sum);
}

FidelityEstimate map_fidelity(const MapRef& ref, const MapRef& test,
                              int samples, std::uint64_t seed) {
  if (samples < 2) {
    throw std::invalid_argument("map_fidelity: need at least two samples");
  }
  Rng rng(seed);
  double sum = 0.0, sum_sq = 0.0;
  for (int s = 0; s < samples; ++s) {
    const PureState phi = rng.haar_qubit();
    const Matrix rho = phi.amplitudes() * phi.amplitudes().adjoint();
    const double f = state_fidelity(apply_map(ref, rho), apply_map(test, rho));
    sum += f;
    sum_sq += f * f;
  }
  const double mean = sum / samples;
  const double var =
      std::max(0.0, (sum_sq - samples * mean * mean) / (samples - 1));
  return FidelityEstimate{mean, std::sqrt(var / samples), samples};
}

EaqptRun run_eaqpt(const channels::KrausChannel& ch, int shots,
                   std::uint64_t seed) {
  if (shots < 0) {
    throw std::invalid_argument("run_eaqpt: shots must be non-negative");
  }
  const DensityMatrix rho_in =
      DensityMatrix::from_pure(bell_state(BellKind::PsiMinus, "A", "B"));
  const DensityMatrix rho_out = channels::apply_on_qubit(ch, rho_in, "B");

  Eigen::Matrix4d c_in, c_out;
  if (shots == 0) {
    c_in = correlation_matrix(rho_in);
    c_out = correlation_matrix(rho_out);
  } else {
    Rng rng(seed);
    c_in = sampled_correlation_matrix(rho_in, shots, rng);
    c_out = sampled_correlation_matrix(rho_out, shots, rng);
  }
  const Reconstruction rec = eaqpt_reconstruct(c_in, c_out);
  return EaqptRun{c_in, c_out, rec.ptm, rec.condition_number, shots};
}

}  // namespace uqm::tomo
