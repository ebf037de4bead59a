// channels.hpp — weighted-Kraus qubit channels, Pauli transfer matrices,
// partial transposition / PPT checks, the structural-approximation map and
// seeded stochastic channel sampling.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "uqm/qcore.hpp"

namespace uqm::channels {

// ------------------------------ Kraus channels ------------------------------

struct KrausTerm {
  double weight = 0.0;
  Matrix op;  // 2x2
};

// rho -> sum_i weight_i K_i rho K_i^dagger.  Construction checks weights >= 0
// and trace preservation sum_i w_i K_i^dagger K_i = I within 1e-12.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<KrausTerm> terms);

  const std::vector<KrausTerm>& terms() const { return terms_; }

 private:
  std::vector<KrausTerm> terms_;
};

KrausChannel identity_channel();
// (rho + X rho X + Z rho Z)/3: the optimal transpose approximation.
KrausChannel transpose_channel();
// (X rho X + Y rho Y + Z rho Z)/3: the optimal universal-NOT approximation.
KrausChannel unot_channel();
// (rho + X rho X + Y rho Y + Z rho Z)/4: full depolarization to I/2.
KrausChannel depolarizing_channel();

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho);
// Lifts the single-qubit channel onto one qubit of a wider register.
DensityMatrix apply_on_qubit(const KrausChannel& ch, const DensityMatrix& rho,
                             const std::string& label);

// ------------------------------ Pauli transfer matrices ------------------------------

// m_ij = (1/2) Tr[sigma_i ch(sigma_j)]; first row is (1,0,0,0) for any
// trace-preserving map and the Bloch affine action sits in the lower 3x4
// block (translation in the first column).
class PauliTransferMatrix {
 public:
  explicit PauliTransferMatrix(Eigen::Matrix4d m);

  const Eigen::Matrix4d& matrix() const { return m_; }
  bool trace_preserving(double tol = kAlgebraTol) const;

 private:
  Eigen::Matrix4d m_;
};

PauliTransferMatrix kraus_to_ptm(const KrausChannel& ch);
// Applies a trace-preserving PTM to a single-qubit state.
DensityMatrix ptm_apply(const PauliTransferMatrix& m, const DensityMatrix& rho);
// Unvalidated Bloch-space application; reconstructed transfer matrices can
// leave the Bloch ball by shot noise, so the raw matrix is returned.
Matrix ptm_apply_raw(const Eigen::Matrix4d& m, const Matrix& rho);

// ------------------------------ partial transpose and PPT ------------------------------

enum class Side { A, B };

// Transposes the chosen side of a two-qubit state; the result is Hermitian
// but in general not PSD, so a plain matrix is returned.
Matrix partial_transpose(const DensityMatrix& rho, Side side);

struct PptReport {
  Eigen::Vector4d eigenvalues;  // ascending
  bool entangled = false;       // min eigenvalue < -1e-10
};

PptReport ppt_test(const DensityMatrix& rho);

// ------------------------------ structural approximation ------------------------------

// Output eigenvalue at or below this value flags the input as entangled.
inline constexpr double kSpaSyndromeThreshold = 2.0 / 9.0;

struct SpaResult {
  DensityMatrix output;
  double lambda_min = 0.0;
  bool syndrome = false;  // lambda_min <= 2/9
};

// w_unot_dep (UNOT_A x DEP_B) + w_id_tr (I_A x TR_B) applied to a two-qubit
// state; the default weights are (1/3, 2/3).  The weights are exposed
// because the separable state |00><00| also lands at lambda_min = 1/9 under
// the defaults, below the 2/9 syndrome threshold; see the README.
SpaResult spa_map(const DensityMatrix& rho, double w_unot_dep = 1.0 / 3.0,
                  double w_id_tr = 2.0 / 3.0);

// ------------------------------ stochastic sampling ------------------------------

// Draws one Kraus branch per shot (branch probability proportional to
// weight * Tr[K rho K^dagger]) and averages the normalized branch outputs.
// A repeated seed reproduces the empirical state bit for bit.
DensityMatrix sample_stochastic(const KrausChannel& ch, const DensityMatrix& rho,
                                int shots, std::uint64_t seed);

// ------------------------------ serialization ------------------------------

// {"terms":[{"w":..., "op":[[[re,im],[re,im]],[[re,im],[re,im]]]}]}
nlohmann::json to_json(const KrausChannel& ch);
KrausChannel channel_from_json(const nlohmann::json& j);

// 4x4 row-major array of rows.
nlohmann::json to_json(const PauliTransferMatrix& m);
PauliTransferMatrix ptm_from_json(const nlohmann::json& j);

}  // namespace uqm::channels
