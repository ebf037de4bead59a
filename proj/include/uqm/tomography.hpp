// tomography.hpp — entanglement-assisted process tomography: feed one half
// of an entangled pair through a channel, read two-qubit Pauli correlation
// matrices, and recover the channel's Pauli transfer matrix from a single
// input state.
#pragma once

#include <cstdint>
#include <variant>

#include "uqm/channels.hpp"
#include "uqm/qcore.hpp"
#include "uqm/random.hpp"

namespace uqm::tomo {

// C_ij = Tr[(sigma_i x sigma_j) rho] for a two-qubit state, i, j = 0..3.
Eigen::Matrix4d correlation_matrix(const DensityMatrix& rho);

// The same matrix estimated from `shots` two-outcome measurements per
// setting: each setting draws Binomial(shots, (1+C_ij)/2).  Perfectly
// correlated settings come out exact; everything else carries shot noise.
Eigen::Matrix4d sampled_correlation_matrix(const DensityMatrix& rho,
                                           int shots, Rng& rng);

struct Reconstruction {
  Eigen::Matrix4d ptm;
  double condition_number = 0.0;
};

// Solves C_out = C_in * M^T for the transfer matrix M.  Throws when the
// input correlation matrix is numerically singular (condition number above
// 1e6), e.g. for a product resource state.
Reconstruction eaqpt_reconstruct(const Eigen::Matrix4d& c_in,
                                 const Eigen::Matrix4d& c_out);

// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 on raw density
// matrices.  Spectra are clamped to the positive cone and renormalized, so
// slightly unphysical reconstructions are usable.
double state_fidelity(const Matrix& rho, const Matrix& sigma);

// A map under comparison: an exact Kraus channel or a (possibly
// reconstructed) Pauli transfer matrix.
using MapRef = std::variant<channels::KrausChannel, Eigen::Matrix4d>;

struct FidelityEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  int samples = 0;
};

// Average output fidelity between two maps over Haar-random pure inputs.
FidelityEstimate map_fidelity(const MapRef& ref, const MapRef& test,
                              int samples, std::uint64_t seed);

struct EaqptRun {
  Eigen::Matrix4d c_in;
  Eigen::Matrix4d c_out;
  Eigen::Matrix4d ptm;
  double condition_number = 0.0;
  int shots = 0;  // 0 means exact expectation values
};

// Full pipeline on the singlet resource: apply the channel to the B half,
// measure both correlation matrices (exactly, or sampled when shots > 0),
// and reconstruct the transfer matrix.
EaqptRun run_eaqpt(const channels::KrausChannel& ch, int shots = 0,
                   std::uint64_t seed = 0);

}  // namespace uqm::tomo
