#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "mblborn/chain.hpp"

namespace mblborn {

/// Normalized complex amplitude vector over the 2^L z-basis.
using PureState = Eigen::VectorXcd;

/// Spectral factorization H = V diag(lambda) V^T with real orthonormal V and
/// ascending eigenvalues.
struct EigenSystem {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

EigenSystem eigendecompose(const HamiltonianMatrix& H);
EigenSystem eigendecompose(const Eigen::MatrixXd& H);

/// exp(-i H t) applied through a precomputed factorization.
PureState evolve_with(const EigenSystem& es, const PureState& psi, double t);

PureState evolve_spectral(const PureState& psi, const HamiltonianMatrix& H,
                          double t);

/// Lanczos propagator; matches evolve_spectral within `tol` in Euclidean
/// norm or throws ConvergenceError.
PureState evolve_krylov(const PureState& psi, const HamiltonianMatrix& H,
                        double t, double tol);

/// Shared magnetization-sector index for one chain length: which sector each
/// basis state belongs to and its position inside the sector.
struct SectorTable {
  int n_sites = 0;
  std::vector<SectorIndex> sectors;
  std::vector<std::pair<int, std::uint32_t>> locate;  ///< per basis state
  static std::shared_ptr<const SectorTable> build(int n_sites);
};

/// Per-sector spectral factorizations of an S^z-conserving Hamiltonian.
/// Construction never touches the dense 2^L x 2^L matrix.
struct BlockEigenSystem {
  std::shared_ptr<const SectorTable> table;
  std::vector<EigenSystem> blocks;  ///< aligned with table->sectors
};

BlockEigenSystem block_eigendecompose(std::shared_ptr<const SectorTable> table,
                                      const ChainSpec& spec,
                                      const FieldVector& h);

/// Sector-wise exp(-i H t); exact zeros outside occupied sectors stay zero.
PureState evolve_blocked(const BlockEigenSystem& bes, const PureState& psi,
                         double t);

/// One interval of a piecewise-constant transverse drive.
struct DriveInterval {
  FieldVector drive;  ///< per-site x-drive amplitudes d_i
  double duration = 0.0;
};
using DriveSchedule = std::vector<DriveInterval>;

/// sum_i d_i S^x_i (mixes magnetization sectors).
HamiltonianMatrix build_drive_term(const FieldVector& d);

/// Applies exp(-i (base + drive_k) tau_k) interval by interval.
PureState evolve_piecewise(const PureState& psi, const HamiltonianMatrix& base,
                           const DriveSchedule& schedule);

/// Heisenberg-picture z-autocorrelators against a reference state: carries
/// U|psi0> and U sigma_i^z|psi0> through the same unitary sequence so that
/// <psi0| sigma_i^z(t) sigma_i^z(0) |psi0> is available at any point of a
/// quench trajectory.
class SpinFlipTracker {
 public:
  SpinFlipTracker(const PureState& psi0, int n_sites);

  void advance(const BlockEigenSystem& bes, double t);
  void advance(const EigenSystem& es, double t);
  void advance_krylov(const HamiltonianMatrix& H, double t, double tol);
  void advance_piecewise(const HamiltonianMatrix& base,
                         const DriveSchedule& schedule);

  /// Re <psi(t)| sigma_site^z |U sigma_site^z psi0>, site 1-indexed; in [-1, 1].
  double zz_autocorrelator(int site) const;

  const PureState& state() const { return psi_t_; }
  void set_state(const PureState& psi) { psi_t_ = psi; }
  int n_sites() const { return n_sites_; }

 private:
  int n_sites_;
  PureState psi_t_;
  std::vector<PureState> flipped_t_;  ///< one per site
};

}  // namespace mblborn
