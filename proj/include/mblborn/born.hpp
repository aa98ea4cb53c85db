#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mblborn/dynamics.hpp"

namespace mblborn {

/// Visible/hidden split of the chain. Site lists are 1-indexed and ordered;
/// the first listed visible site becomes the most significant bit of the
/// visible outcome index.
struct Partition {
  std::vector<int> visible_sites;
  std::vector<int> hidden_sites;

  int n_visible() const { return static_cast<int>(visible_sites.size()); }
  int n_hidden() const { return static_cast<int>(hidden_sites.size()); }
  int n_sites() const { return n_visible() + n_hidden(); }

  /// Hidden units on the last n_hidden sites of the chain.
  static Partition contiguous(int n_visible, int n_hidden);
};

using DensityMatrix = Eigen::MatrixXcd;

/// Probability vector over the 2^{L_v} visible z-basis outcomes.
using VisibleDistribution = Eigen::VectorXd;

void validate_partition(const Partition& part);

/// rho_vis = Tr_hidden |psi><psi|.
DensityMatrix partial_trace_hidden(const PureState& psi, const Partition& part);

/// Diagonal of a density matrix; clamps float-noise negatives in
/// [-1e-10, 0) to zero and renormalizes. Larger violations, or a trace off
/// by more than 1e-6, are errors rather than silent repairs.
VisibleDistribution visible_distribution(const DensityMatrix& rho);

/// p(z) = |psi(z)|^2, the all-visible case.
VisibleDistribution born_distribution(const PureState& psi);

/// Fused diagonal of the reduced density matrix: p(z) = sum_h |psi(z,h)|^2.
/// Identical to visible_distribution(partial_trace_hidden(...)) without
/// forming the off-diagonal entries; reduces to born_distribution when the
/// partition has no hidden sites.
VisibleDistribution visible_marginal(const PureState& psi, const Partition& part);

/// Lifts a probability pattern to a pure state with non-negative real
/// visible amplitudes sqrt(xi), tensored with `hidden_init` on the hidden
/// sites. Tracing back out and reading the diagonal returns xi.
PureState embed_pattern(const VisibleDistribution& xi, const PureState& hidden_init,
                        const Partition& part);

}  // namespace mblborn
