#pragma once

#include <cstdint>
#include <vector>

#include "mblborn/chain.hpp"
#include "mblborn/dynamics.hpp"

namespace mblborn {

enum class DiagExec { serial, parallel };

struct LevelStatistics {
  std::vector<double> r_values;  ///< pooled over realizations
  double mean_r = 0.0;
};

/// Spin-flip distance to the tracked reference state:
/// D = 1/2 - (1/2L) sum_i <sigma_i^z(t) sigma_i^z(0)>. In [0, 1]; 0 at t = 0.
double hamming_distance(const SpinFlipTracker& tracker);

/// Von Neumann entropy of the reduced state on `cut_sites` (1-indexed),
/// natural log, via singular values of the reshaped amplitude matrix.
double entanglement_entropy(const PureState& psi, const std::vector<int>& cut_sites,
                            int n_sites);

/// First floor(L/2) sites.
std::vector<int> half_chain_cut(int n_sites);

/// Adjacent-gap ratios r = min(d1,d2)/max(d1,d2) of a sorted spectrum.
/// Pairs where both gaps are below 1e-12 are skipped; r = 0 when only one is.
std::vector<double> spacing_ratios(const Eigen::VectorXd& levels);

/// Disorder-averaged gap-ratio statistics of the largest magnetization
/// sector, keeping the middle 50% of each block spectrum.
LevelStatistics level_spacing_ratios(const ChainSpec& spec, double h_d,
                                     int realizations, std::uint64_t seed,
                                     DiagExec exec = DiagExec::parallel);

struct EntropyScalingRow {
  int n_sites = 0;
  double disorder = 0.0;
  double entropy_per_site = 0.0;
  double std_error = 0.0;
};

/// Half-system entropy of mid-spectrum eigenstates (central 10% of the
/// largest sector), disorder-averaged, per (L, h) grid point.
std::vector<EntropyScalingRow> entropy_scaling_sweep(
    const std::vector<int>& sizes, const std::vector<double>& disorders,
    int realizations, std::uint64_t seed, double j_xy = 1.0, double j_zz = 1.0,
    DiagExec exec = DiagExec::parallel);

}  // namespace mblborn
