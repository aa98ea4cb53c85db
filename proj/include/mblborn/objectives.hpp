#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mblborn/born.hpp"

namespace mblborn {

/// Gaussian-mixture kernel: k(x,y) = (1/c) sum_i exp(-|x-y|^2 / (2 sigma_i^2)).
/// `bandwidths` are the squared widths sigma_i^2. The outcome metric is the
/// absolute difference of integer basis indices by default; `hamming`
/// measures bit flips between outcome labels instead.
struct KernelSpec {
  enum class Metric { index, hamming };
  std::vector<double> bandwidths{0.1, 0.25, 4.0, 10.0};
  Metric metric = Metric::index;
};

using GramMatrix = Eigen::MatrixXd;

/// Kernel values over all outcome pairs; symmetric with unit diagonal.
GramMatrix gram_matrix(const KernelSpec& kernel, int n_outcomes);

/// (p - q)^T K (p - q).
double mmd_exact(const VisibleDistribution& p, const VisibleDistribution& q,
                 const GramMatrix& K);

/// V-statistic estimate from outcome samples; converges to mmd_exact.
double mmd_sampled(const std::vector<int>& samples_p,
                   const std::vector<int>& samples_q, const KernelSpec& kernel);

/// Squared Bhattacharyya coefficient (sum_i sqrt(p_i q_i))^2.
double classical_fidelity(const VisibleDistribution& p,
                          const VisibleDistribution& q);

}  // namespace mblborn
