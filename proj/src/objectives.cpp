#include "mblborn/objectives.hpp"

#include <bit>
#include <cmath>

#include "mblborn/errors.hpp"

namespace mblborn {

namespace {

double outcome_distance_sq(int x, int y, KernelSpec::Metric metric) {
  if (metric == KernelSpec::Metric::index) {
    const double d = static_cast<double>(x) - static_cast<double>(y);
    return d * d;
  }
  const auto flips = std::popcount(static_cast<std::uint32_t>(x) ^
                                   static_cast<std::uint32_t>(y));
  return static_cast<double>(flips) * static_cast<double>(flips);
}

double kernel_value(const KernelSpec& kernel, double dist_sq) {
  double acc = 0.0;
  for (double s2 : kernel.bandwidths) acc += std::exp(-dist_sq / (2.0 * s2));
  return acc / static_cast<double>(kernel.bandwidths.size());
}

void validate_kernel(const KernelSpec& kernel) {
  if (kernel.bandwidths.empty())
    throw InvalidSpec("kernel needs at least one bandwidth");
  for (double s2 : kernel.bandwidths)
    if (!(s2 > 0.0)) throw InvalidSpec("kernel bandwidths must be positive");
}

}  // namespace

GramMatrix gram_matrix(const KernelSpec& kernel, int n_outcomes) {
  validate_kernel(kernel);
  if (n_outcomes < 1) throw InvalidSpec("need at least one outcome");
  GramMatrix K(n_outcomes, n_outcomes);
  for (int x = 0; x < n_outcomes; ++x) {
    K(x, x) = 1.0;
    for (int y = x + 1; y < n_outcomes; ++y) {
      const double v = kernel_value(kernel, outcome_distance_sq(x, y, kernel.metric));
      K(x, y) = v;
      K(y, x) = v;
    }
  }
  return K;
}

double mmd_exact(const VisibleDistribution& p, const VisibleDistribution& q,
                 const GramMatrix& K) {
  if (p.size() != q.size() || p.size() != K.rows())
    throw DimensionError("distribution/Gram dimension mismatch");
  const Eigen::VectorXd d = p - q;
  return d.dot(K * d);
}

double mmd_sampled(const std::vector<int>& samples_p,
                   const std::vector<int>& samples_q, const KernelSpec& kernel) {
  validate_kernel(kernel);
  if (samples_p.empty() || samples_q.empty())
    throw InvalidSpec("sample sets must be nonempty");
  const auto m = static_cast<double>(samples_p.size());
  const auto n = static_cast<double>(samples_q.size());
  double kpp = 0.0, kqq = 0.0, kpq = 0.0;
  for (int x : samples_p)
    for (int y : samples_p)
      kpp += kernel_value(kernel, outcome_distance_sq(x, y, kernel.metric));
  for (int x : samples_q)
    for (int y : samples_q)
      kqq += kernel_value(kernel, outcome_distance_sq(x, y, kernel.metric));
  for (int x : samples_p)
    for (int y : samples_q)
      kpq += kernel_value(kernel, outcome_distance_sq(x, y, kernel.metric));
  return kpp / (m * m) + kqq / (n * n) - 2.0 * kpq / (m * n);
}

double classical_fidelity(const VisibleDistribution& p,
                          const VisibleDistribution& q) {
  if (p.size() != q.size()) throw DimensionError("distribution length mismatch");
  double bc = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) bc += std::sqrt(p[i] * q[i]);
  return bc * bc;
}

}  // namespace mblborn
