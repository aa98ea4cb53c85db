#include "mblborn/diagnostics.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "mblborn/errors.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace mblborn {

double hamming_distance(const SpinFlipTracker& tracker) {
  const int L = tracker.n_sites();
  double acc = 0.0;
  for (int i = 1; i <= L; ++i) acc += tracker.zz_autocorrelator(i);
  return 0.5 - acc / (2.0 * L);
}

std::vector<int> half_chain_cut(int n_sites) {
  std::vector<int> cut;
  for (int i = 1; i <= n_sites / 2; ++i) cut.push_back(i);
  return cut;
}

double entanglement_entropy(const PureState& psi, const std::vector<int>& cut_sites,
                            int n_sites) {
  if (psi.size() != Eigen::Index(1) << n_sites)
    throw DimensionError("state dimension does not match site count");
  if (cut_sites.empty() || static_cast<int>(cut_sites.size()) >= n_sites + 1)
    throw InvalidSpec("cut must be a proper nonempty site subset");
  std::vector<bool> in_cut(n_sites + 1, false);
  for (int s : cut_sites) {
    if (s < 1 || s > n_sites) throw InvalidSpec("cut site out of range");
    if (in_cut[s]) throw InvalidSpec("duplicate cut site");
    in_cut[s] = true;
  }

  std::vector<int> shifts_a, shifts_b;
  for (int s = 1; s <= n_sites; ++s)
    (in_cut[s] ? shifts_a : shifts_b).push_back(n_sites - s);
  if (shifts_b.empty()) return 0.0;  // pure global state

  const Eigen::Index da = Eigen::Index(1) << shifts_a.size();
  const Eigen::Index db = Eigen::Index(1) << shifts_b.size();
  Eigen::MatrixXcd A(da, db);
  for (Eigen::Index z = 0; z < psi.size(); ++z) {
    std::uint32_t a = 0, b = 0;
    for (int sh : shifts_a) a = (a << 1) | ((static_cast<std::uint32_t>(z) >> sh) & 1u);
    for (int sh : shifts_b) b = (b << 1) | ((static_cast<std::uint32_t>(z) >> sh) & 1u);
    A(a, b) = psi[z];
  }
  const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXcd>(A).singularValues();
  double entropy = 0.0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    double lambda = sv[k] * sv[k];
    if (lambda < 0.0) lambda = std::max(lambda, -1e-12);
    if (lambda > 1e-300) entropy -= lambda * std::log(lambda);
  }
  return std::max(entropy, 0.0);
}

std::vector<double> spacing_ratios(const Eigen::VectorXd& levels) {
  std::vector<double> rs;
  if (levels.size() < 3) return rs;
  rs.reserve(levels.size() - 2);
  for (Eigen::Index k = 0; k + 2 < levels.size(); ++k) {
    const double d1 = levels[k + 1] - levels[k];
    const double d2 = levels[k + 2] - levels[k + 1];
    const double lo = std::min(d1, d2);
    const double hi = std::max(d1, d2);
    if (hi < 1e-12) continue;  // degenerate pair
    rs.push_back(std::max(lo, 0.0) / hi);
  }
  return rs;
}

namespace {

SectorIndex largest_sector(int n_sites) {
  return sector_basis(n_sites, n_sites / 2);
}

Eigen::VectorXd middle_fraction(const Eigen::VectorXd& sorted, double fraction) {
  const auto n = sorted.size();
  const auto keep = static_cast<Eigen::Index>(std::llround(fraction * n));
  const Eigen::Index lo = (n - keep) / 2;
  return sorted.segment(lo, keep);
}

}  // namespace

LevelStatistics level_spacing_ratios(const ChainSpec& spec, double h_d,
                                     int realizations, std::uint64_t seed,
                                     DiagExec exec) {
  if (realizations < 1) throw InvalidSpec("need at least one realization");
  if (!(h_d >= 0.0)) throw InvalidSpec("disorder strength must be >= 0");
  if (spec.n_sites < 8)
    std::cerr << "warning: L = " << spec.n_sites
              << " gives few levels per realization; gap-ratio statistics "
                 "will be noisy\n";

  const SectorIndex sector = largest_sector(spec.n_sites);
  std::vector<std::vector<double>> per_real(realizations);

  auto run_one = [&](int r) {
    Rng rng = derived_rng(seed, static_cast<std::uint64_t>(r));
    const FieldVector h = sample_fields(h_d, spec.n_sites, rng);
    const Eigen::MatrixXd block = build_sector_block(spec, h, sector);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block,
                                                          Eigen::EigenvaluesOnly);
    per_real[r] = spacing_ratios(middle_fraction(solver.eigenvalues(), 0.5));
  };

  if (exec == DiagExec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < realizations; ++r) run_one(r);
  } else {
    for (int r = 0; r < realizations; ++r) run_one(r);
  }

  LevelStatistics stats;
  for (const auto& rs : per_real)
    stats.r_values.insert(stats.r_values.end(), rs.begin(), rs.end());
  if (!stats.r_values.empty())
    stats.mean_r = std::accumulate(stats.r_values.begin(), stats.r_values.end(), 0.0) /
                   static_cast<double>(stats.r_values.size());
  return stats;
}

std::vector<EntropyScalingRow> entropy_scaling_sweep(
    const std::vector<int>& sizes, const std::vector<double>& disorders,
    int realizations, std::uint64_t seed, double j_xy, double j_zz,
    DiagExec exec) {
  if (realizations < 1) throw InvalidSpec("need at least one realization");
  std::vector<EntropyScalingRow> rows;
  for (int L : sizes) {
    if (L < 6 || L % 2 != 0)
      throw InvalidSpec("entropy scaling needs even system sizes >= 6");
    ChainSpec spec;
    spec.n_sites = L;
    spec.j_xy = j_xy;
    spec.j_zz = j_zz;
    const SectorIndex sector = largest_sector(L);
    const auto cut = half_chain_cut(L);
    const Eigen::Index dim_full = Eigen::Index(1) << L;

    for (std::size_t hi = 0; hi < disorders.size(); ++hi) {
      const double h_d = disorders[hi];
      std::vector<double> means(realizations, 0.0);

      auto run_one = [&](int r) {
        Rng rng = derived_rng(seed + 1315423911ULL * (hi + 1),
                              static_cast<std::uint64_t>(r) + 7919ULL * L);
        const FieldVector h = sample_fields(h_d, L, rng);
        const Eigen::MatrixXd block = build_sector_block(spec, h, sector);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block);
        const auto d = block.rows();
        auto keep = static_cast<Eigen::Index>(std::llround(0.10 * d));
        keep = std::max<Eigen::Index>(keep, 1);
        const Eigen::Index lo = (d - keep) / 2;
        double acc = 0.0;
        for (Eigen::Index k = lo; k < lo + keep; ++k) {
          PureState psi = PureState::Zero(dim_full);
          for (Eigen::Index a = 0; a < d; ++a)
            psi[sector.basis_states[a]] = solver.eigenvectors()(a, k);
          acc += entanglement_entropy(psi, cut, L);
        }
        means[r] = acc / static_cast<double>(keep);
      };

      if (exec == DiagExec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int r = 0; r < realizations; ++r) run_one(r);
      } else {
        for (int r = 0; r < realizations; ++r) run_one(r);
      }

      const double mean =
          std::accumulate(means.begin(), means.end(), 0.0) / realizations;
      double var = 0.0;
      for (double v : means) var += (v - mean) * (v - mean);
      var = realizations > 1 ? var / (realizations - 1) : 0.0;
      rows.push_back(EntropyScalingRow{L, h_d, mean / L,
                                       std::sqrt(var / realizations) / L});
    }
  }
  return rows;
}

}  // namespace mblborn
