#include "mblborn/born.hpp"

#include <algorithm>
#include <cmath>

#include "mblborn/errors.hpp"

namespace mblborn {

namespace {

/// Visible and hidden sub-indices of a full basis index, per the site lists.
struct BitSplitter {
  std::vector<int> shifts_visible;  // full-index shift per visible site
  std::vector<int> shifts_hidden;

  BitSplitter(const Partition& part, int n_sites) {
    for (int site : part.visible_sites)
      shifts_visible.push_back(n_sites - site);
    for (int site : part.hidden_sites)
      shifts_hidden.push_back(n_sites - site);
  }

  std::uint32_t visible_of(std::uint32_t z) const {
    std::uint32_t v = 0;
    for (int sh : shifts_visible) v = (v << 1) | ((z >> sh) & 1u);
    return v;
  }
  std::uint32_t hidden_of(std::uint32_t z) const {
    std::uint32_t h = 0;
    for (int sh : shifts_hidden) h = (h << 1) | ((z >> sh) & 1u);
    return h;
  }
  std::uint32_t full_of(std::uint32_t v, std::uint32_t h) const {
    std::uint32_t z = 0;
    for (std::size_t k = 0; k < shifts_visible.size(); ++k)
      z |= ((v >> (shifts_visible.size() - 1 - k)) & 1u) << shifts_visible[k];
    for (std::size_t k = 0; k < shifts_hidden.size(); ++k)
      z |= ((h >> (shifts_hidden.size() - 1 - k)) & 1u) << shifts_hidden[k];
    return z;
  }
};

int chain_length_of(const PureState& psi) {
  int L = 0;
  while ((Eigen::Index(1) << L) < psi.size()) ++L;
  if ((Eigen::Index(1) << L) != psi.size())
    throw DimensionError("state dimension is not a power of two");
  return L;
}

}  // namespace

Partition Partition::contiguous(int n_visible, int n_hidden) {
  Partition part;
  for (int i = 1; i <= n_visible; ++i) part.visible_sites.push_back(i);
  for (int i = n_visible + 1; i <= n_visible + n_hidden; ++i)
    part.hidden_sites.push_back(i);
  validate_partition(part);
  return part;
}

void validate_partition(const Partition& part) {
  if (part.n_visible() < 1) throw InvalidSpec("at least one visible site required");
  std::vector<int> all = part.visible_sites;
  all.insert(all.end(), part.hidden_sites.begin(), part.hidden_sites.end());
  std::vector<int> sorted = all;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != static_cast<int>(i) + 1)
      throw InvalidSpec("visible/hidden sites must partition 1..L");
}

DensityMatrix partial_trace_hidden(const PureState& psi, const Partition& part) {
  validate_partition(part);
  const int L = chain_length_of(psi);
  if (L != part.n_sites())
    throw DimensionError("partition does not match state dimension");
  const BitSplitter split(part, L);
  const Eigen::Index dv = Eigen::Index(1) << part.n_visible();
  const Eigen::Index dh = Eigen::Index(1) << part.n_hidden();

  // Amplitudes as a (visible x hidden) matrix A; rho = A A^dagger.
  Eigen::MatrixXcd A(dv, dh);
  for (Eigen::Index z = 0; z < psi.size(); ++z) {
    const auto zz = static_cast<std::uint32_t>(z);
    A(split.visible_of(zz), split.hidden_of(zz)) = psi[z];
  }
  return A * A.adjoint();
}

VisibleDistribution visible_distribution(const DensityMatrix& rho) {
  if (rho.rows() != rho.cols()) throw DimensionError("density matrix must be square");
  const double trace = rho.trace().real();
  if (std::abs(trace - 1.0) > 1e-6)
    throw NumericError("density matrix trace deviates from 1 beyond 1e-6");
  VisibleDistribution p(rho.rows());
  for (Eigen::Index z = 0; z < rho.rows(); ++z) {
    double d = rho(z, z).real();
    if (d < 0.0) {
      if (d < -1e-10)
        throw NumericError("density matrix diagonal negative beyond tolerance");
      d = 0.0;
    }
    p[z] = d;
  }
  p /= p.sum();
  return p;
}

VisibleDistribution born_distribution(const PureState& psi) {
  VisibleDistribution p(psi.size());
  for (Eigen::Index z = 0; z < psi.size(); ++z) p[z] = std::norm(psi[z]);
  return p;
}

VisibleDistribution visible_marginal(const PureState& psi, const Partition& part) {
  validate_partition(part);
  const int L = chain_length_of(psi);
  if (L != part.n_sites())
    throw DimensionError("partition does not match state dimension");
  if (part.n_hidden() == 0 && part.visible_sites.front() == 1 &&
      std::is_sorted(part.visible_sites.begin(), part.visible_sites.end()))
    return born_distribution(psi);
  const BitSplitter split(part, L);
  VisibleDistribution p = VisibleDistribution::Zero(Eigen::Index(1) << part.n_visible());
  for (Eigen::Index z = 0; z < psi.size(); ++z)
    p[split.visible_of(static_cast<std::uint32_t>(z))] += std::norm(psi[z]);
  return p;
}

PureState embed_pattern(const VisibleDistribution& xi, const PureState& hidden_init,
                        const Partition& part) {
  validate_partition(part);
  if (xi.size() != Eigen::Index(1) << part.n_visible())
    throw DimensionError("pattern length does not match visible sites");
  if (hidden_init.size() != Eigen::Index(1) << part.n_hidden())
    throw DimensionError("hidden state dimension does not match hidden sites");
  if ((xi.array() < 0.0).any())
    throw InvalidSpec("pattern entries must be non-negative");
  if (std::abs(xi.sum() - 1.0) > 1e-8)
    throw InvalidSpec("pattern must be normalized");
  if (std::abs(hidden_init.norm() - 1.0) > 1e-8)
    throw InvalidSpec("hidden state must be normalized");

  const int L = part.n_sites();
  const BitSplitter split(part, L);
  PureState psi = PureState::Zero(Eigen::Index(1) << L);
  for (Eigen::Index v = 0; v < xi.size(); ++v) {
    const double amp = std::sqrt(xi[v]);
    for (Eigen::Index h = 0; h < hidden_init.size(); ++h)
      psi[split.full_of(static_cast<std::uint32_t>(v),
                        static_cast<std::uint32_t>(h))] = amp * hidden_init[h];
  }
  return psi;
}

}  // namespace mblborn
