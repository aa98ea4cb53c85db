#include "mblborn/chain.hpp"

#include <bit>
#include <cmath>
#include <unordered_map>

#include "mblborn/errors.hpp"

namespace mblborn {

namespace detail {

void validate_spec(const ChainSpec& spec) {
  if (spec.n_sites < 2) throw InvalidSpec("chain needs at least 2 sites");
  if (spec.n_sites > 14)
    throw InvalidSpec("dense construction capped at L = 14");
  if (!std::isfinite(spec.j_xy) || !std::isfinite(spec.j_zz))
    throw InvalidSpec("couplings must be finite");
}

void validate_fields(const FieldVector& h) {
  if (h.size() < 1) throw InvalidSpec("field vector must cover at least one site");
  if (!h.allFinite()) throw InvalidSpec("field entries must be finite");
}

}  // namespace detail

std::vector<std::pair<int, int>> bond_list(const ChainSpec& spec) {
  std::vector<std::pair<int, int>> bonds;
  bonds.reserve(spec.n_sites);
  for (int i = 1; i < spec.n_sites; ++i) bonds.emplace_back(i, i + 1);
  if (spec.boundary == Boundary::periodic) bonds.emplace_back(spec.n_sites, 1);
  return bonds;
}

HamiltonianMatrix build_xxz_bonds(const ChainSpec& spec,
                                  const std::vector<std::pair<int, int>>& bonds) {
  detail::validate_spec(spec);
  const int L = spec.n_sites;
  const std::uint32_t dim = 1u << L;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (std::uint32_t z = 0; z < dim; ++z) {
    for (const auto& [i, j] : bonds) {
      const int si = spin_sign(z, i, L);
      const int sj = spin_sign(z, j, L);
      H(z, z) += spec.j_zz * 0.25 * si * sj;
      if (si != sj) {
        // J_xy (S^x S^x + S^y S^y) = J_xy/2 (S^+ S^- + S^- S^+): flips the
        // antiparallel pair.
        const std::uint32_t zf = z ^ (site_mask(i, L) | site_mask(j, L));
        H(zf, z) += 0.5 * spec.j_xy;
      }
    }
  }
  return HamiltonianMatrix{std::move(H), spec, FieldVector()};
}

HamiltonianMatrix build_xxz(const ChainSpec& spec) {
  return build_xxz_bonds(spec, bond_list(spec));
}

HamiltonianMatrix build_field_term(const FieldVector& h) {
  detail::validate_fields(h);
  const int L = static_cast<int>(h.size());
  if (L > 14) throw InvalidSpec("dense construction capped at L = 14");
  const std::uint32_t dim = 1u << L;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (std::uint32_t z = 0; z < dim; ++z) {
    double e = 0.0;
    for (int i = 1; i <= L; ++i) e += h[i - 1] * 0.5 * spin_sign(z, i, L);
    H(z, z) = e;
  }
  ChainSpec spec;
  spec.n_sites = L;
  spec.j_xy = 0.0;
  spec.j_zz = 0.0;
  return HamiltonianMatrix{std::move(H), spec, h};
}

HamiltonianMatrix total_hamiltonian(const ChainSpec& spec, const FieldVector& h) {
  detail::validate_spec(spec);
  detail::validate_fields(h);
  if (static_cast<int>(h.size()) != spec.n_sites)
    throw DimensionError("field vector length does not match site count");
  HamiltonianMatrix total = build_xxz(spec);
  total.mat += build_field_term(h).mat;
  total.fields = h;
  return total;
}

FieldVector sample_fields(double h_d, int n_sites, Rng& rng) {
  if (!(h_d >= 0.0)) throw InvalidSpec("disorder strength must be >= 0");
  FieldVector h(n_sites);
  for (int i = 0; i < n_sites; ++i) h[i] = rng.uniform(-h_d, h_d);
  return h;
}

SectorIndex sector_basis(int n_sites, int n_up) {
  SectorIndex sector;
  sector.n_up = n_up;
  const std::uint32_t dim = 1u << n_sites;
  for (std::uint32_t z = 0; z < dim; ++z) {
    // up spins are 0-bits under the basis convention
    if (n_sites - std::popcount(z) == n_up) sector.basis_states.push_back(z);
  }
  return sector;
}

std::vector<SectorIndex> sector_bases(int n_sites) {
  std::vector<SectorIndex> sectors(n_sites + 1);
  for (int n = 0; n <= n_sites; ++n) sectors[n].n_up = n;
  const std::uint32_t dim = 1u << n_sites;
  for (std::uint32_t z = 0; z < dim; ++z)
    sectors[n_sites - std::popcount(z)].basis_states.push_back(z);
  return sectors;
}

std::vector<std::pair<SectorIndex, Eigen::MatrixXd>> sector_blocks(
    const HamiltonianMatrix& H) {
  const auto dim = H.mat.rows();
  int L = 0;
  while ((Eigen::Index(1) << L) < dim) ++L;
  if ((Eigen::Index(1) << L) != dim)
    throw DimensionError("matrix dimension is not a power of two");

  std::vector<SectorIndex> sectors = sector_bases(L);
  std::vector<int> sector_of(dim);
  for (std::uint32_t z = 0; z < dim; ++z)
    sector_of[z] = L - std::popcount(z);

  constexpr double kTol = 1e-10;
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c)
      if (sector_of[r] != sector_of[c] && std::abs(H.mat(r, c)) > kTol)
        throw SectorViolation("operator does not conserve total S^z");

  std::vector<std::pair<SectorIndex, Eigen::MatrixXd>> blocks;
  blocks.reserve(sectors.size());
  for (auto& sector : sectors) {
    const auto d = static_cast<Eigen::Index>(sector.basis_states.size());
    Eigen::MatrixXd block(d, d);
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index b = 0; b < d; ++b)
        block(a, b) = H.mat(sector.basis_states[a], sector.basis_states[b]);
    blocks.emplace_back(std::move(sector), std::move(block));
  }
  return blocks;
}

Eigen::MatrixXd build_sector_block(const ChainSpec& spec, const FieldVector& h,
                                   const SectorIndex& sector) {
  if (spec.n_sites < 2) throw InvalidSpec("chain needs at least 2 sites");
  if (!std::isfinite(spec.j_xy) || !std::isfinite(spec.j_zz))
    throw InvalidSpec("couplings must be finite");
  detail::validate_fields(h);
  if (static_cast<int>(h.size()) != spec.n_sites)
    throw DimensionError("field vector length does not match site count");

  const int L = spec.n_sites;
  const auto& states = sector.basis_states;
  const auto d = static_cast<Eigen::Index>(states.size());
  std::unordered_map<std::uint32_t, Eigen::Index> pos;
  pos.reserve(states.size());
  for (Eigen::Index a = 0; a < d; ++a) pos.emplace(states[a], a);

  const auto bonds = bond_list(spec);
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    const std::uint32_t z = states[a];
    double diag = 0.0;
    for (int i = 1; i <= L; ++i) diag += h[i - 1] * 0.5 * spin_sign(z, i, L);
    for (const auto& [i, j] : bonds) {
      const int si = spin_sign(z, i, L);
      const int sj = spin_sign(z, j, L);
      diag += spec.j_zz * 0.25 * si * sj;
      if (si != sj) {
        const std::uint32_t zf = z ^ (site_mask(i, L) | site_mask(j, L));
        block(pos.at(zf), a) += 0.5 * spec.j_xy;  // flips stay in the sector
      }
    }
    block(a, a) = diag;
  }
  return block;
}

}  // namespace mblborn
