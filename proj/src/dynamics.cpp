#include "mblborn/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <bit>
#include <cmath>
#include <complex>

#include "mblborn/errors.hpp"

namespace mblborn {

namespace {

using Complex = std::complex<double>;

void require_symmetric(const Eigen::MatrixXd& H) {
  if (H.rows() != H.cols()) throw DimensionError("matrix must be square");
  const double dev = (H - H.transpose()).cwiseAbs().maxCoeff();
  if (dev > 1e-10) throw InvalidSpec("matrix is not symmetric");
}

/// V diag(e^{-i lambda t}) V^T psi with real V, via four real mat-vecs.
PureState spectral_apply(const Eigen::MatrixXd& V, const Eigen::VectorXd& lambda,
                         const PureState& psi, double t) {
  const Eigen::VectorXd cr = V.transpose() * psi.real();
  const Eigen::VectorXd ci = V.transpose() * psi.imag();
  Eigen::VectorXd wr(cr.size()), wi(cr.size());
  for (Eigen::Index k = 0; k < cr.size(); ++k) {
    const double c = std::cos(lambda[k] * t);
    const double s = std::sin(lambda[k] * t);
    // (cr + i ci) * (c - i s)
    wr[k] = cr[k] * c + ci[k] * s;
    wi[k] = ci[k] * c - cr[k] * s;
  }
  PureState out(psi.size());
  out.real() = V * wr;
  out.imag() = V * wi;
  return out;
}

}  // namespace

EigenSystem eigendecompose(const Eigen::MatrixXd& H) {
  require_symmetric(H);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
  if (solver.info() != Eigen::Success)
    throw NumericError("eigendecomposition failed");
  return EigenSystem{solver.eigenvalues(), solver.eigenvectors()};
}

EigenSystem eigendecompose(const HamiltonianMatrix& H) {
  return eigendecompose(H.mat);
}

PureState evolve_with(const EigenSystem& es, const PureState& psi, double t) {
  if (es.eigenvectors.rows() != psi.size())
    throw DimensionError("state/operator dimension mismatch");
  if (t == 0.0) return psi;
  return spectral_apply(es.eigenvectors, es.eigenvalues, psi, t);
}

PureState evolve_spectral(const PureState& psi, const HamiltonianMatrix& H,
                          double t) {
  if (H.mat.rows() != psi.size())
    throw DimensionError("state/operator dimension mismatch");
  if (t == 0.0) return psi;
  return evolve_with(eigendecompose(H), psi, t);
}

PureState evolve_krylov(const PureState& psi, const HamiltonianMatrix& H,
                        double t, double tol) {
  if (H.mat.rows() != psi.size())
    throw DimensionError("state/operator dimension mismatch");
  if (!(tol > 0.0)) throw InvalidSpec("tolerance must be positive");
  require_symmetric(H.mat);
  if (t == 0.0) return psi;

  const Eigen::Index dim = psi.size();
  const Eigen::Index m_max = std::min<Eigen::Index>(dim, 80);

  // One Lanczos sweep from `v`; returns the propagated vector and an
  // a-posteriori error estimate for step length dt.
  auto step = [&](const PureState& v, double dt,
                  double& err) -> PureState {
    const double beta0 = v.norm();
    PureState vj = v / beta0;
    std::vector<PureState> basis{vj};
    std::vector<double> alpha, beta;
    PureState v_prev = PureState::Zero(dim);
    Eigen::Index m = 0;
    bool breakdown = false;
    while (m < m_max) {
      PureState w = H.mat * basis[m];
      if (m > 0) w -= beta[m - 1] * v_prev;
      const double a = std::real(basis[m].dot(w));
      alpha.push_back(a);
      w -= a * basis[m];
      for (const auto& b : basis) w -= b.dot(w) * b;  // full reorth
      const double bnorm = w.norm();
      ++m;
      if (bnorm < 1e-14) {
        breakdown = true;  // invariant subspace reached: result is exact
        break;
      }
      beta.push_back(bnorm);
      v_prev = basis[m - 1];
      basis.push_back(w / bnorm);
    }

    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index k = 0; k < m; ++k) {
      tri(k, k) = alpha[k];
      if (k + 1 < m) tri(k, k + 1) = tri(k + 1, k) = beta[k];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(tri);
    const Eigen::VectorXd theta = small.eigenvalues();
    const Eigen::MatrixXd W = small.eigenvectors();
    Eigen::VectorXcd u(m);
    for (Eigen::Index k = 0; k < m; ++k) {
      Complex acc(0.0, 0.0);
      for (Eigen::Index j = 0; j < m; ++j)
        acc += W(k, j) * std::polar(1.0, -theta[j] * dt) * W(0, j);
      u[k] = acc;
    }
    err = breakdown ? 0.0 : beta.back() * std::abs(u[m - 1]) * std::abs(dt);
    PureState out = PureState::Zero(dim);
    for (Eigen::Index k = 0; k < m; ++k) out += u[k] * basis[k];
    return beta0 * out;
  };

  int n_sub = 1;
  constexpr int kMaxSub = 1 << 16;
  while (n_sub <= kMaxSub) {
    const double dt = t / n_sub;
    PureState cur = psi;
    double total_err = 0.0;
    bool ok = true;
    for (int s = 0; s < n_sub; ++s) {
      double err = 0.0;
      cur = step(cur, dt, err);
      total_err += err;
      if (total_err > tol) {
        ok = false;
        break;
      }
    }
    if (ok) return cur;
    n_sub *= 2;
  }
  throw ConvergenceError("Krylov propagator did not reach tolerance");
}

std::shared_ptr<const SectorTable> SectorTable::build(int n_sites) {
  auto table = std::make_shared<SectorTable>();
  table->n_sites = n_sites;
  table->sectors = sector_bases(n_sites);
  table->locate.resize(std::size_t(1) << n_sites);
  for (std::size_t s = 0; s < table->sectors.size(); ++s) {
    const auto& states = table->sectors[s].basis_states;
    for (std::uint32_t p = 0; p < states.size(); ++p)
      table->locate[states[p]] = {static_cast<int>(s), p};
  }
  return table;
}

BlockEigenSystem block_eigendecompose(std::shared_ptr<const SectorTable> table,
                                      const ChainSpec& spec,
                                      const FieldVector& h) {
  if (!table || table->n_sites != spec.n_sites)
    throw DimensionError("sector table does not match chain");
  BlockEigenSystem bes;
  bes.table = std::move(table);
  bes.blocks.reserve(bes.table->sectors.size());
  for (const auto& sector : bes.table->sectors)
    bes.blocks.push_back(eigendecompose(build_sector_block(spec, h, sector)));
  return bes;
}

PureState evolve_blocked(const BlockEigenSystem& bes, const PureState& psi,
                         double t) {
  const auto& table = *bes.table;
  if (psi.size() != Eigen::Index(1) << table.n_sites)
    throw DimensionError("state/sector-table dimension mismatch");
  if (t == 0.0) return psi;
  PureState out = PureState::Zero(psi.size());
  for (std::size_t s = 0; s < table.sectors.size(); ++s) {
    const auto& states = table.sectors[s].basis_states;
    const auto d = static_cast<Eigen::Index>(states.size());
    PureState x(d);
    for (Eigen::Index a = 0; a < d; ++a) x[a] = psi[states[a]];
    if (x.squaredNorm() == 0.0) continue;
    const PureState y = evolve_with(bes.blocks[s], x, t);
    for (Eigen::Index a = 0; a < d; ++a) out[states[a]] = y[a];
  }
  return out;
}

HamiltonianMatrix build_drive_term(const FieldVector& d) {
  if (d.size() < 1) throw InvalidSpec("drive vector must cover at least one site");
  if (!d.allFinite()) throw InvalidSpec("drive entries must be finite");
  const int L = static_cast<int>(d.size());
  if (L > 14) throw InvalidSpec("dense construction capped at L = 14");
  const std::uint32_t dim = 1u << L;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (std::uint32_t z = 0; z < dim; ++z)
    for (int i = 1; i <= L; ++i)
      H(z ^ site_mask(i, L), z) += 0.5 * d[i - 1];  // S^x flips one spin
  ChainSpec spec;
  spec.n_sites = L;
  spec.j_xy = 0.0;
  spec.j_zz = 0.0;
  return HamiltonianMatrix{std::move(H), spec, FieldVector()};
}

PureState evolve_piecewise(const PureState& psi, const HamiltonianMatrix& base,
                           const DriveSchedule& schedule) {
  if (schedule.empty()) throw InvalidSpec("empty drive schedule");
  PureState cur = psi;
  std::unique_ptr<EigenSystem> base_es;  // reused across zero-drive intervals
  for (const auto& interval : schedule) {
    if (!(interval.duration > 0.0))
      throw InvalidSpec("drive interval durations must be positive");
    if (interval.drive.size() != base.spec.n_sites)
      throw DimensionError("drive vector length does not match chain");
    if (interval.drive.isZero(0.0)) {
      if (!base_es)
        base_es = std::make_unique<EigenSystem>(eigendecompose(base));
      cur = evolve_with(*base_es, cur, interval.duration);
    } else {
      Eigen::MatrixXd H = base.mat + build_drive_term(interval.drive).mat;
      cur = evolve_with(eigendecompose(H), cur, interval.duration);
    }
  }
  return cur;
}

SpinFlipTracker::SpinFlipTracker(const PureState& psi0, int n_sites)
    : n_sites_(n_sites), psi_t_(psi0) {
  if (psi0.size() != Eigen::Index(1) << n_sites)
    throw DimensionError("state dimension does not match site count");
  flipped_t_.reserve(n_sites);
  for (int i = 1; i <= n_sites; ++i) {
    PureState f(psi0.size());
    for (Eigen::Index z = 0; z < psi0.size(); ++z)
      f[z] = double(spin_sign(static_cast<std::uint32_t>(z), i, n_sites)) *
             psi0[z];
    flipped_t_.push_back(std::move(f));
  }
}

void SpinFlipTracker::advance(const BlockEigenSystem& bes, double t) {
  psi_t_ = evolve_blocked(bes, psi_t_, t);
  for (auto& f : flipped_t_) f = evolve_blocked(bes, f, t);
}

void SpinFlipTracker::advance(const EigenSystem& es, double t) {
  psi_t_ = evolve_with(es, psi_t_, t);
  for (auto& f : flipped_t_) f = evolve_with(es, f, t);
}

void SpinFlipTracker::advance_krylov(const HamiltonianMatrix& H, double t,
                                     double tol) {
  psi_t_ = evolve_krylov(psi_t_, H, t, tol);
  for (auto& f : flipped_t_) f = evolve_krylov(f, H, t, tol);
}

void SpinFlipTracker::advance_piecewise(const HamiltonianMatrix& base,
                                        const DriveSchedule& schedule) {
  if (schedule.empty()) throw InvalidSpec("empty drive schedule");
  std::unique_ptr<EigenSystem> base_es;
  for (const auto& interval : schedule) {
    if (!(interval.duration > 0.0))
      throw InvalidSpec("drive interval durations must be positive");
    const EigenSystem* es = nullptr;
    std::unique_ptr<EigenSystem> driven;
    if (interval.drive.isZero(0.0)) {
      if (!base_es)
        base_es = std::make_unique<EigenSystem>(eigendecompose(base));
      es = base_es.get();
    } else {
      driven = std::make_unique<EigenSystem>(
          eigendecompose(Eigen::MatrixXd(base.mat + build_drive_term(interval.drive).mat)));
      es = driven.get();
    }
    psi_t_ = evolve_with(*es, psi_t_, interval.duration);
    for (auto& f : flipped_t_) f = evolve_with(*es, f, interval.duration);
  }
}

double SpinFlipTracker::zz_autocorrelator(int site) const {
  if (site < 1 || site > n_sites_) throw InvalidSpec("site index out of range");
  const PureState& f = flipped_t_[site - 1];
  Complex acc(0.0, 0.0);
  for (Eigen::Index z = 0; z < psi_t_.size(); ++z)
    acc += std::conj(psi_t_[z]) *
           double(spin_sign(static_cast<std::uint32_t>(z), site, n_sites_)) *
           f[z];
  return acc.real();
}

}  // namespace mblborn
