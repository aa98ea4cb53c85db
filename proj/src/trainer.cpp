#include "mblborn/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mblborn/diagnostics.hpp"
#include "mblborn/errors.hpp"

namespace mblborn {

namespace {

void validate_train_config(const TrainConfig& cfg) {
  detail::validate_spec(cfg.chain);
  validate_partition(cfg.partition);
  if (cfg.partition.n_sites() != cfg.chain.n_sites)
    throw DimensionError("partition does not cover the chain");
  if (cfg.n_quenches < 1) throw InvalidSpec("need at least one quench");
  if (cfg.n_candidates < 1) throw InvalidSpec("need at least one candidate");
  if (!(cfg.disorder >= 0.0)) throw InvalidSpec("disorder strength must be >= 0");
  if (!(cfg.quench_time >= 0.0)) throw InvalidSpec("quench time must be >= 0");
  if (cfg.variant == Variant::rdbm) {
    if (!(cfg.rdbm.noise_amplitude >= 0.0))
      throw InvalidSpec("drive amplitude must be >= 0");
    if (cfg.rdbm.tau < 0.0) throw InvalidSpec("drive interval must be positive");
  }
  if (cfg.checkpoint_stride < 0) throw InvalidSpec("checkpoint stride must be >= 0");
}

void validate_target(const TrainConfig& cfg, const VisibleDistribution& target) {
  if (target.size() != Eigen::Index(1) << cfg.partition.n_visible())
    throw DimensionError("target length does not match visible sites");
  if ((target.array() < 0.0).any())
    throw InvalidSpec("target entries must be non-negative");
  if (std::abs(target.sum() - 1.0) > 1e-6)
    throw InvalidSpec("target distribution must be normalized");
}

bool rdbm_drives_active(const TrainConfig& cfg) {
  return cfg.variant == Variant::rdbm && cfg.rdbm.noise_amplitude > 0.0 &&
         cfg.quench_time > 0.0;
}

}  // namespace

PureState make_initial_state(const TrainConfig& config) {
  const int L = config.chain.n_sites;
  const Eigen::Index dim = Eigen::Index(1) << L;
  switch (config.initial_state) {
    case InitialStateKind::plus_product:
      return PureState::Constant(dim, std::pow(2.0, -0.5 * L));
    case InitialStateKind::neel: {
      std::uint32_t z = 0;
      for (int i = 2; i <= L; i += 2) z |= site_mask(i, L);  // even sites down
      PureState psi = PureState::Zero(dim);
      psi[z] = 1.0;
      return psi;
    }
    case InitialStateKind::custom: {
      if (config.custom_initial.size() != dim)
        throw DimensionError("custom initial state dimension mismatch");
      if (std::abs(config.custom_initial.norm() - 1.0) > 1e-8)
        throw InvalidSpec("custom initial state must be normalized");
      return config.custom_initial;
    }
  }
  throw InvalidSpec("unknown initial state kind");
}

DriveSchedule make_drive_schedule(const RdbmParams& rdbm, double quench_time,
                                  int n_sites, Rng& rng) {
  double tau = rdbm.tau > 0.0 ? rdbm.tau : quench_time / 50.0;
  if (!(tau > 0.0)) throw InvalidSpec("drive interval must be positive");
  tau = std::min(tau, quench_time);

  // Partition [0, T] into intervals of length tau (plus a remainder slice
  // when tau does not divide T).
  std::vector<double> durations;
  const double n_exact = quench_time / tau;
  const auto n_round = static_cast<long long>(std::llround(n_exact));
  if (n_round >= 1 && std::abs(n_exact - static_cast<double>(n_round)) < 1e-9) {
    durations.assign(static_cast<std::size_t>(n_round), tau);
  } else {
    const auto n_full = static_cast<long long>(std::floor(n_exact));
    durations.assign(static_cast<std::size_t>(n_full), tau);
    const double rest = quench_time - static_cast<double>(n_full) * tau;
    if (rest > 1e-12 * std::max(1.0, quench_time)) durations.push_back(rest);
  }

  const double stddev = rdbm.scale_by_tau
                            ? std::sqrt(2.0 * rdbm.noise_amplitude / tau)
                            : std::sqrt(2.0 * rdbm.noise_amplitude);
  DriveSchedule schedule;
  schedule.reserve(durations.size());
  for (double dt : durations) {
    FieldVector d(n_sites);
    for (int i = 0; i < n_sites; ++i) d[i] = rng.gaussian(0.0, stddev);
    schedule.push_back(DriveInterval{std::move(d), dt});
  }
  return schedule;
}

namespace {

/// Deterministic evaluation of candidate (m, n): draws fields from the
/// (seed, m, n) stream, propagates `psi` through the quench, and returns the
/// visible distribution. The drive schedule, when present, is the quench's
/// shared bath realization. Pure function of its arguments, evaluable from
/// any thread.
struct CandidateResult {
  FieldVector fields;
  PureState state;
  VisibleDistribution distribution;
};

CandidateResult evaluate_candidate(const TrainConfig& cfg,
                                   const std::shared_ptr<const SectorTable>& table,
                                   const DriveSchedule& schedule,
                                   const PureState& psi, int m, int n) {
  CandidateResult out;
  Rng rng = per_candidate_rng(cfg.seed, static_cast<std::uint64_t>(m),
                              static_cast<std::uint64_t>(n));
  out.fields = sample_fields(cfg.disorder, cfg.chain.n_sites, rng);
  if (!schedule.empty()) {
    const HamiltonianMatrix base = total_hamiltonian(cfg.chain, out.fields);
    out.state = evolve_piecewise(psi, base, schedule);
  } else if (cfg.engine == Engine::blocked) {
    const BlockEigenSystem bes = block_eigendecompose(table, cfg.chain, out.fields);
    out.state = evolve_blocked(bes, psi, cfg.quench_time);
  } else if (cfg.engine == Engine::krylov) {
    const HamiltonianMatrix H = total_hamiltonian(cfg.chain, out.fields);
    out.state = evolve_krylov(psi, H, cfg.quench_time, 1e-10);
  } else {
    const HamiltonianMatrix H = total_hamiltonian(cfg.chain, out.fields);
    out.state = evolve_spectral(psi, H, cfg.quench_time);
  }
  out.distribution = visible_marginal(out.state, cfg.partition);
  return out;
}

}  // namespace

DriveSchedule quench_drive_schedule(const TrainConfig& cfg, int quench) {
  if (!rdbm_drives_active(cfg)) return {};
  // One bath realization per quench, shared by all candidates; the drive
  // carries the quench index only.
  Rng rng = derived_rng(mix64(cfg.seed ^ 0x9d2c5680aULL),
                        static_cast<std::uint64_t>(quench));
  return make_drive_schedule(cfg.rdbm, cfg.quench_time, cfg.chain.n_sites, rng);
}

TrainingTrace train(const TrainConfig& cfg, const VisibleDistribution& target,
                    ExecPolicy policy) {
  validate_train_config(cfg);
  validate_target(cfg, target);

  const int M = cfg.n_quenches;
  const int N = cfg.n_candidates;
  const GramMatrix K = gram_matrix(cfg.kernel, static_cast<int>(target.size()));
  const auto table = SectorTable::build(cfg.chain.n_sites);
  const auto half_cut = half_chain_cut(cfg.chain.n_sites);

  TrainingTrace trace;
  trace.config = cfg;
  trace.records.reserve(M);
  trace.intermediate_distributions.reserve(M + 1);

  SpinFlipTracker tracker(make_initial_state(cfg), cfg.chain.n_sites);
  trace.intermediate_distributions.push_back(
      visible_marginal(tracker.state(), cfg.partition));

  for (int m = 0; m < M; ++m) {
    std::vector<double> losses(N);
    const PureState& psi = tracker.state();
    const DriveSchedule schedule = quench_drive_schedule(cfg, m);
    const std::uint64_t candidate_steps =
        schedule.empty() ? 1 : schedule.size();

    if (policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(dynamic)
      for (int n = 0; n < N; ++n) {
        const CandidateResult cand =
            evaluate_candidate(cfg, table, schedule, psi, m, n);
        losses[n] = mmd_exact(cand.distribution, target, K);
      }
    } else {
      for (int n = 0; n < N; ++n) {
        const CandidateResult cand =
            evaluate_candidate(cfg, table, schedule, psi, m, n);
        losses[n] = mmd_exact(cand.distribution, target, K);
      }
    }
    trace.propagation_steps += candidate_steps * static_cast<std::uint64_t>(N);

    int best = 0;
    for (int n = 0; n < N; ++n) {
      if (std::isnan(losses[n])) {
        std::ostringstream msg;
        msg << "NaN loss at quench " << m << ", candidate " << n;
        throw NumericError(msg.str());
      }
      if (losses[n] < losses[best]) best = n;  // ties keep the lowest index
    }

    // Replay the winner to advance the training state and the correlator
    // tracker through the same unitary.
    Rng rng = per_candidate_rng(cfg.seed, static_cast<std::uint64_t>(m),
                                static_cast<std::uint64_t>(best));
    const FieldVector theta = sample_fields(cfg.disorder, cfg.chain.n_sites, rng);
    if (!schedule.empty()) {
      tracker.advance_piecewise(total_hamiltonian(cfg.chain, theta), schedule);
    } else if (cfg.engine == Engine::blocked) {
      tracker.advance(block_eigendecompose(table, cfg.chain, theta),
                      cfg.quench_time);
    } else if (cfg.engine == Engine::krylov) {
      tracker.advance_krylov(total_hamiltonian(cfg.chain, theta),
                             cfg.quench_time, 1e-10);
    } else {
      tracker.advance(eigendecompose(total_hamiltonian(cfg.chain, theta)),
                      cfg.quench_time);
    }
    trace.propagation_steps += candidate_steps;

    QuenchRecord record;
    record.m = m;
    record.theta = theta;
    record.loss = losses[best];
    record.chosen_candidate = best;
    record.candidate_losses = std::move(losses);
    record.entropy = entanglement_entropy(tracker.state(), half_cut,
                                          cfg.chain.n_sites);
    record.hamming = hamming_distance(tracker);
    trace.records.push_back(std::move(record));

    trace.intermediate_distributions.push_back(
        visible_marginal(tracker.state(), cfg.partition));
    if (cfg.checkpoint_stride > 0 && (m + 1) % cfg.checkpoint_stride == 0)
      trace.state_checkpoints.emplace_back(m + 1, tracker.state());
  }

  trace.final_state = tracker.state();
  trace.final_distribution = trace.intermediate_distributions.back();
  if (trace.state_checkpoints.empty() ||
      trace.state_checkpoints.back().first != M)
    trace.state_checkpoints.emplace_back(M, trace.final_state);
  return trace;
}

TrainingTrace train_rdbm(const TrainConfig& config,
                         const VisibleDistribution& target, ExecPolicy policy) {
  if (config.variant != Variant::rdbm)
    throw InvalidSpec("train_rdbm requires the rdbm variant");
  return train(config, target, policy);
}

}  // namespace mblborn
