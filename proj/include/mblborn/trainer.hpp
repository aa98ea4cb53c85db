#pragma once

#include <cstdint>
#include <vector>

#include "mblborn/born.hpp"
#include "mblborn/chain.hpp"
#include "mblborn/dynamics.hpp"
#include "mblborn/objectives.hpp"

namespace mblborn {

enum class Variant { basic, hidden, rdbm };
enum class InitialStateKind { plus_product, neel, custom };

/// Candidate evaluation backend. `blocked` propagates per magnetization
/// sector; `dense` is the full-matrix reference; `krylov` trades the full
/// factorization for Lanczos steps (the large-chain option). All produce
/// the same physics; traces are bitwise reproducible within one engine.
enum class Engine { blocked, dense, krylov };

/// Whether candidate evaluations run on the OpenMP pool or on one thread.
/// Both orders produce bitwise-identical traces.
enum class ExecPolicy { serial, parallel };

struct RdbmParams {
  double noise_amplitude = 0.005;  ///< D; drive stddev is sqrt(2D)
  double tau = 0.0;                ///< interval length; <= 0 means T/50
  bool scale_by_tau = false;       ///< draw with stddev sqrt(2D/tau) instead
};

struct TrainConfig {
  ChainSpec chain;      ///< full chain, L = visible + hidden
  Partition partition;  ///< visible/hidden site split
  int n_quenches = 100;   ///< M
  int n_candidates = 500; ///< N disorder draws per quench
  double disorder = 8.0;  ///< h_d
  double quench_time = 10.0;  ///< T
  InitialStateKind initial_state = InitialStateKind::plus_product;
  PureState custom_initial;
  KernelSpec kernel;
  std::uint64_t seed = 0;
  Variant variant = Variant::hidden;
  RdbmParams rdbm;
  Engine engine = Engine::blocked;
  int checkpoint_stride = 0;  ///< 0: final state only; k: every k quenches
};

struct QuenchRecord {
  int m = 0;
  FieldVector theta;  ///< chosen fields
  double loss = 0.0;  ///< min over candidate_losses
  double entropy = 0.0;  ///< half-chain entanglement entropy after the quench
  double hamming = 0.0;  ///< spin-flip distance to the initial state
  int chosen_candidate = 0;
  std::vector<double> candidate_losses;
};

struct TrainingTrace {
  TrainConfig config;
  std::vector<QuenchRecord> records;
  /// p_0 .. p_M: model distribution before training and after each quench.
  std::vector<VisibleDistribution> intermediate_distributions;
  PureState final_state;
  VisibleDistribution final_distribution;
  std::vector<std::pair<int, PureState>> state_checkpoints;
  std::uint64_t propagation_steps = 0;  ///< counted exp(-iHt) applications
};

PureState make_initial_state(const TrainConfig& config);

/// Piecewise-constant transverse drives for one quench, drawn from `rng`.
DriveSchedule make_drive_schedule(const RdbmParams& rdbm, double quench_time,
                                  int n_sites, Rng& rng);

/// The quench's shared bath realization (empty unless the config drives):
/// one drive sequence per quench, common to all candidates, keyed by
/// (seed, quench) only.
DriveSchedule quench_drive_schedule(const TrainConfig& cfg, int quench);

/// Greedy Monte Carlo training: per quench, draw n_candidates field vectors,
/// evolve the current state under each, score the visible distribution
/// against `target` with the exact MMD, keep the argmin (ties: lowest
/// candidate index). Bitwise deterministic for a fixed seed under either
/// ExecPolicy.
TrainingTrace train(const TrainConfig& config, const VisibleDistribution& target,
                    ExecPolicy policy = ExecPolicy::parallel);

/// Variant guard for the randomly driven model; forwards to train().
TrainingTrace train_rdbm(const TrainConfig& config,
                         const VisibleDistribution& target,
                         ExecPolicy policy = ExecPolicy::parallel);

}  // namespace mblborn
