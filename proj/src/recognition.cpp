#include "mblborn/recognition.hpp"

#include "mblborn/errors.hpp"

namespace mblborn {

int find_closest_quench(const TrainingTrace& trace, const Pattern& corrupted,
                        const GramMatrix& K) {
  if (trace.intermediate_distributions.empty())
    throw InvalidSpec("trace has no stored distributions");
  int best = 0;
  double best_loss = mmd_exact(corrupted, trace.intermediate_distributions[0], K);
  for (std::size_t m = 1; m < trace.intermediate_distributions.size(); ++m) {
    const double loss =
        mmd_exact(corrupted, trace.intermediate_distributions[m], K);
    if (loss < best_loss) {
      best_loss = loss;
      best = static_cast<int>(m);
    }
  }
  return best;
}

RetrievalResult retrieve(const TrainingTrace& trace, const Pattern& corrupted,
                         const PureState& hidden_init) {
  const TrainConfig& cfg = trace.config;
  const GramMatrix K = gram_matrix(cfg.kernel, static_cast<int>(corrupted.size()));
  const int m_star = find_closest_quench(trace, corrupted, K);

  PureState psi = embed_pattern(corrupted, hidden_init, cfg.partition);

  const auto table = SectorTable::build(cfg.chain.n_sites);
  for (std::size_t m = static_cast<std::size_t>(m_star); m < trace.records.size();
       ++m) {
    const QuenchRecord& record = trace.records[m];
    const DriveSchedule schedule = quench_drive_schedule(cfg, record.m);
    if (!schedule.empty()) {
      psi = evolve_piecewise(psi, total_hamiltonian(cfg.chain, record.theta),
                             schedule);
    } else if (cfg.engine == Engine::blocked) {
      psi = evolve_blocked(block_eigendecompose(table, cfg.chain, record.theta),
                           psi, cfg.quench_time);
    } else {
      psi = evolve_spectral(psi, total_hamiltonian(cfg.chain, record.theta),
                            cfg.quench_time);
    }
  }
  return RetrievalResult{visible_marginal(psi, cfg.partition), m_star};
}

}  // namespace mblborn
