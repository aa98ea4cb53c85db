#pragma once

#include <filesystem>
#include <string>

#include "mblborn/config.hpp"
#include "mblborn/runio.hpp"

namespace mblborn {

/// Writes a full training run directory (config snapshot, manifest, trace,
/// fields, distributions, checkpoints, optional plots) and returns the trace.
TrainingTrace run_train_experiment(const RunConfig& cfg);

/// Trains basic, randomly driven and hidden variants over `realizations`
/// paired seeds; emits per-variant mean/std log-loss curves (compare.csv)
/// and terminal-loss summary.
void run_compare_models(const RunConfig& cfg);

/// Trains across the disorder grid; emits terminal-loss table (phase.csv)
/// and per-quench loss/entropy/Hamming trajectories for the extreme
/// disorder values (trajectories.csv).
void run_phase_sweep(const RunConfig& cfg);

/// Gap-ratio statistics and entropy scaling (levels.csv, scaling.csv).
void run_diagnose(const RunConfig& cfg);

struct RecognizeOptions {
  std::filesystem::path run_dir;
  std::string mask_spec = "rows:4-7";
  std::string clean_csv;    ///< optional external clean pattern source
  std::string clean_label;  ///< row label inside clean_csv
};

struct RecognizeReport {
  double fidelity_corrupted_clean = 0.0;
  double fidelity_retrieved_clean = 0.0;
  int m_star = 0;
};

/// Replays a stored run against a corrupted pattern; writes retrieved.csv
/// and report.csv into the run directory.
RecognizeReport run_recognize(const RecognizeOptions& opts);

/// Dataset generation: either a fixture of class-mean digit patterns from an
/// IDX pair, or the configured target pattern.
void run_gen_data(const RunConfig& cfg, const std::string& idx_images = "",
                  const std::string& idx_labels = "");

/// Corruption masks: "none", "rows:a-b", "cols:a-b", "pixels:i,j,...",
/// "random:count:seed" (patterns are 2^{L_v/2} square images, row-major).
std::vector<int> parse_mask_spec(const std::string& spec, int n_visible);

/// Product state on the hidden sites matching the training initial state.
PureState initial_hidden_state(const TrainConfig& cfg);

}  // namespace mblborn
