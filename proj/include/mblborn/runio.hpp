#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "mblborn/trainer.hpp"

namespace mblborn {

/// Doubles are emitted with 17 significant digits so that equal runs produce
/// byte-identical CSVs.
std::string format_g17(double v);

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);
  void row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
};

void write_trace_csv(const std::filesystem::path& dir, const TrainingTrace& trace);
void write_theta_csv(const std::filesystem::path& dir, const TrainingTrace& trace);
void write_chosen_csv(const std::filesystem::path& dir, const TrainingTrace& trace);

/// p_0..p_M, one labeled row per quench.
void write_quench_distributions_csv(const std::filesystem::path& dir,
                                    const TrainingTrace& trace);

void write_state_checkpoints(const std::filesystem::path& dir,
                             const TrainingTrace& trace);

/// Reads back what write_* persisted; candidate_losses are not stored and
/// stay empty. Enough state for retrieval replay.
TrainingTrace load_trace(const std::filesystem::path& dir);

void write_manifest(const std::filesystem::path& dir, const std::string& experiment,
                    std::uint64_t seed);

}  // namespace mblborn
