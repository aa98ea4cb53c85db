#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mblborn/datasets.hpp"
#include "mblborn/trainer.hpp"

namespace mblborn {

/// Full experiment description: training parameters, target selection, and
/// sweep grids. Parsed strictly (unknown keys rejected); serialization
/// materializes every default so that parse -> serialize is idempotent.
struct RunConfig {
  std::string experiment = "train";
  std::string out_dir = "runs/run";
  TrainConfig train;
  std::vector<int> hidden_sites;  ///< empty: last L_h sites

  std::string target_type = "digit";  ///< digit|superposition|parity|quantum|csv
  std::vector<int> target_digits{0};
  std::string patterns_csv = "data/toy_digits_8x8.csv";
  double target_disorder = 8.0;   ///< quantum target quench strength
  double target_time = -1.0;      ///< quantum target duration; <0: train time
  std::uint64_t target_seed = 7;  ///< quantum target field stream
  std::string target_csv_path;
  std::string target_csv_label;

  int realizations = 5;
  std::vector<double> h_grid{0.5, 8.0};
  std::vector<int> sizes{8, 10, 12};
  bool emit_plots = true;
};

RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& cfg);
void save_run_config(const std::filesystem::path& path, const RunConfig& cfg);

/// Builds the training target for the configured dataset.
Pattern build_target(const RunConfig& cfg);
std::string target_label(const RunConfig& cfg);

}  // namespace mblborn
