// mbl-born: disordered-chain Born machine experiments (training, model
// comparison, phase sweeps, spectral diagnostics, pattern retrieval, data
// generation). Exit codes: 0 ok, 2 bad config/arguments, 3 numeric failure,
// 4 missing run artifacts.
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <omp.h>

#include "mblborn/config.hpp"
#include "mblborn/errors.hpp"
#include "mblborn/experiments.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_override;
  std::optional<std::uint64_t> seed_override;
  int threads = 0;
  bool no_plots = false;
  bool dry_run = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_config = true) {
  auto* opt = cmd->add_option("--config", args.config_path, "JSON run config");
  if (needs_config) opt->required();
  cmd->add_option("--out", args.out_override, "output directory override");
  cmd->add_option("--seed", args.seed_override, "seed override");
  cmd->add_option("--threads", args.threads,
                  "worker threads (default: hardware, or MBL_BORN_THREADS)");
  cmd->add_flag("--no-plots", args.no_plots, "skip SVG rendering");
  cmd->add_flag("--dry-run", args.dry_run, "validate the config and exit");
}

void apply_threads(const CommonArgs& args) {
  int threads = args.threads;
  if (threads <= 0) {
    if (const char* env = std::getenv("MBL_BORN_THREADS"))
      threads = std::atoi(env);
  }
  if (threads > 0) omp_set_num_threads(threads);
}

mblborn::RunConfig load_with_overrides(const CommonArgs& args,
                                       const std::string& experiment) {
  mblborn::RunConfig cfg = mblborn::load_run_config(args.config_path);
  cfg.experiment = experiment;
  if (!args.out_override.empty()) cfg.out_dir = args.out_override;
  if (args.seed_override) cfg.train.seed = *args.seed_override;
  if (args.no_plots) cfg.emit_plots = false;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"many-body-localized hidden Born machine toolkit"};
  app.require_subcommand(1);

  CommonArgs train_args, compare_args, phase_args, diagnose_args, gen_args;
  auto* cmd_train = app.add_subcommand("train", "greedy Monte Carlo training");
  add_common(cmd_train, train_args);
  auto* cmd_compare =
      app.add_subcommand("compare-models", "basic vs driven vs hidden");
  add_common(cmd_compare, compare_args);
  auto* cmd_phase =
      app.add_subcommand("phase-sweep", "terminal loss across disorder");
  add_common(cmd_phase, phase_args);
  auto* cmd_diagnose =
      app.add_subcommand("diagnose", "gap ratios and entropy scaling");
  add_common(cmd_diagnose, diagnose_args);

  CommonArgs recog_args;
  std::string run_dir, mask_spec = "rows:4-7", clean_csv, clean_label;
  auto* cmd_recognize =
      app.add_subcommand("recognize", "retrieve a pattern from a stored run");
  cmd_recognize->add_option("--run", run_dir, "training run directory")->required();
  cmd_recognize->add_option("--mask", mask_spec,
                            "corruption mask (none|rows:a-b|cols:a-b|"
                            "pixels:i,j|random:count:seed)");
  cmd_recognize->add_option("--clean-csv", clean_csv,
                            "external clean pattern CSV (default: run target)");
  cmd_recognize->add_option("--clean-label", clean_label,
                            "row label inside --clean-csv");
  cmd_recognize->add_option("--threads", recog_args.threads, "worker threads");

  std::string idx_images, idx_labels;
  auto* cmd_gen = app.add_subcommand("gen-data", "write dataset patterns");
  add_common(cmd_gen, gen_args, /*needs_config=*/false);
  cmd_gen->add_option("--images", idx_images, "IDX image file (fixture mode)");
  cmd_gen->add_option("--labels", idx_labels, "IDX label file (fixture mode)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_train->parsed()) {
      apply_threads(train_args);
      const auto cfg = load_with_overrides(train_args, "train");
      if (train_args.dry_run) {
        std::cout << "config ok\n";
        return 0;
      }
      mblborn::run_train_experiment(cfg);
    } else if (cmd_compare->parsed()) {
      apply_threads(compare_args);
      const auto cfg = load_with_overrides(compare_args, "compare-models");
      if (compare_args.dry_run) {
        std::cout << "config ok\n";
        return 0;
      }
      mblborn::run_compare_models(cfg);
    } else if (cmd_phase->parsed()) {
      apply_threads(phase_args);
      const auto cfg = load_with_overrides(phase_args, "phase-sweep");
      if (phase_args.dry_run) {
        std::cout << "config ok\n";
        return 0;
      }
      mblborn::run_phase_sweep(cfg);
    } else if (cmd_diagnose->parsed()) {
      apply_threads(diagnose_args);
      const auto cfg = load_with_overrides(diagnose_args, "diagnose");
      if (diagnose_args.dry_run) {
        std::cout << "config ok\n";
        return 0;
      }
      mblborn::run_diagnose(cfg);
    } else if (cmd_recognize->parsed()) {
      apply_threads(recog_args);
      mblborn::RecognizeOptions opts;
      opts.run_dir = run_dir;
      opts.mask_spec = mask_spec;
      opts.clean_csv = clean_csv;
      opts.clean_label = clean_label;
      mblborn::run_recognize(opts);
    } else if (cmd_gen->parsed()) {
      apply_threads(gen_args);
      mblborn::RunConfig cfg;
      if (!gen_args.config_path.empty())
        cfg = load_with_overrides(gen_args, "gen-data");
      else if (!gen_args.out_override.empty())
        cfg.out_dir = gen_args.out_override;
      if (gen_args.dry_run) {
        std::cout << "config ok\n";
        return 0;
      }
      mblborn::run_gen_data(cfg, idx_images, idx_labels);
    }
  } catch (const mblborn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const mblborn::InvalidSpec& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const mblborn::DimensionError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const mblborn::FormatError& e) {
    std::cerr << "missing/malformed run artifact: " << e.what() << '\n';
    return 4;
  } catch (const mblborn::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 3;
  } catch (const mblborn::ConvergenceError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
