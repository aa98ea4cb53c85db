#include "mblborn/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

#include "mblborn/diagnostics.hpp"
#include "mblborn/errors.hpp"
#include "mblborn/recognition.hpp"
#include "mblborn/svg.hpp"

namespace mblborn {

namespace fs = std::filesystem;

namespace {

void write_pattern_row(const fs::path& path, const std::string& label,
                       const Pattern& xi) {
  save_pattern_csv(path.string(), {{label, xi}});
}

struct SeriesStats {
  std::vector<double> mean;
  std::vector<double> stdev;
};

SeriesStats mean_std_over_seeds(const std::vector<std::vector<double>>& curves) {
  SeriesStats out;
  if (curves.empty()) return out;
  const std::size_t len = curves.front().size();
  out.mean.assign(len, 0.0);
  out.stdev.assign(len, 0.0);
  for (const auto& c : curves)
    for (std::size_t i = 0; i < len; ++i) out.mean[i] += c[i];
  for (double& v : out.mean) v /= static_cast<double>(curves.size());
  if (curves.size() > 1) {
    for (const auto& c : curves)
      for (std::size_t i = 0; i < len; ++i) {
        const double d = c[i] - out.mean[i];
        out.stdev[i] += d * d;
      }
    for (double& v : out.stdev)
      v = std::sqrt(v / static_cast<double>(curves.size() - 1));
  }
  return out;
}

}  // namespace

PureState initial_hidden_state(const TrainConfig& cfg) {
  const int n_hidden = cfg.partition.n_hidden();
  const Eigen::Index dim = Eigen::Index(1) << n_hidden;
  switch (cfg.initial_state) {
    case InitialStateKind::plus_product:
      return PureState::Constant(dim, std::pow(2.0, -0.5 * n_hidden));
    case InitialStateKind::neel: {
      std::uint32_t h = 0;
      for (int k = 0; k < n_hidden; ++k)
        if (cfg.partition.hidden_sites[k] % 2 == 0)
          h |= 1u << (n_hidden - 1 - k);
      PureState psi = PureState::Zero(dim);
      psi[h] = 1.0;
      return psi;
    }
    case InitialStateKind::custom:
      throw InvalidSpec(
          "retrieval needs a product initial state (plus or neel)");
  }
  throw InvalidSpec("unknown initial state kind");
}

TrainingTrace run_train_experiment(const RunConfig& cfg) {
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);

  const Pattern target = build_target(cfg);
  const TrainingTrace trace = train(cfg.train, target);

  save_run_config(dir / "config.json", cfg);
  write_manifest(dir, cfg.experiment, cfg.train.seed);
  write_trace_csv(dir, trace);
  write_theta_csv(dir, trace);
  write_chosen_csv(dir, trace);
  write_quench_distributions_csv(dir, trace);
  write_state_checkpoints(dir, trace);
  write_pattern_row(dir / "p_model.csv", "p_model", trace.final_distribution);
  write_pattern_row(dir / "p_target.csv", target_label(cfg), target);

  if (cfg.emit_plots) {
    fs::create_directories(dir / "plots");
    SvgSeries loss{"loss", {}, {}, ""}, entropy{"entropy", {}, {}, ""},
        hamming{"hamming", {}, {}, ""};
    for (const auto& r : trace.records) {
      const double m = static_cast<double>(r.m + 1);
      loss.x.push_back(m);
      loss.y.push_back(r.loss);
      entropy.x.push_back(m);
      entropy.y.push_back(r.entropy);
      hamming.x.push_back(m);
      hamming.y.push_back(r.hamming);
    }
    write_line_svg((dir / "plots" / "loss.svg").string(), "training loss",
                   "quench m", "log10 MMD", {loss}, true);
    write_line_svg((dir / "plots" / "entropy.svg").string(),
                   "half-chain entanglement entropy", "quench m", "S", {entropy});
    write_line_svg((dir / "plots" / "hamming.svg").string(), "Hamming distance",
                   "quench m", "D", {hamming});
  }
  return trace;
}

void run_compare_models(const RunConfig& cfg) {
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  const Pattern target = build_target(cfg);
  const int n_visible = cfg.train.partition.n_visible();

  struct VariantRuns {
    std::string name;
    Variant variant;
    std::vector<std::vector<double>> loss_curves;
    std::vector<double> terminal;
  };
  std::vector<VariantRuns> runs{{"bm", Variant::basic, {}, {}},
                                {"rdbm", Variant::rdbm, {}, {}},
                                {"hbm", Variant::hidden, {}, {}}};

  for (auto& vr : runs) {
    for (int r = 0; r < cfg.realizations; ++r) {
      TrainConfig tc = cfg.train;
      tc.variant = vr.variant;
      tc.seed = cfg.train.seed + static_cast<std::uint64_t>(r);
      if (vr.variant != Variant::hidden) {
        // basic and randomly driven models carry no hidden units
        tc.partition = Partition::contiguous(n_visible, 0);
        tc.chain.n_sites = n_visible;
      }
      const TrainingTrace trace = train(tc, target);
      std::vector<double> curve;
      curve.reserve(trace.records.size());
      for (const auto& rec : trace.records) curve.push_back(rec.loss);
      vr.terminal.push_back(curve.back());
      vr.loss_curves.push_back(std::move(curve));
    }
  }

  save_run_config(dir / "config.json", cfg);
  write_manifest(dir, cfg.experiment, cfg.train.seed);
  write_pattern_row(dir / "p_target.csv", target_label(cfg), target);

  CsvWriter csv(dir / "compare.csv");
  csv.row({"m", "variant", "mean_log_loss", "std"});
  std::vector<SvgSeries> curves;
  for (const auto& vr : runs) {
    std::vector<std::vector<double>> logs = vr.loss_curves;
    for (auto& c : logs)
      for (double& v : c) v = std::log(std::max(v, 1e-300));
    const SeriesStats stats = mean_std_over_seeds(logs);
    SvgSeries series{vr.name, {}, {}, ""};
    for (std::size_t m = 0; m < stats.mean.size(); ++m) {
      csv.row({std::to_string(m + 1), vr.name, format_g17(stats.mean[m]),
               format_g17(stats.stdev[m])});
      series.x.push_back(static_cast<double>(m + 1));
      series.y.push_back(std::exp(stats.mean[m]));
    }
    curves.push_back(std::move(series));
  }

  CsvWriter term(dir / "compare_terminal.csv");
  term.row({"variant", "mean_terminal_loss", "std_terminal_loss"});
  for (const auto& vr : runs) {
    const double mean =
        std::accumulate(vr.terminal.begin(), vr.terminal.end(), 0.0) /
        static_cast<double>(vr.terminal.size());
    double var = 0.0;
    for (double v : vr.terminal) var += (v - mean) * (v - mean);
    var = vr.terminal.size() > 1 ? var / static_cast<double>(vr.terminal.size() - 1)
                                 : 0.0;
    term.row({vr.name, format_g17(mean), format_g17(std::sqrt(var))});
    std::cout << vr.name << ": terminal MMD " << mean << " +- "
              << std::sqrt(var) << '\n';
  }

  if (cfg.emit_plots) {
    fs::create_directories(dir / "plots");
    write_line_svg((dir / "plots" / "compare.svg").string(),
                   "model comparison (seed-mean loss)", "quench m", "log10 MMD",
                   curves, true);
  }
}

void run_phase_sweep(const RunConfig& cfg) {
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  const Pattern target = build_target(cfg);
  if (cfg.h_grid.empty()) throw ConfigError("phase sweep needs a disorder grid");

  const double h_lo = *std::min_element(cfg.h_grid.begin(), cfg.h_grid.end());
  const double h_hi = *std::max_element(cfg.h_grid.begin(), cfg.h_grid.end());

  save_run_config(dir / "config.json", cfg);
  write_manifest(dir, cfg.experiment, cfg.train.seed);
  write_pattern_row(dir / "p_target.csv", target_label(cfg), target);

  CsvWriter phase(dir / "phase.csv");
  phase.row({"h_d", "mean_terminal_loss", "std_terminal_loss", "seeds"});
  CsvWriter traj(dir / "trajectories.csv");
  traj.row({"h_d", "seed", "m", "loss", "entropy", "hamming"});

  std::vector<SvgSeries> hamming_series, entropy_series;
  SvgSeries phase_curve{"terminal MMD", {}, {}, ""};

  for (double h : cfg.h_grid) {
    std::vector<double> terminal;
    for (int r = 0; r < cfg.realizations; ++r) {
      TrainConfig tc = cfg.train;
      tc.disorder = h;
      tc.seed = cfg.train.seed + static_cast<std::uint64_t>(r);
      const TrainingTrace trace = train(tc, target);
      terminal.push_back(trace.records.back().loss);

      if (h == h_lo || h == h_hi) {
        for (const auto& rec : trace.records)
          traj.row({format_g17(h), std::to_string(r), std::to_string(rec.m + 1),
                    format_g17(rec.loss), format_g17(rec.entropy),
                    format_g17(rec.hamming)});
        if (r == 0) {
          SvgSeries hs{"h=" + format_g17(h), {}, {}, ""};
          SvgSeries es{"h=" + format_g17(h), {}, {}, ""};
          for (const auto& rec : trace.records) {
            hs.x.push_back(rec.m + 1);
            hs.y.push_back(rec.hamming);
            es.x.push_back(rec.m + 1);
            es.y.push_back(rec.entropy);
          }
          hamming_series.push_back(std::move(hs));
          entropy_series.push_back(std::move(es));
        }
      }
    }
    const double mean = std::accumulate(terminal.begin(), terminal.end(), 0.0) /
                        static_cast<double>(terminal.size());
    double var = 0.0;
    for (double v : terminal) var += (v - mean) * (v - mean);
    var = terminal.size() > 1 ? var / static_cast<double>(terminal.size() - 1) : 0.0;
    phase.row({format_g17(h), format_g17(mean), format_g17(std::sqrt(var)),
               std::to_string(cfg.realizations)});
    phase_curve.x.push_back(h);
    phase_curve.y.push_back(mean);
    std::cout << "h_d=" << h << ": terminal MMD " << mean << " +- "
              << std::sqrt(var) << '\n';
  }

  if (cfg.emit_plots) {
    fs::create_directories(dir / "plots");
    write_line_svg((dir / "plots" / "phase.svg").string(),
                   "terminal loss vs disorder", "h_d", "log10 MMD",
                   {phase_curve}, true);
    write_line_svg((dir / "plots" / "hamming.svg").string(),
                   "Hamming trajectories", "quench m", "D", hamming_series);
    write_line_svg((dir / "plots" / "entropy.svg").string(),
                   "entropy trajectories", "quench m", "S", entropy_series);
  }
}

void run_diagnose(const RunConfig& cfg) {
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  save_run_config(dir / "config.json", cfg);
  write_manifest(dir, cfg.experiment, cfg.train.seed);

  constexpr int kBins = 20;
  CsvWriter levels(dir / "levels.csv");
  levels.row({"h_d", "bin_lo", "bin_hi", "count", "mean_r", "n_values"});
  std::vector<std::vector<double>> histograms;
  std::vector<std::string> labels;

  for (double h : cfg.h_grid) {
    const LevelStatistics stats = level_spacing_ratios(
        cfg.train.chain, h, cfg.realizations, cfg.train.seed);
    std::vector<double> counts(kBins, 0.0);
    for (double r : stats.r_values)
      counts[std::min(kBins - 1, static_cast<int>(r * kBins))] += 1.0;
    for (int b = 0; b < kBins; ++b)
      levels.row({format_g17(h), format_g17(b / double(kBins)),
                  format_g17((b + 1) / double(kBins)), format_g17(counts[b]),
                  format_g17(stats.mean_r),
                  std::to_string(stats.r_values.size())});
    histograms.push_back(std::move(counts));
    labels.push_back("h=" + format_g17(h));
    std::cout << "h_d=" << h << ": <r> = " << stats.mean_r << " ("
              << stats.r_values.size() << " ratios)\n";
  }

  const auto rows = entropy_scaling_sweep(cfg.sizes, cfg.h_grid,
                                          cfg.realizations, cfg.train.seed,
                                          cfg.train.chain.j_xy,
                                          cfg.train.chain.j_zz);
  CsvWriter scaling(dir / "scaling.csv");
  scaling.row({"L", "h", "S_per_site", "stderr"});
  std::vector<SvgSeries> scaling_series;
  for (double h : cfg.h_grid) {
    SvgSeries s{"h=" + format_g17(h), {}, {}, ""};
    for (const auto& row : rows)
      if (row.disorder == h) {
        scaling.row({std::to_string(row.n_sites), format_g17(row.disorder),
                     format_g17(row.entropy_per_site), format_g17(row.std_error)});
        s.x.push_back(row.n_sites);
        s.y.push_back(row.entropy_per_site);
      }
    scaling_series.push_back(std::move(s));
  }

  if (cfg.emit_plots) {
    fs::create_directories(dir / "plots");
    write_histogram_svg((dir / "plots" / "levels.svg").string(),
                        "gap-ratio statistics", "r", 0.0, 1.0, histograms,
                        labels);
    write_line_svg((dir / "plots" / "scaling.svg").string(),
                   "entropy per site vs system size", "L", "S/L",
                   scaling_series);
  }
}

std::vector<int> parse_mask_spec(const std::string& spec, int n_visible) {
  const Eigen::Index dim = Eigen::Index(1) << n_visible;
  if (n_visible % 2 != 0)
    throw ConfigError("mask specs assume a square image (even L_v)");
  const int side = 1 << (n_visible / 2);
  if (spec.empty() || spec == "none") return {};

  const auto split = [&](const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
  };
  const auto parts = split(spec, ':');
  try {
    if (parts[0] == "rows" && parts.size() == 2) {
      const auto range = split(parts[1], '-');
      const int a = std::stoi(range.at(0));
      const int b = range.size() > 1 ? std::stoi(range.at(1)) : a;
      if (a < 0 || b >= side || a > b) throw ConfigError("row range out of bounds");
      std::vector<int> mask;
      for (int r = a; r <= b; ++r)
        for (int c = 0; c < side; ++c) mask.push_back(r * side + c);
      return mask;
    }
    if (parts[0] == "cols" && parts.size() == 2) {
      const auto range = split(parts[1], '-');
      const int a = std::stoi(range.at(0));
      const int b = range.size() > 1 ? std::stoi(range.at(1)) : a;
      if (a < 0 || b >= side || a > b) throw ConfigError("col range out of bounds");
      std::vector<int> mask;
      for (int r = 0; r < side; ++r)
        for (int c = a; c <= b; ++c) mask.push_back(r * side + c);
      return mask;
    }
    if (parts[0] == "pixels" && parts.size() == 2) {
      std::vector<int> mask;
      for (const auto& tok : split(parts[1], ',')) {
        const int p = std::stoi(tok);
        if (p < 0 || p >= dim) throw ConfigError("pixel index out of bounds");
        mask.push_back(p);
      }
      return mask;
    }
    if (parts[0] == "random" && parts.size() == 3) {
      const int count = std::stoi(parts[1]);
      if (count < 0 || count >= dim)
        throw ConfigError("random mask count out of bounds");
      Rng rng = derived_rng(std::stoull(parts[2]), 0xc0de);
      std::vector<int> all(dim);
      std::iota(all.begin(), all.end(), 0);
      for (int k = 0; k < count; ++k) {
        // Fisher-Yates prefix with our deterministic stream
        const int j = k + static_cast<int>(rng.uniform01() * (dim - k));
        std::swap(all[k], all[std::min<int>(j, dim - 1)]);
      }
      return std::vector<int>(all.begin(), all.begin() + count);
    }
  } catch (const std::invalid_argument&) {
    throw ConfigError("malformed mask spec '" + spec + "'");
  } catch (const std::out_of_range&) {
    throw ConfigError("malformed mask spec '" + spec + "'");
  }
  throw ConfigError("malformed mask spec '" + spec + "'");
}

RecognizeReport run_recognize(const RecognizeOptions& opts) {
  const fs::path dir = opts.run_dir;
  if (!fs::exists(dir / "p_quench.csv") || !fs::exists(dir / "theta.csv"))
    throw FormatError(dir.string() + ": missing training checkpoints");

  const RunConfig cfg = load_run_config(dir / "config.json");
  const TrainingTrace trace = load_trace(dir);

  Pattern clean;
  if (!opts.clean_csv.empty()) {
    const auto rows = load_pattern_csv(opts.clean_csv);
    clean = opts.clean_label.empty() ? rows.at(0).values
                                     : pattern_by_label(rows, opts.clean_label);
  } else {
    clean = load_pattern_csv((dir / "p_target.csv").string()).at(0).values;
  }

  const auto mask = parse_mask_spec(opts.mask_spec,
                                    cfg.train.partition.n_visible());
  const Pattern corrupted = mask.empty() ? clean : corrupt_pattern(clean, mask);
  const RetrievalResult result =
      retrieve(trace, corrupted, initial_hidden_state(cfg.train));

  RecognizeReport report;
  report.fidelity_corrupted_clean = classical_fidelity(corrupted, clean);
  report.fidelity_retrieved_clean = classical_fidelity(result.retrieved, clean);
  report.m_star = result.m_star;

  save_pattern_csv((dir / "retrieved.csv").string(),
                   {{"clean", clean},
                    {"corrupted", corrupted},
                    {"retrieved", result.retrieved}});
  CsvWriter csv(dir / "report.csv");
  csv.row({"fidelity_corrupted_clean", "fidelity_retrieved_clean", "m_star"});
  csv.row({format_g17(report.fidelity_corrupted_clean),
           format_g17(report.fidelity_retrieved_clean),
           std::to_string(report.m_star)});
  std::cout << "m* = " << report.m_star
            << ", F(corrupted, clean) = " << report.fidelity_corrupted_clean
            << ", F(retrieved, clean) = " << report.fidelity_retrieved_clean
            << '\n';
  return report;
}

void run_gen_data(const RunConfig& cfg, const std::string& idx_images,
                  const std::string& idx_labels) {
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);

  if (!idx_images.empty() || !idx_labels.empty()) {
    if (idx_images.empty() || idx_labels.empty())
      throw ConfigError("gen-data needs both --images and --labels");
    const LabeledImageSet set = load_mnist_idx(idx_images, idx_labels);
    std::vector<LabeledPattern> rows;
    for (int digit = 0; digit <= 9; ++digit) {
      std::vector<GrayImage> klass;
      for (std::size_t k = 0; k < set.images.size(); ++k)
        if (set.labels[k] == digit) klass.push_back(set.images[k]);
      if (klass.empty()) continue;
      rows.push_back({std::to_string(digit), toy_digit_pattern(klass, 6)});
    }
    save_pattern_csv((dir / "toy_digits_8x8.csv").string(), rows);
    std::cout << "wrote " << rows.size() << " class-mean patterns to "
              << (dir / "toy_digits_8x8.csv") << '\n';
    return;
  }

  const Pattern target = build_target(cfg);
  write_pattern_row(dir / "pattern.csv", target_label(cfg), target);
  std::cout << "wrote " << target_label(cfg) << " pattern to "
            << (dir / "pattern.csv") << '\n';
}

}  // namespace mblborn
