#include "mblborn/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "mblborn/errors.hpp"

namespace mblborn {

namespace {

using nlohmann::json;

void expect_keys(const json& j, const std::set<std::string>& allowed,
                 const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key))
      throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("key '" + key + "' has the wrong type");
  }
}

Partition make_partition(int n_visible, int n_hidden,
                         const std::vector<int>& hidden_sites) {
  if (hidden_sites.empty()) return Partition::contiguous(n_visible, n_hidden);
  if (static_cast<int>(hidden_sites.size()) != n_hidden)
    throw ConfigError("hidden_sites length must equal chain.hidden");
  Partition part;
  part.hidden_sites = hidden_sites;
  const int L = n_visible + n_hidden;
  for (int s = 1; s <= L; ++s)
    if (std::find(hidden_sites.begin(), hidden_sites.end(), s) ==
        hidden_sites.end())
      part.visible_sites.push_back(s);
  validate_partition(part);
  return part;
}

}  // namespace

RunConfig parse_run_config(const json& j) {
  expect_keys(j,
              {"experiment", "out", "seed", "chain", "hidden_sites", "quenches",
               "candidates", "disorder", "quench_time", "initial_state",
               "variant", "engine", "kernel", "rdbm", "checkpoint_stride",
               "target", "realizations", "h_grid", "sizes", "emit_plots"},
              "config");
  RunConfig cfg;
  cfg.experiment = get_or<std::string>(j, "experiment", "train");
  const std::set<std::string> known_experiments{
      "train", "compare-models", "phase-sweep", "diagnose", "recognize",
      "gen-data"};
  if (!known_experiments.count(cfg.experiment))
    throw ConfigError("unknown experiment '" + cfg.experiment + "'");
  cfg.out_dir = get_or<std::string>(j, "out", "runs/" + cfg.experiment);
  cfg.train.seed = get_or<std::uint64_t>(j, "seed", 0);

  int n_visible = 6, n_hidden = 2;
  if (j.contains("chain")) {
    const json& c = j.at("chain");
    expect_keys(c, {"visible", "hidden", "j_xy", "j_zz", "boundary"},
                "config.chain");
    n_visible = get_or<int>(c, "visible", 6);
    n_hidden = get_or<int>(c, "hidden", 2);
    cfg.train.chain.j_xy = get_or<double>(c, "j_xy", 1.0);
    cfg.train.chain.j_zz = get_or<double>(c, "j_zz", 1.0);
    const std::string boundary = get_or<std::string>(c, "boundary", "open");
    if (boundary == "open")
      cfg.train.chain.boundary = Boundary::open;
    else if (boundary == "periodic")
      cfg.train.chain.boundary = Boundary::periodic;
    else
      throw ConfigError("chain.boundary must be 'open' or 'periodic'");
  }
  if (n_visible < 1 || n_hidden < 0)
    throw ConfigError("chain.visible must be >= 1 and chain.hidden >= 0");
  cfg.train.chain.n_sites = n_visible + n_hidden;
  cfg.hidden_sites = get_or<std::vector<int>>(j, "hidden_sites", {});
  cfg.train.partition = make_partition(n_visible, n_hidden, cfg.hidden_sites);

  cfg.train.n_quenches = get_or<int>(j, "quenches", 100);
  cfg.train.n_candidates = get_or<int>(j, "candidates", 500);
  cfg.train.disorder = get_or<double>(j, "disorder", 8.0);
  cfg.train.quench_time = get_or<double>(j, "quench_time", 10.0);
  cfg.train.checkpoint_stride = get_or<int>(j, "checkpoint_stride", 0);

  const std::string initial = get_or<std::string>(j, "initial_state", "plus");
  if (initial == "plus")
    cfg.train.initial_state = InitialStateKind::plus_product;
  else if (initial == "neel")
    cfg.train.initial_state = InitialStateKind::neel;
  else
    throw ConfigError("initial_state must be 'plus' or 'neel'");

  const std::string variant = get_or<std::string>(j, "variant", "hidden");
  if (variant == "basic")
    cfg.train.variant = Variant::basic;
  else if (variant == "hidden")
    cfg.train.variant = Variant::hidden;
  else if (variant == "rdbm")
    cfg.train.variant = Variant::rdbm;
  else
    throw ConfigError("variant must be 'basic', 'hidden' or 'rdbm'");

  const std::string engine = get_or<std::string>(j, "engine", "blocked");
  if (engine == "blocked")
    cfg.train.engine = Engine::blocked;
  else if (engine == "dense")
    cfg.train.engine = Engine::dense;
  else if (engine == "krylov")
    cfg.train.engine = Engine::krylov;
  else
    throw ConfigError("engine must be 'blocked', 'dense' or 'krylov'");

  if (j.contains("kernel")) {
    const json& k = j.at("kernel");
    expect_keys(k, {"bandwidths", "metric"}, "config.kernel");
    cfg.train.kernel.bandwidths = get_or<std::vector<double>>(
        k, "bandwidths", {0.1, 0.25, 4.0, 10.0});
    if (cfg.train.kernel.bandwidths.empty() ||
        std::any_of(cfg.train.kernel.bandwidths.begin(),
                    cfg.train.kernel.bandwidths.end(),
                    [](double s2) { return !(s2 > 0.0); }))
      throw ConfigError("kernel.bandwidths must be positive");
    const std::string metric = get_or<std::string>(k, "metric", "index");
    if (metric == "index")
      cfg.train.kernel.metric = KernelSpec::Metric::index;
    else if (metric == "hamming")
      cfg.train.kernel.metric = KernelSpec::Metric::hamming;
    else
      throw ConfigError("kernel.metric must be 'index' or 'hamming'");
  }

  if (j.contains("rdbm")) {
    const json& r = j.at("rdbm");
    expect_keys(r, {"noise", "tau", "scale_by_tau"}, "config.rdbm");
    cfg.train.rdbm.noise_amplitude = get_or<double>(r, "noise", 0.005);
    cfg.train.rdbm.tau = get_or<double>(r, "tau", 0.0);
    cfg.train.rdbm.scale_by_tau = get_or<bool>(r, "scale_by_tau", false);
    if (cfg.train.rdbm.noise_amplitude < 0.0)
      throw ConfigError("rdbm.noise must be >= 0");
    if (cfg.train.rdbm.tau < 0.0) throw ConfigError("rdbm.tau must be >= 0");
  }

  if (j.contains("target")) {
    const json& t = j.at("target");
    expect_keys(t,
                {"type", "digits", "patterns_csv", "disorder", "quench_time",
                 "seed", "path", "label"},
                "config.target");
    cfg.target_type = get_or<std::string>(t, "type", "digit");
    const std::set<std::string> known_targets{"digit", "superposition",
                                              "parity", "quantum", "csv"};
    if (!known_targets.count(cfg.target_type))
      throw ConfigError("unknown target.type '" + cfg.target_type + "'");
    cfg.target_digits = get_or<std::vector<int>>(t, "digits", {0});
    cfg.patterns_csv =
        get_or<std::string>(t, "patterns_csv", "data/toy_digits_8x8.csv");
    cfg.target_disorder = get_or<double>(t, "disorder", 8.0);
    cfg.target_time = get_or<double>(t, "quench_time", -1.0);
    cfg.target_seed = get_or<std::uint64_t>(t, "seed", 7);
    cfg.target_csv_path = get_or<std::string>(t, "path", "");
    cfg.target_csv_label = get_or<std::string>(t, "label", "");
    for (int d : cfg.target_digits)
      if (d < 0 || d > 9) throw ConfigError("target.digits must be 0..9");
  }

  cfg.realizations = get_or<int>(j, "realizations", 5);
  if (cfg.realizations < 1) throw ConfigError("realizations must be >= 1");
  cfg.h_grid = get_or<std::vector<double>>(j, "h_grid", {0.5, 8.0});
  cfg.sizes = get_or<std::vector<int>>(j, "sizes", {8, 10, 12});
  cfg.emit_plots = get_or<bool>(j, "emit_plots", true);

  if (cfg.train.n_quenches < 1) throw ConfigError("quenches must be >= 1");
  if (cfg.train.n_candidates < 1) throw ConfigError("candidates must be >= 1");
  if (cfg.train.disorder < 0.0) throw ConfigError("disorder must be >= 0");
  if (cfg.train.quench_time < 0.0) throw ConfigError("quench_time must be >= 0");
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_run_config(j);
}

nlohmann::json to_json(const RunConfig& cfg) {
  json j;
  j["experiment"] = cfg.experiment;
  j["out"] = cfg.out_dir;
  j["seed"] = cfg.train.seed;
  j["chain"] = {
      {"visible", cfg.train.partition.n_visible()},
      {"hidden", cfg.train.partition.n_hidden()},
      {"j_xy", cfg.train.chain.j_xy},
      {"j_zz", cfg.train.chain.j_zz},
      {"boundary",
       cfg.train.chain.boundary == Boundary::open ? "open" : "periodic"},
  };
  j["hidden_sites"] = cfg.hidden_sites;
  j["quenches"] = cfg.train.n_quenches;
  j["candidates"] = cfg.train.n_candidates;
  j["disorder"] = cfg.train.disorder;
  j["quench_time"] = cfg.train.quench_time;
  j["initial_state"] =
      cfg.train.initial_state == InitialStateKind::plus_product ? "plus" : "neel";
  switch (cfg.train.variant) {
    case Variant::basic: j["variant"] = "basic"; break;
    case Variant::hidden: j["variant"] = "hidden"; break;
    case Variant::rdbm: j["variant"] = "rdbm"; break;
  }
  switch (cfg.train.engine) {
    case Engine::blocked: j["engine"] = "blocked"; break;
    case Engine::dense: j["engine"] = "dense"; break;
    case Engine::krylov: j["engine"] = "krylov"; break;
  }
  j["kernel"] = {
      {"bandwidths", cfg.train.kernel.bandwidths},
      {"metric",
       cfg.train.kernel.metric == KernelSpec::Metric::index ? "index" : "hamming"},
  };
  j["rdbm"] = {
      {"noise", cfg.train.rdbm.noise_amplitude},
      {"tau", cfg.train.rdbm.tau},
      {"scale_by_tau", cfg.train.rdbm.scale_by_tau},
  };
  j["checkpoint_stride"] = cfg.train.checkpoint_stride;
  j["target"] = {
      {"type", cfg.target_type},
      {"digits", cfg.target_digits},
      {"patterns_csv", cfg.patterns_csv},
      {"disorder", cfg.target_disorder},
      {"quench_time", cfg.target_time},
      {"seed", cfg.target_seed},
      {"path", cfg.target_csv_path},
      {"label", cfg.target_csv_label},
  };
  j["realizations"] = cfg.realizations;
  j["h_grid"] = cfg.h_grid;
  j["sizes"] = cfg.sizes;
  j["emit_plots"] = cfg.emit_plots;
  return j;
}

void save_run_config(const std::filesystem::path& path, const RunConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw ConfigError(path.string() + ": cannot open for writing");
  out << to_json(cfg).dump(2) << '\n';
}

Pattern build_target(const RunConfig& cfg) {
  const int n_visible = cfg.train.partition.n_visible();
  if (cfg.target_type == "parity") return parity_dataset(n_visible);
  if (cfg.target_type == "quantum") {
    Rng rng = derived_rng(cfg.target_seed, 0);
    const double t = cfg.target_time >= 0.0 ? cfg.target_time : cfg.train.quench_time;
    return quantum_target(n_visible, cfg.target_disorder, cfg.train.chain, t, rng);
  }
  if (cfg.target_type == "csv") {
    const auto rows = load_pattern_csv(cfg.target_csv_path);
    Pattern xi = cfg.target_csv_label.empty() ? rows.at(0).values
                                              : pattern_by_label(rows, cfg.target_csv_label);
    if (xi.size() != Eigen::Index(1) << n_visible)
      throw ConfigError("target pattern length does not match visible sites");
    return xi;
  }
  // digit / superposition
  const auto rows = load_pattern_csv(cfg.patterns_csv);
  std::vector<Pattern> parts;
  for (int d : cfg.target_digits)
    parts.push_back(pattern_by_label(rows, std::to_string(d)));
  if (cfg.target_type == "digit" && parts.size() != 1)
    throw ConfigError("target.type 'digit' takes exactly one digit");
  Pattern xi = superpose_patterns(parts);
  if (xi.size() != Eigen::Index(1) << n_visible)
    throw ConfigError("target pattern length does not match visible sites");
  return xi;
}

std::string target_label(const RunConfig& cfg) {
  if (cfg.target_type == "digit") return "digit" + std::to_string(cfg.target_digits.at(0));
  if (cfg.target_type == "superposition") {
    std::string label = "digits";
    for (int d : cfg.target_digits) label += std::to_string(d);
    return label;
  }
  if (cfg.target_type == "parity") return "parity";
  if (cfg.target_type == "quantum") return "quantum";
  return cfg.target_csv_label.empty() ? "csv" : cfg.target_csv_label;
}

}  // namespace mblborn
