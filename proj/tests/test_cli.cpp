#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "mblborn/config.hpp"
#include "mblborn/errors.hpp"
#include "mblborn/experiments.hpp"

using namespace mblborn;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(MBL_BORN_BIN) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mblborn_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_minimal_config(const fs::path& path, const fs::path& out_dir,
                          const std::string& extra = "") {
  std::ofstream out(path);
  out << R"({
  "experiment": "train",
  "out": ")" << out_dir.string() << R"(",
  "seed": 11,
  "chain": {"visible": 2, "hidden": 1},
  "quenches": 3,
  "candidates": 4,
  "disorder": 5.0,
  "quench_time": 2.0,
  "target": {"type": "parity"})" << extra << R"(
})";
}

}  // namespace

TEST_CASE("config schema") {
  SUBCASE("round trip is idempotent") {
    nlohmann::json j = {{"experiment", "train"},
                        {"chain", {{"visible", 3}, {"hidden", 1}}},
                        {"seed", 42},
                        {"disorder", 2.5}};
    const RunConfig cfg = parse_run_config(j);
    const nlohmann::json normalized = to_json(cfg);
    const RunConfig reparsed = parse_run_config(normalized);
    CHECK(to_json(reparsed) == normalized);
  }
  SUBCASE("unknown keys are rejected at every level") {
    CHECK_THROWS_AS(parse_run_config({{"quenchez", 3}}), ConfigError);
    CHECK_THROWS_AS(parse_run_config({{"chain", {{"visibel", 3}}}}), ConfigError);
    CHECK_THROWS_AS(parse_run_config({{"kernel", {{"widths", {1.0}}}}}),
                    ConfigError);
  }
  SUBCASE("wrong types and bad values are rejected") {
    CHECK_THROWS_AS(parse_run_config({{"quenches", "many"}}), ConfigError);
    CHECK_THROWS_AS(parse_run_config({{"quenches", 0}}), ConfigError);
    CHECK_THROWS_AS(parse_run_config({{"variant", "quantum"}}), ConfigError);
    CHECK_THROWS_AS(parse_run_config({{"disorder", -2.0}}), ConfigError);
  }
  SUBCASE("reference defaults are accepted") {
    // 6+2 sites, 100 quenches, 500 candidate draws
    const RunConfig cfg = parse_run_config(
        {{"chain", {{"visible", 6}, {"hidden", 2}}},
         {"quenches", 100},
         {"candidates", 500},
         {"disorder", 8.0}});
    CHECK(cfg.train.n_quenches == 100);
    CHECK(cfg.train.n_candidates == 500);
    CHECK(cfg.train.kernel.bandwidths ==
          std::vector<double>{0.1, 0.25, 4.0, 10.0});
    CHECK(cfg.train.chain.n_sites == 8);
  }
  SUBCASE("explicit hidden placement") {
    const RunConfig cfg = parse_run_config(
        {{"chain", {{"visible", 2}, {"hidden", 2}}},
         {"hidden_sites", {2, 4}}});
    CHECK(cfg.train.partition.hidden_sites == std::vector<int>{2, 4});
    CHECK(cfg.train.partition.visible_sites == std::vector<int>{1, 3});
  }
}

TEST_CASE("train subcommand writes a reproducible run directory") {
  const fs::path work = fresh_dir("train");
  const fs::path cfg_path = work / "config.json";
  const fs::path run_a = work / "run_a";
  const fs::path run_b = work / "run_b";

  write_minimal_config(cfg_path, run_a);
  REQUIRE(run_cli("train --config " + cfg_path.string()) == 0);

  SUBCASE("layout and record count") {
    for (const char* name :
         {"manifest.json", "config.json", "trace.csv", "theta.csv",
          "p_model.csv", "p_target.csv", "p_quench.csv", "chosen.csv"})
      CHECK(fs::exists(run_a / name));
    std::ifstream trace(run_a / "trace.csv");
    int lines = 0;
    std::string line;
    while (std::getline(trace, line)) ++lines;
    CHECK(lines == 4);  // header + 3 quenches
    CHECK(fs::exists(run_a / "plots" / "loss.svg"));
  }

  SUBCASE("identical seeds give identical bytes") {
    REQUIRE(run_cli("train --config " + cfg_path.string() + " --out " +
                    run_b.string()) == 0);
    for (const char* name :
         {"trace.csv", "theta.csv", "p_model.csv", "p_quench.csv"})
      CHECK(slurp(run_a / name) == slurp(run_b / name));
  }

  SUBCASE("--no-plots suppresses the render") {
    REQUIRE(run_cli("train --config " + cfg_path.string() + " --out " +
                    run_b.string() + " --no-plots") == 0);
    CHECK(!fs::exists(run_b / "plots"));
  }

  SUBCASE("--dry-run validates without writing") {
    const fs::path run_c = work / "run_c";
    REQUIRE(run_cli("train --config " + cfg_path.string() + " --out " +
                    run_c.string() + " --dry-run") == 0);
    CHECK(!fs::exists(run_c));
  }
}

TEST_CASE("CLI exit codes") {
  const fs::path work = fresh_dir("exitcodes");
  SUBCASE("invalid config exits 2") {
    const fs::path bad = work / "bad.json";
    std::ofstream(bad) << R"({"quenchez": 3})";
    CHECK(run_cli("train --config " + bad.string()) == 2);
  }
  SUBCASE("malformed json exits 2") {
    const fs::path bad = work / "bad2.json";
    std::ofstream(bad) << "{not json";
    CHECK(run_cli("train --config " + bad.string()) == 2);
  }
  SUBCASE("recognize on a run without checkpoints exits 4") {
    const fs::path empty = work / "empty_run";
    fs::create_directories(empty);
    CHECK(run_cli("recognize --run " + empty.string()) == 4);
  }
  SUBCASE("malformed mask exits 2") {
    const fs::path work2 = fresh_dir("mask");
    const fs::path cfg_path = work2 / "config.json";
    const fs::path run = work2 / "run";
    write_minimal_config(cfg_path, run);
    REQUIRE(run_cli("train --config " + cfg_path.string()) == 0);
    CHECK(run_cli("recognize --run " + run.string() + " --mask bogus:njet") == 2);
  }
}

TEST_CASE("recognize on a stored run") {
  const fs::path work = fresh_dir("recognize");
  const fs::path cfg_path = work / "config.json";
  const fs::path run = work / "run";
  write_minimal_config(cfg_path, run);
  REQUIRE(run_cli("train --config " + cfg_path.string()) == 0);

  SUBCASE("mask none round-trips the target") {
    REQUIRE(run_cli("recognize --run " + run.string() + " --mask none") == 0);
    CHECK(fs::exists(run / "retrieved.csv"));
    CHECK(fs::exists(run / "report.csv"));
    const auto rows = load_pattern_csv((run / "retrieved.csv").string());
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].label == "clean");
    CHECK(rows[2].label == "retrieved");
  }
  SUBCASE("programmatic recognize reports a fidelity triple") {
    RecognizeOptions opts;
    opts.run_dir = run;
    opts.mask_spec = "pixels:1,3";
    const RecognizeReport report = run_recognize(opts);
    CHECK(report.fidelity_corrupted_clean >= 0.0);
    CHECK(report.fidelity_corrupted_clean <= 1.0 + 1e-12);
    CHECK(report.m_star >= 0);
  }
}

TEST_CASE("compare-models emits three curves with the contract columns") {
  const fs::path work = fresh_dir("compare");
  const fs::path cfg_path = work / "config.json";
  const fs::path out = work / "out";
  std::ofstream(cfg_path) << R"({
    "experiment": "compare-models",
    "out": ")" << out.string() << R"(",
    "seed": 5,
    "chain": {"visible": 2, "hidden": 1},
    "quenches": 3,
    "candidates": 4,
    "disorder": 5.0,
    "quench_time": 2.0,
    "realizations": 2,
    "target": {"type": "parity"}
  })";
  REQUIRE(run_cli("compare-models --config " + cfg_path.string()) == 0);

  std::ifstream csv(out / "compare.csv");
  std::string line;
  REQUIRE(std::getline(csv, line));
  CHECK(line == "m,variant,mean_log_loss,std");
  int rows = 0;
  std::set<std::string> variants;
  while (std::getline(csv, line)) {
    ++rows;
    const auto first = line.find(',');
    const auto second = line.find(',', first + 1);
    variants.insert(line.substr(first + 1, second - first - 1));
  }
  CHECK(rows == 3 * 3);  // three variants x M quenches
  CHECK(variants == std::set<std::string>({"bm", "rdbm", "hbm"}));
}

TEST_CASE("phase-sweep emits trajectories for the extreme disorders") {
  const fs::path work = fresh_dir("phase");
  const fs::path cfg_path = work / "config.json";
  const fs::path out = work / "out";
  std::ofstream(cfg_path) << R"({
    "experiment": "phase-sweep",
    "out": ")" << out.string() << R"(",
    "seed": 5,
    "chain": {"visible": 2, "hidden": 1},
    "quenches": 3,
    "candidates": 4,
    "quench_time": 2.0,
    "realizations": 2,
    "h_grid": [0.5, 2.0, 8.0],
    "target": {"type": "parity"}
  })";
  REQUIRE(run_cli("phase-sweep --config " + cfg_path.string()) == 0);

  std::ifstream traj(out / "trajectories.csv");
  std::string line;
  REQUIRE(std::getline(traj, line));
  CHECK(line == "h_d,seed,m,loss,entropy,hamming");
  int rows = 0;
  while (std::getline(traj, line)) ++rows;
  CHECK(rows == 2 * 2 * 3);  // extreme h values x seeds x M

  std::ifstream phase(out / "phase.csv");
  REQUIRE(std::getline(phase, line));
  CHECK(line == "h_d,mean_terminal_loss,std_terminal_loss,seeds");
  rows = 0;
  while (std::getline(phase, line)) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("diagnose emits histogram and scaling tables") {
  const fs::path work = fresh_dir("diagnose");
  const fs::path cfg_path = work / "config.json";
  const fs::path out = work / "out";
  std::ofstream(cfg_path) << R"({
    "experiment": "diagnose",
    "out": ")" << out.string() << R"(",
    "seed": 5,
    "chain": {"visible": 8, "hidden": 0},
    "h_grid": [0.5, 8.0],
    "sizes": [6, 8],
    "realizations": 3
  })";
  REQUIRE(run_cli("diagnose --config " + cfg_path.string() + " --no-plots") == 0);

  // histogram counts pool every computed ratio
  std::ifstream levels(out / "levels.csv");
  std::string line;
  REQUIRE(std::getline(levels, line));
  CHECK(line == "h_d,bin_lo,bin_hi,count,mean_r,n_values");
  double count_sum = 0.0;
  long n_values = -1;
  bool first_block = true;
  while (std::getline(levels, line)) {
    std::stringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells[0] != "0.5") {
      first_block = false;
      continue;
    }
    REQUIRE(first_block);
    count_sum += std::stod(cells[3]);
    n_values = std::stol(cells[5]);
  }
  CHECK(count_sum == doctest::Approx(static_cast<double>(n_values)));

  std::ifstream scaling(out / "scaling.csv");
  REQUIRE(std::getline(scaling, line));
  CHECK(line == "L,h,S_per_site,stderr");
  int rows = 0;
  while (std::getline(scaling, line)) ++rows;
  CHECK(rows == 4);  // two sizes x two disorders
  CHECK(!fs::exists(out / "plots"));
}

TEST_CASE("gen-data writes pattern files") {
  const fs::path work = fresh_dir("gendata");
  const fs::path cfg_path = work / "config.json";
  std::ofstream(cfg_path) << R"({
    "experiment": "gen-data",
    "out": ")" << (work / "out").string() << R"(",
    "chain": {"visible": 3, "hidden": 0},
    "target": {"type": "parity"}
  })";
  REQUIRE(run_cli("gen-data --config " + cfg_path.string()) == 0);
  const auto rows = load_pattern_csv((work / "out" / "pattern.csv").string());
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].label == "parity");
  CHECK(rows[0].values.sum() == doctest::Approx(1.0));
}

TEST_CASE("mask spec parsing") {
  CHECK(parse_mask_spec("none", 6).empty());
  const auto rows = parse_mask_spec("rows:4-7", 6);
  CHECK(rows.size() == 32);
  CHECK(rows.front() == 32);
  CHECK(rows.back() == 63);
  const auto cols = parse_mask_spec("cols:0-1", 6);
  CHECK(cols.size() == 16);
  const auto pixels = parse_mask_spec("pixels:0,5,9", 6);
  CHECK(pixels == std::vector<int>({0, 5, 9}));
  const auto random_a = parse_mask_spec("random:10:42", 6);
  const auto random_b = parse_mask_spec("random:10:42", 6);
  CHECK(random_a.size() == 10);
  CHECK(random_a == random_b);
  CHECK_THROWS_AS(parse_mask_spec("rows:9-12", 6), ConfigError);
  CHECK_THROWS_AS(parse_mask_spec("bogus", 6), ConfigError);
  CHECK_THROWS_AS(parse_mask_spec("pixels:77", 6), ConfigError);
}
