#include "mblborn/runio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mblborn/config.hpp"
#include "mblborn/errors.hpp"

namespace mblborn {

namespace fs = std::filesystem;

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const fs::path& path) : out_(path) {
  if (!out_) throw FormatError(path.string() + ": cannot open for writing");
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

void write_trace_csv(const fs::path& dir, const TrainingTrace& trace) {
  CsvWriter csv(dir / "trace.csv");
  csv.row({"m", "loss", "entropy", "hamming"});
  for (const auto& r : trace.records)
    csv.row({std::to_string(r.m + 1), format_g17(r.loss), format_g17(r.entropy),
             format_g17(r.hamming)});
}

void write_theta_csv(const fs::path& dir, const TrainingTrace& trace) {
  CsvWriter csv(dir / "theta.csv");
  std::vector<std::string> header{"m"};
  for (int i = 1; i <= trace.config.chain.n_sites; ++i)
    header.push_back("h_" + std::to_string(i));
  csv.row(header);
  for (const auto& r : trace.records) {
    std::vector<std::string> cells{std::to_string(r.m + 1)};
    for (Eigen::Index i = 0; i < r.theta.size(); ++i)
      cells.push_back(format_g17(r.theta[i]));
    csv.row(cells);
  }
}

void write_chosen_csv(const fs::path& dir, const TrainingTrace& trace) {
  CsvWriter csv(dir / "chosen.csv");
  csv.row({"m", "candidate"});
  for (const auto& r : trace.records)
    csv.row({std::to_string(r.m + 1), std::to_string(r.chosen_candidate)});
}

void write_quench_distributions_csv(const fs::path& dir,
                                    const TrainingTrace& trace) {
  std::vector<LabeledPattern> rows;
  rows.reserve(trace.intermediate_distributions.size());
  for (std::size_t m = 0; m < trace.intermediate_distributions.size(); ++m)
    rows.push_back({std::to_string(m), trace.intermediate_distributions[m]});
  save_pattern_csv((dir / "p_quench.csv").string(), rows);
}

void write_state_checkpoints(const fs::path& dir, const TrainingTrace& trace) {
  const fs::path sub = dir / "checkpoints";
  fs::create_directories(sub);
  for (const auto& [m, psi] : trace.state_checkpoints) {
    char name[32];
    std::snprintf(name, sizeof name, "state_%04d.csv", m);
    CsvWriter csv(sub / name);
    csv.row({"index", "re", "im"});
    for (Eigen::Index z = 0; z < psi.size(); ++z)
      csv.row({std::to_string(z), format_g17(psi[z].real()),
               format_g17(psi[z].imag())});
  }
}

namespace {

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path.string() + ": cannot open");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

TrainingTrace load_trace(const fs::path& dir) {
  TrainingTrace trace;
  trace.config = load_run_config(dir / "config.json").train;

  const auto theta_rows = read_csv(dir / "theta.csv");
  const auto trace_rows = read_csv(dir / "trace.csv");
  const auto chosen_rows = read_csv(dir / "chosen.csv");
  if (theta_rows.size() != trace_rows.size() ||
      theta_rows.size() != chosen_rows.size())
    throw FormatError(dir.string() + ": trace/theta/chosen row counts differ");

  for (std::size_t k = 1; k < theta_rows.size(); ++k) {
    QuenchRecord record;
    record.m = std::stoi(trace_rows[k][0]) - 1;
    record.loss = std::stod(trace_rows[k][1]);
    record.entropy = std::stod(trace_rows[k][2]);
    record.hamming = std::stod(trace_rows[k][3]);
    record.chosen_candidate = std::stoi(chosen_rows[k][1]);
    record.theta.resize(static_cast<Eigen::Index>(theta_rows[k].size()) - 1);
    for (std::size_t i = 1; i < theta_rows[k].size(); ++i)
      record.theta[static_cast<Eigen::Index>(i) - 1] = std::stod(theta_rows[k][i]);
    trace.records.push_back(std::move(record));
  }

  for (const auto& row : load_pattern_csv((dir / "p_quench.csv").string()))
    trace.intermediate_distributions.push_back(row.values);
  if (trace.intermediate_distributions.size() != trace.records.size() + 1)
    throw FormatError(dir.string() + ": p_quench.csv row count mismatch");
  trace.final_distribution = trace.intermediate_distributions.back();
  return trace;
}

void write_manifest(const fs::path& dir, const std::string& experiment,
                    std::uint64_t seed) {
  nlohmann::json j;
  j["artifact"] = "mbl-born";
  j["version"] = "0.1.0";
  j["experiment"] = experiment;
  j["seed"] = seed;
  j["layout"] = {"config.json", "trace.csv", "theta.csv", "p_model.csv",
                 "p_target.csv"};
  std::ofstream out(dir / "manifest.json");
  if (!out) throw FormatError((dir / "manifest.json").string() + ": cannot open");
  out << j.dump(2) << '\n';
}

}  // namespace mblborn
