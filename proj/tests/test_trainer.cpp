#include <doctest.h>

#include <cmath>

#include "mblborn/datasets.hpp"
#include "mblborn/errors.hpp"
#include "mblborn/trainer.hpp"

using namespace mblborn;

namespace {

TrainConfig tiny_config() {
  TrainConfig cfg;
  cfg.chain.n_sites = 4;
  cfg.partition = Partition::contiguous(3, 1);
  cfg.n_quenches = 3;
  cfg.n_candidates = 8;
  cfg.disorder = 4.0;
  cfg.quench_time = 3.0;
  cfg.seed = 2024;
  cfg.variant = Variant::hidden;
  return cfg;
}

VisibleDistribution tiny_target() {
  VisibleDistribution q(8);
  q << 0.30, 0.05, 0.05, 0.10, 0.10, 0.05, 0.05, 0.30;
  return q;
}

bool traces_identical(const TrainingTrace& a, const TrainingTrace& b) {
  if (a.records.size() != b.records.size()) return false;
  for (std::size_t m = 0; m < a.records.size(); ++m) {
    const auto& ra = a.records[m];
    const auto& rb = b.records[m];
    if (ra.loss != rb.loss || ra.entropy != rb.entropy ||
        ra.hamming != rb.hamming || ra.chosen_candidate != rb.chosen_candidate)
      return false;
    if (ra.theta != rb.theta) return false;
    if (ra.candidate_losses != rb.candidate_losses) return false;
  }
  if (a.intermediate_distributions.size() != b.intermediate_distributions.size())
    return false;
  for (std::size_t m = 0; m < a.intermediate_distributions.size(); ++m)
    if (a.intermediate_distributions[m] != b.intermediate_distributions[m])
      return false;
  return a.final_state == b.final_state;
}

}  // namespace

TEST_CASE("training trace shape and bookkeeping") {
  const TrainConfig cfg = tiny_config();
  const TrainingTrace trace = train(cfg, tiny_target());
  CHECK(trace.records.size() == 3);
  CHECK(trace.intermediate_distributions.size() == 4);
  for (const auto& record : trace.records) {
    CHECK(record.candidate_losses.size() == 8);
    CHECK(record.theta.size() == 4);
  }
  CHECK(trace.final_distribution == trace.intermediate_distributions.back());
  // the initial distribution is the marginal of the initial state
  const VisibleDistribution p0 =
      visible_marginal(make_initial_state(cfg), cfg.partition);
  CHECK(trace.intermediate_distributions.front() == p0);
}

TEST_CASE("selection optimality and greedy dominance") {
  const TrainingTrace trace = train(tiny_config(), tiny_target());
  for (const auto& record : trace.records) {
    double lowest = record.candidate_losses[0];
    for (double loss : record.candidate_losses) lowest = std::min(lowest, loss);
    CHECK(record.loss == lowest);  // exact equality
    for (double loss : record.candidate_losses) CHECK(record.loss <= loss);
    CHECK(record.candidate_losses[record.chosen_candidate] == record.loss);
  }
}

TEST_CASE("serial and parallel evaluation produce bitwise-identical traces") {
  TrainConfig cfg = tiny_config();
  cfg.n_candidates = 16;
  const VisibleDistribution target = tiny_target();
  const TrainingTrace serial = train(cfg, target, ExecPolicy::serial);
  const TrainingTrace parallel = train(cfg, target, ExecPolicy::parallel);
  CHECK(traces_identical(serial, parallel));

  // rerunning the parallel path reproduces itself as well
  const TrainingTrace again = train(cfg, target, ExecPolicy::parallel);
  CHECK(traces_identical(parallel, again));
}

TEST_CASE("N = 1 degenerates to an unoptimized quench sequence") {
  TrainConfig cfg = tiny_config();
  cfg.n_candidates = 1;
  const TrainingTrace trace = train(cfg, tiny_target());
  for (const auto& record : trace.records) {
    CHECK(record.chosen_candidate == 0);
    CHECK(record.candidate_losses.size() == 1);
    CHECK(record.loss == record.candidate_losses[0]);
  }
}

TEST_CASE("state stays normalized across all quenches") {
  TrainConfig cfg = tiny_config();
  cfg.n_quenches = 10;
  const TrainingTrace trace = train(cfg, tiny_target());
  CHECK(std::abs(trace.final_state.norm() - 1.0) < 1e-9);
  for (const auto& p : trace.intermediate_distributions)
    CHECK(std::abs(p.sum() - 1.0) < 1e-9);
}

TEST_CASE("blocked, dense and Krylov engines agree physically") {
  const VisibleDistribution target = tiny_target();
  const TrainingTrace a = train(tiny_config(), target);
  for (Engine engine : {Engine::dense, Engine::krylov}) {
    TrainConfig other = tiny_config();
    other.engine = engine;
    const TrainingTrace b = train(other, target);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t m = 0; m < a.records.size(); ++m) {
      CHECK(a.records[m].chosen_candidate == b.records[m].chosen_candidate);
      CHECK(a.records[m].loss ==
            doctest::Approx(b.records[m].loss).epsilon(1e-9));
    }
    CHECK((a.final_distribution - b.final_distribution).cwiseAbs().maxCoeff() <
          1e-9);
  }
}

TEST_CASE("basic variant equals the all-visible hidden code path") {
  TrainConfig cfg = tiny_config();
  cfg.chain.n_sites = 3;
  cfg.partition = Partition::contiguous(3, 0);
  cfg.variant = Variant::basic;
  const TrainingTrace trace = train(cfg, tiny_target());
  CHECK(trace.records.size() == 3);
  CHECK(trace.final_distribution.size() == 8);
  CHECK(std::abs(trace.final_distribution.sum() - 1.0) < 1e-10);
}

TEST_CASE("randomly driven variant") {
  SUBCASE("zero drive amplitude reproduces the undriven trace bitwise") {
    TrainConfig hidden = tiny_config();
    TrainConfig rdbm = tiny_config();
    rdbm.variant = Variant::rdbm;
    rdbm.rdbm.noise_amplitude = 0.0;
    const VisibleDistribution target = tiny_target();
    CHECK(traces_identical(train(hidden, target), train_rdbm(rdbm, target)));
  }
  SUBCASE("propagation-step count scales by T/tau") {
    TrainConfig plain = tiny_config();
    TrainConfig rdbm = tiny_config();
    rdbm.variant = Variant::rdbm;
    rdbm.rdbm.noise_amplitude = 0.05;
    rdbm.rdbm.tau = rdbm.quench_time / 10.0;
    const VisibleDistribution target = tiny_target();
    const TrainingTrace a = train(plain, target);
    const TrainingTrace b = train_rdbm(rdbm, target);
    CHECK(b.propagation_steps == 10 * a.propagation_steps);
  }
  SUBCASE("driven traces are reproducible and normalized") {
    TrainConfig rdbm = tiny_config();
    rdbm.variant = Variant::rdbm;
    rdbm.rdbm.noise_amplitude = 0.2;
    rdbm.rdbm.tau = rdbm.quench_time / 5.0;
    const VisibleDistribution target = tiny_target();
    const TrainingTrace a = train_rdbm(rdbm, target, ExecPolicy::serial);
    const TrainingTrace b = train_rdbm(rdbm, target, ExecPolicy::parallel);
    CHECK(traces_identical(a, b));
    CHECK(std::abs(a.final_state.norm() - 1.0) < 1e-9);
  }
  SUBCASE("variant guard") {
    CHECK_THROWS_AS(train_rdbm(tiny_config(), tiny_target()), InvalidSpec);
  }
}

TEST_CASE("per-candidate streams") {
  SUBCASE("same cell reproduces its draws") {
    Rng a = per_candidate_rng(7, 3, 11);
    Rng b = per_candidate_rng(7, 3, 11);
    for (int k = 0; k < 16; ++k) CHECK(a.next_u64() == b.next_u64());
  }
  SUBCASE("neighbouring cells differ") {
    Rng a = per_candidate_rng(7, 0, 0);
    Rng b = per_candidate_rng(7, 0, 1);
    Rng c = per_candidate_rng(7, 1, 0);
    const double da = a.uniform01(), db = b.uniform01(), dc = c.uniform01();
    CHECK(da != db);
    CHECK(da != dc);
  }
  SUBCASE("first draws pass a chi-squared uniformity check") {
    const int n_streams = 10000, bins = 16;
    std::vector<int> counts(bins, 0);
    for (int n = 0; n < n_streams; ++n) {
      Rng rng = per_candidate_rng(1234, 0, static_cast<std::uint64_t>(n));
      ++counts[static_cast<int>(rng.uniform01() * bins)];
    }
    const double expected = double(n_streams) / bins;
    double chi_sq = 0.0;
    for (int c : counts) chi_sq += (c - expected) * (c - expected) / expected;
    // chi^2_{15} critical value at alpha = 0.001
    CHECK(chi_sq < 37.70);
  }
}

TEST_CASE("entropy trajectory saturates deep in the localized phase") {
  TrainConfig cfg;
  cfg.chain.n_sites = 8;
  cfg.partition = Partition::contiguous(6, 2);
  cfg.n_quenches = 40;
  cfg.n_candidates = 30;
  cfg.disorder = 8.0;
  cfg.quench_time = 10.0;
  cfg.seed = 515;
  const TrainingTrace trace = train(cfg, parity_dataset(6));
  const auto range_of = [&](std::size_t lo, std::size_t hi) {
    double mn = trace.records[lo].entropy, mx = mn;
    for (std::size_t m = lo; m < hi; ++m) {
      mn = std::min(mn, trace.records[m].entropy);
      mx = std::max(mx, trace.records[m].entropy);
    }
    return mx - mn;
  };
  CHECK(range_of(30, 40) < range_of(0, 10));
}

TEST_CASE("invalid training inputs are rejected") {
  const TrainConfig cfg = tiny_config();
  VisibleDistribution bad = tiny_target();
  bad[0] += 0.5;  // unnormalized
  CHECK_THROWS_AS(train(cfg, bad), InvalidSpec);
  VisibleDistribution wrong_len = VisibleDistribution::Constant(4, 0.25);
  CHECK_THROWS_AS(train(cfg, wrong_len), DimensionError);
  TrainConfig bad_cfg = cfg;
  bad_cfg.n_quenches = 0;
  CHECK_THROWS_AS(train(bad_cfg, tiny_target()), InvalidSpec);
}
