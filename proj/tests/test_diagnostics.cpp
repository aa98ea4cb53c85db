#include <doctest.h>

#include <cmath>

#include "mblborn/diagnostics.hpp"
#include "mblborn/errors.hpp"

using namespace mblborn;

TEST_CASE("Hamming distance") {
  SUBCASE("zero at t = 0") {
    const PureState plus = PureState::Constant(16, 0.25);
    SpinFlipTracker tracker(plus, 4);
    CHECK(hamming_distance(tracker) == 0.0);
  }
  SUBCASE("stays inside [0, 1] along a trajectory") {
    Rng rng(3);
    ChainSpec spec;
    spec.n_sites = 4;
    SpinFlipTracker tracker(PureState::Constant(16, 0.25), 4);
    for (int q = 0; q < 5; ++q) {
      const FieldVector h = sample_fields(3.0, 4, rng);
      tracker.advance(eigendecompose(total_hamiltonian(spec, h)), 5.0);
      const double d = hamming_distance(tracker);
      CHECK(d >= -1e-12);
      CHECK(d <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("entanglement entropy") {
  SUBCASE("product state has zero entropy") {
    Rng rng(5);
    PureState a(4), b(4);
    for (int i = 0; i < 4; ++i) {
      a[i] = {rng.gaussian(0, 1), rng.gaussian(0, 1)};
      b[i] = {rng.gaussian(0, 1), rng.gaussian(0, 1)};
    }
    a.normalize();
    b.normalize();
    PureState psi(16);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) psi[i * 4 + j] = a[i] * b[j];
    CHECK(entanglement_entropy(psi, {1, 2}, 4) < 1e-10);
  }
  SUBCASE("Bell pair has entropy ln 2 on a single-site cut") {
    PureState bell = PureState::Zero(4);
    bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
    CHECK(entanglement_entropy(bell, {1}, 2) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-10));
  }
  SUBCASE("bounded by the cut dimension") {
    Rng rng(7);
    for (int trial = 0; trial < 4; ++trial) {
      PureState psi(64);
      for (int z = 0; z < 64; ++z)
        psi[z] = {rng.gaussian(0, 1), rng.gaussian(0, 1)};
      psi.normalize();
      for (int k = 1; k <= 3; ++k) {
        std::vector<int> cut;
        for (int s = 1; s <= k; ++s) cut.push_back(s);
        CHECK(entanglement_entropy(psi, cut, 6) <= k * std::log(2.0) + 1e-9);
      }
    }
  }
  SUBCASE("invariant under swapping the cut with its complement") {
    Rng rng(11);
    PureState psi(64);
    for (int z = 0; z < 64; ++z)
      psi[z] = {rng.gaussian(0, 1), rng.gaussian(0, 1)};
    psi.normalize();
    const double left = entanglement_entropy(psi, {1, 2}, 6);
    const double right = entanglement_entropy(psi, {3, 4, 5, 6}, 6);
    CHECK(left == doctest::Approx(right).epsilon(1e-9));
  }
  SUBCASE("bad cuts are rejected") {
    const PureState psi = PureState::Constant(4, 0.5);
    CHECK_THROWS_AS(entanglement_entropy(psi, {}, 2), InvalidSpec);
    CHECK_THROWS_AS(entanglement_entropy(psi, {3}, 2), InvalidSpec);
    CHECK_THROWS_AS(entanglement_entropy(psi, {1, 1}, 2), InvalidSpec);
  }
}

TEST_CASE("gap-ratio mechanics") {
  SUBCASE("ratios live in [0, 1]") {
    Rng rng(13);
    Eigen::VectorXd levels(200);
    double e = 0.0;
    for (int k = 0; k < 200; ++k) {
      e += rng.uniform01() + 1e-6;
      levels[k] = e;
    }
    for (double r : spacing_ratios(levels)) {
      CHECK(r >= 0.0);
      CHECK(r <= 1.0);
    }
  }
  SUBCASE("exact invariance under dyadic affine maps") {
    // dyadic level values and a power-of-two scale make the arithmetic exact
    Eigen::VectorXd levels(64);
    Rng rng(17);
    double e = 0.0;
    for (int k = 0; k < 64; ++k) {
      e += (1.0 + std::floor(rng.uniform01() * 1024.0)) / 1024.0;
      levels[k] = e;
    }
    const auto base = spacing_ratios(levels);
    const auto scaled = spacing_ratios((4.0 * levels.array()).matrix());
    const auto shifted = spacing_ratios((levels.array() + 3.0).matrix());
    REQUIRE(base.size() == scaled.size());
    REQUIRE(base.size() == shifted.size());
    for (std::size_t k = 0; k < base.size(); ++k) {
      CHECK(base[k] == scaled[k]);
      CHECK(base[k] == shifted[k]);
    }
  }
  SUBCASE("general affine invariance within rounding") {
    Rng rng(19);
    Eigen::VectorXd levels(128);
    double e = 0.0;
    for (int k = 0; k < 128; ++k) {
      e += rng.uniform01() + 1e-3;
      levels[k] = e;
    }
    const auto base = spacing_ratios(levels);
    const auto mapped =
        spacing_ratios((1.7 * levels.array() + 0.3).matrix());
    for (std::size_t k = 0; k < base.size(); ++k)
      CHECK(base[k] == doctest::Approx(mapped[k]).epsilon(1e-9));
  }
  SUBCASE("synthetic Poisson spectrum reproduces the analytic mean") {
    // i.i.d. exponential gaps: <r> = 2 ln 2 - 1
    Rng rng(23);
    const int n = 100000;
    Eigen::VectorXd levels(n);
    double e = 0.0;
    for (int k = 0; k < n; ++k) {
      e += -std::log(1.0 - rng.uniform01());
      levels[k] = e;
    }
    const auto rs = spacing_ratios(levels);
    double mean = 0.0;
    for (double r : rs) mean += r;
    mean /= static_cast<double>(rs.size());
    CHECK(std::abs(mean - (2.0 * std::log(2.0) - 1.0)) < 0.01);
  }
}

TEST_CASE("disorder-averaged level statistics separate the phases") {
  ChainSpec spec;
  spec.n_sites = 10;
  const LevelStatistics thermal = level_spacing_ratios(spec, 0.5, 40, 99);
  const LevelStatistics localized = level_spacing_ratios(spec, 10.0, 40, 99);
  for (double r : thermal.r_values) {
    CHECK(r >= 0.0);
    CHECK(r <= 1.0);
  }
  CHECK(thermal.mean_r > localized.mean_r);
  CHECK(thermal.mean_r - localized.mean_r > 0.08);
  // serial and parallel sweeps agree bitwise
  const LevelStatistics serial =
      level_spacing_ratios(spec, 0.5, 40, 99, DiagExec::serial);
  REQUIRE(serial.r_values.size() == thermal.r_values.size());
  for (std::size_t k = 0; k < serial.r_values.size(); ++k)
    CHECK(serial.r_values[k] == thermal.r_values[k]);
}

TEST_CASE("entropy scaling sweep") {
  SUBCASE("decoupled chain has zero eigenstate entropy") {
    const auto rows = entropy_scaling_sweep({6}, {1.0}, 2, 5, 0.0, 0.0);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].entropy_per_site < 1e-10);
  }
  SUBCASE("row grid covers sizes x disorders") {
    const auto rows = entropy_scaling_sweep({6, 8}, {0.5, 8.0}, 2, 5);
    CHECK(rows.size() == 4);
    for (const auto& row : rows) {
      CHECK(row.entropy_per_site >= 0.0);
      CHECK(row.entropy_per_site <= std::log(2.0));
    }
  }
  SUBCASE("odd or tiny sizes are rejected") {
    CHECK_THROWS_AS(entropy_scaling_sweep({7}, {1.0}, 2, 5), InvalidSpec);
    CHECK_THROWS_AS(entropy_scaling_sweep({4}, {1.0}, 2, 5), InvalidSpec);
  }
}
