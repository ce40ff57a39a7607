#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gkb/thresholds.hpp"

using namespace gkb;

TEST_CASE("information-term thresholds") {
  // eta = 1/2 makes -log2(1-eta) = 1 bit, so the root solves h(omega) = 1
  const double w = threshold_of_info(ThresholdFamily::loss_vs_eta, 0.5);
  CHECK(w == Catch::Approx(1.587631).margin(5e-5));
  CHECK(thermal_entropy(w) == Catch::Approx(1.0).margin(1e-7));

  // g = 2 gives the same log term, hence the same root
  CHECK(threshold_of_info(ThresholdFamily::amp_vs_g, 2.0) == Catch::Approx(w).margin(1e-7));

  CHECK(threshold_of_info(ThresholdFamily::loss_vs_eta, 0.9) ==
        Catch::Approx(7.380262).margin(5e-5));
  CHECK(threshold_of_info(ThresholdFamily::amp_vs_g, 1.2) ==
        Catch::Approx(4.452405).margin(5e-5));
}

TEST_CASE("security thresholds by bisection") {
  // Near a threshold the optimal gamma diverges and the capped maximum sits
  // within ~1e-9 bits of zero, so the bisected omega carries an intrinsic
  // uncertainty band of a few 1e-3: anchor loosely.
  SECTION("thermal loss anchor, eta = 0.5") {
    ThresholdQuery q{ThresholdFamily::loss_vs_eta, 0.5};
    const ThresholdResult r = security_threshold(q);
    CHECK(r.status == ThresholdStatus::converged);
    CHECK(r.omega_th == Catch::Approx(1.700).margin(5e-3));
  }

  SECTION("thermal amp anchor, g = 2") {
    ThresholdQuery q{ThresholdFamily::amp_vs_g, 2.0};
    const ThresholdResult r = security_threshold(q);
    CHECK(r.status == ThresholdStatus::converged);
    CHECK(r.omega_th == Catch::Approx(1.700).margin(5e-3));
    // loss at eta = 1/2 and amp at g = 2 share the same delta(gamma) exactly
    ThresholdQuery dual{ThresholdFamily::loss_vs_eta, 0.5};
    CHECK(r.omega_th == Catch::Approx(security_threshold(dual).omega_th).margin(2e-3));
  }

  SECTION("optimized threshold dominates the information-only threshold") {
    for (double eta : {0.3, 0.5, 0.7}) {
      ThresholdQuery q{ThresholdFamily::loss_vs_eta, eta};
      const ThresholdResult r = security_threshold(q);
      REQUIRE(r.status == ThresholdStatus::converged);
      CHECK(r.omega_th > threshold_of_info(ThresholdFamily::loss_vs_eta, eta));
    }
  }

  SECTION("bracket that starts insecure") {
    ThresholdQuery q{ThresholdFamily::loss_vs_eta, 0.5, {10.0, 20.0}};
    const ThresholdResult r = security_threshold(q);
    CHECK(r.status == ThresholdStatus::no_security);
    CHECK(std::string(to_string(r.status)) == "no_security");
  }

  SECTION("bracket that never loses security") {
    ThresholdQuery q{ThresholdFamily::loss_vs_eta, 0.5, {1.0, 1.2}};
    const ThresholdResult r = security_threshold(q);
    CHECK(r.status == ThresholdStatus::bracket_exhausted);
    CHECK(std::string(to_string(r.status)) == "bracket_exhausted");
  }
}

TEST_CASE("axis expansion") {
  const auto lin = axis_values({"eta", 0.1, 0.5, 5, AxisSpacing::linear});
  REQUIRE(lin.size() == 5);
  CHECK(lin.front() == Catch::Approx(0.1));
  CHECK(lin[2] == Catch::Approx(0.3));
  CHECK(lin.back() == Catch::Approx(0.5));

  const auto lg = axis_values({"gamma", 1.0, 100.0, 3, AxisSpacing::log});
  REQUIRE(lg.size() == 3);
  CHECK(lg[0] == Catch::Approx(1.0));
  CHECK(lg[1] == Catch::Approx(10.0));
  CHECK(lg[2] == Catch::Approx(100.0));

  CHECK_THROWS_AS(axis_values({"eta", 0.1, 0.5, 1, AxisSpacing::linear}), std::domain_error);
  CHECK_THROWS_AS(axis_values({"gamma", -1.0, 10.0, 4, AxisSpacing::log}), std::domain_error);
  CHECK_THROWS_AS(axis_values({"eta", 0.5, 0.1, 3, AxisSpacing::linear}), std::domain_error);
}

TEST_CASE("sweep over a single axis") {
  SweepGrid grid;
  grid.base = ThermalLoss{0.5, 3.0};
  grid.axes = {{"eta", 0.05, 0.95, 19, AxisSpacing::linear}};
  const SweepTable t = run_sweep(grid);
  REQUIRE(t.rows.size() == 19);

  int transitions = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const SweepRow& r = t.rows[i];
    CHECK(r.channel == "thermal_loss");
    CHECK(r.param1_name == "eta");
    CHECK(r.param1 == Catch::Approx(0.05 + 0.05 * static_cast<double>(i)));
    CHECK(r.param2_name == "omega");
    REQUIRE(r.param2.has_value());
    CHECK(*r.param2 == 3.0);
    CHECK(r.direction == "reverse");
    CHECK(r.diag.rfind("error", 0) != 0);
    CHECK(r.gamma_star >= 1.0);
    CHECK(r.lower_bound == Catch::Approx(r.info_term + r.delta_g).margin(1e-15));
    if (i > 0 && (t.rows[i - 1].lower_bound > 0.0) != (r.lower_bound > 0.0)) ++transitions;
  }
  // a single security transition along the transmissivity axis
  CHECK(transitions == 1);
  CHECK(t.rows.front().lower_bound < 0.0);
  CHECK(t.rows.back().lower_bound > 0.0);
}

TEST_CASE("sweep over two axes is row-major") {
  SweepGrid grid;
  grid.base = ThermalAmp{2.0, 2.0};
  grid.axes = {{"g", 1.5, 2.5, 2, AxisSpacing::linear},
               {"omega", 1.0, 2.0, 3, AxisSpacing::linear}};
  const SweepTable t = run_sweep(grid);
  REQUIRE(t.rows.size() == 6);
  CHECK(t.rows[0].param1 == Catch::Approx(1.5));
  CHECK(*t.rows[0].param2 == Catch::Approx(1.0));
  CHECK(*t.rows[2].param2 == Catch::Approx(2.0));
  CHECK(t.rows[3].param1 == Catch::Approx(2.5));
  for (const SweepRow& r : t.rows) {
    CHECK(r.channel == "thermal_amp");
    CHECK(r.param1_name == "g");
    CHECK(r.param2_name == "omega");
    CHECK(r.direction == "direct");
  }
}

TEST_CASE("gamma axis pins the measurement seed") {
  SweepGrid grid;
  grid.base = AddedNoise{0.38};
  grid.axes = {{"gamma", 1.0, 100.0, 5, AxisSpacing::log}};
  const SweepTable t = run_sweep(grid);
  REQUIRE(t.rows.size() == 5);
  const auto gammas = axis_values(grid.axes[0]);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const SweepRow& r = t.rows[i];
    CHECK(r.channel == "added_noise");
    CHECK(r.param1_name == "gamma");
    CHECK(r.param1 == Catch::Approx(gammas[i]));
    CHECK(r.gamma_star == r.param1);  // seed is taken as-is, not optimized
    CHECK(r.param2_name.empty());
    CHECK_FALSE(r.param2.has_value());
    CHECK(r.diag == "gamma_pinned");
  }
  // pinned at gamma = 1 the added-noise delta vanishes identically
  CHECK(t.rows[0].gamma_star == Catch::Approx(1.0));
  CHECK(std::abs(t.rows[0].delta_g) < 1e-12);
  // and no pinned value may beat the optimized correction
  const DeltaMax best = maximize_delta(AddedNoise{0.38});
  for (const SweepRow& r : t.rows) CHECK(r.delta_g <= best.delta_g + 1e-9);
}

TEST_CASE("sweep rows that fail keep the table alive") {
  SweepGrid grid;
  grid.base = ThermalLoss{0.5, 1.0};
  grid.axes = {{"omega", 0.5, 2.0, 4, AxisSpacing::linear}};
  const SweepTable t = run_sweep(grid);
  REQUIRE(t.rows.size() == 4);
  CHECK(t.rows[0].diag.rfind("error:", 0) == 0);
  CHECK(std::isnan(t.rows[0].lower_bound));
  CHECK(t.rows[1].diag.rfind("error", 0) != 0);  // omega = 1.0 is valid
  CHECK(std::isfinite(t.rows[1].lower_bound));
}

TEST_CASE("sweeps are deterministic across thread counts") {
  SweepGrid grid;
  grid.base = AddedNoise{1.0};
  grid.axes = {{"zeta", 0.1, 3.4, 12, AxisSpacing::linear}};
  const SweepTable serial = run_sweep(grid, {}, 1);
  const SweepTable parallel = run_sweep(grid, {}, 4);
  REQUIRE(serial.rows.size() == parallel.rows.size());
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].param1 == parallel.rows[i].param1);
    CHECK(serial.rows[i].lower_bound == parallel.rows[i].lower_bound);
    CHECK(serial.rows[i].gamma_star == parallel.rows[i].gamma_star);
    CHECK(serial.rows[i].diag == parallel.rows[i].diag);
  }
  // the added-noise family loses security as zeta grows: one transition
  int transitions = 0;
  for (std::size_t i = 1; i < serial.rows.size(); ++i) {
    if ((serial.rows[i - 1].lower_bound > 0.0) != (serial.rows[i].lower_bound > 0.0))
      ++transitions;
  }
  CHECK(transitions == 1);
  CHECK(serial.rows.front().lower_bound > 0.0);
  CHECK(serial.rows.back().lower_bound < 0.0);
}

TEST_CASE("sweep column order is the CSV contract") {
  const std::vector<std::string> expected = {
      "channel",     "param1_name", "param1",      "param2_name",
      "param2",      "gamma_star",  "delta_g",     "info_term",
      "lower_bound", "upper_bound", "direction",   "diag"};
  CHECK(sweep_columns() == expected);
}
