#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gnssxa/constants.hpp"
#include "gnssxa/errors.hpp"
#include "gnssxa/pvt.hpp"
#include "helpers.hpp"

using namespace gnssxa;
using gnssxa::testing::make_scenario;
using gnssxa::testing::truth_state;

TEST_CASE("satellite clock bias shifts the prediction by c*t") {
    const Scenario sc = make_scenario(1);
    SatelliteObservation obs = sc.epochs[0].observations[0];
    const PvtSolution x = truth_state(sc);
    const double base = predict_pseudorange(obs, x);
    obs.sat_clock_bias_s += 1e-6;
    // the difference of two ~2.4e7 m predictions carries ~1e-8 m of rounding
    CHECK(predict_pseudorange(obs, x) - base ==
          doctest::Approx(kSpeedOfLight * 1e-6).epsilon(1e-9));
}

TEST_CASE("atmospheric delay enters additively") {
    const Scenario sc = make_scenario(1);
    SatelliteObservation obs = sc.epochs[0].observations[0];
    const PvtSolution x = truth_state(sc);
    const double base = predict_pseudorange(obs, x);
    obs.atmo_delay_m += 3.5;
    CHECK(predict_pseudorange(obs, x) - base == doctest::Approx(3.5).epsilon(1e-8));
}

TEST_CASE("cold start recovers truth on noiseless data") {
    const Scenario sc = make_scenario(5);
    SolverConfig cfg;
    for (const Epoch& e : sc.epochs) {
        const SolveReport rep = solve(e, cold_start(ClockMode::MultiRef, sc.m), cfg);
        CHECK(rep.converged);
        CHECK(rep.iterations <= 10);
        CHECK((rep.solution.pos_ecef - sc.receiver_truth.pos_ecef).norm() < 1e-4);
        for (int i = 0; i < sc.m; ++i)
            CHECK(std::abs(rep.solution.clocks_m(i) / kSpeedOfLight -
                           sc.receiver_truth.clock_bias_s[i]) < 1e-12);
        CHECK(rep.final_residuals_m.cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("single-reference solve with known ISB recovers truth") {
    const Scenario sc = make_scenario(2);
    SolverConfig cfg;
    cfg.isb_known_s = sc.isb_true_s;
    const SolveReport rep =
        solve(sc.epochs[0], cold_start(ClockMode::SingleRef, sc.m), cfg);
    CHECK(rep.converged);
    CHECK((rep.solution.pos_ecef - sc.receiver_truth.pos_ecef).norm() < 1e-4);
    CHECK(std::abs(rep.solution.clocks_m(0) / kSpeedOfLight -
                   sc.receiver_truth.clock_bias_s[0]) < 1e-12);
}

TEST_CASE("single-reference multi-constellation solve requires the ISB") {
    const Scenario sc = make_scenario(1);
    SolverConfig cfg;  // isb_known_s left empty
    CHECK_THROWS_AS(solve(sc.epochs[0], cold_start(ClockMode::SingleRef, sc.m), cfg),
                    DimensionMismatch);
}

TEST_CASE("iteration cap is honored and reported") {
    const Scenario sc = make_scenario(1);
    SolverConfig cfg;
    cfg.max_iters = 1;
    const SolveReport rep = solve(sc.epochs[0], cold_start(ClockMode::MultiRef, sc.m), cfg);
    CHECK(rep.iterations == 1);
    CHECK_FALSE(rep.converged);
}

TEST_CASE("undersized epochs are rejected") {
    Scenario sc = make_scenario(1);
    Epoch e = sc.epochs[0];
    e.observations.resize(4);  // MultiRef M=2 needs N >= 5
    SolverConfig cfg;
    CHECK_THROWS_AS(solve(e, cold_start(ClockMode::MultiRef, sc.m), cfg),
                    DimensionMismatch);
}

TEST_CASE("apply_tamper adds delta_r to pseudoranges only") {
    const Scenario sc = make_scenario(1);
    TamperVector t;
    t.delta_r_m = Eigen::VectorXd::LinSpaced(8, 1.0, 8.0);
    const Epoch out = apply_tamper(sc.epochs[0], t);
    for (int j = 0; j < 8; ++j)
        CHECK(out.observations[j].pseudorange_m -
                  sc.epochs[0].observations[j].pseudorange_m ==
              doctest::Approx(1.0 + j).epsilon(1e-12));
    TamperVector bad;
    bad.delta_r_m = Eigen::VectorXd::Zero(5);
    CHECK_THROWS_AS(apply_tamper(sc.epochs[0], bad), DimensionMismatch);
}

TEST_CASE("state vector round trip") {
    PvtSolution p;
    p.mode = ClockMode::MultiRef;
    p.pos_ecef = {1.0, 2.0, 3.0};
    p.clocks_m = Eigen::Vector2d(4.0, 5.0);
    const Eigen::VectorXd v = p.as_vector();
    REQUIRE(v.size() == 5);
    const PvtSolution q = PvtSolution::from_vector(v, ClockMode::MultiRef);
    CHECK(q.pos_ecef == p.pos_ecef);
    CHECK(q.clocks_m == p.clocks_m);
}
