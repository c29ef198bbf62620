#ifndef GNSSXA_TESTS_HELPERS_HPP
#define GNSSXA_TESTS_HELPERS_HPP

#include <cstdint>

#include "gnssxa/constants.hpp"
#include "gnssxa/coords.hpp"
#include "gnssxa/pvt.hpp"
#include "gnssxa/scenario.hpp"

namespace gnssxa::testing {

inline ReceiverTruth make_truth(int m) {
    ReceiverTruth t;
    t.pos_ecef = geodetic_to_ecef({45.408, 11.894, 30.0});
    t.clock_bias_s.resize(m);
    for (int i = 0; i < m; ++i) t.clock_bias_s[i] = -87.57e-6 + 12.4e-6 * i;
    return t;
}

/// N = 8, N_A = 3, N_O = 5, M = 2 scenario used throughout the suite.
inline Scenario make_scenario(int n_epochs = 10, std::uint64_t seed = 7) {
    return generate_scenario(3, 5, 2, make_truth(2), n_epochs, seed);
}

/// Target displaced `east_m` meters east of the scenario truth.
inline PvtSolution east_target(const Scenario& sc, double east_m) {
    PvtSolution p = cold_start(ClockMode::MultiRef, sc.m);
    p.pos_ecef = enu_offset_to_ecef(sc.receiver_truth.pos_ecef,
                                    Eigen::Vector3d(east_m, 0.0, 0.0));
    return p;
}

/// Multi-reference truth state (clocks in meters).
inline PvtSolution truth_state(const Scenario& sc) {
    PvtSolution p;
    p.mode = ClockMode::MultiRef;
    p.pos_ecef = sc.receiver_truth.pos_ecef;
    p.clocks_m.resize(sc.m);
    for (int i = 0; i < sc.m; ++i)
        p.clocks_m(i) = kSpeedOfLight * sc.receiver_truth.clock_bias_s[i];
    return p;
}

}  // namespace gnssxa::testing

#endif
