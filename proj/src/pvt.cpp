#include "gnssxa/pvt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gnssxa/constants.hpp"
#include "gnssxa/errors.hpp"

namespace gnssxa {

double predict_pseudorange(const SatelliteObservation& obs, const PvtSolution& est,
                           const std::vector<double>& isb_known_s) {
    const double rho = (obs.pos_ecef - est.pos_ecef).norm();
    double rx_clock_m;
    if (est.mode == ClockMode::MultiRef) {
        const int idx = obs.constellation - 1;
        if (idx < 0 || idx >= est.clocks_m.size())
            throw DimensionMismatch("constellation index exceeds clock state length");
        rx_clock_m = est.clocks_m(idx);
    } else {
        rx_clock_m = est.clocks_m(0);
        if (obs.constellation > 1) {
            const int i = obs.constellation - 2;
            if (i >= static_cast<int>(isb_known_s.size()))
                throw DimensionMismatch("single-reference prediction needs a known ISB for constellation " +
                                        std::to_string(obs.constellation));
            rx_clock_m += kSpeedOfLight * isb_known_s[i];
        }
    }
    return rho + kSpeedOfLight * obs.sat_clock_bias_s + rx_clock_m + obs.atmo_delay_m;
}

PvtSolution cold_start(ClockMode mode, int m) {
    PvtSolution p;
    p.mode = mode;
    p.clocks_m = Eigen::VectorXd::Zero(mode == ClockMode::MultiRef ? m : 1);
    return p;
}

SolveReport solve(const Epoch& epoch, const PvtSolution& initial, const SolverConfig& cfg) {
    const int n = epoch.n_total();
    int max_const = 0;
    for (const auto& obs : epoch.observations)
        max_const = std::max(max_const, obs.constellation);

    if (initial.mode == ClockMode::MultiRef) {
        if (initial.clocks_m.size() < max_const)
            throw DimensionMismatch("initial clock state shorter than constellation count");
        if (n < 3 + static_cast<int>(initial.clocks_m.size()))
            throw DimensionMismatch("multi-reference solve needs N >= 3 + M");
    } else if (n < 4) {
        throw DimensionMismatch("single-reference solve needs N >= 4");
    }
    if (initial.mode == ClockMode::SingleRef && max_const >= 2 &&
        static_cast<int>(cfg.isb_known_s.size()) < max_const - 1)
        throw DimensionMismatch("single-reference solve of a multi-constellation epoch needs isb_known");

    SolveReport rep;
    rep.solution = initial;
    Eigen::VectorXd residuals(n);
    double prev_step = std::numeric_limits<double>::infinity();
    for (int it = 0; it < cfg.max_iters; ++it) {
        rep.geometry = build_geometry(epoch, rep.solution, rep.solution.mode);
        for (int j = 0; j < n; ++j)
            residuals(j) = epoch.observations[j].pseudorange_m -
                           predict_pseudorange(epoch.observations[j], rep.solution,
                                               cfg.isb_known_s);
        const Eigen::VectorXd dp = rep.geometry.h * residuals;
        rep.solution = PvtSolution::from_vector(rep.solution.as_vector() + dp,
                                                rep.solution.mode);
        rep.iterations = it + 1;
        const double step = dp.norm();
        // Declare convergence when the step drops below the tolerance, or
        // when sub-micrometer steps stop shrinking: at that scale the update
        // is rounding noise of the ~1e7 m range arithmetic.
        if (step < cfg.convergence_eps_m ||
            (step < 1e-6 && step >= 0.5 * prev_step)) {
            rep.converged = true;
            break;
        }
        prev_step = step;
    }
    // final residuals and geometry at the converged point
    rep.geometry = build_geometry(epoch, rep.solution, rep.solution.mode);
    for (int j = 0; j < n; ++j)
        residuals(j) = epoch.observations[j].pseudorange_m -
                       predict_pseudorange(epoch.observations[j], rep.solution,
                                           cfg.isb_known_s);
    rep.final_residuals_m = residuals;
    return rep;
}

Epoch apply_tamper(const Epoch& epoch, const TamperVector& tamper) {
    if (tamper.delta_r_m.size() != epoch.n_total())
        throw DimensionMismatch("tamper length " + std::to_string(tamper.delta_r_m.size()) +
                                " != N = " + std::to_string(epoch.n_total()));
    Epoch out = epoch;
    for (int j = 0; j < out.n_total(); ++j)
        out.observations[j].pseudorange_m += tamper.delta_r_m(j);
    return out;
}

}  // namespace gnssxa
