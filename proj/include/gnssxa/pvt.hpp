#ifndef GNSSXA_PVT_HPP
#define GNSSXA_PVT_HPP

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gnssxa/attacks.hpp"
#include "gnssxa/geometry.hpp"
#include "gnssxa/scenario.hpp"

namespace gnssxa {

struct SolverConfig {
    int max_iters = 20;
    double convergence_eps_m = 1e-8;
    /// Known ISBs t_i - t_1 [s], i = 2..M; required for single-reference
    /// solving of multi-constellation epochs.
    std::vector<double> isb_known_s;
};

struct SolveReport {
    PvtSolution solution;
    int iterations = 0;
    Eigen::VectorXd final_residuals_m;
    bool converged = false;
    GeometrySet geometry;  ///< at the final linearization point
};

/// Predicted pseudorange at the estimate `est`:
///   rho_hat + c*t_sat + clk_rx(constellation) + D_atm
/// The receiver clock term enters with a plus sign so that the solved clock
/// state equals the true bias of the range model used by the generator
/// (single sign convention across generator and solver).
double predict_pseudorange(const SatelliteObservation& obs, const PvtSolution& est,
                           const std::vector<double>& isb_known_s = {});

/// Iterative linearized least squares: dp = H * dr until ||dp|| < eps.
SolveReport solve(const Epoch& epoch, const PvtSolution& initial,
                  const SolverConfig& cfg);

/// Cold-start initial state: ECEF origin, zero clocks.
PvtSolution cold_start(ClockMode mode, int m);

/// Adds tamper.delta_r to the epoch's pseudoranges. Throws DimensionMismatch.
Epoch apply_tamper(const Epoch& epoch, const TamperVector& tamper);

}  // namespace gnssxa

#endif
