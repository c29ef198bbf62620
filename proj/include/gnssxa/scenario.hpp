#ifndef GNSSXA_SCENARIO_HPP
#define GNSSXA_SCENARIO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gnssxa/rng.hpp"

namespace gnssxa {

/// One satellite's data for one epoch.
struct SatelliteObservation {
    std::string sat_id;
    int constellation = 1;       ///< 1..M
    bool authenticated = false;
    Eigen::Vector3d pos_ecef = Eigen::Vector3d::Zero();  ///< [m]
    double sat_clock_bias_s = 0.0;
    double atmo_delay_m = 0.0;   ///< >= 0
    double pseudorange_m = 0.0;
};

/// Observations for one epoch, authenticated entries first.
struct Epoch {
    double time_tag_s = 0.0;
    std::vector<SatelliteObservation> observations;

    int n_total() const { return static_cast<int>(observations.size()); }
    int n_auth() const;
    int n_open() const { return n_total() - n_auth(); }
};

struct ReceiverTruth {
    Eigen::Vector3d pos_ecef = Eigen::Vector3d::Zero();
    std::vector<double> clock_bias_s;  ///< one per constellation
};

struct Scenario {
    int m = 1;  ///< constellation count
    ReceiverTruth receiver_truth;
    std::vector<double> isb_true_s;  ///< t_i - t_1 for i = 2..M
    std::vector<Epoch> epochs;
};

/// Range-noise model. Tampered entries get std sqrt(sigma_l^2 + sigma_a^2)
/// under relay attacks; generation attacks use sigma_a = 0.
struct NoiseModel {
    double sigma_l_m = 0.0;  ///< victim receiver noise std
    double sigma_a_m = 0.0;  ///< attacker receiver noise std (relay only)
    std::uint64_t seed = 0;

    double sigma_tampered() const;
};

/// Synthesizes a sky-distributed MEO constellation visible from
/// `truth.pos_ecef` and noiseless pseudoranges consistent with the
/// solver's range model. Authenticated satellites come first.
///
/// Throws InfeasibleGeometry / DimensionMismatch on bad counts.
Scenario generate_scenario(int n_auth, int n_open, int m,
                           const ReceiverTruth& truth, int n_epochs,
                           std::uint64_t geometry_seed);

/// Independent zero-mean Gaussian perturbation of each pseudorange.
/// Only pseudorange fields change. `tampered_mask` may be empty (no entry
/// tampered) or length N.
Epoch add_noise(const Epoch& epoch, const NoiseModel& noise,
                const std::vector<bool>& tampered_mask, Rng& rng);

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path);

/// Structural validation shared by the loader and the generator:
/// authenticated-first ordering, constant M, solvability counts.
void validate_scenario(const Scenario& scenario);

}  // namespace gnssxa

#endif
