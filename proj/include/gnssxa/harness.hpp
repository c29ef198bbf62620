#ifndef GNSSXA_HARNESS_HPP
#define GNSSXA_HARNESS_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "gnssxa/analysis.hpp"
#include "gnssxa/attacks.hpp"
#include "gnssxa/checks.hpp"
#include "gnssxa/pvt.hpp"
#include "gnssxa/scenario.hpp"

namespace gnssxa {

using CheckConfig = std::variant<TimeCheckConfig, PositionCheckConfig>;

struct ExperimentConfig {
    AttackPlan attack;
    CheckConfig check;
    NoiseModel noise;
    int repetitions = 1;
    /// Reuse the H0 noise draw for the H1 trial of the same (epoch, rep);
    /// common random numbers reduce DET variance.
    bool common_random_numbers = true;
    /// Epoch index (0-based) at which the attack switches on; earlier epochs
    /// record the legitimate solution under H1 as well (step-change attacks).
    int attack_start_epoch = 0;
    int threads = 0;  ///< 0 = read GNSSXA_THREADS, fall back to 1
};

struct TrialRecord {
    int epoch = 0;
    int rep = 0;
    bool attacked = false;       ///< H1 when true
    double metric_m = 0.0;       ///< decision metric (|theta_t1| or theta_pos)
    PvtSolution solved;
    double shift_clk_us = 0.0;   ///< induced clock shift vs legitimate solve
    double shift_pos_m = 0.0;    ///< induced 3D position shift vs legitimate
};

/// One H0 and one H1 record per (epoch, repetition); deterministic given
/// noise.seed. Module errors propagate tagged with (epoch, repetition).
std::vector<TrialRecord> run_experiment(const Scenario& scenario,
                                        const ExperimentConfig& cfg);

/// Empirical DET: p_FA = fraction of H0 records with metric > threshold,
/// p_MD = fraction of H1 records with metric <= threshold.
DetCurve empirical_det(const std::vector<TrialRecord>& records,
                       const std::vector<double>& threshold_grid);

/// 200 log-spaced thresholds spanning [sigma0 / 100, 10 * max |metric|].
std::vector<double> default_threshold_grid(const std::vector<TrialRecord>& records,
                                           double sigma0);

/// One experiment per distance, the target placed along a fixed horizontal
/// bearing (east) from the scenario truth. Time-targeted attacks only.
std::vector<DetCurve> sweep_target_distance(const Scenario& scenario,
                                            const ExperimentConfig& base_cfg,
                                            const std::vector<double>& distances_m,
                                            int grid_points = 200);

// CSV outputs: 12 significant digits, LF line endings.
void write_trials_csv(const std::vector<TrialRecord>& records, const std::string& path);
void write_det_csv(const DetCurve& curve, const std::string& path);
/// Per-epoch legitimate vs attacked clock bias [us] (first H0/H1 record pair
/// of each epoch).
void write_trace_csv(const std::vector<TrialRecord>& records, const std::string& path);

}  // namespace gnssxa

#endif
