#ifndef GNSSXA_CHECKS_HPP
#define GNSSXA_CHECKS_HPP

#include <Eigen/Dense>

#include "gnssxa/geometry.hpp"

namespace gnssxa {

/// Time-based check theta_t = C * p <= delta_t, with the two-constellation
/// ISB specialization parameters.
struct TimeCheckConfig {
    Eigen::MatrixXd c_matrix;   ///< N_c x (3+M), rows in +/- pairs
    Eigen::VectorXd delta_t_m;  ///< N_c thresholds [m]

    // ISB specialization (Galileo/GPS style, M = 2)
    double threshold_m = 0.0;   ///< T
    double calib_bias_m = 0.0;  ///< b, in meters
    double isb_ref_m = 0.0;     ///< c * ISB

    /// C and delta_t for |c(t2 - t1) - b - c*ISB| <= T with M = 2:
    /// C = [0 0 0 -1 1; 0 0 0 1 -1], delta_t = [T + b + cISB; T - b - cISB]
    /// (clock states carry +c*t).
    static TimeCheckConfig isb_specialization(double threshold_m, double calib_bias_m,
                                              double isb_ref_m);
};

struct PositionCheckConfig {
    Eigen::Vector3d p_ref_ecef = Eigen::Vector3d::Zero();
    double delta_pos_m = 0.0;
};

struct CheckVerdict {
    Eigen::VectorXd metric;  ///< theta_t components, or a single theta_pos
    bool passed = false;     ///< H0-hat iff every component <= its threshold
};

/// theta_t = C * p, component-wise comparison against delta_t.
/// Throws DimensionMismatch.
CheckVerdict time_check(const PvtSolution& p, const TimeCheckConfig& cfg);

/// Scalar ISB check |c(t2 - t1) - b - c*ISB| <= T; algebraically equivalent
/// to time_check under the specialization mapping.
CheckVerdict isb_check(double t1_s, double t2_s, const TimeCheckConfig& cfg);

/// theta_pos = 3D distance to p_ref, compared against delta_pos.
CheckVerdict position_check(const PvtSolution& p, const PositionCheckConfig& cfg);

}  // namespace gnssxa

#endif
