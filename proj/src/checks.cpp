#include "gnssxa/checks.hpp"

#include <cmath>

#include "gnssxa/constants.hpp"
#include "gnssxa/errors.hpp"

namespace gnssxa {

TimeCheckConfig TimeCheckConfig::isb_specialization(double threshold_m,
                                                    double calib_bias_m,
                                                    double isb_ref_m) {
    TimeCheckConfig cfg;
    // Clock states carry +c*t, so row 0 evaluates c*(t2 - t1); the bound
    // T + b + cISB then encodes the upper half of the absolute-value check.
    cfg.c_matrix.setZero(2, 5);
    cfg.c_matrix(0, 3) = -1.0;
    cfg.c_matrix(0, 4) = 1.0;
    cfg.c_matrix(1, 3) = 1.0;
    cfg.c_matrix(1, 4) = -1.0;
    cfg.delta_t_m.resize(2);
    cfg.delta_t_m(0) = threshold_m + calib_bias_m + isb_ref_m;
    cfg.delta_t_m(1) = threshold_m - calib_bias_m - isb_ref_m;
    cfg.threshold_m = threshold_m;
    cfg.calib_bias_m = calib_bias_m;
    cfg.isb_ref_m = isb_ref_m;
    return cfg;
}

CheckVerdict time_check(const PvtSolution& p, const TimeCheckConfig& cfg) {
    if (p.mode != ClockMode::MultiRef)
        throw DimensionMismatch("time check needs a multi-reference solution");
    if (cfg.c_matrix.cols() != p.state_size())
        throw DimensionMismatch("C has " + std::to_string(cfg.c_matrix.cols()) +
                                " columns, state size is " + std::to_string(p.state_size()));
    if (cfg.c_matrix.rows() != cfg.delta_t_m.size())
        throw DimensionMismatch("C row count != delta_t length");
    CheckVerdict v;
    v.metric = cfg.c_matrix * p.as_vector();
    v.passed = (v.metric.array() <= cfg.delta_t_m.array()).all();
    return v;
}

CheckVerdict isb_check(double t1_s, double t2_s, const TimeCheckConfig& cfg) {
    CheckVerdict v;
    const double gap = kSpeedOfLight * (t2_s - t1_s) - cfg.calib_bias_m - cfg.isb_ref_m;
    v.metric.resize(1);
    v.metric(0) = std::abs(gap);
    v.passed = v.metric(0) <= cfg.threshold_m;
    return v;
}

CheckVerdict position_check(const PvtSolution& p, const PositionCheckConfig& cfg) {
    if (p.mode != ClockMode::SingleRef)
        throw DimensionMismatch("position check needs a single-reference solution");
    CheckVerdict v;
    v.metric.resize(1);
    v.metric(0) = (cfg.p_ref_ecef - p.pos_ecef).norm();
    v.passed = v.metric(0) <= cfg.delta_pos_m;
    return v;
}

}  // namespace gnssxa
