#ifndef GNSSXA_ANALYSIS_HPP
#define GNSSXA_ANALYSIS_HPP

#include <vector>

#include <Eigen/Dense>

#include "gnssxa/attacks.hpp"
#include "gnssxa/geometry.hpp"
#include "gnssxa/rng.hpp"

namespace gnssxa {

/// Gaussian tail Q(x) = P(Z > x).
double q_function(double x);

/// Inverse of Q, accurate to ~1e-14 relative over (0, 1) via a rational
/// initial guess refined with Halley steps on erfc.
double q_inverse(double p);

/// First and second moments of the time-check metric under H0/H1.
struct MetricStats {
    Eigen::VectorXd mu;     ///< C H dr_T [m]
    double sigma0 = 0.0;    ///< std of theta_t1 under H0
    double sigma1 = 0.0;    ///< std of theta_t1 under H1
    Eigen::MatrixXd cov0;   ///< sigma_L^2 C H H^T C^T
    Eigen::MatrixXd cov1;   ///< sigma_T^2 C H H^T C^T
};

MetricStats metric_stats(const GeometrySet& geom, const Eigen::MatrixXd& c_matrix,
                         const TamperVector& tamper, double sigma_l, double sigma_a,
                         TamperKind attack_kind);

/// T = sigma0 * Qinv(p_fa / 2), from p_FA = 2 Q(T / sigma0).
double threshold_from_pfa(double p_fa, double sigma0);

/// p_MD = Q((-T - mu1)/sigma1) - Q((T - mu1)/sigma1), T = sigma0 Qinv(p_fa/2).
double pmd_closed_form(double p_fa, double sigma0, double sigma1, double mu1);

/// Quadratic form theta^2 = eps^T eps with eps ~ N(mu, Sigma), decomposed as
/// sum_i lambda_i (u_i + b_i)^2 over independent standard normals u_i.
struct QuadFormModel {
    Eigen::Vector3d lambdas;
    Eigen::Vector3d b_vec;
    Eigen::Vector3d mean;
    Eigen::Matrix3d cov;

    double sample(Rng& rng) const;  ///< one draw of theta^2
    double expected_value() const;  ///< tr(Sigma) + mu^T mu
};

QuadFormModel quadform_model(const Eigen::Vector3d& mean, const Eigen::Matrix3d& cov);

struct DetPoint {
    double threshold = 0.0;
    double p_fa = 0.0;
    double p_md = 0.0;
    double fa_halfwidth = 0.0;  ///< Wilson confidence half-width (empirical only)
    double md_halfwidth = 0.0;
};

enum class DetMode { ClosedForm, Empirical };

struct DetCurve {
    std::vector<DetPoint> points;
    long long trials = 0;
    DetMode mode = DetMode::ClosedForm;
};

/// Eq.-(45)-style curve: one point per p_FA grid value.
DetCurve det_closed_form(const MetricStats& stats, const std::vector<double>& pfa_grid);

/// Wilson score half-width for k successes in n trials at z sigma.
double wilson_halfwidth(long long k, long long n, double z = 1.0);

}  // namespace gnssxa

#endif
