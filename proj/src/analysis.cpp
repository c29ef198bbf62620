#include "gnssxa/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "gnssxa/errors.hpp"

namespace gnssxa {

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

namespace {

// Acklam's rational approximation of the inverse standard-normal CDF,
// |relative error| < 1.15e-9; used as the seed for Newton refinement.
double inv_phi_approx(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
}

}  // namespace

double q_inverse(double p) {
    if (!(p > 0.0) || p > 1.0) throw DomainError("q_inverse needs p in (0, 1]");
    if (p == 1.0) return -std::numeric_limits<double>::infinity();
    // Q^{-1}(p) = Phi^{-1}(1 - p) = -Phi^{-1}(p)
    double x = -inv_phi_approx(p);
    // Newton on ln Q(x) = ln p, stable in both tails.
    const double lp = std::log(p);
    for (int i = 0; i < 4; ++i) {
        const double q = q_function(x);
        if (q <= 0.0) break;
        const double step = (std::log(q) - lp) * q / normal_pdf(x);
        x += step;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

MetricStats metric_stats(const GeometrySet& geom, const Eigen::MatrixXd& c_matrix,
                         const TamperVector& tamper, double sigma_l, double sigma_a,
                         TamperKind attack_kind) {
    if (c_matrix.cols() != geom.h.rows())
        throw DimensionMismatch("C column count != state size");
    if (tamper.delta_r_m.size() != geom.n_total())
        throw DimensionMismatch("tamper length != N");
    const double sigma_t2 = attack_kind == TamperKind::Relay
                                ? sigma_l * sigma_l + sigma_a * sigma_a
                                : sigma_l * sigma_l;
    const Eigen::MatrixXd chhc =
        c_matrix * geom.h * geom.h.transpose() * c_matrix.transpose();
    MetricStats s;
    s.mu = c_matrix * geom.h * tamper.delta_r_m;
    s.cov0 = sigma_l * sigma_l * chhc;
    s.cov1 = sigma_t2 * chhc;
    s.sigma0 = sigma_l * std::sqrt(chhc(0, 0));
    s.sigma1 = std::sqrt(sigma_t2 * chhc(0, 0));
    return s;
}

double threshold_from_pfa(double p_fa, double sigma0) {
    if (!(p_fa > 0.0) || p_fa > 1.0) throw DomainError("p_fa must lie in (0, 1]");
    return sigma0 * q_inverse(0.5 * p_fa);
}

double pmd_closed_form(double p_fa, double sigma0, double sigma1, double mu1) {
    if (sigma0 <= 0.0 || sigma1 <= 0.0)
        throw DomainError("sigma0 and sigma1 must be positive");
    const double t = threshold_from_pfa(p_fa, sigma0);
    const double v = q_function((-t - mu1) / sigma1) - q_function((t - mu1) / sigma1);
    return std::clamp(v, 0.0, 1.0);
}

QuadFormModel quadform_model(const Eigen::Vector3d& mean, const Eigen::Matrix3d& cov) {
    if ((cov - cov.transpose()).norm() > 1e-10 * std::max(1.0, cov.norm()))
        throw NotSPD("covariance not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
        throw NotSPD("covariance not positive definite");
    QuadFormModel m;
    m.mean = mean;
    m.cov = cov;
    m.lambdas = es.eigenvalues();
    // b = Lambda^{-1/2} P^T mu
    m.b_vec = es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
              (es.eigenvectors().transpose() * mean);
    return m;
}

double QuadFormModel::sample(Rng& rng) const {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double u = rng.normal();
        s += lambdas(i) * (u + b_vec(i)) * (u + b_vec(i));
    }
    return s;
}

double QuadFormModel::expected_value() const {
    return (lambdas.array() * (1.0 + b_vec.array().square())).sum();
}

DetCurve det_closed_form(const MetricStats& stats, const std::vector<double>& pfa_grid) {
    DetCurve curve;
    curve.mode = DetMode::ClosedForm;
    const double mu1 = stats.mu.size() ? stats.mu(0) : 0.0;
    for (double pfa : pfa_grid) {
        DetPoint pt;
        pt.p_fa = pfa;
        pt.threshold = threshold_from_pfa(pfa, stats.sigma0);
        pt.p_md = pmd_closed_form(pfa, stats.sigma0, stats.sigma1, mu1);
        curve.points.push_back(pt);
    }
    return curve;
}

double wilson_halfwidth(long long k, long long n, double z) {
    if (n <= 0) return 1.0;
    const double p = static_cast<double>(k) / static_cast<double>(n);
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    return z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * static_cast<double>(n) * n)) /
           denom;
}

}  // namespace gnssxa
