#include "gnssxa/geometry.hpp"

#include <cmath>
#include <limits>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "gnssxa/coords.hpp"
#include "gnssxa/errors.hpp"

namespace gnssxa {

Eigen::VectorXd PvtSolution::as_vector() const {
    Eigen::VectorXd v(state_size());
    v.head<3>() = pos_ecef;
    v.tail(clocks_m.size()) = clocks_m;
    return v;
}

PvtSolution PvtSolution::from_vector(const Eigen::VectorXd& v, ClockMode mode) {
    PvtSolution p;
    p.mode = mode;
    p.pos_ecef = v.head<3>();
    p.clocks_m = v.tail(v.size() - 3);
    return p;
}

double default_rank_tol(const Eigen::MatrixXd& a) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    return std::max(a.rows(), a.cols()) * std::numeric_limits<double>::epsilon() * smax;
}

GeometrySet build_geometry(const Epoch& epoch, const PvtSolution& lin, ClockMode mode) {
    const int n = epoch.n_total();
    const int m_clocks = mode == ClockMode::MultiRef
                             ? static_cast<int>(lin.clocks_m.size())
                             : 1;
    GeometrySet gs;
    gs.mode = mode;
    gs.n_auth = epoch.n_auth();
    gs.g.setZero(n, 3 + m_clocks);
    for (int j = 0; j < n; ++j) {
        const auto& obs = epoch.observations[j];
        const Eigen::Vector3d d = lin.pos_ecef - obs.pos_ecef;
        const double rho = d.norm();
        if (rho <= 0.0)
            throw DegenerateGeometry("linearization point coincides with satellite " +
                                     obs.sat_id);
        gs.g.block<1, 3>(j, 0) = (d / rho).transpose();
        const int col = mode == ClockMode::MultiRef ? 3 + (obs.constellation - 1) : 3;
        gs.g(j, col) = 1.0;
    }
    gs.h = pseudoinverse(gs.g);
    return gs;
}

Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& g) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(g);
    if (cod.rank() < g.cols())
        throw DegenerateGeometry("geometry matrix rank " + std::to_string(cod.rank()) +
                                 " < " + std::to_string(g.cols()));
    return cod.pseudoInverse();
}

NullSpaceBasis null_space(const Eigen::MatrixXd& a, double tol) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    if (tol <= 0.0) {
        const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
        tol = std::max(a.rows(), a.cols()) * std::numeric_limits<double>::epsilon() * smax;
    }
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol) ++rank;
    NullSpaceBasis basis;
    basis.tol = tol;
    basis.k = static_cast<int>(a.cols()) - rank;
    basis.vectors = svd.matrixV().rightCols(basis.k);
    return basis;
}

DopReport dop(const Eigen::MatrixXd& g, const Eigen::Vector3d& origin_ecef,
              double sigma_l_m) {
    if (g.cols() != 4)
        throw DimensionMismatch("DOP requires a single-reference (4-column) geometry");
    // Rotate position columns so the covariance axes are ENU.
    const Eigen::Matrix3d r = ecef_to_enu_rotation(origin_ecef);
    Eigen::MatrixXd g_enu = g;
    g_enu.leftCols(3) = g.leftCols(3) * r.transpose();

    Eigen::MatrixXd gtg = g_enu.transpose() * g_enu;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gtg);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
        throw DegenerateGeometry("G^T G not positive definite");
    const Eigen::MatrixXd cov = ldlt.solve(Eigen::MatrixXd::Identity(4, 4));

    DopReport rep;
    rep.gdop = std::sqrt(cov.trace());
    rep.pdop = std::sqrt(cov(0, 0) + cov(1, 1) + cov(2, 2));
    rep.sigma_east_m = sigma_l_m * std::sqrt(cov(0, 0));
    rep.sigma_north_m = sigma_l_m * std::sqrt(cov(1, 1));
    rep.sigma_up_m = sigma_l_m * std::sqrt(cov(2, 2));
    rep.sigma_clock_m = sigma_l_m * std::sqrt(cov(3, 3));
    return rep;
}

}  // namespace gnssxa
