#ifndef GNSSXA_GEOMETRY_HPP
#define GNSSXA_GEOMETRY_HPP

#include <Eigen/Dense>

#include "gnssxa/scenario.hpp"

namespace gnssxa {

/// Clock-bias formulation of the PVT state.
enum class ClockMode {
    MultiRef,   ///< one clock bias per constellation, state size 3 + M
    SingleRef,  ///< one unified clock bias, state size 4
};

/// Receiver state: ECEF position [m] and clock term(s) stored in meters (c*t).
struct PvtSolution {
    Eigen::Vector3d pos_ecef = Eigen::Vector3d::Zero();
    Eigen::VectorXd clocks_m;  ///< length M (MultiRef) or 1 (SingleRef)
    ClockMode mode = ClockMode::SingleRef;

    int state_size() const { return 3 + static_cast<int>(clocks_m.size()); }
    Eigen::VectorXd as_vector() const;
    static PvtSolution from_vector(const Eigen::VectorXd& v, ClockMode mode);
};

/// Geometry matrix G, its pseudoinverse H, and the authenticated/open split.
struct GeometrySet {
    Eigen::MatrixXd g;  ///< N x (3+M) or N x 4
    Eigen::MatrixXd h;  ///< pseudoinverse of g
    int n_auth = 0;
    ClockMode mode = ClockMode::SingleRef;

    Eigen::MatrixXd h_auth() const { return h.leftCols(n_auth); }
    Eigen::MatrixXd h_open() const { return h.rightCols(h.cols() - n_auth); }
    int n_total() const { return static_cast<int>(g.rows()); }
    int n_open() const { return n_total() - n_auth; }
};

/// Orthonormal basis of a numerical null space.
struct NullSpaceBasis {
    Eigen::MatrixXd vectors;  ///< columns u_1..u_K
    int k = 0;
    double tol = 0.0;  ///< singular-value threshold used
};

struct DopReport {
    double gdop = 0.0;
    double pdop = 0.0;
    double sigma_east_m = 0.0;
    double sigma_north_m = 0.0;
    double sigma_up_m = 0.0;
    double sigma_clock_m = 0.0;
};

/// Builds G and H at `linearization_point`. Row j's position part is the
/// gradient of the predicted pseudorange w.r.t. receiver position,
/// (p_hat - p_sat_j) / rho_hat_j; clock columns are exactly 1 in the column
/// of satellite j's constellation (MultiRef) or in the single clock column.
GeometrySet build_geometry(const Epoch& epoch, const PvtSolution& linearization_point,
                           ClockMode mode);

/// Moore-Penrose pseudoinverse of a full-column-rank matrix via a
/// rank-revealing orthogonal factorization. Throws DegenerateGeometry.
Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& g);

/// Default rank tolerance: max(rows, cols) * eps * sigma_max.
double default_rank_tol(const Eigen::MatrixXd& a);

/// Orthonormal basis of the null space of `a` at tolerance `tol`
/// (tol <= 0 selects the default). K may be 0.
NullSpaceBasis null_space(const Eigen::MatrixXd& a, double tol = -1.0);

/// Dilution of precision for a single-reference geometry, with position
/// axes rotated to ENU at `origin_ecef`.
DopReport dop(const Eigen::MatrixXd& g, const Eigen::Vector3d& origin_ecef,
              double sigma_l_m);

}  // namespace gnssxa

#endif
