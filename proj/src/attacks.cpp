#include "gnssxa/attacks.hpp"

#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "gnssxa/constants.hpp"
#include "gnssxa/errors.hpp"

namespace gnssxa {

namespace {

// Embed an open-coordinates matrix/vector into N rows, zeros on the
// authenticated coordinates.
Eigen::MatrixXd embed_open(const Eigen::MatrixXd& open_part, int n, int n_auth) {
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n, open_part.cols());
    full.bottomRows(n - n_auth) = open_part;
    return full;
}

// Snap near-zero authenticated components to exact 0 so the generation
// invariant is bitwise-testable.
void snap_auth(Eigen::VectorXd& dr, int n_auth, double tol = 1e-6) {
    for (int j = 0; j < n_auth; ++j) {
        if (std::abs(dr(j)) >= tol)
            throw SingularProjection("authenticated component " + std::to_string(j) +
                                     " not zero after synthesis: " + std::to_string(dr(j)));
        dr(j) = 0.0;
    }
}

}  // namespace

FeasibleSpace feasible_space(const GeometrySet& geom, const Eigen::MatrixXd& c_matrix,
                             const Eigen::VectorXd& delta_prime) {
    const int n_open = geom.n_open();
    const int m = static_cast<int>(geom.g.cols()) - 3;
    if (c_matrix.cols() != geom.g.cols())
        throw DimensionMismatch("C column count != state size");
    if (n_open < m)
        throw RankDeficient("feasible space needs N_O >= M");

    const Eigen::MatrixXd cho = c_matrix * geom.h_open();  // N_c x N_O
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(cho);
    if (cod.rank() < m - 1)
        throw RankDeficient("C*H_O rank " + std::to_string(cod.rank()) +
                            " < M-1 = " + std::to_string(m - 1));

    FeasibleSpace space;
    if (delta_prime.size() != cho.rows())
        throw DimensionMismatch("delta_prime length != C row count");
    space.particular = cod.solve(delta_prime);  // minimum-norm least squares
    const double resid = (cho * space.particular - delta_prime).norm();
    const double scale = std::max(1.0, delta_prime.norm());
    if (resid > 1e-9 * scale)
        throw Infeasible("delta_prime not in the range of C*H_O (residual " +
                         std::to_string(resid) + ")");
    space.basis = null_space(cho);
    return space;
}

TamperVector time_attack_exact(const GeometrySet& geom, const FeasibleSpace& space,
                               const Eigen::VectorXd& dp_target,
                               const Eigen::VectorXd& dp_legit) {
    const int n = geom.n_total();
    const Eigen::MatrixXd u = embed_open(space.basis.vectors, n, geom.n_auth);
    const Eigen::MatrixXd hu = geom.h * u;
    // U^T H^T H U is singular whenever part of span(U) lies in null(G^T)
    // (e.g. every open satellite in one constellation), so the projection
    // formula is evaluated with a pseudoinverse.
    const Eigen::MatrixXd gram = hu.transpose() * hu;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(gram);
    if (cod.rank() == 0) throw SingularProjection("U^T H^T H U has rank 0");
    const Eigen::VectorXd alpha = cod.solve(hu.transpose() * (dp_target - dp_legit));

    TamperVector t;
    t.kind = TamperKind::Generation;
    t.delta_r_m = embed_open(space.particular, n, geom.n_auth) + u * alpha;
    snap_auth(t.delta_r_m, geom.n_auth);
    return t;
}

TamperVector time_attack_minimize(const GeometrySet& geom, const FeasibleSpace& space,
                                  const Eigen::VectorXd& dp_target,
                                  const Eigen::VectorXd& dp_legit) {
    const int n = geom.n_total();
    const Eigen::MatrixXd u = embed_open(space.basis.vectors, n, geom.n_auth);
    const Eigen::VectorXd dr_p = embed_open(space.particular, n, geom.n_auth);
    const Eigen::MatrixXd hu = geom.h * u;
    // min over alpha of || H (dr_p + U a) - (dp* - dp) ||
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(hu);
    if (cod.rank() == 0) throw SingularProjection("H U has rank 0");
    const Eigen::VectorXd alpha = cod.solve(dp_target - dp_legit - geom.h * dr_p);

    TamperVector t;
    t.kind = TamperKind::Generation;
    t.delta_r_m = dr_p + u * alpha;
    snap_auth(t.delta_r_m, geom.n_auth);
    return t;
}

Eigen::VectorXd reachable_target(const GeometrySet& geom, const FeasibleSpace& space,
                                 const Eigen::Vector3d& dp_pos_m) {
    const int n = geom.n_total();
    const Eigen::MatrixXd u = embed_open(space.basis.vectors, n, geom.n_auth);
    const Eigen::MatrixXd hu = geom.h * u;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(hu.topRows(3));
    if (cod.rank() < 3)
        throw Infeasible("feasible space cannot realize arbitrary positions "
                         "(position rows of H U have rank " +
                         std::to_string(cod.rank()) + ")");
    const Eigen::VectorXd alpha = cod.solve(dp_pos_m);
    return hu * alpha;
}

TamperVector relay_attack_position(const GeometrySet& geom, double gamma_t_s,
                                   const Eigen::Vector3d& xi_m) {
    if (geom.mode != ClockMode::SingleRef)
        throw DimensionMismatch("relay attack needs a single-reference geometry");
    TamperVector t;
    t.kind = TamperKind::Relay;
    const int n = geom.n_total();
    t.delta_r_m = Eigen::VectorXd::Constant(n, kSpeedOfLight * gamma_t_s);
    if (!xi_m.isZero()) t.delta_r_m += geom.g.leftCols(3) * xi_m;
    return t;
}

TamperVector generation_attack_position(const GeometrySet& geom, double gamma_t_s) {
    if (geom.mode != ClockMode::SingleRef)
        throw DimensionMismatch("generation attack needs a single-reference geometry");
    const int n = geom.n_total();
    const int n_auth = geom.n_auth;
    if (n - n_auth < 4)
        throw Infeasible("generation attack needs N_O >= 4, have N_O = " +
                         std::to_string(n - n_auth));

    const double push = kSpeedOfLight * gamma_t_s;
    TamperVector t;
    t.kind = TamperKind::Generation;
    if (gamma_t_s == 0.0) {
        t.delta_r_m = Eigen::VectorXd::Zero(n);
        return t;
    }

    // particular solution of H dr = [0 0 0 c*gamma]^T is the meaconing vector
    const NullSpaceBasis ns = null_space(geom.h);  // basis of N(H), N x (N-4)
    const Eigen::MatrixXd u_auth = ns.vectors.topRows(n_auth);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(u_auth);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n_auth);
    const Eigen::VectorXd beta = cod.solve(-push * ones);  // min-norm least squares
    const double resid = (u_auth * beta + push * ones).norm();
    if (resid > 1e-9 * std::abs(push))
        throw Infeasible("authenticated rows of the null-space basis are rank "
                         "deficient; cannot zero the authenticated tampering");

    t.delta_r_m = Eigen::VectorXd::Constant(n, push) + ns.vectors * beta;
    snap_auth(t.delta_r_m, n_auth);
    return t;
}

}  // namespace gnssxa
