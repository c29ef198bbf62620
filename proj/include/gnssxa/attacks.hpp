#ifndef GNSSXA_ATTACKS_HPP
#define GNSSXA_ATTACKS_HPP

#include <variant>

#include <Eigen/Dense>

#include "gnssxa/geometry.hpp"

namespace gnssxa {

enum class TamperKind { Generation, Relay };

/// Per-satellite range alteration, authenticated-first ordering.
struct TamperVector {
    Eigen::VectorXd delta_r_m;
    TamperKind kind = TamperKind::Generation;
};

/// Drive the PVT to a target solution while keeping the time check silent.
struct TimeTargetedAttack {
    PvtSolution p_target;  ///< MultiRef
};

/// Common-delay relay (meaconing) with optional position slack xi.
struct PositionRelayAttack {
    double gamma_t_s = 0.0;
    Eigen::Vector3d xi_m = Eigen::Vector3d::Zero();
};

/// Open-signals-only clock push against the position check.
struct PositionGenerationAttack {
    double gamma_t_s = 0.0;
};

using AttackPlan =
    std::variant<TimeTargetedAttack, PositionRelayAttack, PositionGenerationAttack>;

/// Affine space of alarm-free open-range alterations.
struct FeasibleSpace {
    Eigen::VectorXd particular;  ///< N_O-vector, minimum-norm solution
    NullSpaceBasis basis;        ///< basis of N(C * H_O), open coordinates
    int dim() const { return basis.k; }
};

/// Solves C * H_O * dr = delta_prime: minimum-norm particular solution plus
/// the null-space basis. Throws RankDeficient / Infeasible.
FeasibleSpace feasible_space(const GeometrySet& geom, const Eigen::MatrixXd& c_matrix,
                             const Eigen::VectorXd& delta_prime);

/// Exact construction: alpha* = (U^T H^T H U)^{-1} U^T H^T (dp_target - dp_legit),
/// with U the feasible-space basis embedded into N-vectors (zeros on the
/// authenticated coordinates). Throws SingularProjection.
TamperVector time_attack_exact(const GeometrySet& geom, const FeasibleSpace& space,
                               const Eigen::VectorXd& dp_target,
                               const Eigen::VectorXd& dp_legit);

/// Least-squares variant: argmin over the feasible space of
/// ||H * dr - (dp_target - dp_legit)||^2.
TamperVector time_attack_minimize(const GeometrySet& geom, const FeasibleSpace& space,
                                  const Eigen::VectorXd& dp_target,
                                  const Eigen::VectorXd& dp_legit);

/// Completes a position-only displacement into the full-state displacement
/// the feasible space can realize exactly: min-norm coefficients alpha with
/// (H U alpha)_pos = dp_pos, returned as H U alpha. The clock components come
/// out as whatever the alarm-free subspace forces them to be. Throws
/// Infeasible when the position rows of H U are rank deficient.
Eigen::VectorXd reachable_target(const GeometrySet& geom, const FeasibleSpace& space,
                                 const Eigen::Vector3d& dp_pos_m);

/// Relay: dr = c*gamma_t * 1 + G * xi (single-reference geometry).
TamperVector relay_attack_position(const GeometrySet& geom, double gamma_t_s,
                                   const Eigen::Vector3d& xi_m);

/// Generation: solves H * dr = [0 0 0 c*gamma_t]^T with zero alteration on
/// the authenticated ranges. Throws Infeasible when N_O < 4 or the rank
/// condition on the null-space basis fails.
TamperVector generation_attack_position(const GeometrySet& geom, double gamma_t_s);

}  // namespace gnssxa

#endif
