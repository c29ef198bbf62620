#ifndef GNSSXA_COORDS_HPP
#define GNSSXA_COORDS_HPP

#include <Eigen/Dense>

namespace gnssxa {

/// Geodetic coordinates on the WGS-84 ellipsoid.
struct Geodetic {
    double lat_deg;
    double lon_deg;
    double alt_m;
};

Eigen::Vector3d geodetic_to_ecef(const Geodetic& g);

/// Iterative inverse; converges to sub-millimeter for terrestrial points.
Geodetic ecef_to_geodetic(const Eigen::Vector3d& ecef);

/// Rotation with rows east, north, up: enu = R * (ecef - origin).
Eigen::Matrix3d ecef_to_enu_rotation(const Eigen::Vector3d& origin_ecef);

/// ENU offset at `origin_ecef` mapped to an absolute ECEF point.
Eigen::Vector3d enu_offset_to_ecef(const Eigen::Vector3d& origin_ecef,
                                   const Eigen::Vector3d& enu);

}  // namespace gnssxa

#endif
