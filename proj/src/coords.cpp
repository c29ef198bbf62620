#include "gnssxa/coords.hpp"

#include <cmath>

#include "gnssxa/constants.hpp"

namespace gnssxa {

Eigen::Vector3d geodetic_to_ecef(const Geodetic& g) {
    const double lat = g.lat_deg * kDeg2Rad;
    const double lon = g.lon_deg * kDeg2Rad;
    const double slat = std::sin(lat), clat = std::cos(lat);
    const double n = kWgs84A / std::sqrt(1.0 - kWgs84E2 * slat * slat);
    return {(n + g.alt_m) * clat * std::cos(lon),
            (n + g.alt_m) * clat * std::sin(lon),
            (n * (1.0 - kWgs84E2) + g.alt_m) * slat};
}

Geodetic ecef_to_geodetic(const Eigen::Vector3d& ecef) {
    const double x = ecef.x(), y = ecef.y(), z = ecef.z();
    const double lon = std::atan2(y, x);
    const double p = std::hypot(x, y);
    double lat = std::atan2(z, p * (1.0 - kWgs84E2));
    double alt = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double slat = std::sin(lat);
        const double n = kWgs84A / std::sqrt(1.0 - kWgs84E2 * slat * slat);
        alt = p / std::cos(lat) - n;
        lat = std::atan2(z, p * (1.0 - kWgs84E2 * n / (n + alt)));
    }
    return {lat * kRad2Deg, lon * kRad2Deg, alt};
}

Eigen::Matrix3d ecef_to_enu_rotation(const Eigen::Vector3d& origin_ecef) {
    const Geodetic g = ecef_to_geodetic(origin_ecef);
    const double lat = g.lat_deg * kDeg2Rad;
    const double lon = g.lon_deg * kDeg2Rad;
    const double sl = std::sin(lat), cl = std::cos(lat);
    const double so = std::sin(lon), co = std::cos(lon);
    Eigen::Matrix3d r;
    r << -so, co, 0.0,
         -sl * co, -sl * so, cl,
         cl * co, cl * so, sl;
    return r;
}

Eigen::Vector3d enu_offset_to_ecef(const Eigen::Vector3d& origin_ecef,
                                   const Eigen::Vector3d& enu) {
    return origin_ecef + ecef_to_enu_rotation(origin_ecef).transpose() * enu;
}

}  // namespace gnssxa
