#ifndef GNSSXA_CONSTANTS_HPP
#define GNSSXA_CONSTANTS_HPP

namespace gnssxa {

/// Speed of light [m/s], exact.
inline constexpr double kSpeedOfLight = 299792458.0;

// WGS-84 ellipsoid
inline constexpr double kWgs84A = 6378137.0;              ///< semi-major axis [m]
inline constexpr double kWgs84F = 1.0 / 298.257223563;    ///< flattening
inline constexpr double kWgs84E2 = kWgs84F * (2.0 - kWgs84F);  ///< first eccentricity squared

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDeg2Rad = kPi / 180.0;
inline constexpr double kRad2Deg = 180.0 / kPi;

}  // namespace gnssxa

#endif
