#pragma once

#include <cmath>

namespace spax {

struct LatLon {
    double lat = 0.0;
    double lon = 0.0;
};

inline constexpr double kEarthRadiusMiles = 3958.8;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegToRad = kPi / 180.0;
// One degree of latitude on the sphere above.
inline constexpr double kMilesPerDegree = kEarthRadiusMiles * kDegToRad;

// Haversine distance in statute miles. Symmetric, non-negative.
inline double great_circle_miles(const LatLon& a, const LatLon& b) {
    const double lat1 = a.lat * kDegToRad;
    const double lat2 = b.lat * kDegToRad;
    const double dlat = (b.lat - a.lat) * kDegToRad;
    const double dlon = (b.lon - a.lon) * kDegToRad;
    const double sl = std::sin(0.5 * dlat);
    const double so = std::sin(0.5 * dlon);
    double h = sl * sl + std::cos(lat1) * std::cos(lat2) * so * so;
    if (h < 0.0) h = 0.0;
    if (h > 1.0) h = 1.0;
    return 2.0 * kEarthRadiusMiles * std::asin(std::sqrt(h));
}

// Equirectangular projection to miles around a reference latitude.
// Used where planar geometry is needed (KDE integrals, spline domains);
// adequate at state scale.
struct LocalProjection {
    double lat_ref = 0.0;
    double lon_ref = 0.0;
    double mi_per_deg_lon = kMilesPerDegree;

    LocalProjection() = default;
    LocalProjection(double lat0, double lon0)
        : lat_ref(lat0), lon_ref(lon0),
          mi_per_deg_lon(kMilesPerDegree * std::cos(lat0 * kDegToRad)) {}

    double x_miles(const LatLon& p) const { return (p.lon - lon_ref) * mi_per_deg_lon; }
    double y_miles(const LatLon& p) const { return (p.lat - lat_ref) * kMilesPerDegree; }

    double planar_miles(const LatLon& a, const LatLon& b) const {
        const double dx = x_miles(a) - x_miles(b);
        const double dy = y_miles(a) - y_miles(b);
        return std::sqrt(dx * dx + dy * dy);
    }
};

}  // namespace spax
