#pragma once

namespace busim {

/// Mean earth radius used for all spherical distance computations.
constexpr double kEarthRadiusM = 6371000.0;

/// Great-circle distance in meters between two WGS84 points (haversine).
double haversine_m(double lat1, double lon1, double lat2, double lon2);

}  // namespace busim
