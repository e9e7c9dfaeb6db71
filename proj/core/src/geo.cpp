#include "busim/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace busim {

namespace {
double to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
}  // namespace

double haversine_m(double lat1, double lon1, double lat2, double lon2) {
  double dlat = to_rad(lat2 - lat1);
  double dlon = to_rad(lon2 - lon1);
  double sin_lat = std::sin(dlat / 2.0);
  double sin_lon = std::sin(dlon / 2.0);
  double a = sin_lat * sin_lat +
             std::cos(to_rad(lat1)) * std::cos(to_rad(lat2)) * sin_lon * sin_lon;
  a = std::clamp(a, 0.0, 1.0);
  double c = 2.0 * std::atan2(std::sqrt(a), std::sqrt(1.0 - a));
  return kEarthRadiusM * c;
}

}  // namespace busim
