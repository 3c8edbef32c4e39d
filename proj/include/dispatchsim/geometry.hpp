#pragma once

#include <cmath>

namespace dispatchsim {

struct Location {
  double x = 0.0;
  double y = 0.0;
};

inline bool operator==(Location a, Location b) { return a.x == b.x && a.y == b.y; }

// Travel speed is 1 distance unit per time unit, so Euclidean distance
// doubles as travel time throughout.
inline double travel_time(Location a, Location b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

}
