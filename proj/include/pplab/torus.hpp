#pragma once

#include <cmath>

namespace pplab::torus {

/// Wraps a coordinate into [0, extent).
constexpr int wrap(int v, int extent) noexcept {
    const int m = v % extent;
    return m < 0 ? m + extent : m;
}

/// Shortest signed offset from `from` to `to` on a ring of size `extent`.
/// Ties (exactly half the ring) resolve to the positive direction.
constexpr int delta(int from, int to, int extent) noexcept {
    int d = wrap(to - from, extent);
    if (2 * d > extent) d -= extent;
    return d;
}

/// Euclidean distance with wrap-around in both axes.
inline double distance(int x0, int y0, int x1, int y1, int width, int height) noexcept {
    const double dx = delta(x0, x1, width);
    const double dy = delta(y0, y1, height);
    return std::hypot(dx, dy);
}

/// Compass bearing in degrees [0, 360) of the offset (dx, dy):
/// 0 is +y ("north"), 90 is +x ("east").
inline double bearing(double dx, double dy) noexcept {
    double deg = std::atan2(dx, dy) * 180.0 / M_PI;
    if (deg < 0.0) deg += 360.0;
    if (deg >= 360.0) deg -= 360.0;
    return deg;
}

/// Normalizes an angle into [0, 360).
inline double normalize_heading(double deg) noexcept {
    deg = std::fmod(deg, 360.0);
    if (deg < 0.0) deg += 360.0;
    if (deg >= 360.0) deg = 0.0;
    return deg;
}

/// Signed smallest turn from heading `from` to heading `to`, in (-180, 180].
inline double turn_between(double from, double to) noexcept {
    double d = std::fmod(to - from, 360.0);
    if (d > 180.0) d -= 360.0;
    if (d <= -180.0) d += 360.0;
    return d;
}

/// Cell step for a heading: the king-move neighbour closest to the heading.
struct Step {
    int dx;
    int dy;
};

inline Step step_for(double heading) noexcept {
    // Eight 45-degree sectors centred on the compass points.
    static constexpr Step kSteps[8] = {{0, 1}, {1, 1},   {1, 0},  {1, -1},
                                       {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}};
    const auto sector = static_cast<int>(std::floor(normalize_heading(heading) / 45.0 + 0.5)) % 8;
    return kSteps[sector];
}

}  // namespace pplab::torus
