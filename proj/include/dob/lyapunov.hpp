#pragma once

// Integer-valued integrals of the conservative billiard about the square,
// the triangle and the hexagon. For z in A_i write
//   z = w_i + x (w_{i-1} - w_i) + y (w_i - w_{i+1}),  x, y > 0,
// and set I(z) = h(x, y) with
//   square:   h(x, y) = [x] + [y]
//   triangle: h_-(x, y) = [x/2] + [y/2] + [(|x - y| + 1)/2]
//   hexagon:  h_+(x, y) = [x/2] + [y/2] + [(|x + y| + 1)/2].
// The coordinates are affine invariant, so affine images of these tables
// work as well. I is conserved when every rate is 1 and does not increase
// under the dissipative map.

#include <cmath>
#include <string>

#include "dob/billiard.hpp"

namespace dob {

enum class LyapunovKind { Square, Triangle, Hexagon };

inline LyapunovKind lyapunov_kind_for(const Polygon& P) {
    switch (P.size()) {
        case 4: return LyapunovKind::Square;
        case 3: return LyapunovKind::Triangle;
        case 6: return LyapunovKind::Hexagon;
        default: throw InvalidInput("Lyapunov function is defined for the square, triangle and hexagon only");
    }
}

struct ConeCoords {
    int cone = -1;
    double x = 0.0;
    double y = 0.0;
};

inline ConeCoords cone_coords(Point z, const Polygon& P, double eps = kDefaultEps) {
    const Location loc = locate(z, P, eps);
    if (!loc.in_cone()) throw SingularHit("cone_coords: point is not in an open cone");
    const int i = loc.cone;
    const Point u = P.vertex(i - 1) - P.vertex(i);
    const Point v = P.vertex(i) - P.vertex(i + 1);
    const Point r = z - P.vertex(i);
    const double det = cross(u, v);
    return {i, cross(r, v) / det, cross(u, r) / det};
}

namespace detail {

inline long checked_floor(double t, double eps) {
    const double f = std::floor(t);
    if (t - f < eps || f + 1.0 - t < eps) throw SingularHit("Lyapunov value is ambiguous at an integer boundary");
    return static_cast<long>(f);
}

}  // namespace detail

inline long lyapunov_h(double x, double y, LyapunovKind kind, double eps = kDefaultEps) {
    using detail::checked_floor;
    switch (kind) {
        case LyapunovKind::Square: return checked_floor(x, eps) + checked_floor(y, eps);
        case LyapunovKind::Triangle:
            return checked_floor(x / 2, eps) + checked_floor(y / 2, eps) + checked_floor((std::abs(x - y) + 1) / 2, eps);
        case LyapunovKind::Hexagon:
            return checked_floor(x / 2, eps) + checked_floor(y / 2, eps) + checked_floor((std::abs(x + y) + 1) / 2, eps);
    }
    return 0;
}

inline long lyapunov_value(Point z, const Polygon& P, LyapunovKind kind, double eps = kDefaultEps) {
    const ConeCoords c = cone_coords(z, P, eps);
    return lyapunov_h(c.x, c.y, kind, eps);
}

inline long lyapunov_value(Point z, const Polygon& P, double eps = kDefaultEps) {
    return lyapunov_value(z, P, lyapunov_kind_for(P), eps);
}

}  // namespace dob
