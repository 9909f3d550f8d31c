#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "dob/affine.hpp"
#include "dob/geometry.hpp"

namespace dob {

/// Counter-clockwise vertex list. One or two vertices encode a degenerate
/// (contact) piece.
using ConvexPolygon = std::vector<Point>;

inline double area(const ConvexPolygon& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += cross(p[i], p[(i + 1) % p.size()]);
    return 0.5 * s;
}

/// Area centroid, falling back to the vertex average for degenerate pieces.
inline Point centroid(const ConvexPolygon& p) {
    Point avg{0.0, 0.0};
    for (const Point& q : p) avg += q;
    avg /= static_cast<double>(p.size());
    const double A = area(p);
    if (p.size() < 3 || !(std::abs(A) > 0.0)) return avg;
    Point c{0.0, 0.0};
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Point a = p[i] - avg, b = p[(i + 1) % p.size()] - avg;
        c += (a + b) * cross(a, b);
    }
    return avg + c / (6.0 * A);
}

inline double diameter(const ConvexPolygon& p) {
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j) d = std::max(d, std::abs(p[i] - p[j]));
    return d;
}

inline ConvexPolygon transform(const ConvexPolygon& p, const ComplexAffine& m) {
    ConvexPolygon out;
    out.reserve(p.size());
    for (const Point& q : p) out.push_back(m(q));
    return out;
}

/// Keeps the part with sign * cross(dir, z - origin) >= -slack.
inline ConvexPolygon clip_halfplane(const ConvexPolygon& p, Point origin, Point dir, double sign, double slack = 0.0) {
    ConvexPolygon out;
    const std::size_t n = p.size();
    if (n == 0) return out;
    out.reserve(n + 1);
    auto f = [&](Point z) { return sign * cross(dir, z - origin) + slack; };
    if (n == 1) {
        if (f(p[0]) >= 0.0) out.push_back(p[0]);
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = p[i], b = p[(i + 1) % n];
        const double fa = f(a), fb = f(b);
        if (fa >= 0.0) out.push_back(a);
        if ((fa >= 0.0) != (fb >= 0.0)) out.push_back(a + (fa / (fa - fb)) * (b - a));
        if (n == 2) break;  // a segment has a single edge
    }
    if (n == 2 && out.size() == 1 && f(p[1]) >= 0.0) out.push_back(p[1]);
    // Drop coincident consecutive vertices.
    ConvexPolygon clean;
    for (const Point& q : out)
        if (clean.empty() || std::abs(q - clean.back()) > 0.0) clean.push_back(q);
    while (clean.size() > 1 && std::abs(clean.front() - clean.back()) == 0.0) clean.pop_back();
    return clean;
}

/// Closed cone A_j of P, widened by slack.
inline ConvexPolygon clip_cone(const ConvexPolygon& p, const Polygon& P, int j, double slack = 0.0) {
    const Cone c = P.cone(j);
    return clip_halfplane(clip_halfplane(p, c.apex, c.ray_singular.direction, -1.0, slack), c.apex,
                          c.ray_side.direction, 1.0, slack);
}

/// Regular N-gon circumscribed about the circle |z - c| = r.
inline ConvexPolygon circumscribed_ngon(Point c, double r, int N) {
    ConvexPolygon out;
    const double R = r / std::cos(std::numbers::pi / N);
    for (int i = 0; i < N; ++i) out.push_back(c + std::polar(R, 2.0 * std::numbers::pi * (i + 0.5) / N));
    return out;
}

inline bool segments_intersect(Point a, Point b, Point c, Point d) {
    const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
    return segment_distance(c, a, b) == 0.0 || segment_distance(d, a, b) == 0.0 ||
           segment_distance(a, c, d) == 0.0 || segment_distance(b, c, d) == 0.0;
}

inline double segment_segment_distance(Point a, Point b, Point c, Point d) {
    if (segments_intersect(a, b, c, d)) return 0.0;
    return std::min({segment_distance(a, c, d), segment_distance(b, c, d), segment_distance(c, a, b),
                     segment_distance(d, a, b)});
}

inline bool contains(const ConvexPolygon& p, Point z, double slack = 0.0) {
    if (p.size() < 3) return false;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Point e = p[(i + 1) % p.size()] - p[i];
        if (cross(e, z - p[i]) < -slack * std::abs(e)) return false;
    }
    return true;
}

/// Distance between a convex piece and the segment [a, b].
inline double distance_to_segment(const ConvexPolygon& p, Point a, Point b) {
    if (p.empty()) return std::numeric_limits<double>::infinity();
    if (p.size() == 1) return segment_distance(p[0], a, b);
    if (contains(p, a) || contains(p, b)) return 0.0;
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.size(); ++i) {
        d = std::min(d, segment_segment_distance(p[i], p[(i + 1) % p.size()], a, b));
        if (p.size() == 2) break;
    }
    return d;
}

}  // namespace dob
