#pragma once

// Planar primitives for polygonal outer billiards. The plane is identified
// with C; vertices of a table are stored counter-clockwise.
//
// Labeling convention (right tangency): for a k-gon with vertices
// w_0..w_{k-1} the singular half-line H_j starts at w_j and extends the side
// w_j w_{j+1} backwards, H_j = { w_j + t (w_j - w_{j+1}) : t > 0 }. The open
// cone A_j with apex w_j is bounded by H_j and by the ray from w_j through
// w_{j-1} (which contains the side w_{j-1} w_j and then H_{j-1}):
//
//     A_j = { w_j + s (w_j - w_{j+1}) + t (w_{j-1} - w_j) : s, t > 0 }.
//
// For the unit square 0, -i, 1-i, 1 this gives A_0 = positive quadrant.
//
// A two-vertex table is the segment billiard: the domain is the supporting
// line minus the segment, a point beyond w_1 is reflected about w_0 (cone 0)
// and a point beyond w_0 about w_1 (cone 1).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "dob/errors.hpp"

namespace dob {

using Point = std::complex<double>;

inline constexpr double kDefaultEps = 1e-9;

inline double cross(Point a, Point b) { return a.real() * b.imag() - a.imag() * b.real(); }
inline double dot(Point a, Point b) { return a.real() * b.real() + a.imag() * b.imag(); }
inline bool is_finite(Point z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Distance from z to the closed segment [a, b].
inline double segment_distance(Point z, Point a, Point b) {
    const Point d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(z - a);
    const double t = std::clamp(dot(z - a, d) / len2, 0.0, 1.0);
    return std::abs(z - (a + t * d));
}

struct HalfLine {
    Point origin;
    Point direction;  // unit length

    Point at(double t) const { return origin + t * direction; }

    /// Perpendicular distance for points beside the ray, distance to the
    /// origin for points behind it.
    double distance(Point z) const {
        const double t = dot(z - origin, direction);
        if (t <= 0.0) return std::abs(z - origin);
        return std::abs(cross(direction, z - origin));
    }
};

struct Segment {
    Point a;
    Point b;

    double length() const { return std::abs(b - a); }
    double distance(Point z) const { return segment_distance(z, a, b); }
};

struct Cone {
    Point apex;
    HalfLine ray_singular;  // H_j
    HalfLine ray_side;      // through w_{j-1}

    /// Strict membership with margin eps from both boundary lines.
    bool contains(Point z, double eps = 0.0) const {
        const Point r = z - apex;
        // For a counter-clockwise table cross(u, v) < 0.
        return cross(ray_singular.direction, r) < -eps && cross(ray_side.direction, r) > eps;
    }
};

/// Convex table (k >= 3) or segment (k == 2), immutable after construction.
class Polygon {
public:
    Polygon() = default;

    /// Validates the vertex cycle. A clockwise cycle is reversed while
    /// keeping the first vertex in place.
    static Polygon from_vertices(std::vector<Point> vertices) {
        if (vertices.size() < 2) throw InvalidInput("polygon needs at least two vertices");
        for (const Point& w : vertices)
            if (!is_finite(w)) throw InvalidInput("polygon vertex is not finite");
        const std::size_t k = vertices.size();
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                if (std::abs(vertices[i] - vertices[j]) < 1e-12)
                    throw InvalidInput("polygon has coincident vertices");
        if (k >= 3) {
            int sign = 0;
            for (std::size_t i = 0; i < k; ++i) {
                const Point e0 = vertices[(i + 1) % k] - vertices[i];
                const Point e1 = vertices[(i + 2) % k] - vertices[(i + 1) % k];
                const double c = cross(e0, e1) / (std::abs(e0) * std::abs(e1));
                const int s = c > 1e-12 ? 1 : (c < -1e-12 ? -1 : 0);
                if (s == 0) throw InvalidInput("polygon has three collinear consecutive vertices");
                if (sign == 0) sign = s;
                if (s != sign) throw InvalidInput("polygon is not strictly convex");
            }
            // Reject self-winding (star) cycles: total turning must be 2*pi.
            double turning = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                const Point e0 = vertices[(i + 1) % k] - vertices[i];
                const Point e1 = vertices[(i + 2) % k] - vertices[(i + 1) % k];
                turning += std::arg(e1 / e0);
            }
            if (std::abs(std::abs(turning) - 2.0 * std::numbers::pi) > 1e-6)
                throw InvalidInput("polygon vertex cycle winds more than once");
            if (sign < 0) std::reverse(vertices.begin() + 1, vertices.end());
        }
        Polygon p;
        p.vertices_ = std::move(vertices);
        p.build_cache();
        return p;
    }

    /// Regular k-gon centered at the origin, first vertex at angle 0.
    static Polygon regular(int k, double circumradius = 1.0) {
        if (k < 3) throw InvalidInput("regular polygon needs k >= 3");
        if (!(circumradius > 0.0) || !std::isfinite(circumradius))
            throw InvalidInput("circumradius must be positive");
        std::vector<Point> v;
        v.reserve(static_cast<std::size_t>(k));
        for (int j = 0; j < k; ++j) v.push_back(std::polar(circumradius, 2.0 * std::numbers::pi * j / k));
        return from_vertices(std::move(v));
    }

    /// The interval [-a, a] on the real axis.
    static Polygon segment(double half_length = 1.0) {
        if (!(half_length > 0.0)) throw InvalidInput("segment half-length must be positive");
        return from_vertices({Point(-half_length, 0.0), Point(half_length, 0.0)});
    }

    /// Unit square with corners 0, -i, 1-i, 1.
    static Polygon unit_square() { return from_vertices({{0, 0}, {0, -1}, {1, -1}, {1, 0}}); }

    /// Equilateral triangle of unit side with corners 0, 1, -v (v = e^{2 pi i/3}),
    /// stored counter-clockwise as 0, -v, 1.
    static Polygon equilateral_triangle() {
        const Point v = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
        return from_vertices({Point(0.0, 0.0), -v, Point(1.0, 0.0)});
    }

    int size() const { return static_cast<int>(vertices_.size()); }
    bool is_segment() const { return vertices_.size() == 2; }
    std::span<const Point> vertices() const { return vertices_; }

    Point vertex(int i) const {
        const int k = size();
        return vertices_[static_cast<std::size_t>(((i % k) + k) % k)];
    }

    /// Vertex average (exact center for regular polygons).
    Point centroid() const {
        Point c{0.0, 0.0};
        for (const Point& w : vertices_) c += w;
        return c / static_cast<double>(vertices_.size());
    }

    /// b = sup_i |w_i|.
    double vertex_norm() const {
        double b = 0.0;
        for (const Point& w : vertices_) b = std::max(b, std::abs(w));
        return b;
    }

    const HalfLine& singular_line(int j) const { return lines_[wrap(j)]; }

    Cone cone(int j) const {
        return {vertex(j), singular_line(j), HalfLine{vertex(j), side_dirs_[wrap(j)]}};
    }

    /// Closed-table membership (k >= 3), with tolerance eps outward.
    bool contains(Point z, double eps = 0.0) const {
        if (is_segment()) return false;
        const std::size_t k = vertices_.size();
        for (std::size_t j = 0; j < k; ++j)
            if (cross(edge_units_[j], z - vertices_[j]) < -eps) return false;
        return true;
    }

    bool operator==(const Polygon& other) const { return vertices_ == other.vertices_; }


private:
    std::size_t wrap(int j) const {
        const int k = size();
        return static_cast<std::size_t>(((j % k) + k) % k);
    }

    void build_cache() {
        const int k = size();
        lines_.clear();
        side_dirs_.clear();
        edge_units_.clear();
        for (int j = 0; j < k; ++j) {
            const Point w = vertex(j);
            const Point d = w - vertex(j + 1);
            lines_.push_back({w, d / std::abs(d)});
            const Point side = vertex(j - 1) - w;
            side_dirs_.push_back(side / std::abs(side));
            edge_units_.push_back(-d / std::abs(d));
        }
    }

    std::vector<Point> vertices_;
    std::vector<HalfLine> lines_;
    std::vector<Point> side_dirs_;
    std::vector<Point> edge_units_;
};

/// Outcome of cone classification. OffLine only arises for the segment
/// billiard, whose domain is the supporting line.
struct Location {
    enum class Kind { Cone, OnSingular, InsidePolygon, OffLine };
    Kind kind = Kind::OnSingular;
    int cone = -1;
    int multiplicity = 0;  // number of singular lines within eps

    bool in_cone() const { return kind == Kind::Cone; }
};

namespace detail {

inline Location locate_segment(Point z, const Polygon& P, double eps) {
    const Point p = P.vertex(0);
    const Point q = P.vertex(1);
    const double len = std::abs(q - p);
    const Point d = (q - p) / len;
    const double t = dot(z - p, d);
    if (std::abs(cross(d, z - p)) > eps) return {Location::Kind::OffLine, -1, 0};
    if (std::abs(t) <= eps || std::abs(t - len) <= eps) return {Location::Kind::OnSingular, -1, 1};
    if (t > 0.0 && t < len) return {Location::Kind::InsidePolygon, -1, 0};
    // The point is reflected about the farther endpoint.
    return {Location::Kind::Cone, t > len ? 0 : 1, 0};
}

}  // namespace detail

/// Classify z: the open cone containing it, the singular set (within eps,
/// perpendicular distance) or the table.
inline Location locate(Point z, const Polygon& P, double eps = kDefaultEps) {
    if (!is_finite(z)) throw InvalidInput("locate: point is not finite");
    if (P.is_segment()) return detail::locate_segment(z, P, eps);
    if (P.contains(z)) return {Location::Kind::InsidePolygon, -1, 0};
    const int k = P.size();
    int mult = 0;
    for (int j = 0; j < k; ++j)
        if (P.singular_line(j).distance(z) < eps) ++mult;
    if (mult > 0) return {Location::Kind::OnSingular, -1, mult};
    for (int j = 0; j < k; ++j)
        if (P.cone(j).contains(z)) return {Location::Kind::Cone, j, 0};
    return {Location::Kind::OnSingular, -1, 0};
}

/// The k singular half-lines (empty for the segment, whose singular set is
/// the pair of endpoints).
inline std::vector<HalfLine> singular_lines(const Polygon& P) {
    std::vector<HalfLine> out;
    if (P.is_segment()) return out;
    for (int j = 0; j < P.size(); ++j) out.push_back(P.singular_line(j));
    return out;
}

/// Distance from z to the singular set (the endpoints for a segment).
inline double singular_distance(Point z, const Polygon& P) {
    double d = INFINITY;
    if (P.is_segment()) {
        for (int j = 0; j < 2; ++j) d = std::min(d, std::abs(z - P.vertex(j)));
        return d;
    }
    for (int j = 0; j < P.size(); ++j) d = std::min(d, P.singular_line(j).distance(z));
    return d;
}

/// Clip a segment against the closed disk |z| <= r. Returns false if empty.
inline bool clip_to_disk(Point& a, Point& b, double r) {
    const Point d = b - a;
    const double A = std::norm(d);
    if (A == 0.0) return std::abs(a) <= r;
    const double B = dot(a, d);
    const double C = std::norm(a) - r * r;
    const double disc = B * B - A * C;
    if (disc <= 0.0) return false;
    const double s = std::sqrt(disc);
    const double t0 = std::max(0.0, (-B - s) / A);
    const double t1 = std::min(1.0, (-B + s) / A);
    if (t1 <= t0) return false;
    const Point a0 = a;
    a = a0 + t0 * d;
    b = a0 + t1 * d;
    return true;
}

/// Clip a segment to the closed half-plane cross(dir, z - origin) * sign >= 0.
inline bool clip_to_halfplane(Point& a, Point& b, Point origin, Point dir, double sign) {
    const double fa = sign * cross(dir, a - origin);
    const double fb = sign * cross(dir, b - origin);
    if (fa < 0.0 && fb < 0.0) return false;
    if (fa >= 0.0 && fb >= 0.0) return true;
    const Point x = a + (fa / (fa - fb)) * (b - a);
    if (fa < 0.0)
        a = x;
    else
        b = x;
    return true;
}

/// Clip a segment to the closed cone of P at vertex j.
inline bool clip_to_cone(Point& a, Point& b, const Polygon& P, int j) {
    const Cone c = P.cone(j);
    return clip_to_halfplane(a, b, c.apex, c.ray_singular.direction, -1.0) &&
           clip_to_halfplane(a, b, c.apex, c.ray_side.direction, 1.0);
}

}  // namespace dob
