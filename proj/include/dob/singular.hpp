#pragma once

// Singular sets of order n and the forward cell decomposition of K.
//
// S_n is the set of points that meet the singular set within fewer than n
// steps. It is computed backwards: every new piece of S_n is pulled back
// through the inverse branch of each cone and clipped to that closed cone
// and to K. Preimages of lines are lines, and since all branch scalings are
// real every piece stays parallel to one side of the table, so pieces are
// stored per (side direction, offset) as unions of intervals.
//
// The forward route tracks the components of K minus S_n directly: each
// component is a convex cell on which T^n is affine; the cells are mapped
// forward and split by the cones. The singular set has stabilized at order
// n exactly when no cell image meets the singular set.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dob/billiard.hpp"
#include "dob/catalog.hpp"
#include "dob/convex.hpp"
#include "dob/parallel.hpp"

namespace dob {

struct SingularOptions {
    int n_max = 2000;
    double tol = 1e-9;
    std::size_t segment_budget = 5000000;
};

struct SingularComplex {
    int order = 0;             // the pieces below make up S_order within K
    bool stabilized = false;   // S_{order+1} = S_order within K
    InvariantBall K;
    std::vector<Segment> segments;
    std::vector<int> birth;    // least n with the piece in S_n
    std::vector<Point> points; // segment table: the singular set is a point set
    std::vector<std::size_t> new_per_order;

    /// Pieces of S_n (n <= order).
    std::vector<Segment> at_order(int n) const {
        std::vector<Segment> out;
        for (std::size_t i = 0; i < segments.size(); ++i)
            if (birth[i] <= n) out.push_back(segments[i]);
        return out;
    }

    double total_length() const {
        double s = 0.0;
        for (const auto& g : segments) s += g.length();
        return s;
    }
};

namespace detail {

/// Interval unions on lines parallel to a fixed set of directions.
class LineStore {
public:
    LineStore(const Polygon& P, double tol) : tol_(tol) {
        for (int j = 0; j < P.size(); ++j) {
            Point d = P.singular_line(j).direction;
            if (d.real() < 0.0 || (d.real() == 0.0 && d.imag() < 0.0)) d = -d;
            bool dup = false;
            for (const auto& c : classes_) dup = dup || std::abs(cross(c.dir, d)) < 1e-12;
            if (!dup) classes_.push_back({d, {}});
        }
    }

    /// Adds the segment and returns the parts that were not yet covered.
    std::vector<Segment> insert(Segment s) {
        std::vector<Segment> fresh;
        const Point e = s.b - s.a;
        const double len = std::abs(e);
        if (len <= tol_) return fresh;
        Class* cls = nullptr;
        double best = 1e-6;
        for (auto& c : classes_) {
            const double x = std::abs(cross(c.dir, e / len));
            if (x < best) {
                best = x;
                cls = &c;
            }
        }
        if (!cls) throw Degenerate("singular piece is not parallel to a side");
        const Point d = cls->dir;
        const double scale = std::max({1.0, std::abs(s.a), std::abs(s.b)});
        const double off = 0.5 * (cross(d, s.a) + cross(d, s.b));
        double t0 = dot(d, s.a), t1 = dot(d, s.b);
        if (t0 > t1) std::swap(t0, t1);
        const double dtol = tol_ * scale;

        auto it = cls->lines.lower_bound(off - dtol);
        std::vector<std::pair<double, double>>* iv = nullptr;
        double line_off = off;
        if (it != cls->lines.end() && it->first <= off + dtol) {
            iv = &it->second;
            line_off = it->first;
        } else {
            iv = &cls->lines[off];
        }

        auto point_at = [&](double t) { return (t + Point(0.0, line_off)) * d; };
        // Uncovered parts of [t0, t1].
        double cur = t0;
        for (const auto& [a, b] : *iv) {
            if (b < cur) continue;
            if (a > t1) break;
            if (a - cur > dtol) fresh.push_back({point_at(cur), point_at(std::min(a, t1))});
            cur = std::max(cur, b);
            if (cur >= t1) break;
        }
        if (t1 - cur > dtol) fresh.push_back({point_at(cur), point_at(t1)});
        if (fresh.empty()) return fresh;

        // Merge [t0, t1] into the union.
        std::vector<std::pair<double, double>> merged;
        merged.reserve(iv->size() + 1);
        bool placed = false;
        double lo = t0, hi = t1;
        for (const auto& [a, b] : *iv) {
            if (b < lo - dtol) {
                merged.push_back({a, b});
            } else if (a > hi + dtol) {
                if (!placed) {
                    merged.push_back({lo, hi});
                    placed = true;
                }
                merged.push_back({a, b});
            } else {
                lo = std::min(lo, a);
                hi = std::max(hi, b);
            }
        }
        if (!placed) merged.push_back({lo, hi});
        *iv = std::move(merged);
        return fresh;
    }

    /// Whether z is within the tolerance of a stored piece.
    bool covers(Point z, double slack) const {
        for (const auto& c : classes_) {
            const double off = cross(c.dir, z);
            const double t = dot(c.dir, z);
            for (auto it = c.lines.lower_bound(off - slack); it != c.lines.end() && it->first <= off + slack; ++it)
                for (const auto& [a, b] : it->second)
                    if (t >= a - slack && t <= b + slack) return true;
        }
        return false;
    }

private:
    struct Class {
        Point dir;
        std::map<double, std::vector<std::pair<double, double>>> lines;
    };
    double tol_;
    std::vector<Class> classes_;
};

inline SingularComplex expand_segment_table(const Billiard& B, int n_max) {
    SingularComplex S;
    S.K = B.invariant_ball();
    std::vector<Point> frontier{B.polygon().vertex(0), B.polygon().vertex(1)};
    S.points = frontier;
    S.new_per_order.push_back(frontier.size());
    S.order = 1;
    while (S.order < n_max) {
        std::vector<Point> next;
        for (const Point& p : frontier)
            for (int j = 0; j < 2; ++j) {
                const Point q = B.branch(j).inverse()(p);
                if (!(std::abs(q - S.K.center) <= S.K.radius)) continue;
                const Location l = B.locate(q);
                if (!(l.in_cone() && l.cone == j)) continue;
                bool known = false;
                for (const Point& s : S.points) known = known || std::abs(s - q) < 1e-9 * std::max(1.0, std::abs(q));
                if (!known) {
                    S.points.push_back(q);
                    next.push_back(q);
                }
            }
        if (next.empty()) {
            S.stabilized = true;
            return S;
        }
        S.new_per_order.push_back(next.size());
        frontier = std::move(next);
        ++S.order;
    }
    return S;
}

}  // namespace detail

/// S_n within K for n = 1, 2, ... until S_{n+1} = S_n or n = n_max.
/// Throws BudgetExceeded when the number of stored pieces exceeds the budget.
inline SingularComplex expand_singular(const Billiard& B, const SingularOptions& opt = {}) {
    if (B.polygon().is_segment()) return detail::expand_segment_table(B, opt.n_max);
    SingularComplex S;
    S.K = B.invariant_ball();
    const Polygon& P = B.polygon();
    detail::LineStore store(P, opt.tol);
    std::vector<Segment> frontier;
    for (int j = 0; j < P.size(); ++j) {
        const HalfLine& h = P.singular_line(j);
        Point a = h.origin, b = h.at(4.0 * S.K.radius + 4.0 * std::abs(h.origin));
        if (!clip_to_disk(a, b, S.K.radius)) continue;
        for (const Segment& s : store.insert({a, b})) {
            frontier.push_back(s);
            S.segments.push_back(s);
            S.birth.push_back(1);
        }
    }
    S.new_per_order.push_back(frontier.size());
    S.order = 1;
    std::vector<ComplexAffine> inv;
    for (int j = 0; j < P.size(); ++j) inv.push_back(B.branch(j).inverse());
    while (S.order < opt.n_max) {
        std::vector<Segment> next;
        for (const Segment& s : frontier) {
            for (int j = 0; j < P.size(); ++j) {
                Point a = inv[static_cast<std::size_t>(j)](s.a), b = inv[static_cast<std::size_t>(j)](s.b);
                if (!clip_to_cone(a, b, P, j)) continue;
                if (!clip_to_disk(a, b, S.K.radius)) continue;
                if (P.contains(0.5 * (a + b), 1e-12)) continue;
                for (const Segment& f : store.insert({a, b})) {
                    next.push_back(f);
                    S.segments.push_back(f);
                    S.birth.push_back(S.order + 1);
                }
            }
        }
        if (S.segments.size() > opt.segment_budget)
            throw BudgetExceeded("singular set exceeded the segment budget at order " + std::to_string(S.order + 1));
        if (next.empty()) {
            S.stabilized = true;
            return S;
        }
        S.new_per_order.push_back(next.size());
        frontier = std::move(next);
        ++S.order;
    }
    return S;
}

/// A component of K minus S_n: T^{n-1} maps it affinely onto `image`, which
/// lies in the closed cone `cone`.
struct Cell {
    ConvexPolygon image;
    ComplexAffine map;
    int cone = -1;

    /// The component itself, in the original coordinates.
    ConvexPolygon original() const { return transform(image, map.inverse()); }

    /// Area of the component.
    double original_area() const { return area(image) / std::norm(map.scale); }
};

struct CellOptions {
    int n_max = 2000;
    std::size_t piece_budget = 1000000;
    int disk_sides = 256;   // K is replaced by a circumscribed polygon
    double rel_tol = 1e-9;  // splits thinner than this fraction of a piece are ignored
    bool closure = false;   // keep contact pieces (used by the persistency test)
    double eps = kDefaultEps;
    unsigned workers = 0;
};

struct CellDecomposition {
    std::vector<Cell> cells;
    int order = 0;
    bool stabilized = false;
    std::vector<std::size_t> cells_per_order;
    ConvexPolygon domain;
};

namespace detail {

struct SplitContext {
    const Billiard& B;
    double rel_tol;
    bool closure;
};

/// Signed distances of z to the two boundary lines of cone j (positive inside).
inline std::pair<double, double> cone_margins(const Cone& c, Point z) {
    return {-cross(c.ray_singular.direction, z - c.apex), cross(c.ray_side.direction, z - c.apex)};
}

inline void split_piece(const SplitContext& ctx, const ConvexPolygon& Q, const ComplexAffine& map,
                        std::vector<Cell>& out) {
    const Polygon& P = ctx.B.polygon();
    const int k = P.size();
    double scale = 0.0;
    for (const Point& q : Q) scale = std::max(scale, std::abs(q));
    const double tau = ctx.rel_tol * diameter(Q) + 1e-13 * std::max(1.0, scale);

    // Fast path: every vertex inside one closed cone.
    const Point c = centroid(Q);
    int guess = -1;
    {
        double best = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < k; ++j) {
            const auto [m1, m2] = cone_margins(P.cone(j), c);
            const double m = std::min(m1, m2);
            if (m > best) {
                best = m;
                guess = j;
            }
        }
    }
    {
        const Cone cj = P.cone(guess);
        double m = std::numeric_limits<double>::infinity();
        for (const Point& q : Q) {
            const auto [m1, m2] = cone_margins(cj, q);
            m = std::min({m, m1, m2});
        }
        if (m >= (ctx.closure ? tau : -tau)) {
            out.push_back({Q, map, guess});
            return;
        }
    }

    struct Part {
        ConvexPolygon poly;
        int cone;
        bool significant;
    };
    std::vector<Part> parts;
    for (int j = 0; j < k; ++j) {
        ConvexPolygon Qj = clip_cone(Q, P, j, ctx.closure ? tau : 0.0);
        if (Qj.empty()) continue;
        const Cone cj = P.cone(j);
        double t1 = -std::numeric_limits<double>::infinity(), t2 = t1;
        for (const Point& q : Qj) {
            const auto [m1, m2] = cone_margins(cj, q);
            t1 = std::max(t1, m1);
            t2 = std::max(t2, m2);
        }
        const bool sig = Qj.size() >= 3 && std::min(t1, t2) > tau;
        // A contact piece inside the table (a vertex touching its own cone)
        // is not part of the domain.
        if (!sig && ctx.closure && P.contains(centroid(Qj), tau)) continue;
        if (sig || ctx.closure) parts.push_back({std::move(Qj), j, sig});
    }
    int nsig = 0;
    for (const auto& p : parts) nsig += p.significant;
    if (parts.size() <= 1 || (!ctx.closure && nsig <= 1)) {
        int j = guess;
        for (const auto& p : parts)
            if (p.significant) j = p.cone;
        out.push_back({Q, map, j});
        return;
    }
    for (auto& p : parts)
        if (p.significant || ctx.closure) out.push_back({std::move(p.poly), map, p.cone});
}

inline std::vector<Cell> split_all(const SplitContext& ctx, const std::vector<std::pair<ConvexPolygon, ComplexAffine>>& pieces,
                                   unsigned workers) {
    constexpr std::size_t kChunk = 4096;
    const std::size_t chunks = (pieces.size() + kChunk - 1) / kChunk;
    std::vector<std::vector<Cell>> partial(chunks);
    parallel_for(
        chunks,
        [&](std::size_t c) {
            const std::size_t hi = std::min(pieces.size(), (c + 1) * kChunk);
            for (std::size_t i = c * kChunk; i < hi; ++i) split_piece(ctx, pieces[i].first, pieces[i].second, partial[c]);
        },
        workers);
    std::vector<Cell> out;
    for (auto& p : partial) out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    return out;
}

inline ConvexPolygon initial_domain(const Billiard& B, int sides) {
    const InvariantBall K = B.invariant_ball();
    return circumscribed_ngon(K.center, K.radius, sides);
}

}  // namespace detail

/// Advances a cell family by one application of T and re-splits it.
/// Returns the number of pieces that were split.
inline std::size_t advance_cells(const Billiard& B, std::vector<Cell>& cells, const CellOptions& opt) {
    std::vector<std::pair<ConvexPolygon, ComplexAffine>> mapped;
    mapped.reserve(cells.size());
    for (const Cell& c : cells) {
        const ComplexAffine& br = B.branch(c.cone);
        mapped.push_back({transform(c.image, br), c.map.then(br)});
    }
    const std::size_t before = mapped.size();
    cells = detail::split_all({B, opt.rel_tol, opt.closure}, mapped, opt.workers);
    if (cells.size() > opt.piece_budget)
        throw PieceBudgetExceeded("cell decomposition exceeded the piece budget (" + std::to_string(opt.piece_budget) + ")");
    return cells.size() - before;
}

/// The components of K minus S_n, refined until no cell image meets the
/// singular set (stabilization) or n = n_max.
inline CellDecomposition decompose(const Billiard& B, const CellOptions& opt = {}) {
    if (B.polygon().is_segment()) throw InvalidInput("cell decomposition needs a polygon with k >= 3");
    CellDecomposition D;
    D.domain = detail::initial_domain(B, opt.disk_sides);
    D.cells = detail::split_all({B, opt.rel_tol, opt.closure}, {{D.domain, ComplexAffine{}}}, opt.workers);
    D.order = 1;
    D.cells_per_order.push_back(D.cells.size());
    while (D.order < opt.n_max) {
        const std::size_t splits = advance_cells(B, D.cells, opt);
        if (splits == 0) {
            D.stabilized = true;
            return D;
        }
        ++D.order;
        D.cells_per_order.push_back(D.cells.size());
    }
    return D;
}

struct StabilizationResult {
    AttractorCatalog catalog;
    int order = 0;
    std::size_t components = 0;
    std::size_t non_convergent = 0;
    std::vector<int> labels;        // per cell: catalog index, or -1
    std::vector<double> basin_area; // per catalog entry
};

/// One sample per component of K minus S_n, iterated to its limit cycle.
inline StabilizationResult stabilization_consequence(const Billiard& B, const CellDecomposition& D,
                                                     const IterateOptions& it = {}, unsigned workers = 0) {
    if (!D.stabilized) throw InvalidInput("stabilization_consequence needs a stabilized decomposition");
    StabilizationResult R;
    R.order = D.order;
    R.components = D.cells.size();
    std::vector<OrbitRecord> recs(D.cells.size());
    IterateOptions o = it;
    o.record_points = false;
    parallel_for(
        D.cells.size(), [&](std::size_t i) { recs[i] = B.iterate(centroid(D.cells[i].image), o); }, workers);
    std::vector<std::size_t> raw(recs.size(), SIZE_MAX);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        if (recs[i].terminal != OrbitRecord::Terminal::Converged) {
            ++R.non_convergent;
            continue;
        }
        Attractor a = simulated_attractor(*recs[i].cycle, B.polygon());
        a.provenance = Provenance::Stabilization;
        a.kind = "stabilization";
        for (const Point& p : a.cycle.points) a.degenerate = a.degenerate || singular_distance(p, B.polygon()) < B.eps();
        raw[i] = R.catalog.add(std::move(a));
    }
    std::vector<std::string> ids;
    for (const auto& a : R.catalog) ids.push_back(a.id());
    R.catalog.sort();
    std::map<std::string, int> pos;
    for (std::size_t i = 0; i < R.catalog.size(); ++i) pos[R.catalog[i].id()] = static_cast<int>(i);
    R.labels.assign(recs.size(), -1);
    R.basin_area.assign(R.catalog.size(), 0.0);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        if (raw[i] == SIZE_MAX) continue;
        const int l = pos[ids[raw[i]]];
        R.labels[i] = l;
        R.basin_area[static_cast<std::size_t>(l)] += D.cells[i].original_area();
    }
    return R;
}

struct PersistencyCertificate {
    bool certified = false;
    int n = 0;          // T^n(K) stays at distance > eps from the singular set
    double margin = 0.0;
    std::size_t pieces = 0;
    std::string reason;
};

struct PersistencyOptions {
    int n_max = 2000;
    std::size_t piece_budget = 1000000;
    int disk_sides = 256;
    double eps = kDefaultEps;
    unsigned workers = 0;
};

/// Distance from the forward images of K to the singular set.
inline double singular_set_distance(const ConvexPolygon& Q, const Polygon& P, double far) {
    double d = std::numeric_limits<double>::infinity();
    for (int j = 0; j < P.size(); ++j) {
        const HalfLine& h = P.singular_line(j);
        d = std::min(d, distance_to_segment(Q, h.origin, h.at(far)));
    }
    return d;
}

/// Looks for n with T^n(K) at positive distance from the singular set.
/// Inconclusive (certified = false) at n_max; PieceBudgetExceeded when the
/// piece family grows past the budget.
inline PersistencyCertificate persistency_check(const Billiard& B, const PersistencyOptions& opt = {}) {
    PersistencyCertificate C;
    const Polygon& P = B.polygon();
    const InvariantBall K = B.invariant_ball();
    if (P.is_segment()) {
        // K minus the table is two intervals; follow their images.
        const Point p = P.vertex(0), q = P.vertex(1);
        const Point d = (q - p) / std::abs(q - p);
        const Point mid = 0.5 * (p + q);
        std::vector<std::pair<double, double>> iv{{-K.radius, dot(p - mid, d)}, {dot(q - mid, d), K.radius}};
        for (int n = 1; n <= opt.n_max; ++n) {
            std::vector<std::pair<double, double>> next;
            for (auto [a, b] : iv) {
                const Point za = mid + a * d, zb = mid + b * d;
                const int j = dot(0.5 * (za + zb) - mid, d) > 0.0 ? 0 : 1;
                const Point ia = B.apply(j, za), ib = B.apply(j, zb);
                double x = dot(ia - mid, d), y = dot(ib - mid, d);
                if (x > y) std::swap(x, y);
                next.push_back({x, y});
            }
            iv = std::move(next);
            double margin = std::numeric_limits<double>::infinity();
            const double e0 = dot(p - mid, d), e1 = dot(q - mid, d);
            for (auto [a, b] : iv)
                for (double e : {e0, e1}) margin = std::min(margin, (e >= a && e <= b) ? 0.0 : std::min(std::abs(e - a), std::abs(e - b)));
            if (margin > opt.eps) {
                C.certified = true;
                C.n = n;
                C.margin = margin;
                C.pieces = iv.size();
                return C;
            }
        }
        C.reason = "no certificate up to n_max";
        return C;
    }
    CellOptions co;
    co.closure = true;
    co.piece_budget = opt.piece_budget;
    co.workers = opt.workers;
    co.eps = opt.eps;
    std::vector<Cell> cells =
        detail::split_all({B, co.rel_tol, true}, {{detail::initial_domain(B, opt.disk_sides), ComplexAffine{}}}, opt.workers);
    const double far = 4.0 * K.radius + 4.0 * P.vertex_norm();
    for (int n = 1; n <= opt.n_max; ++n) {
        advance_cells(B, cells, co);
        double margin = std::numeric_limits<double>::infinity();
        for (const Cell& c : cells) {
            margin = std::min(margin, singular_set_distance(c.image, P, far));
            if (margin <= opt.eps) break;
        }
        if (margin > opt.eps) {
            C.certified = true;
            C.n = n;
            C.margin = margin;
            C.pieces = cells.size();
            return C;
        }
    }
    C.pieces = cells.size();
    C.reason = "no certificate up to n_max";
    return C;
}

}  // namespace dob
