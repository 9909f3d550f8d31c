#pragma once

// First-return maps of the reduced dynamics for the equilateral triangle and
// the unit square, their closed-form branches, fixed points and the induced
// attractor catalogs.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dob/affine.hpp"
#include "dob/bifurcation.hpp"
#include "dob/billiard.hpp"
#include "dob/catalog.hpp"

namespace dob {

struct ReturnFixedPoint {
    enum class Kind { Z, W, U };
    Kind kind = Kind::Z;
    int n = 0;
    Point location;
    std::pair<double, double> exists_for_lambda{0.0, 1.0};  // open interval
    int f_period = 0;
    int T_period = 0;
};

inline const char* kind_name(ReturnFixedPoint::Kind k) {
    switch (k) {
        case ReturnFixedPoint::Kind::Z: return "Z";
        case ReturnFixedPoint::Kind::W: return "W";
        case ReturnFixedPoint::Kind::U: return "U";
    }
    return "?";
}

struct ReturnResult {
    Point point;
    int time = 0;
};

namespace detail {

inline void require_rate(double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidInput("return maps need lambda in (0, 1)");
}

/// Lifts a point of the fundamental cone to its T-orbit and validates it.
inline Attractor lift_to_plane(const Billiard& B, Point z, int T_period, const std::string& kind, int n,
                               std::pair<double, double> existence) {
    SymbolWord word;
    Point x = z;
    for (int i = 0; i < T_period; ++i) {
        const Location loc = B.locate(x);
        if (!loc.in_cone()) throw Degenerate("lifted orbit meets the singular set");
        word.push_back(loc.cone);
        x = B.apply(loc.cone, x);
    }
    auto c = cycle_from_word(word, B);
    if (!c) throw Degenerate("lifted orbit is not realized");
    if (c->period() != T_period) throw Degenerate("lifted orbit has unexpected period");
    Attractor a;
    a.cycle = std::move(*c);
    a.provenance = Provenance::ClosedForm;
    a.kind = kind;
    a.n = n;
    a.existence = existence;
    a.rotation = try_rotation_number(a.cycle, B.polygon());
    return a;
}

}  // namespace detail

namespace triangle {

inline const Point kV = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);

/// z = a + b (1 + v).
struct Coords {
    double a = 0.0;
    double b = 0.0;
};

inline Coords coords(Point z) {
    const double b = z.imag() / kV.imag();
    return {z.real() - b * (1.0 + kV.real()), b};
}

inline Point from_coords(double a, double b) { return a + b * (1.0 + kV); }

inline Point f_C(Point z, double l) { return 1.0 + l * (1.0 + kV) * z; }
inline Point f_E(Point z, double l) { return -kV - l * kV * z; }

/// sum_{j=lo}^{hi} l^{-j}.
inline double inv_sum(double l, int lo, int hi) {
    double s = 0.0;
    for (int j = lo; j <= hi; ++j) s += std::pow(l, -j);
    return s;
}

/// The reduced map on the fundamental cone {b > 0, a + b > 0}: f_C on
/// C = {a > -1/l}, f_E on E = {a < -1/l}.
inline Point f(Point z, double l, double eps = kDefaultEps) {
    const Coords c = coords(z);
    if (!(c.b > eps && c.a + c.b > eps)) throw InvalidInput("triangle::f: point outside the fundamental cone");
    if (c.a > -1.0 / l + eps) return f_C(z, l);
    if (c.a < -1.0 / l - eps) return f_E(z, l);
    throw SingularHit("triangle::f: point on the branch boundary");
}

/// B = { z in C : 0 < b < l^{-1} + l^{-2} }, with margin eps.
inline bool in_B(Point z, double l, double eps = kDefaultEps) {
    const Coords c = coords(z);
    return c.a > -1.0 / l + eps && c.b > eps && c.b < inv_sum(l, 1, 2) - eps && c.a + c.b > eps;
}

/// Lower and upper bounds of a + b on B_n.
inline std::pair<double, double> strip_bounds(int n, double l) {
    return {inv_sum(l, 2, 2 * n - 1), inv_sum(l, 2, 2 * n + 1)};
}

/// n with z in B_n, or nullopt when z is outside B or within eps of a
/// strip boundary.
inline std::optional<int> strip_index(Point z, double l, double eps = kDefaultEps) {
    if (!in_B(z, l, eps)) return std::nullopt;
    const Coords c = coords(z);
    const double s = c.a + c.b;
    for (int n = 1; n < 100000; ++n) {
        const auto [lo, hi] = strip_bounds(n, l);
        if (s < lo + eps) return std::nullopt;
        if (s < hi - eps) return n;
        if (s < hi + eps) return std::nullopt;
    }
    return std::nullopt;
}

/// The affine extension psi_n of the return map on B_n:
///   l^{2n-2} - v (1 + ... + l^{2n-3}) + l^{2n-1} (1 + v) z.
inline ComplexAffine psi(int n, double l) {
    if (n < 1) throw InvalidInput("strip index must be positive");
    double g = 0.0;
    for (int j = 0; j <= 2 * n - 3; ++j) g += std::pow(l, j);
    return {std::pow(l, 2 * n - 1) * (1.0 + kV), std::pow(l, 2 * n - 2) - kV * g};
}

/// The return map restricted to B_n; throws WrongStrip outside B_n.
inline Point phi(Point z, int n, double l, double eps = kDefaultEps) {
    detail::require_rate(l);
    const auto idx = strip_index(z, l, eps);
    if (!idx || *idx != n)
        throw WrongStrip("point is not in strip B_" + std::to_string(n) +
                         (idx ? " (it lies in B_" + std::to_string(*idx) + ")" : ""));
    return psi(n, l)(z);
}

/// (f_E o f_C)^{n-1} o f_C, applied branch by branch.
inline Point phi_composition(Point z, int n, double l) {
    z = f_C(z, l);
    for (int i = 1; i < n; ++i) z = f_E(f_C(z, l), l);
    return z;
}

/// Iterates f until the orbit re-enters B.
inline ReturnResult first_return(Point z, double l, int max_steps = 1000000, double eps = kDefaultEps) {
    detail::require_rate(l);
    if (!in_B(z, l, eps)) throw WrongStrip("first_return: point is not in B");
    for (int t = 1; t <= max_steps; ++t) {
        z = f(z, l, eps);
        if (in_B(z, l, eps)) return {z, t};
    }
    throw NoReturn("first_return: no return within the step budget");
}

/// a + b at z_n, the fixed point of psi_n.
inline double z_sum(int n, double l) {
    return (std::pow(l, 2 * n - 2) - std::pow(l, 4 * n - 3)) /
           ((1.0 - l) * (1.0 - std::pow(l, 2 * n - 1) + std::pow(l, 4 * n - 2)));
}

/// a + b at w_n, the fixed point of psi_{n+1} o psi_n.
inline double w_sum(int n, double l) {
    return std::pow(l, 2 * n) * (1.0 - std::pow(l, 6 * n - 1)) /
           ((1.0 - l) * (1.0 + std::pow(l, 4 * n) + std::pow(l, 8 * n)));
}

inline Point z_point(int n, double l) { return *psi(n, l).fixed_point(); }
inline Point w_point(int n, double l) { return *psi(n, l).then(psi(n + 1, l)).fixed_point(); }
inline Point u_point(int n, double l) { return psi(n, l)(w_point(n, l)); }

/// z_n when l > lambda_{2n-1}; w_n and u_n when l > gamma_{2n-1}.
inline std::vector<ReturnFixedPoint> fixed_points(int n, double l) {
    detail::require_rate(l);
    if (n < 1) throw InvalidInput("strip index must be positive");
    std::vector<ReturnFixedPoint> out;
    const double lz = bifurcation::threshold_Q(2 * n - 1);
    const double lw = bifurcation::threshold_T(2 * n - 1);
    if (l > lz + bifurcation::kBifurcationTol)
        out.push_back({ReturnFixedPoint::Kind::Z, n, z_point(n, l), {lz, 1.0}, 2 * n - 1, 3 * (2 * n - 1)});
    if (l > lw + bifurcation::kBifurcationTol) {
        out.push_back({ReturnFixedPoint::Kind::W, n, w_point(n, l), {lw, 1.0}, 4 * n, 12 * n});
        out.push_back({ReturnFixedPoint::Kind::U, n, u_point(n, l), {lw, 1.0}, 4 * n, 12 * n});
    }
    return out;
}

/// The m1 orbits of period 3(2i-1) and the m2 orbits of period 12 i,
/// lifted to the plane. Throws AtBifurcation at a threshold.
inline AttractorCatalog census(double l) {
    detail::require_rate(l);
    const auto m = bifurcation::triangle_census(l);
    const Billiard B(Polygon::equilateral_triangle(), RateVector::uniform(3, l));
    AttractorCatalog cat;
    for (int n = 1; n <= std::max(m.m1, m.m2); ++n)
        for (const auto& fp : fixed_points(n, l)) {
            if (fp.kind == ReturnFixedPoint::Kind::U) continue;  // same orbit as W
            cat.add(detail::lift_to_plane(B, fp.location, fp.T_period, fp.kind == ReturnFixedPoint::Kind::Z ? "Z" : "W-U",
                                          n, fp.exists_for_lambda));
        }
    cat.sort();
    return cat;
}

}  // namespace triangle

namespace square {

inline Point f_B(Point z, double l) { return Point(0.0, l) * z + 1.0; }
inline Point f_C(Point z, double l) { return l * z + Point(1.0, -1.0); }

/// B = { Re > 0, 0 < Im < 1/l } with margin eps.
inline bool in_B(Point z, double l, double eps = kDefaultEps) {
    return z.real() > eps && z.imag() > eps && z.imag() < 1.0 / l - eps;
}

inline bool in_C(Point z, double l, double eps = kDefaultEps) {
    return z.real() > eps && z.imag() > 1.0 / l + eps;
}

/// The reduced map on the positive quadrant.
inline Point f(Point z, double l, double eps = kDefaultEps) {
    if (in_B(z, l, eps)) return f_B(z, l);
    if (in_C(z, l, eps)) return f_C(z, l);
    if (z.real() > eps && z.imag() > eps) throw SingularHit("square::f: point on the branch boundary");
    throw InvalidInput("square::f: point outside the fundamental cone");
}

/// f_B once, then f_C until the orbit is back in B; time n means z in B_n.
inline ReturnResult square_return(Point z, double l, int max_steps = 1000000, double eps = kDefaultEps) {
    detail::require_rate(l);
    if (!in_B(z, l, eps)) throw WrongStrip("square_return: point is not in B");
    z = f_B(z, l);
    for (int t = 1; t <= max_steps; ++t) {
        if (in_B(z, l, eps)) return {z, t};
        if (!in_C(z, l, eps)) throw SingularHit("square_return: orbit meets the branch boundary");
        z = f_C(z, l);
    }
    throw NoReturn("square_return: no return within the step budget");
}

/// f_C^{n-1} o f_B.
inline ComplexAffine psi(int n, double l) {
    if (n < 1) throw InvalidInput("strip index must be positive");
    ComplexAffine m{Point(0.0, l), Point(1.0, 0.0)};
    const ComplexAffine c{Point(l, 0.0), Point(1.0, -1.0)};
    for (int i = 1; i < n; ++i) m = m.then(c);
    return m;
}

inline Point z_point(int n, double l) { return *psi(n, l).fixed_point(); }

/// True iff the fixed point of psi_n lies in B_n.
inline bool z_valid(int n, double l, double eps = kDefaultEps) {
    const Point z = z_point(n, l);
    if (!in_B(z, l, eps)) return false;
    try {
        const ReturnResult r = square_return(z, l, n + 1, eps);
        return r.time == n && std::abs(r.point - z) < 1e-9 * std::max(1.0, std::abs(z));
    } catch (const Error&) {
        return false;
    }
}

/// z_1 .. z_m with m = #{n : lambda_n < l}; each must lie in its strip.
inline std::vector<ReturnFixedPoint> fixed_points(double l) {
    detail::require_rate(l);
    const int m = bifurcation::square_census(l);
    std::vector<ReturnFixedPoint> out;
    for (int n = 1; n <= m; ++n) {
        if (!z_valid(n, l)) throw Degenerate("z_" + std::to_string(n) + " is not in its strip");
        out.push_back({ReturnFixedPoint::Kind::Z, n, z_point(n, l), {bifurcation::threshold_Q(n), 1.0}, n, 4 * n});
    }
    return out;
}

/// Every n <= n_max whose z_n lies in B_n, found without the thresholds.
inline std::vector<int> scan_fixed_points(double l, int n_max) {
    std::vector<int> out;
    for (int n = 1; n <= n_max; ++n)
        if (z_valid(n, l)) out.push_back(n);
    return out;
}

inline AttractorCatalog census(double l) {
    const Billiard B(Polygon::unit_square(), RateVector::uniform(4, l));
    AttractorCatalog cat;
    for (const auto& fp : fixed_points(l)) cat.add(detail::lift_to_plane(B, fp.location, fp.T_period, "Z", fp.n, fp.exists_for_lambda));
    cat.sort();
    return cat;
}

}  // namespace square

enum class ReturnTable { Triangle, Square };

inline AttractorCatalog attractor_census(ReturnTable t, double lambda) {
    return t == ReturnTable::Triangle ? triangle::census(lambda) : square::census(lambda);
}

}  // namespace dob
