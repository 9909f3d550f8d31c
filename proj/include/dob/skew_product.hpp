#pragma once

// Rotation reduction for a regular k-gon with equal rates. R is the
// clockwise rotation by 2 pi / k about the center; it maps A_j onto A_{j-1}
// and commutes with T. Folding every cone back onto A_0 with pi(z) = R^j(z)
// for z in A_j gives the factor map f = pi o T on A_0 and the cocycle
// sigma(z) = cone index of T(z). F(z, s) = (f(z), s + sigma(z)) mod k.

#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "dob/affine.hpp"
#include "dob/billiard.hpp"
#include "dob/catalog.hpp"

namespace dob {

/// Throws NotRegular unless P is a regular polygon (within tol).
inline void require_regular(const Polygon& P, double tol = 1e-9) {
    if (P.is_segment()) throw NotRegular("the segment has no rotation reduction");
    const int k = P.size();
    const Point c = P.centroid();
    const Point rot = std::polar(1.0, 2.0 * std::numbers::pi / k);
    const double R = std::abs(P.vertex(0) - c);
    for (int j = 0; j < k; ++j) {
        const Point expected = c + (P.vertex(j) - c) * rot;
        if (std::abs(P.vertex(j + 1) - expected) > tol * std::max(1.0, R))
            throw NotRegular("polygon is not regular");
    }
}

struct ReducedBranch {
    int sigma = 0;        // cone of T(z), i.e. the cocycle value
    ComplexAffine map;    // f on D_sigma: R^sigma o T_0
};

struct FCycle {
    std::vector<int> branches;  // sigma values along the cycle
    std::vector<Point> points;
    int sigma_sum = 0;          // sigma^m mod k

    int period() const { return static_cast<int>(branches.size()); }
};

class ReducedMap {
public:
    ReducedMap(Billiard B) : B_(std::move(B)) {
        require_regular(B_.polygon());
        if (!B_.rates().is_uniform()) throw NotRegular("rotation reduction needs equal rates");
        k_ = B_.size();
        c_ = B_.polygon().centroid();
        rho_ = std::polar(1.0, -2.0 * std::numbers::pi / k_);
        for (int i = 0; i < k_; ++i) branches_.push_back({i, B_.branch(0).then(rotation(i))});
        detect_branches();
    }

    int k() const { return k_; }
    const Billiard& billiard() const { return B_; }
    Point center() const { return c_; }

    /// R^j as an affine map.
    ComplexAffine rotation(int j) const {
        const Point r = std::pow(rho_, ((j % k_) + k_) % k_);
        return {r, c_ - r * c_};
    }

    /// pi(z) = R^j(z) for z in A_j.
    Point project(Point z) const {
        const Location loc = B_.locate(z);
        if (!loc.in_cone()) throw SingularHit("project: point is not in an open cone");
        return rotation(loc.cone)(z);
    }

    /// Candidate branch for every cone index (only the realized ones are in
    /// active_branches()).
    const ReducedBranch& branch(int sigma) const { return branches_[static_cast<std::size_t>(sigma)]; }

    /// Cocycle values whose domain D_sigma = A_0 cap T^{-1}(A_sigma) is nonempty.
    const std::vector<int>& active_branches() const { return active_; }

    /// [k/2] + 1, the expected number of branches.
    int expected_branch_count() const { return k_ / 2 + 1; }

    /// sigma(z) for z in A_0 (branch identified by the cone of T(z)).
    int sigma(Point z) const {
        const Location l0 = B_.locate(z);
        if (!l0.in_cone() || l0.cone != 0) throw InvalidInput("sigma: point is not in the fundamental cone");
        const Location l1 = B_.locate(B_.apply(0, z));
        if (!l1.in_cone()) throw SingularHit("sigma: image lies on the singular set");
        return l1.cone;
    }

    std::pair<Point, int> step(Point z) const {
        const int s = sigma(z);
        return {branch(s).map(z), s};
    }

    Point f(Point z) const { return step(z).first; }

    /// Searches f-cycles from random seeds of A_0 inside K.
    std::vector<FCycle> find_cycles(std::size_t seeds, std::uint64_t rng_seed, long max_steps = 100000,
                                    double tol = 1e-9) const;

    /// The exact cycle of an f-itinerary, if realized with margin eps.
    std::optional<FCycle> cycle_from_branches(std::vector<int> word) const;

private:
    void detect_branches() {
        // Sample A_0 on a log-polar grid; T(z) lands in A_sigma.
        const Cone A = B_.polygon().cone(0);
        std::vector<bool> seen(static_cast<std::size_t>(k_), false);
        const double R = B_.invariant_ball().radius;
        for (int a = 1; a < 400; ++a) {
            const double th = a / 400.0;
            const Point dir = A.ray_singular.direction * (1.0 - th) + A.ray_side.direction * th;
            for (int r = 0; r < 200; ++r) {
                const double rad = 1e-3 * std::pow(R * 4e3, r / 199.0);
                const Point z = A.apex + rad * dir / std::abs(dir);
                const Location l = B_.locate(z);
                if (!l.in_cone() || l.cone != 0) continue;
                const Location i = B_.locate(B_.apply(0, z));
                if (i.in_cone()) seen[static_cast<std::size_t>(i.cone)] = true;
            }
        }
        for (int i = 0; i < k_; ++i)
            if (seen[static_cast<std::size_t>(i)]) active_.push_back(i);
    }

    Billiard B_;
    int k_ = 0;
    Point c_;
    Point rho_;
    std::vector<ReducedBranch> branches_;
    std::vector<int> active_;
};

inline std::optional<FCycle> ReducedMap::cycle_from_branches(std::vector<int> word) const {
    std::vector<int> root = primitive_root(word);
    root = rotate_word(root, least_rotation(root));
    ComplexAffine m;
    for (int s : root) m = m.then(branch(s).map);
    const auto z = m.fixed_point();
    if (!z) return std::nullopt;
    FCycle c;
    Point x = *z;
    for (int s : root) {
        const Location l = B_.locate(x);
        if (!l.in_cone() || l.cone != 0) return std::nullopt;
        const Location l1 = B_.locate(B_.apply(0, x));
        if (!l1.in_cone() || l1.cone != s) return std::nullopt;
        c.points.push_back(x);
        x = branch(s).map(x);
    }
    c.branches = root;
    c.sigma_sum = std::accumulate(root.begin(), root.end(), 0) % k_;
    return c;
}

inline std::vector<FCycle> ReducedMap::find_cycles(std::size_t seeds, std::uint64_t rng_seed, long max_steps,
                                                   double tol) const {
    std::vector<FCycle> found;
    std::map<std::vector<int>, bool> known;
    for (const Point& s0 : random_seeds(B_, seeds, rng_seed)) {
        Point z = project(s0);
        std::vector<Point> pts{z};
        std::vector<int> sym;
        long anchor = 0, power = 1;
        for (long n = 0; n < max_steps; ++n) {
            std::pair<Point, int> st;
            try {
                st = step(z);
            } catch (const SingularHit&) {
                break;
            }
            z = st.first;
            sym.push_back(st.second);
            pts.push_back(z);
            const long m = n + 1, p = m - anchor;
            if (m >= 2 * p && std::abs(z - pts[static_cast<std::size_t>(anchor)]) < tol) {
                std::vector<int> tail(sym.end() - p, sym.end());
                if (auto c = cycle_from_branches(tail)) {
                    if (!known[c->branches]) {
                        known[c->branches] = true;
                        found.push_back(*c);
                    }
                    break;
                }
            }
            if (p >= power) {
                anchor = m;
                power *= 2;
            }
        }
    }
    std::sort(found.begin(), found.end(), [](const FCycle& a, const FCycle& b) {
        return a.period() != b.period() ? a.period() < b.period() : a.branches < b.branches;
    });
    return found;
}

struct Lift {
    int orbit_count = 0;
    int period = 0;
};

/// An f-cycle of period m with cocycle sum s lifts to gcd(k, s) orbits of
/// T, each of period m k / gcd(k, s).
inline Lift lift_periods(int m, int sigma_m, int k) {
    if (m < 1 || k < 1 || sigma_m < 0 || sigma_m >= k) throw InvalidInput("lift_periods: arguments out of range");
    const int g = std::gcd(k, sigma_m);
    return {g, m * k / g};
}

/// Smallest n >= 1 with |T^n(z) - z| < tol, found by iterating T.
inline std::optional<int> brute_force_period(const Billiard& B, Point z, int max_period, double tol = 1e-9) {
    Point x = z;
    for (int n = 1; n <= max_period; ++n) {
        x = B.step(x);
        if (std::abs(x - z) < tol) return n;
    }
    return std::nullopt;
}

}  // namespace dob
