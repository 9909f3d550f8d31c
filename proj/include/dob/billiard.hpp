#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dob/affine.hpp"
#include "dob/errors.hpp"
#include "dob/geometry.hpp"

namespace dob {

/// Per-vertex contraction rates. Dissipative rates satisfy 0 < l_i < 1;
/// the conservative regime additionally admits l_i == 1 (the classical
/// outer billiard, used only by integral-of-motion checks).
class RateVector {
public:
    enum class Regime { Dissipative, Conservative };

    RateVector() = default;

    explicit RateVector(std::vector<double> rates, Regime regime = Regime::Dissipative)
        : rates_(std::move(rates)), regime_(regime) {
        if (rates_.empty()) throw InvalidInput("rate vector is empty");
        for (double l : rates_) {
            if (!std::isfinite(l) || !(l > 0.0)) throw InvalidInput("contraction rate must be positive");
            if (regime_ == Regime::Dissipative && !(l < 1.0))
                throw InvalidInput("contraction rate must lie in (0, 1), got " + std::to_string(l));
            if (regime_ == Regime::Conservative && l > 1.0)
                throw InvalidInput("contraction rate must lie in (0, 1], got " + std::to_string(l));
        }
    }

    static RateVector uniform(int k, double lambda, Regime regime = Regime::Dissipative) {
        return RateVector(std::vector<double>(static_cast<std::size_t>(k), lambda), regime);
    }

    int size() const { return static_cast<int>(rates_.size()); }
    double operator[](int i) const { return rates_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& values() const { return rates_; }
    Regime regime() const { return regime_; }

    /// a = sup_i l_i.
    double norm() const { return *std::max_element(rates_.begin(), rates_.end()); }

    bool is_uniform() const {
        return std::all_of(rates_.begin(), rates_.end(), [&](double l) { return l == rates_.front(); });
    }

private:
    std::vector<double> rates_;
    Regime regime_ = Regime::Dissipative;
};

using SymbolWord = std::vector<int>;

/// Shortest u with word = u^m.
inline SymbolWord primitive_root(const SymbolWord& word) {
    const std::size_t n = word.size();
    for (std::size_t p = 1; p < n; ++p) {
        if (n % p != 0) continue;
        bool ok = true;
        for (std::size_t i = p; i < n && ok; ++i) ok = word[i] == word[i - p];
        if (ok) return SymbolWord(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(p));
    }
    return word;
}

/// Index of the lexicographically least rotation.
inline std::size_t least_rotation(const SymbolWord& word) {
    const std::size_t n = word.size();
    std::size_t best = 0;
    for (std::size_t r = 1; r < n; ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            const int a = word[(r + i) % n];
            const int b = word[(best + i) % n];
            if (a != b) {
                if (a < b) best = r;
                break;
            }
        }
    }
    return best;
}

inline SymbolWord rotate_word(const SymbolWord& word, std::size_t r) {
    SymbolWord out(word.size());
    for (std::size_t i = 0; i < word.size(); ++i) out[i] = word[(r + i) % word.size()];
    return out;
}

inline std::string word_string(const SymbolWord& word) {
    std::ostringstream os;
    for (std::size_t i = 0; i < word.size(); ++i) os << (i ? "." : "") << word[i];
    return os.str();
}

struct InvariantBall {
    Point center{0.0, 0.0};
    double radius = 0.0;

    bool contains(Point z, double slack = 0.0) const { return std::abs(z - center) <= radius * (1.0 + slack); }
};

/// A periodic orbit stored from the lexicographically least rotation of its
/// (primitive) itinerary; points[j] lies in cone word[j].
struct Cycle {
    SymbolWord word;
    std::vector<Point> points;

    int period() const { return static_cast<int>(word.size()); }
    std::string id() const { return word_string(word); }
};

struct Rational {
    long num = 0;
    long den = 1;

    bool operator==(const Rational&) const = default;
};

struct IterateOptions {
    long max_steps = 100000;
    double tol = 1e-9;         // cycle-closure tolerance
    int period_cap = 10000;
    bool record_points = true;
};

struct OrbitRecord {
    enum class Terminal { Converged, HitSingular, BudgetExhausted };

    Point seed;
    std::vector<Point> points;  // points[0] = seed (empty unless recorded)
    SymbolWord word;            // word[j] = cone of points[j]
    Terminal terminal = Terminal::BudgetExhausted;
    long steps = 0;             // number of applications of T
    long terminal_step = -1;    // step of the singular hit
    std::optional<Cycle> cycle;
    Point last{0.0, 0.0};
};

/// The dissipative outer billiard T(z) = -l_i z + (1 + l_i) w_i on A_i.
class Billiard {
public:
    Billiard(Polygon P, RateVector rates, double eps = kDefaultEps)
        : P_(std::move(P)), rates_(std::move(rates)), eps_(eps) {
        if (rates_.size() != P_.size())
            throw InvalidInput("rate vector length " + std::to_string(rates_.size()) +
                               " does not match polygon order " + std::to_string(P_.size()));
        if (!(eps_ >= 0.0) || !std::isfinite(eps_)) throw InvalidInput("eps must be a non-negative number");
        for (int j = 0; j < P_.size(); ++j) {
            const double l = rates_[j];
            branches_.push_back({Point(-l, 0.0), (1.0 + l) * P_.vertex(j)});
        }
    }

    const Polygon& polygon() const { return P_; }
    const RateVector& rates() const { return rates_; }
    double eps() const { return eps_; }
    int size() const { return P_.size(); }

    Location locate(Point z) const { return dob::locate(z, P_, eps_); }

    const ComplexAffine& branch(int cone) const { return branches_[static_cast<std::size_t>(cone)]; }

    Point apply(int cone, Point z) const { return branch(cone)(z); }

    Point step(Point z) const {
        const Location loc = locate(z);
        switch (loc.kind) {
            case Location::Kind::Cone: return apply(loc.cone, z);
            case Location::Kind::InsidePolygon: throw InsidePolygon("step: point lies in the table");
            default: throw SingularHit("step: point lies on the singular set");
        }
    }

    /// K = closed disk of radius b (1 + a) / (1 - a)^2 about the origin.
    InvariantBall invariant_ball() const {
        const double a = rates_.norm();
        if (!(a < 1.0)) throw InvalidInput("invariant ball requires sup rate < 1");
        const double b = P_.vertex_norm();
        return {Point(0.0, 0.0), b * (1.0 + a) / ((1.0 - a) * (1.0 - a))};
    }

    OrbitRecord iterate(Point seed, const IterateOptions& opt = {}) const;

private:
    Polygon P_;
    RateVector rates_;
    double eps_;
    std::vector<ComplexAffine> branches_;
};

/// Composite affine map of the itinerary (first symbol applied first).
inline ComplexAffine word_map(const SymbolWord& word, const Billiard& B) {
    ComplexAffine m;
    for (int s : word) m = m.then(B.branch(s));
    return m;
}

/// The unique z with T^n(z) = z along the given itinerary, if the
/// composite map is not the identity. Realizability is checked separately.
inline std::optional<Point> periodic_point_from_word(const SymbolWord& word, const Billiard& B) {
    if (word.empty()) throw InvalidInput("periodic_point_from_word: empty word");
    for (int s : word)
        if (s < 0 || s >= B.size()) throw InvalidInput("periodic_point_from_word: symbol out of range");
    return word_map(word, B).fixed_point();
}

/// True iff the n iterates from z visit exactly the cones of the word, every
/// iterate lying in its open cone at distance at least eps from the
/// singular set.
inline bool validate_word(Point z, const SymbolWord& word, const Billiard& B) {
    for (int s : word) {
        if (!is_finite(z)) return false;
        const Location loc = B.locate(z);
        if (!loc.in_cone() || loc.cone != s) return false;
        z = B.apply(s, z);
    }
    return true;
}

/// Builds the canonical cycle from any rotation of an itinerary, or nullopt
/// if the itinerary is not realized with margin eps.
inline std::optional<Cycle> cycle_from_word(const SymbolWord& word, const Billiard& B) {
    SymbolWord root = primitive_root(word);
    root = rotate_word(root, least_rotation(root));
    const auto z = periodic_point_from_word(root, B);
    if (!z || !validate_word(*z, root, B)) return std::nullopt;
    Cycle c;
    c.word = root;
    Point x = *z;
    for (int s : root) {
        c.points.push_back(x);
        x = B.apply(s, x);
    }
    return c;
}

inline OrbitRecord Billiard::iterate(Point seed, const IterateOptions& opt) const {
    if (!is_finite(seed)) throw InvalidInput("iterate: seed is not finite");
    OrbitRecord rec;
    rec.seed = seed;
    const Location first = locate(seed);
    if (first.kind == Location::Kind::InsidePolygon) throw InsidePolygon("iterate: seed lies in the table");
    if (first.kind == Location::Kind::OffLine) throw InvalidInput("iterate: seed is off the segment's line");

    // Cycle detection needs the full history; points are dropped from the
    // record afterwards when not requested.
    std::vector<Point> pts;
    SymbolWord sym;
    pts.reserve(1024);
    sym.reserve(1024);
    pts.push_back(seed);

    long anchor = 0;
    long power = 1;
    Point z = seed;
    for (long n = 0; n < opt.max_steps; ++n) {
        const Location loc = n == 0 ? first : locate(z);
        if (!loc.in_cone()) {
            rec.terminal = OrbitRecord::Terminal::HitSingular;
            rec.terminal_step = n;
            break;
        }
        sym.push_back(loc.cone);
        z = apply(loc.cone, z);
        pts.push_back(z);
        rec.steps = n + 1;
        const long m = n + 1;
        const long p = m - anchor;
        if (p <= opt.period_cap && m >= 2 * p && std::abs(z - pts[static_cast<std::size_t>(anchor)]) < opt.tol) {
            const auto mu = static_cast<std::size_t>(m);
            const auto pu = static_cast<std::size_t>(p);
            bool repeat = std::abs(pts[mu - pu] - pts[mu - 2 * pu]) < opt.tol;
            for (std::size_t i = 0; i < pu && repeat; ++i) repeat = sym[mu - 2 * pu + i] == sym[mu - pu + i];
            if (repeat) {
                const SymbolWord tail(sym.begin() + static_cast<std::ptrdiff_t>(mu - pu), sym.end());
                if (auto c = cycle_from_word(tail, *this)) {
                    // The orbit must actually be close to the solved cycle.
                    double d = INFINITY;
                    for (const Point& q : c->points) d = std::min(d, std::abs(q - z));
                    if (d < 10.0 * opt.tol + 1e-12 * std::abs(z)) {
                        rec.terminal = OrbitRecord::Terminal::Converged;
                        rec.cycle = std::move(c);
                        break;
                    }
                }
            }
        }
        if (p >= power) {
            anchor = m;
            power = std::min<long>(power * 2, std::max<long>(opt.period_cap, 1));
        }
    }
    rec.last = z;
    rec.word = std::move(sym);
    if (opt.record_points) rec.points = std::move(pts);
    return rec;
}

/// Independent evaluation of T^n(z) from an itinerary by the explicit sum
///   (-1)^n l_{i1}..l_{in} z + sum_j (-1)^{n-j} (1 + l_{ij}) l_{i(j+1)}..l_{in} w_{ij}.
inline Point iterate_formula(Point z, const SymbolWord& word, const Billiard& B) {
    const std::size_t n = word.size();
    double prod = 1.0;
    for (int s : word) prod *= B.rates()[s];
    Point sum{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
        double tail = 1.0;
        for (std::size_t l = j + 1; l < n; ++l) tail *= B.rates()[word[l]];
        const double sign = ((n - 1 - j) % 2 == 0) ? 1.0 : -1.0;
        sum += sign * (1.0 + B.rates()[word[j]]) * tail * B.polygon().vertex(word[j]);
    }
    const double zsign = (n % 2 == 0) ? 1.0 : -1.0;
    return zsign * prod * z + sum;
}

/// Winding number of the closed polygonal curve through the points about
/// the table's centroid, divided by k (reduced).
inline Rational rotation_number(std::span<const Point> points, const Polygon& P, double eps = kDefaultEps) {
    if (points.size() < 2) throw UndefinedWinding("rotation number needs at least two points");
    const Point c = P.centroid();
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Point a = points[i];
        const Point b = points[(i + 1) % points.size()];
        if (segment_distance(c, a, b) < eps) throw UndefinedWinding("orbit curve passes through the centroid");
        total += std::arg((b - c) / (a - c));
    }
    const long winding = std::lround(total / (2.0 * std::numbers::pi));
    const long k = P.size();
    const long g = std::gcd(std::abs(winding), k);
    return {winding / (g ? g : 1), k / (g ? g : 1)};
}

enum class Provenance { ClosedForm, Simulated, Stabilization };

inline const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::ClosedForm: return "closed-form";
        case Provenance::Simulated: return "simulated";
        case Provenance::Stabilization: return "stabilization";
    }
    return "?";
}

/// One catalog entry: a periodic orbit with its provenance.
struct Attractor {
    Cycle cycle;
    std::optional<Rational> rotation;
    Provenance provenance = Provenance::Simulated;
    std::string kind = "simulated";
    int n = 0;
    std::optional<std::pair<double, double>> existence;
    bool degenerate = false;
    std::size_t basin_samples = 0;

    int period() const { return cycle.period(); }
    std::string id() const { return cycle.id(); }
};

inline std::optional<Rational> try_rotation_number(const Cycle& c, const Polygon& P) {
    if (P.is_segment()) return std::nullopt;
    try {
        return rotation_number(c.points, P);
    } catch (const UndefinedWinding&) {
        return std::nullopt;
    }
}

/// Solves w_i = l_i/(1+l_i) v_i + 1/(1+l_i) v_{i+1} for the orbit visiting
/// the vertices in cyclic order. Throws Degenerate if the system is singular.
inline Attractor fagnano_solve(const Billiard& B) {
    const int k = B.size();
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(k, k);
    Eigen::VectorXcd rhs(k);
    for (int i = 0; i < k; ++i) {
        const double l = B.rates()[i];
        M(i, i) += l / (1.0 + l);
        M(i, (i + 1) % k) += 1.0 / (1.0 + l);
        rhs(i) = B.polygon().vertex(i);
    }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(M);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) throw Degenerate("Fagnano system is singular");
    const Eigen::VectorXcd v = lu.solve(rhs);
    Attractor a;
    a.provenance = Provenance::ClosedForm;
    a.kind = "fagnano";
    a.n = 1;
    for (int i = 0; i < k; ++i) {
        a.cycle.word.push_back(i);
        a.cycle.points.push_back(v(i));
    }
    a.degenerate = !validate_word(a.cycle.points.front(), a.cycle.word, B);
    a.rotation = try_rotation_number(a.cycle, B.polygon());
    return a;
}

}  // namespace dob
