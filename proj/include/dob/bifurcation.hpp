#pragma once

// Threshold sequences of the two polynomial families controlling the birth
// of periodic orbits:
//
//   Q: q_n(x) = x^{2n-1} + ... + x^n - x^{n-2} - ... - 1          (n >= 1)
//   T: q_n(x) = x^{4n+3} + ... + x^{3n+3} + x^{2n+1} - x^n - ... - 1 (n >= 0)
//
// Each has q_n(0) = -1 (q_1 = x for Q), q_n(1) = 1 and a unique root in
// [0, 1). The roots lambda_n (Q) and gamma_n (T) increase strictly to 1.

#include <cmath>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "dob/errors.hpp"

namespace dob::bifurcation {

enum class Family { Q, T };

inline const char* family_name(Family f) { return f == Family::Q ? "Q" : "T"; }

/// x^lo + x^{lo+1} + ... + x^hi (zero when hi < lo), Horner in the block.
inline double geometric_block(double x, int lo, int hi) {
    if (hi < lo) return 0.0;
    double s = 0.0;
    for (int j = hi; j >= lo; --j) s = s * x + 1.0;
    return s * std::pow(x, lo);
}

inline double q_Q(int n, double x) {
    if (n < 1) throw InvalidInput("Q family is indexed from n = 1");
    return geometric_block(x, n, 2 * n - 1) - geometric_block(x, 0, n - 2);
}

inline double q_T(int n, double x) {
    if (n < 0) throw InvalidInput("T family is indexed from n = 0");
    return geometric_block(x, 3 * n + 3, 4 * n + 3) + std::pow(x, 2 * n + 1) - geometric_block(x, 0, n);
}

inline double q(Family f, int n, double x) { return f == Family::Q ? q_Q(n, x) : q_T(n, x); }

/// Unfactored forms p_n = (x - 1) q_n.
inline double p_Q(int n, double x) { return std::pow(x, 2 * n) - std::pow(x, n) - std::pow(x, n - 1) + 1.0; }
inline double p_T(int n, double x) {
    return std::pow(x, 4 * n + 4) - std::pow(x, 3 * n + 3) + std::pow(x, 2 * n + 2) - std::pow(x, 2 * n + 1) -
           std::pow(x, n + 1) + 1.0;
}

struct Root {
    int n = 0;
    double root = 0.0;
    double bracket_low = 0.0;
    double bracket_high = 1.0;
    int iterations = 0;
};

/// Bisection on [0, 1] with q(lo) < 0 < q(hi), run until the bracket is
/// no wider than tol or stops shrinking.
inline Root bisect(Family f, int n, double tol = 1e-12) {
    Root r;
    r.n = n;
    if (q(f, n, 0.0) == 0.0) {
        r.root = r.bracket_low = r.bracket_high = 0.0;
        return r;
    }
    double lo = 0.0, hi = 1.0;
    while (hi - lo > tol * 1e-3 && r.iterations < 200) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (q(f, n, mid) < 0.0)
            lo = mid;
        else
            hi = mid;
        ++r.iterations;
    }
    r.bracket_low = lo;
    r.bracket_high = hi;
    r.root = 0.5 * (lo + hi);
    return r;
}

/// Append-only memo of roots by index, guarded for concurrent use.
class ThresholdCache {
public:
    explicit ThresholdCache(Family f) : family_(f) {}

    double operator()(int n) {
        const int first = family_ == Family::Q ? 1 : 0;
        if (n < first) throw InvalidInput(std::string("threshold index out of range for family ") + family_name(family_));
        std::lock_guard lock(mu_);
        const auto idx = static_cast<std::size_t>(n - first);
        while (values_.size() <= idx) values_.push_back(bisect(family_, first + static_cast<int>(values_.size())).root);
        return values_[idx];
    }

private:
    Family family_;
    std::mutex mu_;
    std::vector<double> values_;
};

inline ThresholdCache& cache(Family f) {
    static ThresholdCache cq(Family::Q);
    static ThresholdCache ct(Family::T);
    return f == Family::Q ? cq : ct;
}

/// lambda_n, the root of the Q family (n >= 1).
inline double threshold_Q(int n) { return cache(Family::Q)(n); }

/// gamma_n, the root of the T family (n >= 0).
inline double threshold_T(int n) { return cache(Family::T)(n); }

inline constexpr double kBifurcationTol = 1e-12;
inline constexpr int kMaxCensusIndex = 1000000;

/// #{ n >= 1 : root(index(n)) < lambda } for an increasing root sequence.
/// Throws AtBifurcation when lambda is within tol of one of the roots.
template <class Root>
int count_below(double lambda, Root root, double tol = kBifurcationTol) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidInput("census requires lambda in (0, 1)");
    int m = 0;
    for (int n = 1; n <= kMaxCensusIndex; ++n) {
        const double r = root(n);
        if (std::abs(lambda - r) < tol) throw AtBifurcation("lambda is at a bifurcation threshold", n);
        if (r > lambda) return m;
        ++m;
    }
    throw BudgetExceeded("census index exceeded");
}

struct TriangleCensus {
    int m1 = 0;  // orbits of period 3(2i - 1)
    int m2 = 0;  // orbits of period 12 i
};

/// m1 = #{n : lambda_{2n-1} < lambda}, m2 = #{n : gamma_{2n-1} < lambda}.
inline TriangleCensus triangle_census(double lambda, double tol = kBifurcationTol) {
    TriangleCensus c;
    c.m1 = count_below(lambda, [](int n) { return threshold_Q(2 * n - 1); }, tol);
    c.m2 = count_below(lambda, [](int n) { return threshold_T(2 * n - 1); }, tol);
    return c;
}

/// m = #{n : lambda_n < lambda}; orbits of period 4 i for i = 1..m.
inline int square_census(double lambda, double tol = kBifurcationTol) {
    return count_below(lambda, [](int n) { return threshold_Q(n); }, tol);
}

}  // namespace dob::bifurcation
