// Acceptance gate: one PASS/FAIL line per criterion. Exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dob/dob.hpp"

using namespace dob;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x, int prec = 6) {
    std::ostringstream os;
    os.precision(prec);
    os << x;
    return os.str();
}

std::string periods_string(const std::vector<int>& p) {
    std::string s = "{";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
    return s + "}";
}

std::string rational_string(const std::optional<Rational>& r) {
    return r ? std::to_string(r->num) + "/" + std::to_string(r->den) : "?";
}

// Orbit count shown in the widely reproduced basin picture of the square at l = 0.95.
constexpr int kFigureSquareCountAt095 = 3;

Outcome segment_billiard() {
    const double l = 0.5;
    const Billiard B(Polygon::segment(), RateVector::uniform(2, l));
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(-1000.0, 1000.0);
    const double p = (1 + l) / (1 - l);
    int converged = 0;
    double worst_ratio = 0.0, worst_cycle = 0.0;
    for (int i = 0; i < 100;) {
        const double x = U(rng);
        if (std::abs(x) <= 1.0) continue;
        ++i;
        const OrbitRecord r = B.iterate({x, 0.0});
        if (r.terminal != OrbitRecord::Terminal::Converged || r.cycle->period() != 2) continue;
        const double c0 = r.cycle->points[0].real(), c1 = r.cycle->points[1].real();
        worst_cycle = std::max({worst_cycle, std::abs(std::max(c0, c1) - p), std::abs(std::min(c0, c1) + p)});
        ++converged;
        // Error to the limit point of the same sign, two steps apart.
        for (std::size_t n = 0; n + 2 < r.points.size(); ++n) {
            const double z0 = r.points[n].real(), z2 = r.points[n + 2].real();
            const double e0 = z0 - (z0 > 0 ? p : -p), e2 = z2 - (z2 > 0 ? p : -p);
            if (std::abs(e0) < 1e-3) break;
            worst_ratio = std::max(worst_ratio, std::abs(std::abs(e2 / e0) - l * l));
        }
    }
    return {converged == 100 && worst_cycle < 1e-9 && worst_ratio < 1e-6,
            std::to_string(converged) + "/100 converged to {" + fmt(p) + ", " + fmt(-p) + "}, max |ratio - l^2| = " +
                fmt(worst_ratio, 3)};
}

Outcome family_roots(bifurcation::Family f) {
    const int first = f == bifurcation::Family::Q ? 1 : 0;
    bool ok = true;
    std::string why;
    if (f == bifurcation::Family::Q && bifurcation::threshold_Q(1) != 0.0) {
        ok = false;
        why += " threshold_Q(1) != 0;";
    }
    double prev = -1.0;
    int big = -1;
    for (int n = first; n <= 30; ++n) {
        const double r = f == bifurcation::Family::Q ? bifurcation::threshold_Q(n) : bifurcation::threshold_T(n);
        if (r > 0.99 && big < 0) big = n;
        if (!(r > prev)) {
            ok = false;
            why += " not increasing at n=" + std::to_string(n) + ";";
        }
        if (r > 0.0 && !(bifurcation::q(f, n, r - 1e-10) < 0.0 && bifurcation::q(f, n, r + 1e-10) > 0.0)) {
            ok = false;
            why += " no sign change at n=" + std::to_string(n) + ";";
        }
        prev = r;
    }
    for (int n = 31; n <= 5000 && big < 0; ++n) {
        const double r = f == bifurcation::Family::Q ? bifurcation::threshold_Q(n) : bifurcation::threshold_T(n);
        if (!(r > prev)) {
            ok = false;
            why += " not increasing at n=" + std::to_string(n) + ";";
            break;
        }
        prev = r;
        if (r > 0.99) big = n;
    }
    if (big < 0) ok = false;
    return {ok, std::string(bifurcation::family_name(f)) + ": increasing with sign changes for n<=30, first root > 0.99 at n=" +
                    std::to_string(big) + why};
}

Outcome threshold_roots() {
    const Outcome q = family_roots(bifurcation::Family::Q);
    const Outcome t = family_roots(bifurcation::Family::T);
    return {q.pass && t.pass, q.detail + "; " + t.detail};
}

Outcome triangle_095() {
    const double l = 0.95;
    const AttractorCatalog cat = attractor_census(ReturnTable::Triangle, l);
    const auto m = bifurcation::triangle_census(l);
    const Billiard B(Polygon::equilateral_triangle(), RateVector::uniform(3, l));
    const std::vector<Point> seeds = random_seeds(B, 10000, 95);
    IterateOptions it;
    it.max_steps = 100000;
    it.record_points = false;
    std::vector<int> ok(seeds.size(), 0);
    parallel_for(seeds.size(), [&](std::size_t i) {
        const OrbitRecord r = B.iterate(seeds[i], it);
        if (r.terminal != OrbitRecord::Terminal::Converged || !cat.find(*r.cycle)) return;
        double d = INFINITY;
        for (const auto& a : cat)
            for (const Point& q : a.cycle.points) d = std::min(d, std::abs(q - r.last));
        ok[i] = d < 1e-6;
    });
    const long good = std::count(ok.begin(), ok.end(), 1);
    const bool pass = cat.size() == 3 && cat.periods() == std::vector<int>{3, 9, 12} && m.m1 == 2 && m.m2 == 1 &&
                      good == 10000;
    return {pass, "catalog " + periods_string(cat.periods()) + ", (m1,m2)=(" + std::to_string(m.m1) + "," +
                      std::to_string(m.m2) + "), " + std::to_string(good) + "/10000 seeds reach a catalog orbit"};
}

Outcome triangle_closed_forms() {
    double worst_fix = 0.0, worst_sum = 0.0, worst_phi = 0.0;
    int defined = 0;
    long samples = 0;
    std::mt19937_64 rng(4);
    for (double l : {0.6, 0.9, 0.99}) {
        for (int n = 1; n <= 5; ++n) {
            const Point z = triangle::z_point(n, l);
            if (triangle::strip_index(z, l) != n) continue;  // z_n is not a fixed point of phi_n here
            ++defined;
            worst_fix = std::max(worst_fix, std::abs(triangle::psi(n, l)(z) - z));
            // Sum of coordinates against the published closed form.
            const auto c = triangle::coords(z);
            const double closed = (std::pow(l, 2 * n - 2) - std::pow(l, 4 * n - 3)) /
                                  ((1 - l) * (1 - std::pow(l, 2 * n - 1) + std::pow(l, 4 * n - 2)));
            worst_sum = std::max(worst_sum, std::abs(c.a + c.b - closed));
            const auto [lo, hi] = triangle::strip_bounds(n, l);
            std::uniform_real_distribution<double> S(lo, hi), Bv(0.0, triangle::inv_sum(l, 1, 2));
            int got = 0;
            while (got < 1000) {
                const double s = S(rng), b = Bv(rng);
                const Point x = triangle::from_coords(s - b, b);
                if (triangle::strip_index(x, l) != n) continue;
                ++got;
                worst_phi = std::max(worst_phi, std::abs(triangle::phi(x, n, l) - triangle::phi_composition(x, n, l)));
            }
            samples += got;
        }
    }
    const bool pass = defined > 0 && worst_fix < 1e-12 && worst_sum < 1e-10 && worst_phi < 1e-12;
    return {pass, std::to_string(defined) + " (n,l) pairs with z_n in B_n: max |psi(z)-z| = " + fmt(worst_fix, 3) +
                      ", max |a+b - formula| = " + fmt(worst_sum, 3) + ", max |phi - composition| = " + fmt(worst_phi, 3) +
                      " over " + std::to_string(samples) + " samples"};
}

Outcome square_consistency() {
    bool pass = true;
    std::string detail;
    for (double l : {0.3, 0.5, 0.7, 0.9, 0.95}) {
        const AttractorCatalog theorem = attractor_census(ReturnTable::Square, l);
        const Billiard B(Polygon::unit_square(), RateVector::uniform(4, l));
        const SimulationCensus s = simulate_census(B, 10000, 400 + static_cast<std::uint64_t>(l * 100));
        std::vector<int> expected;
        for (std::size_t i = 1; i <= theorem.size(); ++i) expected.push_back(4 * static_cast<int>(i));
        bool match = s.catalog.size() == theorem.size() && s.catalog.periods() == theorem.periods() &&
                     theorem.periods() == expected && s.converged == s.seeds;
        for (const auto& a : s.catalog) match = match && theorem.find(a.cycle).has_value();
        pass = pass && match;
        detail += "l=" + fmt(l) + ": theorem " + periods_string(theorem.periods()) + " sim " +
                  periods_string(s.catalog.periods()) + (match ? "" : " MISMATCH") + "; ";
        if (l == 0.95) {
            detail += "figure reports " + std::to_string(kFigureSquareCountAt095) + " orbits at l=0.95";
            if (static_cast<int>(theorem.size()) != kFigureSquareCountAt095)
                detail += " -- DISCREPANCY: theorem census gives " + std::to_string(theorem.size());
        }
    }
    return {pass, detail};
}

Outcome gcd_lifting() {
    int cycles = 0, bad = 0;
    for (int k : {3, 4}) {
        for (double l : {0.3, 0.6, 0.95}) {
            const Billiard B(k == 3 ? Polygon::equilateral_triangle() : Polygon::unit_square(), RateVector::uniform(k, l));
            const ReducedMap R(B);
            for (const FCycle& c : R.find_cycles(2000, 66)) {
                ++cycles;
                const Lift lift = lift_periods(c.period(), c.sigma_sum, k);
                const auto p = brute_force_period(B, c.points[0], 4 * lift.period + 8, 1e-9);
                if (!p || *p != lift.period) ++bad;
            }
        }
    }
    return {cycles > 0 && bad == 0, std::to_string(cycles) + " f-cycles, " + std::to_string(bad) + " period mismatches"};
}

Outcome lyapunov() {
    long violations = 0, steps = 0, resampled = 0;
    std::string detail;
    for (const Polygon& P : {Polygon::unit_square(), Polygon::equilateral_triangle(), Polygon::regular(6)}) {
        const LyapunovKind kind = lyapunov_kind_for(P);
        for (double l : {1.0, 0.9}) {
            const auto regime = l == 1.0 ? RateVector::Regime::Conservative : RateVector::Regime::Dissipative;
            const Billiard B(P, RateVector::uniform(P.size(), l, regime));
            std::mt19937_64 rng(700 + P.size());
            std::uniform_real_distribution<double> U(-40, 40);
            long v = 0;
            for (int seed = 0; seed < 100;) {
                Point z(U(rng), U(rng));
                if (!B.locate(z).in_cone()) continue;
                std::vector<long> h;
                try {
                    h.push_back(lyapunov_value(z, P, kind));
                    for (int i = 0; i < 1000; ++i) {
                        z = B.step(z);
                        h.push_back(lyapunov_value(z, P, kind));
                    }
                } catch (const SingularHit&) {
                    ++resampled;  // orbit met a level-set boundary; draw another seed
                    continue;
                }
                ++seed;
                for (std::size_t i = 1; i < h.size(); ++i) {
                    if (l == 1.0 ? h[i] != h[i - 1] : h[i] > h[i - 1]) ++v;
                    ++steps;
                }
            }
            violations += v;
            detail += "k=" + std::to_string(P.size()) + " l=" + fmt(l) + ": " + std::to_string(v) + "; ";
        }
    }
    return {violations == 0, detail + std::to_string(steps) + " steps checked, " + std::to_string(resampled) +
                                 " seeds redrawn after an ambiguous level"};
}

Outcome pentagon() {
    const Billiard B(Polygon::regular(5), RateVector::uniform(5, 0.95));
    SingularOptions so;
    const SingularComplex S = expand_singular(B, so);
    const CellDecomposition D = decompose(B);
    if (!S.stabilized || !D.stabilized)
        return {false, "not stabilized (singular order " + std::to_string(S.order) + ", cells order " +
                           std::to_string(D.order) + ")"};
    const StabilizationResult R = stabilization_consequence(B, D);
    std::vector<std::string> rot5;
    for (const auto& a : R.catalog)
        if (a.period() == 5) rot5.push_back(rational_string(a.rotation));
    std::sort(rot5.begin(), rot5.end());
    std::string rots;
    for (const auto& a : R.catalog) rots += std::to_string(a.period()) + ":" + rational_string(a.rotation) + " ";
    const bool pass = R.catalog.size() == 4 && R.catalog.periods() == std::vector<int>{5, 5, 10, 35} &&
                      rot5 == std::vector<std::string>{"1/5", "2/5"} && R.non_convergent == 0;
    return {pass, "S stabilizes at order " + std::to_string(S.order) + " (" + std::to_string(S.segments.size()) +
                      " pieces), cells at order " + std::to_string(D.order) + " (" + std::to_string(D.cells.size()) +
                      " cells), orbits " + periods_string(R.catalog.periods()) + ", rotations " + rots};
}

Outcome persistency() {
    const Billiard B(Polygon::unit_square(), RateVector::uniform(4, 0.5));
    const PersistencyCertificate c = persistency_check(B);
    if (!c.certified) return {false, "not certified: " + c.reason};
    PerturbOptions o;
    o.delta = 1e-3;
    o.trials = 100;
    const PersistencyReport r = perturb_harness(B.polygon(), B.rates(), o);
    std::size_t both = 0;
    for (const auto& t : r.trials) both += t.count_match && t.period_match;
    return {both == 100, "certified at n=" + std::to_string(c.n) + " (margin " + fmt(c.margin, 4) + "), " +
                             std::to_string(both) + "/100 trials match count and periods, max Hausdorff " +
                             fmt(r.max_hausdorff, 3)};
}

Outcome property_suites() {
    std::string detail;
    bool pass = true;

    // Invariant ball.
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> U(0.05, 0.97);
    long escapes = 0, samples = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const int k = 3 + trial % 8;
        std::vector<double> rates;
        for (int i = 0; i < k; ++i) rates.push_back(U(rng));
        const Billiard B(Polygon::regular(k, 0.5 + U(rng)), RateVector(rates));
        const InvariantBall K = B.invariant_ball();
        for (const Point& z : random_seeds(B, 5000, 200 + trial)) {
            ++samples;
            if (!K.contains(B.step(z), 1e-12)) ++escapes;
        }
    }
    pass = pass && escapes == 0 && samples == 100000;
    detail += "ball: " + std::to_string(escapes) + " escapes in " + std::to_string(samples) + "; ";

    // Filtration: pieces born at order n + 1 map into S_n.
    long filtration_bad = 0, filtration_checked = 0;
    for (const Billiard& B : {Billiard(Polygon::unit_square(), RateVector::uniform(4, 0.5)),
                              Billiard(Polygon::regular(5), RateVector::uniform(5, 0.7))}) {
        SingularOptions so;
        so.n_max = 10;
        const SingularComplex S = expand_singular(B, so);
        for (int n = 1; n < S.order; ++n) {
            const auto lower = S.at_order(n);
            for (std::size_t i = 0; i < S.segments.size(); ++i) {
                if (S.birth[i] != n + 1) continue;
                ++filtration_checked;
                const Point m = 0.5 * (S.segments[i].a + S.segments[i].b);
                double best = INFINITY;
                for (int j = 0; j < B.size(); ++j) {
                    const Cone c = B.polygon().cone(j);
                    const Point r = m - c.apex;
                    if (!(cross(c.ray_singular.direction, r) <= 1e-9 && cross(c.ray_side.direction, r) >= -1e-9)) continue;
                    const Point t = B.apply(j, m);
                    for (const Segment& s : lower) best = std::min(best, s.distance(t));
                }
                if (!(best < 1e-7 * std::max(1.0, std::abs(m)))) ++filtration_bad;
            }
        }
    }
    pass = pass && filtration_bad == 0 && filtration_checked > 0;
    detail += "filtration: " + std::to_string(filtration_bad) + " bad of " + std::to_string(filtration_checked) + "; ";

    // Basin labels against an independent simulation of the same pixels.
    {
        const Billiard B(Polygon::equilateral_triangle(), RateVector::uniform(3, 0.95));
        const AttractorCatalog cat = triangle::census(0.95);
        BasinOptions o;
        o.width = o.height = 64;
        const BasinMap m = render_basins(B, cat, o);
        std::vector<Point> seeds;
        std::vector<int> labels;
        for (int j = 0; j < m.height; ++j)
            for (int i = 0; i < m.width; ++i) {
                const int l = m.labels[static_cast<std::size_t>(j * m.width + i)];
                if (l < 0) continue;
                seeds.push_back(m.pixel_center(i, j));
                labels.push_back(l);
            }
        const SimulationCensus s = simulate_census(B, seeds);
        long disagree = m.uncataloged + m.non_convergent;
        for (std::size_t i = 0; i < seeds.size(); ++i)
            if (s.labels[i] < 0 || s.catalog[static_cast<std::size_t>(s.labels[i])].id() !=
                                       cat[static_cast<std::size_t>(labels[i])].id())
                ++disagree;
        pass = pass && disagree == 0;
        detail += "basins: " + std::to_string(disagree) + " disagreements in " + std::to_string(seeds.size()) + "; ";
    }

    // Iterate formula.
    double worst = 0.0;
    std::uniform_int_distribution<int> len(1, 80);
    for (const Polygon& P : {Polygon::unit_square(), Polygon::regular(5), Polygon::equilateral_triangle()}) {
        std::vector<double> rates;
        for (int i = 0; i < P.size(); ++i) rates.push_back(U(rng));
        const Billiard B(P, RateVector(rates));
        std::uniform_int_distribution<int> sym(0, P.size() - 1);
        for (int t = 0; t < 1000; ++t) {
            SymbolWord w(static_cast<std::size_t>(len(rng)));
            for (int& s : w) s = sym(rng);
            const Point z(10 * U(rng), -5 * U(rng));
            Point x = z;
            for (int s : w) x = B.apply(s, x);
            worst = std::max(worst, std::abs(iterate_formula(z, w, B) - x) / std::max(1.0, std::abs(x)));
        }
    }
    pass = pass && worst < 1e-12;
    detail += "iterate formula: max rel err " + fmt(worst, 3);
    return {pass, detail};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
        double limit_s;  // 0: no runtime bound
    };
    const std::vector<Criterion> criteria = {
        {"segment billiard", segment_billiard, 1.0},
        {"threshold roots", threshold_roots, 1.0},
        {"triangle l=0.95 census", triangle_095, 30.0},
        {"triangle closed forms", triangle_closed_forms, 0.0},
        {"square consistency", square_consistency, 60.0},
        {"gcd lifting", gcd_lifting, 0.0},
        {"Lyapunov monotonicity", lyapunov, 0.0},
        {"pentagon stabilization", pentagon, 600.0},
        {"persistency", persistency, 300.0},
        {"property suites", property_suites, 0.0},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (criteria[i].limit_s > 0 && dt > criteria[i].limit_s) {
            o.pass = false;
            o.detail += " [over the " + fmt(criteria[i].limit_s) + " s limit]";
        }
        failed += !o.pass;
        std::printf("%s %2zu %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str(), dt);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
