#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "dob/billiard.hpp"
#include "dob/parallel.hpp"

namespace dob {

/// Max pointwise distance between two cycles, minimized over cyclic shifts.
/// Infinite when the periods differ.
inline double cycle_distance(const Cycle& a, const Cycle& b) {
    if (a.points.size() != b.points.size() || a.points.empty()) return std::numeric_limits<double>::infinity();
    const std::size_t n = a.points.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < n; ++s) {
        double d = 0.0;
        for (std::size_t i = 0; i < n && d < best; ++i) d = std::max(d, std::abs(a.points[i] - b.points[(i + s) % n]));
        best = std::min(best, d);
    }
    return best;
}

/// Hausdorff distance between the point sets of two families of cycles.
inline double hausdorff(const std::vector<Point>& A, const std::vector<Point>& B) {
    if (A.empty() || B.empty()) return std::numeric_limits<double>::infinity();
    auto directed = [](const std::vector<Point>& X, const std::vector<Point>& Y) {
        double h = 0.0;
        for (const Point& x : X) {
            double d = std::numeric_limits<double>::infinity();
            for (const Point& y : Y) d = std::min(d, std::abs(x - y));
            h = std::max(h, d);
        }
        return h;
    };
    return std::max(directed(A, B), directed(B, A));
}

class AttractorCatalog {
public:
    /// Returns the index of the entry matching c (within tol, up to shift).
    std::optional<std::size_t> find(const Cycle& c, double tol = 1e-6) const {
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (entries_[i].cycle.word == c.word) return i;
            if (cycle_distance(entries_[i].cycle, c) < tol) return i;
        }
        return std::nullopt;
    }

    /// Inserts a new entry or bumps the sample count of an existing one.
    std::size_t add(Attractor a, double tol = 1e-6) {
        if (auto i = find(a.cycle, tol)) {
            entries_[*i].basin_samples += a.basin_samples;
            return *i;
        }
        entries_.push_back(std::move(a));
        return entries_.size() - 1;
    }

    /// Orders entries by (period, id).
    void sort() {
        std::sort(entries_.begin(), entries_.end(), [](const Attractor& x, const Attractor& y) {
            if (x.period() != y.period()) return x.period() < y.period();
            return x.id() < y.id();
        });
    }

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const Attractor& operator[](std::size_t i) const { return entries_[i]; }
    Attractor& operator[](std::size_t i) { return entries_[i]; }
    const std::vector<Attractor>& entries() const { return entries_; }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    std::vector<int> periods() const {
        std::vector<int> p;
        for (const auto& a : entries_) p.push_back(a.period());
        std::sort(p.begin(), p.end());
        return p;
    }

    std::vector<Point> omega_points() const {
        std::vector<Point> pts;
        for (const auto& a : entries_) pts.insert(pts.end(), a.cycle.points.begin(), a.cycle.points.end());
        return pts;
    }

private:
    std::vector<Attractor> entries_;
};

inline Attractor simulated_attractor(const Cycle& c, const Polygon& P) {
    Attractor a;
    a.cycle = c;
    a.provenance = Provenance::Simulated;
    a.kind = "simulated";
    a.rotation = try_rotation_number(c, P);
    a.basin_samples = 1;
    return a;
}

/// Uniform samples of K minus the table (on the line for the segment).
inline std::vector<Point> random_seeds(const Billiard& B, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const InvariantBall K = B.invariant_ball();
    std::vector<Point> out;
    out.reserve(count);
    while (out.size() < count) {
        Point z;
        if (B.polygon().is_segment()) {
            const Point p = B.polygon().vertex(0), q = B.polygon().vertex(1);
            const Point mid = 0.5 * (p + q);
            const Point d = (q - p) / std::abs(q - p);
            z = mid + unit(rng) * K.radius * d;
        } else {
            z = K.center + K.radius * Point(unit(rng), unit(rng));
            if (!K.contains(z)) continue;
        }
        const Location loc = B.locate(z);
        if (loc.in_cone()) out.push_back(z);
    }
    return out;
}

struct SimulationCensus {
    AttractorCatalog catalog;
    std::size_t seeds = 0;
    std::size_t converged = 0;
    std::size_t hit_singular = 0;
    std::size_t budget_exhausted = 0;
    std::vector<int> labels;  // per seed: catalog index, -1 singular, -2 budget
};

/// Iterates every seed to its limit cycle and collects the distinct cycles.
inline SimulationCensus simulate_census(const Billiard& B, const std::vector<Point>& seeds,
                                        const IterateOptions& opt = {}, unsigned workers = 0) {
    IterateOptions o = opt;
    o.record_points = false;
    std::vector<OrbitRecord> recs(seeds.size());
    parallel_for(
        seeds.size(), [&](std::size_t i) { recs[i] = B.iterate(seeds[i], o); }, workers);
    SimulationCensus out;
    out.seeds = seeds.size();
    out.labels.assign(seeds.size(), -2);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const OrbitRecord& r = recs[i];
        if (r.terminal == OrbitRecord::Terminal::Converged) {
            ++out.converged;
            out.labels[i] = static_cast<int>(out.catalog.add(simulated_attractor(*r.cycle, B.polygon())));
        } else if (r.terminal == OrbitRecord::Terminal::HitSingular) {
            ++out.hit_singular;
            out.labels[i] = -1;
        } else {
            ++out.budget_exhausted;
        }
    }
    // Relabel after sorting so ids are stable.
    std::vector<std::string> ids;
    for (const auto& a : out.catalog) ids.push_back(a.id());
    out.catalog.sort();
    std::map<std::string, int> pos;
    for (std::size_t i = 0; i < out.catalog.size(); ++i) pos[out.catalog[i].id()] = static_cast<int>(i);
    for (int& l : out.labels)
        if (l >= 0) l = pos[ids[static_cast<std::size_t>(l)]];
    return out;
}

inline SimulationCensus simulate_census(const Billiard& B, std::size_t count, std::uint64_t seed,
                                        const IterateOptions& opt = {}, unsigned workers = 0) {
    return simulate_census(B, random_seeds(B, count, seed), opt, workers);
}

}  // namespace dob
