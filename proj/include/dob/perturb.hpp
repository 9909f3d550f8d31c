#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "dob/catalog.hpp"

namespace dob {

struct PerturbOptions {
    double delta = 1e-3;
    int trials = 100;
    std::size_t seeds = 2000;  // simulation seeds per catalog
    std::uint64_t rng_seed = 1;
    IterateOptions iterate{};
    unsigned workers = 0;
};

struct PerturbTrial {
    std::vector<Point> vertices;
    std::vector<double> rates;
    std::vector<int> periods;
    bool count_match = false;
    bool period_match = false;
    double hausdorff = 0.0;
};

struct PersistencyReport {
    AttractorCatalog reference;
    std::vector<PerturbTrial> trials;
    std::size_t count_matches = 0;
    std::size_t period_matches = 0;
    double max_hausdorff = 0.0;
};

/// Samples tables and rates within delta (sup norm) of (P0, rates0), with
/// the first vertex kept in place, and compares the simulated catalogs.
inline PersistencyReport perturb_harness(const Polygon& P0, const RateVector& rates0, const PerturbOptions& opt = {}) {
    if (!(opt.delta >= 0.0)) throw InvalidInput("delta must be non-negative");
    if (opt.trials < 0) throw InvalidInput("trials must be non-negative");
    PersistencyReport rep;
    const Billiard B0(P0, rates0);
    rep.reference = simulate_census(B0, opt.seeds, opt.rng_seed, opt.iterate, opt.workers).catalog;
    const std::vector<int> ref_periods = rep.reference.periods();
    const std::vector<Point> ref_omega = rep.reference.omega_points();

    std::mt19937_64 rng(opt.rng_seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int t = 0; t < opt.trials; ++t) {
        std::vector<Point> w(P0.vertices().begin(), P0.vertices().end());
        for (std::size_t i = 1; i < w.size(); ++i) w[i] += opt.delta * Point(U(rng), U(rng));
        std::vector<double> l = rates0.values();
        for (double& x : l) x += opt.delta * U(rng);
        PerturbTrial tr;
        tr.vertices = w;
        tr.rates = l;
        const Billiard B(Polygon::from_vertices(w), RateVector(l));
        const AttractorCatalog cat = simulate_census(B, opt.seeds, opt.rng_seed + 1 + static_cast<std::uint64_t>(t),
                                                     opt.iterate, opt.workers)
                                         .catalog;
        tr.periods = cat.periods();
        tr.count_match = cat.size() == rep.reference.size();
        tr.period_match = tr.periods == ref_periods;
        tr.hausdorff = hausdorff(cat.omega_points(), ref_omega);
        rep.count_matches += tr.count_match;
        rep.period_matches += tr.period_match;
        rep.max_hausdorff = std::max(rep.max_hausdorff, tr.hausdorff);
        rep.trials.push_back(std::move(tr));
    }
    return rep;
}

}  // namespace dob
