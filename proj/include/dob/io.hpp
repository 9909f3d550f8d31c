#pragma once

// JSON encoding of the library types. Points are [re, im] pairs, words are
// integer arrays and rotation numbers are {num, den}.

#include <json.hpp>

#include <string>
#include <vector>

#include "dob/basins.hpp"
#include "dob/bifurcation.hpp"
#include "dob/billiard.hpp"
#include "dob/catalog.hpp"
#include "dob/perturb.hpp"
#include "dob/return_maps.hpp"
#include "dob/singular.hpp"
#include "dob/skew_product.hpp"

namespace dob::io {

using nlohmann::json;

inline json point(Point z) { return json::array({z.real(), z.imag()}); }

inline json points(std::span<const Point> zs) {
    json a = json::array();
    for (const Point& z : zs) a.push_back(point(z));
    return a;
}

inline Point parse_point(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw InvalidInput("a point must be a [re, im] pair of numbers");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json rational(const std::optional<Rational>& r) {
    if (!r) return nullptr;
    return {{"num", r->num}, {"den", r->den}};
}

inline json cycle(const Cycle& c) {
    return {{"id", c.id()}, {"period", c.period()}, {"word", c.word}, {"points", points(c.points)}};
}

inline json attractor(const Attractor& a) {
    json j = cycle(a.cycle);
    j["provenance"] = provenance_name(a.provenance);
    j["kind"] = a.kind;
    j["n"] = a.n;
    j["rotation"] = rational(a.rotation);
    j["degenerate"] = a.degenerate;
    j["basin_samples"] = a.basin_samples;
    j["existence"] = a.existence ? json::array({a.existence->first, a.existence->second}) : json(nullptr);
    return j;
}

inline json catalog(const AttractorCatalog& c) {
    json a = json::array();
    for (const auto& e : c) a.push_back(attractor(e));
    return {{"count", c.size()}, {"periods", c.periods()}, {"orbits", a}};
}

inline const char* terminal_name(OrbitRecord::Terminal t) {
    switch (t) {
        case OrbitRecord::Terminal::Converged: return "converged";
        case OrbitRecord::Terminal::HitSingular: return "hit_singular";
        case OrbitRecord::Terminal::BudgetExhausted: return "budget_exhausted";
    }
    return "?";
}

inline json orbit(const OrbitRecord& r, bool with_points) {
    json j = {{"seed", point(r.seed)}, {"terminal", terminal_name(r.terminal)}, {"steps", r.steps}, {"last", point(r.last)}};
    if (r.terminal == OrbitRecord::Terminal::HitSingular) j["terminal_step"] = r.terminal_step;
    if (r.cycle) j["cycle"] = cycle(*r.cycle);
    if (with_points) {
        j["points"] = points(r.points);
        j["word"] = r.word;
    }
    return j;
}

inline json polygon(const Polygon& P) { return points(P.vertices()); }

inline Polygon parse_polygon(const json& j) {
    if (!j.is_array()) throw InvalidInput("polygon must be an array of [re, im] pairs");
    std::vector<Point> v;
    for (const auto& p : j) v.push_back(parse_point(p));
    return Polygon::from_vertices(std::move(v));
}

inline json root(const bifurcation::Root& r) {
    return {{"n", r.n}, {"root", r.root}, {"bracket_low", r.bracket_low}, {"bracket_high", r.bracket_high}};
}

inline json affine(const ComplexAffine& m) {
    const auto a = m.matrix();
    return {{"matrix", json::array({json::array({a[0], a[1]}), json::array({a[2], a[3]})})},
            {"offset", point(m.offset)}};
}

inline json reduced_map(const ReducedMap& R) {
    json br = json::array();
    for (int s : R.active_branches()) {
        json b = affine(R.branch(s).map);
        b["sigma"] = s;
        br.push_back(b);
    }
    return {{"k", R.k()},
            {"center", point(R.center())},
            {"branches", br},
            {"branch_count", R.active_branches().size()},
            {"expected_branch_count", R.expected_branch_count()}};
}

inline json return_fixed_point(const ReturnFixedPoint& f) {
    return {{"kind", kind_name(f.kind)},
            {"n", f.n},
            {"location", point(f.location)},
            {"exists_for_lambda", json::array({f.exists_for_lambda.first, f.exists_for_lambda.second})},
            {"f_period", f.f_period},
            {"T_period", f.T_period}};
}

inline json singular_complex(const SingularComplex& S, bool with_segments) {
    json j = {{"order", S.order},
              {"stabilized", S.stabilized},
              {"pieces", S.segments.size() + S.points.size()},
              {"new_per_order", S.new_per_order},
              {"ball_radius", S.K.radius}};
    if (with_segments) {
        json segs = json::array();
        for (const auto& s : S.segments) segs.push_back(json::array({point(s.a), point(s.b)}));
        j["segments"] = segs;
        j["points"] = points(S.points);
    }
    return j;
}

inline json certificate(const PersistencyCertificate& c) {
    json j = {{"certified", c.certified}, {"pieces", c.pieces}};
    if (c.certified) {
        j["n"] = c.n;
        j["margin"] = c.margin;
    } else {
        j["reason"] = c.reason;
    }
    return j;
}

inline json persistency_report(const PersistencyReport& r) {
    json trials = json::array();
    for (const auto& t : r.trials) {
        trials.push_back({{"periods", t.periods},
                          {"count_match", t.count_match},
                          {"period_match", t.period_match},
                          {"hausdorff", t.hausdorff}});
    }
    return {{"reference", catalog(r.reference)},
            {"trials", trials},
            {"count_matches", r.count_matches},
            {"period_matches", r.period_matches},
            {"max_hausdorff", r.max_hausdorff}};
}

inline json basin_legend(const BasinMap& m) {
    json legend = json::array();
    for (std::size_t i = 0; i < m.legend.size(); ++i) {
        const Rgb c = attractor_color(m.legend[i]);
        legend.push_back({{"label", i},
                          {"id", m.legend[i].id()},
                          {"period", m.legend[i].period()},
                          {"rotation", rational(m.legend[i].rotation)},
                          {"color", json::array({c[0], c[1], c[2]})},
                          {"pixels", m.counts[i]}});
    }
    return {{"width", m.width},
            {"height", m.height},
            {"box", json::array({point(m.lo), point(m.hi)})},
            {"legend", legend},
            {"singular_pixels", m.singular},
            {"non_convergent_pixels", m.non_convergent},
            {"table_pixels", m.table},
            {"uncataloged_pixels", m.uncataloged}};
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace dob::io
