// dob: command-line front end for the dissipative outer billiard library.
//
// Exit codes: 0 ok, 1 internal error, 2 configuration error, 3 budget exceeded.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dob/dob.hpp"

namespace {

using nlohmann::json;
using namespace dob;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;

struct RunConfig {
    std::string command;
    std::string polygon = "square";
    std::string lambda = "0.5";
    double eps = kDefaultEps;
    double cycle_tol = 1e-9;
    double bisection_tol = 1e-12;
    double bifurcation_tol = bifurcation::kBifurcationTol;
    long max_steps = 100000;
    int period_cap = 10000;
    int order_max = 2000;
    std::size_t piece_budget = 1000000;
    std::size_t segment_budget = 5000000;
    int resolution = 800;
    double extent = 0.0;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    std::string output;

    std::string seed_point;
    std::size_t random_seeds = 0;
    bool record_points = false;

    std::size_t sim_seeds = 10000;
    int expected_count = -1;

    std::string family = "Q";
    int max_n = 10;

    std::string out_prefix = "basins";
    bool svg = false;
    std::string catalog_source = "auto";

    double delta = 1e-3;
    int trials = 100;
    std::size_t perturb_seeds = 2000;

    int k_min = 5;
    int k_max = 12;
    std::string lambdas = "0.95";
};

// Every field, in one place, for the config echo and the JSON config file.
template <class F>
void for_each_field(RunConfig& c, F&& f) {
    f("polygon", c.polygon);
    f("lambda", c.lambda);
    f("eps", c.eps);
    f("cycle_tol", c.cycle_tol);
    f("bisection_tol", c.bisection_tol);
    f("bifurcation_tol", c.bifurcation_tol);
    f("max_steps", c.max_steps);
    f("period_cap", c.period_cap);
    f("order_max", c.order_max);
    f("piece_budget", c.piece_budget);
    f("segment_budget", c.segment_budget);
    f("resolution", c.resolution);
    f("extent", c.extent);
    f("seed", c.seed);
    f("seed_point", c.seed_point);
    f("random_seeds", c.random_seeds);
    f("record_points", c.record_points);
    f("sim_seeds", c.sim_seeds);
    f("expected_count", c.expected_count);
    f("family", c.family);
    f("max_n", c.max_n);
    f("out_prefix", c.out_prefix);
    f("svg", c.svg);
    f("catalog_source", c.catalog_source);
    f("delta", c.delta);
    f("trials", c.trials);
    f("perturb_seeds", c.perturb_seeds);
    f("k_min", c.k_min);
    f("k_max", c.k_max);
    f("lambdas", c.lambdas);
}

json config_json(RunConfig c) {
    json j;
    j["command"] = c.command;
    for_each_field(c, [&](const char* name, auto& v) { j[name] = v; });
    return j;
}

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Polygon parse_polygon(const std::string& s) {
    if (s == "segment") return Polygon::segment();
    if (s == "triangle") return Polygon::equilateral_triangle();
    if (s == "square") return Polygon::unit_square();
    if (s.rfind("regular-", 0) == 0) {
        int k = 0;
        try {
            k = std::stoi(s.substr(8));
        } catch (const std::exception&) {
            throw InvalidInput("bad regular polygon spec: " + s);
        }
        return Polygon::regular(k);
    }
    if (!s.empty() && s.front() == '[') {
        json j;
        try {
            j = json::parse(s);
        } catch (const json::exception& e) {
            throw InvalidInput(std::string("polygon JSON: ") + e.what());
        }
        return io::parse_polygon(j);
    }
    throw InvalidInput("unknown polygon: " + s + " (segment | triangle | square | regular-k | [[re,im],...])");
}

std::vector<double> parse_list(const std::string& s) {
    std::string t = s;
    for (char& c : t)
        if (c == '[' || c == ']' || c == ',') c = ' ';
    std::istringstream is(t);
    std::vector<double> out;
    std::string tok;
    while (is >> tok) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw InvalidInput("not a number: " + tok);
        }
    }
    if (out.empty()) throw InvalidInput("empty number list");
    return out;
}

RateVector parse_rates(const std::string& s, int k) {
    const std::vector<double> v = parse_list(s);
    if (v.size() == 1) return RateVector::uniform(k, v[0]);
    return RateVector(v);
}

/// The single scalar rate required by the closed-form commands.
double scalar_rate(const std::string& s) {
    const std::vector<double> v = parse_list(s);
    for (double x : v)
        if (x != v[0]) throw InvalidInput("this command needs equal rates");
    RateVector::uniform(1, v[0]);  // validates the range
    return v[0];
}

IterateOptions iterate_options(const RunConfig& c) {
    IterateOptions o;
    o.max_steps = c.max_steps;
    o.tol = c.cycle_tol;
    o.period_cap = c.period_cap;
    o.record_points = c.record_points;
    return o;
}

Billiard make_billiard(const RunConfig& c) {
    Polygon P = parse_polygon(c.polygon);
    RateVector r = parse_rates(c.lambda, P.size());
    return Billiard(std::move(P), std::move(r), c.eps);
}

void emit(const RunConfig& c, const json& result) {
    json out = {{"config", config_json(c)}, {"result", result}};
    const std::string text = io::dump(out);
    if (c.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream os(c.output);
        if (!os) throw InvalidInput("cannot open output file " + c.output);
        os << text;
    }
}

int cmd_simulate(const RunConfig& c) {
    const Billiard B = make_billiard(c);
    json result;
    if (!c.seed_point.empty()) {
        const std::vector<double> v = parse_list(c.seed_point);
        if (v.size() > 2) throw InvalidInput("seed point must be 'x' or 'x,y'");
        const Point z(v[0], v.size() == 2 ? v[1] : 0.0);
        const OrbitRecord r = B.iterate(z, iterate_options(c));
        result["orbit"] = io::orbit(r, c.record_points);
    }
    if (c.random_seeds > 0) {
        const SimulationCensus s = simulate_census(B, c.random_seeds, c.seed, iterate_options(c), c.workers);
        result["census"] = {{"seeds", s.seeds},
                            {"converged", s.converged},
                            {"hit_singular", s.hit_singular},
                            {"budget_exhausted", s.budget_exhausted},
                            {"catalog", io::catalog(s.catalog)}};
    }
    if (result.is_null()) throw InvalidInput("simulate needs --seed-point or --random-seeds");
    emit(c, result);
    return kExitOk;
}

int cmd_census(const RunConfig& c) {
    const double l = scalar_rate(c.lambda);
    json result;
    AttractorCatalog closed;
    Polygon P;
    if (c.polygon == "triangle") {
        const auto m = bifurcation::triangle_census(l, c.bifurcation_tol);
        result["theorem"] = {{"m1", m.m1}, {"m2", m.m2}};
        closed = triangle::census(l);
        P = Polygon::equilateral_triangle();
    } else if (c.polygon == "square") {
        const int m = bifurcation::square_census(l, c.bifurcation_tol);
        result["theorem"] = {{"m", m}};
        result["strip_scan"] = square::scan_fixed_points(l, std::max(64, m + 8));
        closed = square::census(l);
        P = Polygon::unit_square();
    } else {
        throw InvalidInput("census is available for the triangle and the square");
    }
    result["closed_form"] = io::catalog(closed);
    if (c.sim_seeds > 0) {
        const Billiard B(P, RateVector::uniform(P.size(), l), c.eps);
        const SimulationCensus s = simulate_census(B, c.sim_seeds, c.seed, iterate_options(c), c.workers);
        std::size_t matched = 0;
        for (const auto& a : s.catalog) matched += closed.find(a.cycle).has_value();
        result["simulation"] = {{"seeds", s.seeds},
                                {"converged", s.converged},
                                {"catalog", io::catalog(s.catalog)},
                                {"matched_closed_form", matched}};
        result["agreement"] = matched == s.catalog.size() && s.catalog.size() == closed.size();
    }
    if (c.expected_count >= 0) {
        result["expected_count"] = c.expected_count;
        result["expected_count_matches"] = static_cast<int>(closed.size()) == c.expected_count;
    }
    emit(c, result);
    return kExitOk;
}

int cmd_bifurcations(const RunConfig& c) {
    bifurcation::Family f;
    if (c.family == "Q")
        f = bifurcation::Family::Q;
    else if (c.family == "T")
        f = bifurcation::Family::T;
    else
        throw InvalidInput("family must be Q or T");
    if (c.max_n < 1) throw InvalidInput("max-n must be positive");
    json rows = json::array();
    for (int n = f == bifurcation::Family::Q ? 1 : 0; n <= c.max_n; ++n) rows.push_back(io::root(bifurcation::bisect(f, n, c.bisection_tol)));
    emit(c, {{"family", c.family}, {"rows", rows}});
    return kExitOk;
}

AttractorCatalog stabilization_catalog(const Billiard& B, const RunConfig& c, json& info) {
    CellOptions co;
    co.n_max = c.order_max;
    co.piece_budget = c.piece_budget;
    co.workers = c.workers;
    const CellDecomposition D = decompose(B, co);
    info["cells"] = {{"order", D.order}, {"stabilized", D.stabilized}, {"components", D.cells.size()}};
    if (!D.stabilized) throw BudgetExceeded("cell decomposition did not stabilize within order-max");
    const StabilizationResult R = stabilization_consequence(B, D, iterate_options(c), c.workers);
    info["non_convergent_components"] = R.non_convergent;
    info["basin_area"] = R.basin_area;
    return R.catalog;
}

int cmd_stabilize(const RunConfig& c) {
    const Billiard B = make_billiard(c);
    SingularOptions so;
    so.n_max = c.order_max;
    so.segment_budget = c.segment_budget;
    so.tol = c.eps;
    const SingularComplex S = expand_singular(B, so);
    json result;
    result["singular"] = io::singular_complex(S, false);
    int code = kExitOk;
    if (B.polygon().is_segment()) {
        const SimulationCensus s = simulate_census(B, std::max<std::size_t>(c.sim_seeds, 1), c.seed, iterate_options(c));
        result["catalog"] = io::catalog(s.catalog);
    } else {
        try {
            result["catalog"] = io::catalog(stabilization_catalog(B, c, result));
        } catch (const BudgetExceeded& e) {
            result["error"] = e.what();
            code = kExitBudget;
        }
    }
    if (!S.stabilized) code = kExitBudget;
    emit(c, result);
    return code;
}

bool is_named_uniform(const RunConfig& c, const char* name) {
    if (c.polygon != name) return false;
    const auto v = parse_list(c.lambda);
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
}

int cmd_basins(const RunConfig& c) {
    const Billiard B = make_billiard(c);
    json info;
    AttractorCatalog cat;
    std::string source = c.catalog_source;
    if (source == "auto") {
        if (is_named_uniform(c, "triangle") || is_named_uniform(c, "square"))
            source = "census";
        else
            source = "stabilization";
    }
    if (source == "census") {
        const double l = scalar_rate(c.lambda);
        if (c.polygon == "triangle")
            cat = triangle::census(l);
        else if (c.polygon == "square")
            cat = square::census(l);
        else
            throw InvalidInput("census catalog is available for the triangle and the square");
    } else if (source == "stabilization") {
        cat = stabilization_catalog(B, c, info);
    } else if (source == "simulation") {
        cat = simulate_census(B, c.sim_seeds, c.seed, iterate_options(c), c.workers).catalog;
    } else {
        throw InvalidInput("catalog source must be auto, census, stabilization or simulation");
    }
    BasinOptions bo;
    bo.width = bo.height = c.resolution;
    bo.iterate = iterate_options(c);
    bo.workers = c.workers;
    if (c.extent > 0.0) bo.box = std::make_pair(Point(-c.extent, -c.extent), Point(c.extent, c.extent));
    const BasinMap m = render_basins(B, cat, bo);
    write_ppm(m, c.out_prefix + ".ppm");
    json result = {{"catalog_source", source},
                   {"catalog", io::catalog(cat)},
                   {"basins", io::basin_legend(m)},
                   {"image", c.out_prefix + ".ppm"}};
    if (!info.is_null()) result["stabilization"] = info;
    if (c.svg) {
        SingularOptions so;
        so.n_max = c.order_max;
        so.segment_budget = c.segment_budget;
        const SingularComplex S = expand_singular(B, so);
        write_svg(m, S.segments, c.out_prefix + ".svg");
        result["overlay"] = c.out_prefix + ".svg";
        result["singular"] = io::singular_complex(S, false);
    }
    {
        std::ofstream os(c.out_prefix + ".json");
        if (!os) throw InvalidInput("cannot write " + c.out_prefix + ".json");
        os << io::dump({{"config", config_json(c)}, {"result", result}});
    }
    emit(c, result);
    return kExitOk;
}

int cmd_persistency(const RunConfig& c) {
    const Billiard B = make_billiard(c);
    PersistencyOptions po;
    po.n_max = c.order_max;
    po.piece_budget = c.piece_budget;
    po.eps = c.eps;
    po.workers = c.workers;
    const PersistencyCertificate cert = persistency_check(B, po);
    json result = {{"certificate", io::certificate(cert)}};
    if (cert.certified && c.trials > 0) {
        PerturbOptions pe;
        pe.delta = c.delta;
        pe.trials = c.trials;
        pe.seeds = c.perturb_seeds;
        pe.rng_seed = c.seed;
        pe.iterate = iterate_options(c);
        pe.workers = c.workers;
        result["perturbation"] = io::persistency_report(perturb_harness(B.polygon(), B.rates(), pe));
    }
    emit(c, result);
    return kExitOk;
}

int cmd_reduce(const RunConfig& c) {
    const Billiard B = make_billiard(c);
    const ReducedMap R(B);
    emit(c, io::reduced_map(R));
    return kExitOk;
}

int cmd_sweep(const RunConfig& c) {
    if (c.k_min < 3 || c.k_max < c.k_min) throw InvalidInput("need 3 <= k-min <= k-max");
    json rows = json::array();
    int code = kExitOk;
    for (int k = c.k_min; k <= c.k_max; ++k) {
        for (double l : parse_list(c.lambdas)) {
            const Billiard B(Polygon::regular(k), RateVector::uniform(k, l), c.eps);
            json row = {{"k", k}, {"lambda", l}};
            try {
                row["catalog"] = io::catalog(stabilization_catalog(B, c, row));
            } catch (const BudgetExceeded& e) {
                row["error"] = e.what();
                code = kExitBudget;
            }
            rows.push_back(row);
        }
    }
    emit(c, {{"rows", rows}});
    return code;
}

void apply_config_file(RunConfig& cfg, const std::string& path, const CLI::App& sub) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file " + path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config file: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    std::vector<std::string> known;
    for_each_field(cfg, [&](const char* name, auto& field) {
        known.push_back(name);
        if (!j.contains(name)) return;
        std::string flag = std::string("--") + name;
        for (char& ch : flag)
            if (ch == '_') ch = '-';
        try {
            if (sub.get_option_no_throw(flag) && sub.get_option_no_throw(flag)->count() > 0) return;
        } catch (const CLI::Error&) {
        }
        try {
            const json& v = j.at(name);
            using T = std::decay_t<decltype(field)>;
            if constexpr (std::is_same_v<T, std::string>) {
                field = v.is_string() ? v.get<std::string>() : v.dump();
            } else {
                field = v.get<T>();
            }
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config key '") + name + "': " + e.what());
        }
    });
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end() && it.key() != "command")
            throw ConfigError("unknown config key: " + it.key());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dissipative polygonal outer billiards"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string config_path;

    auto common = [&](CLI::App* s) {
        s->add_option("--polygon", cfg.polygon, "segment | triangle | square | regular-k | JSON vertex list")
            ->capture_default_str();
        s->add_option("--lambda", cfg.lambda, "contraction rate, scalar or per-vertex list")->capture_default_str();
        s->add_option("--eps", cfg.eps, "singular proximity tolerance")->capture_default_str();
        s->add_option("--cycle-tol", cfg.cycle_tol, "cycle closure tolerance")->capture_default_str();
        s->add_option("--max-steps", cfg.max_steps, "iteration budget per orbit")->capture_default_str();
        s->add_option("--period-cap", cfg.period_cap, "largest detectable period")->capture_default_str();
        s->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
        s->add_option("--workers", cfg.workers, "worker threads (0: all cores)")->capture_default_str();
        s->add_option("--output", cfg.output, "write the JSON report here instead of stdout");
        s->add_option("--config", config_path, "JSON file with default values for any option");
    };
    auto geometry_budgets = [&](CLI::App* s) {
        s->add_option("--order-max", cfg.order_max, "largest singular order")->capture_default_str();
        s->add_option("--piece-budget", cfg.piece_budget, "largest cell count")->capture_default_str();
        s->add_option("--segment-budget", cfg.segment_budget, "largest singular piece count")->capture_default_str();
    };

    auto* sim = app.add_subcommand("simulate", "iterate orbits");
    common(sim);
    sim->add_option("--seed-point", cfg.seed_point, "starting point 'x' or 'x,y'");
    sim->add_option("--random-seeds", cfg.random_seeds, "number of random starting points in K");
    sim->add_flag("--record-points", cfg.record_points, "include the full orbit");

    auto* census = app.add_subcommand("census", "closed-form and simulated attractor catalogs");
    common(census);
    census->add_option("--sim-seeds", cfg.sim_seeds, "simulation seeds (0 to skip)")->capture_default_str();
    census->add_option("--bifurcation-tol", cfg.bifurcation_tol, "distance to a threshold treated as a bifurcation")
        ->capture_default_str();
    census->add_option("--expected-count", cfg.expected_count, "orbit count to compare against");

    auto* bif = app.add_subcommand("bifurcations", "threshold table of a polynomial family");
    common(bif);
    bif->add_option("--family", cfg.family, "Q or T")->capture_default_str();
    bif->add_option("--max-n", cfg.max_n)->capture_default_str();
    bif->add_option("--bisection-tol", cfg.bisection_tol)->capture_default_str();

    auto* stab = app.add_subcommand("stabilize", "singular set stabilization and its attractors");
    common(stab);
    geometry_budgets(stab);
    stab->add_option("--sim-seeds", cfg.sim_seeds)->capture_default_str();

    auto* bas = app.add_subcommand("basins", "render basins of attraction");
    common(bas);
    geometry_budgets(bas);
    bas->add_option("--resolution", cfg.resolution)->capture_default_str();
    bas->add_option("--extent", cfg.extent, "half-width of the view (0: the invariant ball)")->capture_default_str();
    bas->add_option("--out", cfg.out_prefix, "output path prefix")->capture_default_str();
    bas->add_flag("--svg", cfg.svg, "also write the singular set as SVG");
    bas->add_option("--catalog", cfg.catalog_source, "auto | census | stabilization | simulation")->capture_default_str();
    bas->add_option("--sim-seeds", cfg.sim_seeds)->capture_default_str();

    auto* per = app.add_subcommand("persistency", "persistency certificate and perturbation trials");
    common(per);
    geometry_budgets(per);
    per->add_option("--delta", cfg.delta)->capture_default_str();
    per->add_option("--trials", cfg.trials)->capture_default_str();
    per->add_option("--perturb-seeds", cfg.perturb_seeds)->capture_default_str();

    auto* red = app.add_subcommand("reduce", "rotation-reduced map of a regular polygon");
    common(red);

    auto* sweep = app.add_subcommand("sweep", "stabilization over regular k-gons");
    common(sweep);
    geometry_budgets(sweep);
    sweep->add_option("--k-min", cfg.k_min)->capture_default_str();
    sweep->add_option("--k-max", cfg.k_max)->capture_default_str();
    sweep->add_option("--lambdas", cfg.lambdas, "list of rates")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    try {
        if (!config_path.empty()) apply_config_file(cfg, config_path, *sub);
        if (cfg.command == "simulate") return cmd_simulate(cfg);
        if (cfg.command == "census") return cmd_census(cfg);
        if (cfg.command == "bifurcations") return cmd_bifurcations(cfg);
        if (cfg.command == "stabilize") return cmd_stabilize(cfg);
        if (cfg.command == "basins") return cmd_basins(cfg);
        if (cfg.command == "persistency") return cmd_persistency(cfg);
        if (cfg.command == "reduce") return cmd_reduce(cfg);
        if (cfg.command == "sweep") return cmd_sweep(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NotRegular& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitConfig;
    } catch (const AtBifurcation& e) {
        std::cerr << "invalid input: " << e.what() << " (index " << e.index << ")\n";
        return kExitConfig;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
