#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "dob/billiard.hpp"
#include "dob/catalog.hpp"
#include "dob/parallel.hpp"

namespace dob {

struct BasinOptions {
    int width = 800;
    int height = 800;
    std::optional<std::pair<Point, Point>> box;  // lower-left, upper-right; default: bounding box of K
    IterateOptions iterate{};
    unsigned workers = 0;
};

struct BasinMap {
    static constexpr int kSingular = -1;
    static constexpr int kNonConvergent = -2;
    static constexpr int kTable = -3;
    static constexpr int kUncataloged = -4;

    int width = 0;
    int height = 0;
    Point lo, hi;
    std::vector<int> labels;  // row-major, row 0 at the top
    AttractorCatalog legend;
    std::vector<std::size_t> counts;  // per legend entry
    std::size_t singular = 0, non_convergent = 0, table = 0, uncataloged = 0;

    Point pixel_center(int i, int j) const {
        const double x = lo.real() + (i + 0.5) * (hi.real() - lo.real()) / width;
        const double y = hi.imag() - (j + 0.5) * (hi.imag() - lo.imag()) / height;
        return {x, y};
    }

    /// Catalog indices that label at least one pixel.
    std::set<int> used_labels() const {
        std::set<int> s;
        for (int l : labels)
            if (l >= 0) s.insert(l);
        return s;
    }
};

using Rgb = std::array<std::uint8_t, 3>;

inline Rgb hsv(double h, double s, double v) {
    h = h - std::floor(h);
    const double c = v * s, x = c * (1 - std::abs(std::fmod(h * 6.0, 2.0) - 1)), m = v - c;
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(h * 6.0) % 6) {
        case 0: r = c, g = x; break;
        case 1: r = x, g = c; break;
        case 2: g = c, b = x; break;
        case 3: g = x, b = c; break;
        case 4: r = x, b = c; break;
        default: r = c, b = x; break;
    }
    auto q = [&](double t) { return static_cast<std::uint8_t>(std::lround(255.0 * (t + m))); };
    return {q(r), q(g), q(b)};
}

/// Deterministic color from the period and the rotation number.
inline Rgb attractor_color(const Attractor& a) {
    const double rot = a.rotation ? static_cast<double>(a.rotation->num) / static_cast<double>(a.rotation->den) : 0.0;
    const double h = std::fmod(a.period() * 0.6180339887 + rot * 0.3819660113, 1.0);
    return hsv(h, 0.65, 0.95);
}

inline Rgb label_color(const BasinMap& m, int label) {
    switch (label) {
        case BasinMap::kSingular: return {0, 0, 0};
        case BasinMap::kNonConvergent: return {255, 255, 255};
        case BasinMap::kTable: return {90, 90, 90};
        case BasinMap::kUncataloged: return {255, 0, 255};
        default: return attractor_color(m.legend[static_cast<std::size_t>(label)]);
    }
}

/// Iterates every pixel center and labels it by the catalog entry of its
/// limit cycle.
inline BasinMap render_basins(const Billiard& B, const AttractorCatalog& catalog, const BasinOptions& opt = {}) {
    if (opt.width <= 0 || opt.height <= 0) throw InvalidInput("resolution must be positive");
    if (B.polygon().is_segment()) throw InvalidInput("basin images need a polygon with k >= 3");
    BasinMap m;
    m.width = opt.width;
    m.height = opt.height;
    if (opt.box) {
        m.lo = opt.box->first;
        m.hi = opt.box->second;
    } else {
        const InvariantBall K = B.invariant_ball();
        m.lo = K.center - Point(K.radius, K.radius);
        m.hi = K.center + Point(K.radius, K.radius);
    }
    m.legend = catalog;
    m.labels.assign(static_cast<std::size_t>(m.width) * static_cast<std::size_t>(m.height), BasinMap::kNonConvergent);
    IterateOptions it = opt.iterate;
    it.record_points = false;
    parallel_for(
        static_cast<std::size_t>(m.height),
        [&](std::size_t row) {
            for (int i = 0; i < m.width; ++i) {
                const Point z = m.pixel_center(i, static_cast<int>(row));
                int& out = m.labels[row * static_cast<std::size_t>(m.width) + static_cast<std::size_t>(i)];
                const Location loc = B.locate(z);
                if (loc.kind == Location::Kind::InsidePolygon) {
                    out = BasinMap::kTable;
                    continue;
                }
                if (!loc.in_cone()) {
                    out = BasinMap::kSingular;
                    continue;
                }
                const OrbitRecord r = B.iterate(z, it);
                if (r.terminal == OrbitRecord::Terminal::Converged) {
                    const auto idx = catalog.find(*r.cycle);
                    out = idx ? static_cast<int>(*idx) : BasinMap::kUncataloged;
                } else if (r.terminal == OrbitRecord::Terminal::HitSingular) {
                    out = BasinMap::kSingular;
                } else {
                    out = BasinMap::kNonConvergent;
                }
            }
        },
        opt.workers);
    m.counts.assign(catalog.size(), 0);
    for (int l : m.labels) {
        if (l >= 0) ++m.counts[static_cast<std::size_t>(l)];
        else if (l == BasinMap::kSingular) ++m.singular;
        else if (l == BasinMap::kNonConvergent) ++m.non_convergent;
        else if (l == BasinMap::kTable) ++m.table;
        else ++m.uncataloged;
    }
    return m;
}

/// Binary portable pixmap.
inline void write_ppm(const BasinMap& m, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InvalidInput("cannot open " + path);
    os << "P6\n" << m.width << " " << m.height << "\n255\n";
    for (int l : m.labels) {
        const Rgb c = label_color(m, l);
        os.write(reinterpret_cast<const char*>(c.data()), 3);
    }
    if (!os) throw Error("failed writing " + path);
}

/// Vector overlay of singular pieces in pixel coordinates of the map.
inline void write_svg(const BasinMap& m, const std::vector<Segment>& segments, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw InvalidInput("cannot open " + path);
    auto px = [&](Point z) {
        return Point((z.real() - m.lo.real()) / (m.hi.real() - m.lo.real()) * m.width,
                     (m.hi.imag() - z.imag()) / (m.hi.imag() - m.lo.imag()) * m.height);
    };
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << m.width << "\" height=\"" << m.height
       << "\" viewBox=\"0 0 " << m.width << " " << m.height << "\">\n<g stroke=\"black\" stroke-width=\"0.5\">\n";
    for (const Segment& s : segments) {
        const Point a = px(s.a), b = px(s.b);
        os << "<line x1=\"" << a.real() << "\" y1=\"" << a.imag() << "\" x2=\"" << b.real() << "\" y2=\"" << b.imag()
           << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
}

}  // namespace dob
