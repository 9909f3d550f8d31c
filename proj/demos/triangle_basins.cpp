// Basins of the three attractors of the triangle table at l = 0.95, with
// the singular set drawn on top.
//
//   demo_triangle_basins [resolution] [out-prefix]

#include <iostream>
#include <string>

#include "dob/dob.hpp"

int main(int argc, char** argv) {
    using namespace dob;
    const int res = argc > 1 ? std::stoi(argv[1]) : 600;
    const std::string prefix = argc > 2 ? argv[2] : "triangle_basins";
    const double l = 0.95;
    const Billiard B(Polygon::equilateral_triangle(), RateVector::uniform(3, l));
    const AttractorCatalog cat = triangle::census(l);

    BasinOptions o;
    o.width = o.height = res;
    o.box = std::make_pair(Point(-40, -40), Point(40, 40));
    const BasinMap m = render_basins(B, cat, o);
    write_ppm(m, prefix + ".ppm");

    SingularOptions so;
    so.n_max = 40;
    write_svg(m, expand_singular(B, so).segments, prefix + ".svg");

    for (std::size_t i = 0; i < cat.size(); ++i)
        std::cout << "period " << cat[i].period() << "  kind " << cat[i].kind << "  pixels " << m.counts[i] << "\n";
    std::cout << "wrote " << prefix << ".ppm and " << prefix << ".svg\n";
}
