// Attractors of the regular pentagon at l = 0.95 from the stabilized
// singular set, with the area of each basin inside K.

#include <iomanip>
#include <iostream>

#include "dob/dob.hpp"

int main() {
    using namespace dob;
    const Billiard B(Polygon::regular(5), RateVector::uniform(5, 0.95));
    const CellDecomposition D = decompose(B);
    if (!D.stabilized) {
        std::cerr << "did not stabilize by order " << D.order << "\n";
        return 3;
    }
    const StabilizationResult R = stabilization_consequence(B, D);
    std::cout << "stabilized at order " << D.order << " with " << D.cells.size() << " components\n";
    for (std::size_t i = 0; i < R.catalog.size(); ++i) {
        const Attractor& a = R.catalog[i];
        std::cout << "period " << std::setw(3) << a.period() << "  rotation "
                  << (a.rotation ? std::to_string(a.rotation->num) + "/" + std::to_string(a.rotation->den) : "?")
                  << "  basin area " << std::setprecision(6) << R.basin_area[i] << "\n";
    }
}
