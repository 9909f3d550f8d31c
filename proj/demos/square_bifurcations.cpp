// Orbit count of the square table across l, from the thresholds lambda_n
// and from a direct scan of the return-map fixed points.

#include <cstdio>

#include "dob/dob.hpp"

int main() {
    using namespace dob;
    std::printf("%-6s %-8s %-8s %s\n", "l", "theorem", "scan", "periods");
    for (int i = 1; i < 100; ++i) {
        const double l = i / 100.0;
        int m = -1;
        try {
            m = bifurcation::square_census(l);
        } catch (const AtBifurcation&) {
            std::printf("%-6.2f at a threshold\n", l);
            continue;
        }
        const auto scan = square::scan_fixed_points(l, 400);
        std::printf("%-6.2f %-8d %-8zu", l, m, scan.size());
        for (int n : scan) std::printf(" %d", 4 * n);
        std::printf("\n");
    }
}
