#pragma once

#include <array>
#include <complex>
#include <optional>

#include "dob/geometry.hpp"

namespace dob {

/// z -> scale * z + offset. Every branch of the billiard, of its rotation
/// reduction and of the first-return maps has this form.
struct ComplexAffine {
    Point scale{1.0, 0.0};
    Point offset{0.0, 0.0};

    Point operator()(Point z) const { return scale * z + offset; }

    /// The map "apply *this, then next".
    ComplexAffine then(const ComplexAffine& next) const {
        return {next.scale * scale, next.scale * offset + next.offset};
    }

    ComplexAffine inverse() const { return {1.0 / scale, -offset / scale}; }

    /// Solves (I - A) x = c with A the real 2x2 matrix of the linear part.
    std::optional<Point> fixed_point() const {
        const auto m = matrix();
        const double a = 1.0 - m[0], b = -m[1], c = -m[2], d = 1.0 - m[3];
        const double det = a * d - b * c;
        if (std::abs(det) < 1e-300) return std::nullopt;
        const double x = (d * offset.real() - b * offset.imag()) / det;
        const double y = (-c * offset.real() + a * offset.imag()) / det;
        return Point(x, y);
    }

    /// Row-major real matrix [[a, b], [c, d]] of the linear part.
    std::array<double, 4> matrix() const {
        return {scale.real(), -scale.imag(), scale.imag(), scale.real()};
    }
};

}  // namespace dob
