#pragma once

#include <vector>

namespace lobkit {

/// f(x) = c0 + c1 x + c2 x^2 on [lo, hi]; lo/hi may be infinite.
struct QuadPiece {
    double lo = 0.0;
    double hi = 0.0;
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;

    double operator()(double x) const noexcept { return c0 + x * (c1 + x * c2); }
};

/// A function on the real line given by quadratic pieces on consecutive
/// intervals. Pieces cover R exactly once (up to shared endpoints).
using PiecewiseQuadratic = std::vector<QuadPiece>;

}  // namespace lobkit
