#pragma once

#include <utility>
#include <vector>

#include "lobkit/piecewise.hpp"

namespace lobkit {

struct Knot {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Knot&, const Knot&) = default;
};

/// How the graph continues beyond its outermost knot.
enum class Tail {
    Flat,      ///< y stays constant as |x| grows
    Vertical,  ///< x stays constant, |y| grows without bound (a domain bound)
    Linear,    ///< continues along the slope of the outermost segment
};

/// Graph of a maximal monotone (non-decreasing, possibly set-valued) map of
/// the real line: a polyline through knots that are non-decreasing in both
/// coordinates, where repeated x is a jump and repeated y is a flat piece.
///
/// This is the derivative class of convex piecewise-quadratic functions, and
/// it is closed under inversion: the inverse graph swaps coordinates, so
/// Legendre conjugation of the antiderivative is exact.
class MonotoneGraph {
public:
    MonotoneGraph(std::vector<Knot> knots, Tail left, Tail right);

    const std::vector<Knot>& knots() const noexcept { return knots_; }
    Tail left_tail() const noexcept { return left_; }
    Tail right_tail() const noexcept { return right_; }

    /// Reflection across the diagonal (generalized inverse).
    MonotoneGraph inverse() const;

    double domain_lower() const noexcept;
    double domain_upper() const noexcept;
    bool in_domain(double x) const noexcept;

    /// The closed interval of values the graph takes at x. Throws DomainError
    /// outside the domain.
    std::pair<double, double> values(double x) const;

    /// Selection of the value set closest to zero.
    double value_toward_zero(double x) const;

    /// Selection of the value set farthest from zero (may be infinite).
    double value_away_from_zero(double x) const;

    /// Integral of the graph from 0 to x (a convex function vanishing at 0
    /// when the graph passes through the origin).
    double integral(double x) const;

    /// True when (0, 0) lies on the graph.
    bool passes_through_origin() const noexcept;

    /// Linear pieces y = y0 + slope * (x - x0) on [lo, hi] covering the domain.
    struct LinearPiece {
        double lo, hi, x0, y0, slope;
    };
    std::vector<LinearPiece> linear_pieces() const;

    /// The antiderivative (integral from 0) as quadratic pieces.
    PiecewiseQuadratic integral_pieces() const;
    /// y(x)^2 as quadratic pieces.
    PiecewiseQuadratic square_pieces() const;
    /// x * y(x) as quadratic pieces.
    PiecewiseQuadratic identity_times_pieces() const;

    friend bool operator==(const MonotoneGraph&, const MonotoneGraph&) = default;

private:
    double tail_slope(bool right) const noexcept;
    double cumulative_at_knot(std::size_t i) const noexcept { return cumulative_[i] - origin_offset_; }

    std::vector<Knot> knots_;
    Tail left_;
    Tail right_;
    std::vector<double> cumulative_;  // integral from knot 0 to knot i
    double origin_offset_ = 0.0;      // integral from knot 0 to x = 0
};

}  // namespace lobkit
