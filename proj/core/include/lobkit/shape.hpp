#pragma once

#include <optional>

#include "lobkit/monotone_graph.hpp"
#include "lobkit/order_book.hpp"

namespace lobkit {

/// Shape function of an order book around a quoted price p:
///   gamma(u) = int_0^u ( a(0, p + x] - b[p + x, inf) ) dx.
///
/// Stored through its derivative gamma' as a monotone graph (x: price offset
/// from p, y: signed volume), so gamma is convex piecewise-quadratic with
/// gamma(0) = 0 and 0 in gamma'(0).
class ShapeFunction {
public:
    ShapeFunction(double quoted_price, MonotoneGraph derivative);

    /// From breakpoints (u_i, gamma'(u_i)) with linear interpolation between
    /// them. Throws ValidationError when the slopes decrease (non-convex) or
    /// gamma'(0) does not contain 0.
    static ShapeFunction from_breakpoints(double quoted_price, std::vector<Knot> breakpoints,
                                          Tail left = Tail::Flat, Tail right = Tail::Flat);

    /// gamma(u) = m u^2 / 2 everywhere (uniform book of density m).
    static ShapeFunction quadratic(double quoted_price, double density);

    double quoted_price() const noexcept { return quoted_price_; }
    const MonotoneGraph& derivative() const noexcept { return derivative_; }

    double operator()(double u) const { return derivative_.integral(u); }

    /// gamma'(u) with the execution convention: a market order at p + u fills
    /// the level sitting exactly at p + u.
    double executed_slope(double u) const { return derivative_.value_away_from_zero(u); }

private:
    double quoted_price_;
    MonotoneGraph derivative_;
};

/// Transaction cost function c = Legendre transform of gamma, stored through
/// c' (x: traded volume, y: price offset). Outside the available book depth c
/// is undefined; evaluating there throws DomainError.
class CostFunction {
public:
    explicit CostFunction(MonotoneGraph derivative, double reference_price = 0.0);

    /// c(l) = (half_spread) |l|: the bid-ask case.
    static CostFunction proportional(double half_spread);
    /// c(l) = l^2 / (2 m): uniform book of density m.
    static CostFunction quadratic(double density);

    const MonotoneGraph& derivative() const noexcept { return derivative_; }
    double reference_price() const noexcept { return reference_price_; }

    double operator()(double l) const { return derivative_.integral(l); }
    double domain_lower() const noexcept { return derivative_.domain_lower(); }
    double domain_upper() const noexcept { return derivative_.domain_upper(); }

    /// c'(l), choosing the smallest-magnitude price offset on a jump.
    double marginal(double l) const { return derivative_.value_toward_zero(l); }

    /// True when c has at most quadratic growth on the whole real line.
    bool unbounded_domain() const noexcept;

private:
    MonotoneGraph derivative_;
    double reference_price_;
};

/// Shape function of a book at quoted price p (default: mid-price). Requires
/// best_bid < p < best_ask; throws ValidationError otherwise.
ShapeFunction shape_from_book(const OrderBook& book, std::optional<double> quoted_price = {});

/// Exact Legendre conjugate c(l) = sup_u (u l - gamma(u)).
CostFunction legendre(const ShapeFunction& gamma);

/// Inverse conjugation, returning gamma around the cost's reference price.
ShapeFunction legendre_inverse(const CostFunction& cost);

/// Post-trade price offset from the quoted price: alpha - p = c'(-delta_L).
/// Throws DomainError when the volume exceeds book depth.
double impact_price(const CostFunction& cost, double delta_L);

}  // namespace lobkit
