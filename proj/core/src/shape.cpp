#include "lobkit/shape.hpp"

#include <cmath>
#include <string>

#include "lobkit/error.hpp"

namespace lobkit {

ShapeFunction::ShapeFunction(double quoted_price, MonotoneGraph derivative)
    : quoted_price_(quoted_price), derivative_(std::move(derivative))
{
    if (!derivative_.passes_through_origin()) {
        throw ValidationError("shape function requires gamma'(0) = 0");
    }
}

ShapeFunction ShapeFunction::from_breakpoints(double quoted_price, std::vector<Knot> breakpoints,
                                              Tail left, Tail right)
{
    return ShapeFunction(quoted_price, MonotoneGraph(std::move(breakpoints), left, right));
}

ShapeFunction ShapeFunction::quadratic(double quoted_price, double density)
{
    if (!(density > 0.0)) {
        throw ValidationError("book density must be positive");
    }
    return from_breakpoints(quoted_price, {{0.0, 0.0}, {1.0, density}}, Tail::Linear, Tail::Linear);
}

CostFunction::CostFunction(MonotoneGraph derivative, double reference_price)
    : derivative_(std::move(derivative)), reference_price_(reference_price)
{
    if (!derivative_.passes_through_origin()) {
        throw ValidationError("cost function requires 0 in c'(0)");
    }
}

CostFunction CostFunction::proportional(double half_spread)
{
    if (!(half_spread >= 0.0)) {
        throw ValidationError("half spread must be non-negative");
    }
    return CostFunction(MonotoneGraph({{0.0, -half_spread}, {0.0, half_spread}}, Tail::Flat, Tail::Flat));
}

CostFunction CostFunction::quadratic(double density)
{
    if (!(density > 0.0)) {
        throw ValidationError("book density must be positive");
    }
    return CostFunction(MonotoneGraph({{0.0, 0.0}, {density, 1.0}}, Tail::Linear, Tail::Linear));
}

bool CostFunction::unbounded_domain() const noexcept
{
    return std::isinf(domain_lower()) && std::isinf(domain_upper());
}

ShapeFunction shape_from_book(const OrderBook& book, std::optional<double> quoted_price)
{
    const BestQuotes q = best_quotes(book);
    double p = 0.0;
    if (quoted_price) {
        p = *quoted_price;
    } else if (q.bid && q.ask) {
        p = 0.5 * (*q.bid + *q.ask);
    } else {
        throw ValidationError("mid-price undefined for a book with an empty side; pass a quoted price");
    }
    if ((q.bid && !(p > *q.bid)) || (q.ask && !(p < *q.ask))) {
        throw ValidationError("quoted price " + std::to_string(p) + " is not strictly inside the spread");
    }

    // gamma' is -b[p+u, inf) below p and a(0, p+u] above; every level is a jump.
    std::vector<Knot> knots;
    const auto bids = book.bids();
    double remaining = book.bid_volume();
    for (const Level& l : bids) {
        const double u = book.price(l.price_ticks) - p;
        knots.push_back({u, -remaining});
        remaining -= l.volume;
        // The last bid closes the side exactly at zero.
        knots.push_back({u, &l == &bids.back() ? 0.0 : -remaining});
    }
    if (knots.empty()) {
        knots.push_back({0.0, 0.0});
    }
    double cumulative = 0.0;
    for (const Level& l : book.asks()) {
        const double u = book.price(l.price_ticks) - p;
        knots.push_back({u, cumulative});
        cumulative += l.volume;
        knots.push_back({u, cumulative});
    }
    return ShapeFunction(p, MonotoneGraph(std::move(knots), Tail::Flat, Tail::Flat));
}

CostFunction legendre(const ShapeFunction& gamma)
{
    return CostFunction(gamma.derivative().inverse(), gamma.quoted_price());
}

ShapeFunction legendre_inverse(const CostFunction& cost)
{
    return ShapeFunction(cost.reference_price(), cost.derivative().inverse());
}

double impact_price(const CostFunction& cost, double delta_L)
{
    return cost.marginal(-delta_L);
}

}  // namespace lobkit
