#include "lobkit/monotone_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lobkit/error.hpp"

namespace lobkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Tail flip(Tail t)
{
    switch (t) {
    case Tail::Flat:
        return Tail::Vertical;
    case Tail::Vertical:
        return Tail::Flat;
    case Tail::Linear:
        return Tail::Linear;
    }
    return t;
}

// Resolve a Linear tail against the outermost segment it extends.
Tail resolve_linear(Tail t, const Knot& inner, const Knot& outer)
{
    if (t != Tail::Linear) {
        return t;
    }
    if (inner.x == outer.x) {
        return Tail::Vertical;
    }
    if (inner.y == outer.y) {
        return Tail::Flat;
    }
    return Tail::Linear;
}

}  // namespace

MonotoneGraph::MonotoneGraph(std::vector<Knot> knots, Tail left, Tail right)
    : knots_(std::move(knots)), left_(left), right_(right)
{
    if (knots_.empty()) {
        throw ValidationError("monotone graph needs at least one knot");
    }
    for (const Knot& k : knots_) {
        if (!std::isfinite(k.x) || !std::isfinite(k.y)) {
            throw ValidationError("monotone graph knot is not finite");
        }
    }
    knots_.erase(std::unique(knots_.begin(), knots_.end()), knots_.end());
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        if (knots_[i].x < knots_[i - 1].x || knots_[i].y < knots_[i - 1].y) {
            throw ValidationError("graph is not monotone (convexity violated) at knot "
                                  + std::to_string(i));
        }
    }
    if (knots_.size() == 1) {
        if (left_ == Tail::Linear || right_ == Tail::Linear) {
            throw ValidationError("a linear tail needs at least two knots");
        }
    } else {
        left_ = resolve_linear(left_, knots_[1], knots_[0]);
        right_ = resolve_linear(right_, knots_[knots_.size() - 2], knots_.back());
    }

    cumulative_.assign(knots_.size(), 0.0);
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        const double dx = knots_[i].x - knots_[i - 1].x;
        cumulative_[i] = cumulative_[i - 1] + 0.5 * dx * (knots_[i].y + knots_[i - 1].y);
    }
    origin_offset_ = 0.0;
    if (in_domain(0.0)) {
        origin_offset_ = integral(0.0);
    } else {
        origin_offset_ = std::numeric_limits<double>::quiet_NaN();
    }
}

MonotoneGraph MonotoneGraph::inverse() const
{
    std::vector<Knot> swapped;
    swapped.reserve(knots_.size());
    for (const Knot& k : knots_) {
        swapped.push_back({k.y, k.x});
    }
    return MonotoneGraph(std::move(swapped), flip(left_), flip(right_));
}

double MonotoneGraph::domain_lower() const noexcept
{
    return left_ == Tail::Vertical ? knots_.front().x : -kInf;
}

double MonotoneGraph::domain_upper() const noexcept
{
    return right_ == Tail::Vertical ? knots_.back().x : kInf;
}

bool MonotoneGraph::in_domain(double x) const noexcept
{
    return x >= domain_lower() && x <= domain_upper();
}

double MonotoneGraph::tail_slope(bool right) const noexcept
{
    const Tail t = right ? right_ : left_;
    if (t != Tail::Linear) {
        return 0.0;
    }
    const Knot& a = right ? knots_[knots_.size() - 2] : knots_[0];
    const Knot& b = right ? knots_.back() : knots_[1];
    return (b.y - a.y) / (b.x - a.x);
}

std::pair<double, double> MonotoneGraph::values(double x) const
{
    if (!in_domain(x)) {
        throw DomainError("argument " + std::to_string(x) + " outside domain ["
                          + std::to_string(domain_lower()) + ", " + std::to_string(domain_upper())
                          + "]");
    }
    const Knot& first = knots_.front();
    const Knot& last = knots_.back();
    if (x < first.x) {
        const double y = first.y + tail_slope(false) * (x - first.x);
        return {y, y};
    }
    if (x > last.x) {
        const double y = last.y + tail_slope(true) * (x - last.x);
        return {y, y};
    }
    auto lo = std::lower_bound(knots_.begin(), knots_.end(), x,
                               [](const Knot& k, double v) { return k.x < v; });
    if (lo->x == x) {
        auto hi = std::upper_bound(lo, knots_.end(), x, [](double v, const Knot& k) { return v < k.x; });
        double ylo = lo->y;
        double yhi = std::prev(hi)->y;
        if (lo == knots_.begin() && left_ == Tail::Vertical) {
            ylo = -kInf;
        }
        if (hi == knots_.end() && right_ == Tail::Vertical) {
            yhi = kInf;
        }
        return {ylo, yhi};
    }
    const Knot& b = *lo;
    const Knot& a = *std::prev(lo);
    const double y = a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
    return {y, y};
}

double MonotoneGraph::value_toward_zero(double x) const
{
    const auto [lo, hi] = values(x);
    if (lo <= 0.0 && hi >= 0.0) {
        return 0.0;
    }
    return lo > 0.0 ? lo : hi;
}

double MonotoneGraph::value_away_from_zero(double x) const
{
    const auto [lo, hi] = values(x);
    return std::abs(lo) >= std::abs(hi) ? lo : hi;
}

double MonotoneGraph::integral(double x) const
{
    if (!in_domain(x)) {
        throw DomainError("argument " + std::to_string(x) + " outside domain ["
                          + std::to_string(domain_lower()) + ", " + std::to_string(domain_upper())
                          + "]");
    }
    const Knot& first = knots_.front();
    const Knot& last = knots_.back();
    double raw = 0.0;
    if (x < first.x) {
        const double d = x - first.x;
        raw = first.y * d + 0.5 * tail_slope(false) * d * d;
    } else if (x >= last.x) {
        const double d = x - last.x;
        raw = cumulative_.back() + last.y * d + 0.5 * tail_slope(true) * d * d;
    } else {
        auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                                   [](double v, const Knot& k) { return v < k.x; });
        const std::size_t i = static_cast<std::size_t>(std::prev(it) - knots_.begin());
        const Knot& a = knots_[i];
        const Knot& b = knots_[i + 1];
        const double d = x - a.x;
        const double y = a.y + (b.y - a.y) * d / (b.x - a.x);
        raw = cumulative_[i] + 0.5 * d * (a.y + y);
    }
    return raw - (std::isnan(origin_offset_) ? 0.0 : origin_offset_);
}

bool MonotoneGraph::passes_through_origin() const noexcept
{
    if (!in_domain(0.0)) {
        return false;
    }
    const auto [lo, hi] = values(0.0);
    return lo <= 0.0 && hi >= 0.0;
}

std::vector<MonotoneGraph::LinearPiece> MonotoneGraph::linear_pieces() const
{
    std::vector<LinearPiece> out;
    const Knot& first = knots_.front();
    const Knot& last = knots_.back();
    if (left_ != Tail::Vertical) {
        out.push_back({-kInf, first.x, first.x, first.y, tail_slope(false)});
    }
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
        const Knot& a = knots_[i];
        const Knot& b = knots_[i + 1];
        if (a.x == b.x) {
            continue;
        }
        out.push_back({a.x, b.x, a.x, a.y, (b.y - a.y) / (b.x - a.x)});
    }
    if (right_ != Tail::Vertical) {
        out.push_back({last.x, kInf, last.x, last.y, tail_slope(true)});
    }
    return out;
}

PiecewiseQuadratic MonotoneGraph::integral_pieces() const
{
    PiecewiseQuadratic out;
    for (const LinearPiece& p : linear_pieces()) {
        // G(x) = G(x0) + y0 (x - x0) + slope/2 (x - x0)^2
        const double g0 = integral(p.x0);
        const double h = 0.5 * p.slope;
        QuadPiece q;
        q.lo = p.lo;
        q.hi = p.hi;
        q.c2 = h;
        q.c1 = p.y0 - 2.0 * h * p.x0;
        q.c0 = g0 - p.y0 * p.x0 + h * p.x0 * p.x0;
        out.push_back(q);
    }
    return out;
}

PiecewiseQuadratic MonotoneGraph::square_pieces() const
{
    PiecewiseQuadratic out;
    for (const LinearPiece& p : linear_pieces()) {
        // y = a + s x with a = y0 - s x0
        const double a = p.y0 - p.slope * p.x0;
        out.push_back({p.lo, p.hi, a * a, 2.0 * a * p.slope, p.slope * p.slope});
    }
    return out;
}

PiecewiseQuadratic MonotoneGraph::identity_times_pieces() const
{
    PiecewiseQuadratic out;
    for (const LinearPiece& p : linear_pieces()) {
        const double a = p.y0 - p.slope * p.x0;
        out.push_back({p.lo, p.hi, 0.0, a, p.slope});
    }
    return out;
}

}  // namespace lobkit
