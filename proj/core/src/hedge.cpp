#include "lobkit/hedge.hpp"

#include <algorithm>
#include <cmath>

#include "lobkit/error.hpp"
#include "lobkit/gaussian.hpp"

namespace lobkit {

Payoff call_payoff(double strike)
{
    return [strike](double p) { return std::max(p - strike, 0.0); };
}

Payoff put_payoff(double strike)
{
    return [strike](double p) { return std::max(strike - p, 0.0); };
}

Payoff linear_payoff(double intercept, double slope)
{
    return [intercept, slope](double p) { return intercept + slope * p; };
}

Payoff tabulated_payoff(std::vector<double> p, std::vector<double> f)
{
    if (p.size() < 2 || p.size() != f.size()) {
        throw ValidationError("tabulated payoff needs at least two (p, f) points");
    }
    for (std::size_t i = 1; i < p.size(); ++i) {
        if (!(p[i] > p[i - 1])) {
            throw ValidationError("tabulated payoff prices must increase strictly");
        }
    }
    return [p = std::move(p), f = std::move(f)](double x) {
        std::size_t i = static_cast<std::size_t>(std::upper_bound(p.begin(), p.end(), x) - p.begin());
        i = std::clamp<std::size_t>(i, 1, p.size() - 1);
        const double w = (x - p[i - 1]) / (p[i] - p[i - 1]);
        return f[i - 1] + w * (f[i] - f[i - 1]);
    };
}

void HedgeProblem::validate() const
{
    if (!payoff || !sigma) {
        throw ValidationError("hedge problem needs a payoff and a volatility function");
    }
    if (!(lambda_s > 0.5)) {
        throw ValidationError("lambda_s must exceed 1/2 for the pricing equation to be parabolic");
    }
    if (!(maturity > 0.0)) {
        throw ValidationError("maturity must be positive");
    }
    if (grid.price_steps < 4 || grid.time_steps < 2) {
        throw ValidationError("hedge grid needs at least 4 price steps and 2 time steps");
    }
    if (grid.p_min && grid.p_max && !(*grid.p_max > *grid.p_min)) {
        throw ValidationError("hedge grid needs p_min < p_max");
    }
    if (!(grid.clustering >= 0.0) || !(grid.width_sd > 0.0)) {
        throw ValidationError("hedge grid clustering must be >= 0 and width positive");
    }
}

namespace {

std::vector<double> price_nodes(const HedgeProblem& pr)
{
    const HedgeGrid& g = pr.grid;
    const double sd = std::sqrt((2.0 * pr.lambda_s - 1.0) * pr.maturity) * pr.sigma(0.0, pr.center);
    const double half_width = g.width_sd * sd;
    double lo = g.p_min.value_or(std::max(0.0, pr.center - half_width));
    double hi = g.p_max.value_or(pr.center + half_width);
    if (!(hi > lo)) {
        throw ValidationError("degenerate hedge grid; check sigma at the center");
    }
    const double center = std::clamp(pr.center, lo, hi);
    const std::size_t n = g.price_steps;
    // xi -> center + c sinh(xi), with the center on a node
    const double c = g.clustering > 0.0 ? (hi - lo) / (2.0 * g.clustering) : 0.0;
    auto to_xi = [&](double p) { return c > 0.0 ? std::asinh((p - center) / c) : p - center; };
    auto from_xi = [&](double x) { return c > 0.0 ? center + c * std::sinh(x) : center + x; };
    const double x_lo = to_xi(lo);
    const double x_hi = to_xi(hi);
    std::vector<double> p(n + 1);
    if (center <= lo || center >= hi) {
        for (std::size_t i = 0; i <= n; ++i) {
            p[i] = from_xi(x_lo + (x_hi - x_lo) * static_cast<double>(i) / static_cast<double>(n));
        }
    } else {
        auto below = static_cast<std::size_t>(std::llround(static_cast<double>(n) * (-x_lo) / (x_hi - x_lo)));
        below = std::clamp<std::size_t>(below, 1, n - 1);
        const double dx = -x_lo / static_cast<double>(below);
        for (std::size_t i = 0; i <= n; ++i) {
            p[i] = from_xi(x_lo + dx * static_cast<double>(i));
        }
        p[below] = center;
    }
    p[0] = lo;
    return p;
}

/// Solves a tridiagonal system in place (sub, diag, sup, rhs -> solution).
void thomas(std::vector<double>& sub, std::vector<double>& diag, std::vector<double>& sup, std::vector<double>& rhs)
{
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
    }
}

struct SecondDifference {
    std::vector<double> lo, di, up;  // interior rows 1..n-1, stored at index i
};

SecondDifference second_difference(const std::vector<double>& p)
{
    const std::size_t n = p.size() - 1;
    SecondDifference d{std::vector<double>(n + 1), std::vector<double>(n + 1), std::vector<double>(n + 1)};
    for (std::size_t i = 1; i < n; ++i) {
        const double hm = p[i] - p[i - 1];
        const double hp = p[i + 1] - p[i];
        d.lo[i] = 2.0 / (hm * (hm + hp));
        d.di[i] = -2.0 / (hm * hp);
        d.up[i] = 2.0 / (hp * (hm + hp));
    }
    return d;
}

void extrapolate_ends(const std::vector<double>& p, std::vector<double>& v)
{
    const std::size_t n = p.size() - 1;
    const double r0 = (p[1] - p[0]) / (p[2] - p[1]);
    v[0] = v[1] + (v[1] - v[2]) * r0;
    const double rn = (p[n] - p[n - 1]) / (p[n - 1] - p[n - 2]);
    v[n] = v[n - 1] + (v[n - 1] - v[n - 2]) * rn;
}

/// v_new = solve (I - theta dt A(t_new)) v_new = (I + (1 - theta) dt A(t_old)) v_old, stepping t_old -> t_new < t_old.
void theta_step(const HedgeProblem& pr, const std::vector<double>& p, const SecondDifference& d, double t_old,
                double t_new, double theta, const std::vector<double>& v_old, std::vector<double>& v_new)
{
    const std::size_t n = p.size() - 1;
    const double dt = t_old - t_new;
    const double k = pr.lambda_s - 0.5;
    const std::size_t m = n - 1;
    std::vector<double> sub(m), diag(m), sup(m), rhs(m);
    for (std::size_t i = 1; i < n; ++i) {
        const double s_old = pr.sigma(t_old, p[i]);
        const double s_new = pr.sigma(t_new, p[i]);
        const double a_old = k * s_old * s_old;
        const double a_new = k * s_new * s_new;
        double lo = d.lo[i], di = d.di[i], up = d.up[i];
        // d_pp v = 0 at the ends: v_0 and v_n follow linearly from their neighbours
        if (i == 1) {
            const double r0 = (p[1] - p[0]) / (p[2] - p[1]);
            di += lo * (1.0 + r0);
            up -= lo * r0;
            lo = 0.0;
        }
        if (i == n - 1) {
            const double rn = (p[n] - p[n - 1]) / (p[n - 1] - p[n - 2]);
            di += up * (1.0 + rn);
            lo -= up * rn;
            up = 0.0;
        }
        const double explicit_part =
            (i > 1 ? lo * v_old[i - 1] : 0.0) + di * v_old[i] + (i < n - 1 ? up * v_old[i + 1] : 0.0);
        rhs[i - 1] = v_old[i] + (1.0 - theta) * dt * a_old * explicit_part;
        sub[i - 1] = -theta * dt * a_new * lo;
        diag[i - 1] = 1.0 - theta * dt * a_new * di;
        sup[i - 1] = -theta * dt * a_new * up;
    }
    thomas(sub, diag, sup, rhs);
    v_new.assign(n + 1, 0.0);
    std::copy(rhs.begin(), rhs.end(), v_new.begin() + 1);
    extrapolate_ends(p, v_new);
}

double lagrange_cubic(const std::vector<double>& x, const std::vector<double>& y, double at)
{
    const std::size_t n = x.size();
    auto it = std::upper_bound(x.begin(), x.end(), at);
    std::size_t i = static_cast<std::size_t>(it - x.begin());
    std::size_t start = i >= 2 ? i - 2 : 0;
    start = std::min(start, n - 4);
    double out = 0.0;
    for (std::size_t a = start; a < start + 4; ++a) {
        double w = 1.0;
        for (std::size_t b = start; b < start + 4; ++b) {
            if (a != b) {
                w *= (at - x[b]) / (x[a] - x[b]);
            }
        }
        out += w * y[a];
    }
    return out;
}

double linear_interp(const std::vector<double>& x, const std::vector<double>& y, double at)
{
    std::size_t i = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), at) - x.begin());
    i = std::clamp<std::size_t>(i, 1, x.size() - 1);
    const double w = (at - x[i - 1]) / (x[i] - x[i - 1]);
    return y[i - 1] + w * (y[i] - y[i - 1]);
}

}  // namespace

double HedgeSurface::value_at(std::size_t time_index, double price) const
{
    return lagrange_cubic(p, value.at(time_index), price);
}

double HedgeSurface::delta_at(std::size_t time_index, double price) const
{
    return linear_interp(p, delta.at(time_index), price);
}

double HedgeSurface::gamma_at(std::size_t time_index, double price) const
{
    return linear_interp(p, gamma.at(time_index), price);
}

HedgeSurface hedge_pde_solve(const HedgeProblem& problem)
{
    problem.validate();
    HedgeSurface s;
    s.p = price_nodes(problem);
    const std::size_t n = s.p.size() - 1;
    const std::size_t nt = problem.grid.time_steps;
    const double dt = problem.maturity / static_cast<double>(nt);
    s.t.resize(nt + 1);
    for (std::size_t k = 0; k <= nt; ++k) {
        s.t[k] = dt * static_cast<double>(k);
    }
    s.t[nt] = problem.maturity;
    s.value.assign(nt + 1, std::vector<double>(n + 1));
    for (std::size_t i = 0; i <= n; ++i) {
        s.value[nt][i] = problem.payoff(s.p[i]);
        if (!std::isfinite(s.value[nt][i])) {
            throw ValidationError("payoff is not finite on the grid");
        }
    }
    for (std::size_t k = 0; k <= nt; ++k) {
        for (std::size_t i = 0; i <= n; ++i) {
            const double sg = problem.sigma(s.t[k], s.p[i]);
            if (!std::isfinite(sg) || sg < 0.0) {
                throw ValidationError("volatility must be finite and non-negative on the grid");
            }
        }
    }
    const SecondDifference d = second_difference(s.p);
    std::vector<double> half;
    constexpr std::size_t kSmoothingSteps = 2;
    for (std::size_t k = nt; k-- > 0;) {
        const double t_old = s.t[k + 1];
        const double t_new = s.t[k];
        if (nt - 1 - k < kSmoothingSteps) {
            const double mid = 0.5 * (t_old + t_new);
            theta_step(problem, s.p, d, t_old, mid, 1.0, s.value[k + 1], half);
            theta_step(problem, s.p, d, mid, t_new, 1.0, half, s.value[k]);
        } else {
            theta_step(problem, s.p, d, t_old, t_new, 0.5, s.value[k + 1], s.value[k]);
        }
    }

    s.delta.assign(nt + 1, std::vector<double>(n + 1));
    s.gamma.assign(nt + 1, std::vector<double>(n + 1));
    s.theta.assign(nt + 1, std::vector<double>(n + 1));
    double hmin = s.p[1] - s.p[0];
    for (std::size_t i = 1; i < n; ++i) {
        hmin = std::min(hmin, s.p[i + 1] - s.p[i]);
    }
    for (std::size_t k = 0; k <= nt; ++k) {
        const auto& v = s.value[k];
        for (std::size_t i = 1; i < n; ++i) {
            const double hm = s.p[i] - s.p[i - 1];
            const double hp = s.p[i + 1] - s.p[i];
            s.delta[k][i] = -hp / (hm * (hm + hp)) * v[i - 1] + (hp - hm) / (hm * hp) * v[i] +
                            hm / (hp * (hm + hp)) * v[i + 1];
            s.gamma[k][i] = d.lo[i] * v[i - 1] + d.di[i] * v[i] + d.up[i] * v[i + 1];
        }
        s.delta[k][0] = (v[1] - v[0]) / (s.p[1] - s.p[0]);
        s.delta[k][n] = (v[n] - v[n - 1]) / (s.p[n] - s.p[n - 1]);
        for (std::size_t i = 0; i <= n; ++i) {
            if (k == 0) {
                s.theta[k][i] = (s.value[1][i] - s.value[0][i]) / dt;
            } else if (k == nt) {
                s.theta[k][i] = (s.value[nt][i] - s.value[nt - 1][i]) / dt;
            } else {
                s.theta[k][i] = (s.value[k + 1][i] - s.value[k - 1][i]) / (2.0 * dt);
            }
        }
    }
    for (std::size_t i = 0; i <= n; ++i) {
        const double sg = problem.sigma(0.0, s.p[i]);
        s.max_diffusion_number = std::max(s.max_diffusion_number, dt * (problem.lambda_s - 0.5) * sg * sg / (hmin * hmin));
    }
    return s;
}

std::string to_string(OrderType type)
{
    switch (type) {
    case OrderType::Limit:
        return "LIMIT";
    case OrderType::Market:
        return "MARKET";
    case OrderType::None:
        break;
    }
    return "NONE";
}

HedgeInventory hedge_inventory_vol(const HedgeSurface& surface, const StateFunction& sigma, double tolerance)
{
    HedgeInventory out;
    out.l.assign(surface.t.size(), std::vector<double>(surface.p.size()));
    out.order_type.assign(surface.t.size(), std::vector<OrderType>(surface.p.size(), OrderType::None));
    for (std::size_t k = 0; k < surface.t.size(); ++k) {
        for (std::size_t i = 0; i < surface.p.size(); ++i) {
            const double l = surface.gamma[k][i] * sigma(surface.t[k], surface.p[i]);
            out.l[k][i] = l;
            if (l > tolerance) {
                out.order_type[k][i] = OrderType::Market;
            } else if (l < -tolerance) {
                out.order_type[k][i] = OrderType::Limit;
            }
        }
    }
    return out;
}

double black_scholes_call(double spot, double strike, double vol, double maturity)
{
    if (vol <= 0.0 || maturity <= 0.0 || spot <= 0.0) {
        return std::max(spot - strike, 0.0);
    }
    const double sd = vol * std::sqrt(maturity);
    const double d1 = (std::log(spot / strike) + 0.5 * sd * sd) / sd;
    return spot * normal_cdf(d1) - strike * normal_cdf(d1 - sd);
}

double black_scholes_put(double spot, double strike, double vol, double maturity)
{
    return black_scholes_call(spot, strike, vol, maturity) - spot + strike;
}

}  // namespace lobkit
