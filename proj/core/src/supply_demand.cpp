#include "lobkit/supply_demand.hpp"

#include <algorithm>
#include <cmath>

#include "lobkit/error.hpp"
#include "lobkit/gaussian.hpp"
#include "lobkit/parallel.hpp"

namespace lobkit {

using detail::GridView;

SupplyDemandDriver parse_driver(const std::string& name)
{
    if (name == "inventory") {
        return SupplyDemandDriver::InventoryGiven;
    }
    if (name == "price") {
        return SupplyDemandDriver::PriceGiven;
    }
    throw ValidationError("unknown supply-demand driver '" + name + "' (expected inventory|price)");
}

std::string to_string(SupplyDemandDriver driver)
{
    return driver == SupplyDemandDriver::InventoryGiven ? "inventory" : "price";
}

namespace {

void check_lambda(double lambda_r)
{
    if (!(lambda_r > 0.0) || lambda_r > 1.0) {
        throw ValidationError("recovery coefficient lambda_r must lie in (0, 1]");
    }
}

double graph_phi(const PiecewiseQuadratic& pieces, const MonotoneGraph& g, double scale)
{
    if (!std::isinf(g.domain_lower()) || !std::isinf(g.domain_upper())) {
        throw ValidationError("book function has a bounded domain; Gaussian functional is infinite");
    }
    return gaussian_expectation(pieces, std::abs(scale));
}

/// Builds the non-driver path from the driver viewed on g.
void construct(const CostProcess& costs, double lambda, SupplyDemandDriver driver, const GridView& g,
               double start, std::vector<double>& out)
{
    out.resize(g.steps + 1);
    out[0] = start;
    const double root_n = std::sqrt(g.n);
    for (std::size_t k = 0; k < g.steps; ++k) {
        if (driver == SupplyDemandDriver::InventoryGiven) {
            const CostFunction& c = costs.at(g.time(k));
            const double dL = g.inventory(k + 1) - g.inventory(k);
            out[k + 1] = out[k] + lambda / root_n * c.marginal(-root_n * dL);
        } else {
            const double dp = g.price(k + 1) - g.price(k);
            const MonotoneGraph& gamma_prime = costs.shape_derivative(g.time(k));
            out[k + 1] = out[k] - gamma_prime.value_toward_zero(root_n * dp / lambda) / root_n;
        }
    }
}

struct PathMoments {
    double vol = 0.0;
    double drift = 0.0;
    double covariation = 0.0;
};

PathMoments moments(std::span<const double> driver, std::size_t stride, std::span<const double> built,
                    double horizon)
{
    const std::size_t steps = built.size() - 1;
    std::vector<double> sq(steps), cross(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        const double dx = built[k + 1] - built[k];
        const double dd = driver[(k + 1) * stride] - driver[k * stride];
        sq[k] = dx * dx;
        cross[k] = dx * dd;
    }
    PathMoments m;
    m.vol = std::sqrt(pairwise_sum(sq) / horizon);
    m.drift = built.back() - built.front();
    m.covariation = pairwise_sum(cross);
    return m;
}

}  // namespace

PathBundle supply_demand_simulate(const ItoCoefficients& coeffs, const CostProcess& costs, const SimConfig& cfg,
                                  SupplyDemandDriver driver)
{
    cfg.validate();
    check_lambda(coeffs.lambda_r);
    const std::size_t steps = cfg.steps();
    const double n = static_cast<double>(cfg.steps_per_unit);
    PathBundle bundle;
    bundle.steps_per_unit = cfg.steps_per_unit;
    bundle.horizon = cfg.horizon;
    bundle.p.assign(cfg.paths, {});
    bundle.L.assign(cfg.paths, {});
    bundle.spread.assign(cfg.paths, std::vector<double>(steps + 1));
    for_each_path(coeffs, cfg, [&](std::size_t i, std::span<const double> p, std::span<const double> L) {
        GridView g{p, L, 1, steps, n};
        if (driver == SupplyDemandDriver::InventoryGiven) {
            bundle.L[i].assign(L.begin(), L.end());
            construct(costs, coeffs.lambda_r, driver, g, coeffs.p0, bundle.p[i]);
        } else {
            bundle.p[i].assign(p.begin(), p.end());
            construct(costs, coeffs.lambda_r, driver, g, coeffs.L0, bundle.L[i]);
        }
        for (std::size_t k = 0; k <= steps; ++k) {
            bundle.spread[i][k] = coeffs.s(g.time(k), bundle.p[i][k]) / std::sqrt(n);
        }
    });
    return bundle;
}

SupplyDemandReport supply_demand_moments(const ItoCoefficients& coeffs, const CostProcess& costs,
                                         const SimConfig& cfg, SupplyDemandDriver driver)
{
    cfg.validate();
    check_lambda(coeffs.lambda_r);
    const double lambda = coeffs.lambda_r;
    const std::size_t steps = cfg.steps();
    const double n = static_cast<double>(cfg.steps_per_unit);
    const double horizon = static_cast<double>(steps) / n;
    const bool with_coarse = detail::has_coarse_level(cfg);
    const double coarse_horizon = static_cast<double>(steps / 4) / (n / 4.0);

    // limit rates per fine step; price-driven rates depend on the path through sigma(t, p)
    struct Rates {
        double var, drift, cov, cov_unscaled;
    };
    auto rates_at = [&](double t, double p) {
        const CostFunction& c = costs.at(t);
        Rates r{};
        if (driver == SupplyDemandDriver::InventoryGiven) {
            const double l = coeffs.l(t);
            r.var = lambda * lambda * phi_marginal_square(l, c);
            r.drift = -lambda * coeffs.b(t) * phi_second_derivative(l, c);
            r.cov_unscaled = -phi_identity_marginal(l, c);
            r.cov = lambda * r.cov_unscaled;
        } else {
            const MonotoneGraph& gp = costs.shape_derivative(t);
            const double scale = coeffs.sigma(t, p) / lambda;
            const double id_g = graph_phi(gp.identity_times_pieces(), gp, scale);
            r.var = graph_phi(gp.square_pieces(), gp, scale);
            r.drift = -(coeffs.mu(t, p) / lambda) * id_g / (scale * scale);
            r.cov = -lambda * id_g;
            r.cov_unscaled = r.cov;
        }
        return r;
    };
    std::vector<Rates> fixed;
    if (driver == SupplyDemandDriver::InventoryGiven) {
        fixed.resize(steps);
        for (std::size_t k = 0; k < steps; ++k) {
            fixed[k] = rates_at(static_cast<double>(k) / n, 0.0);
        }
    }

    const std::size_t M = cfg.paths;
    std::vector<double> vol(M), drift(M), cov(M);
    std::vector<double> vol_c(with_coarse ? M : 0), drift_c(vol_c.size()), cov_c(vol_c.size());
    std::vector<double> vol_t(M), drift_t(M), cov_t(M), cov_u(M);
    for_each_path(coeffs, cfg, [&](std::size_t i, std::span<const double> p, std::span<const double> L) {
        const bool inv = driver == SupplyDemandDriver::InventoryGiven;
        const std::span<const double> drv = inv ? L : p;
        const double start = inv ? coeffs.p0 : coeffs.L0;
        std::vector<double> built;
        GridView g{p, L, 1, steps, n};
        construct(costs, lambda, driver, g, start, built);
        const PathMoments fm = moments(drv, 1, built, horizon);
        vol[i] = fm.vol;
        drift[i] = fm.drift;
        cov[i] = fm.covariation;
        if (with_coarse) {
            GridView cg{p, L, 4, steps / 4, n / 4.0};
            construct(costs, lambda, driver, cg, start, built);
            const PathMoments cm = moments(drv, 4, built, coarse_horizon);
            vol_c[i] = cm.vol;
            drift_c[i] = cm.drift;
            cov_c[i] = cm.covariation;
        }
        std::vector<double> var_terms(steps), drift_terms(steps), cov_terms(steps), covu_terms(steps);
        for (std::size_t k = 0; k < steps; ++k) {
            const Rates r = inv ? fixed[k] : rates_at(static_cast<double>(k) / n, p[k]);
            var_terms[k] = r.var / n;
            drift_terms[k] = r.drift / n;
            cov_terms[k] = r.cov / n;
            covu_terms[k] = r.cov_unscaled / n;
        }
        vol_t[i] = std::sqrt(pairwise_sum(var_terms) / horizon);
        drift_t[i] = pairwise_sum(drift_terms);
        cov_t[i] = pairwise_sum(cov_terms);
        cov_u[i] = pairwise_sum(covu_terms);
    });

    SupplyDemandReport rep;
    rep.driver = driver;
    rep.lambda_r = lambda;
    rep.volatility = detail::assemble_report("volatility", cfg, vol, vol_c, vol_t);
    rep.drift = detail::assemble_report("drift", cfg, drift, drift_c, drift_t);
    rep.covariation = detail::assemble_report("covariation", cfg, cov, cov_c, cov_t);
    rep.covariation_unscaled = detail::assemble_report("covariation-unscaled", cfg, cov, cov_c, cov_u);
    return rep;
}

std::vector<double> flat_book_wealth(std::span<const double> L, double lambda_r, double m)
{
    if (!(m > 0.0)) {
        throw ValidationError("flat book density m must be positive");
    }
    std::vector<double> X(L.size(), 0.0);
    for (std::size_t k = 0; k + 1 < L.size(); ++k) {
        const double dL = L[k + 1] - L[k];
        const double dp = -(lambda_r / m) * dL;
        X[k + 1] = X[k] + L[k] * dp + dL * dL / (2.0 * m) + dp * dL;
    }
    return X;
}

std::vector<double> flat_book_identity(std::span<const double> L, double lambda_r, double m)
{
    if (!(m > 0.0)) {
        throw ValidationError("flat book density m must be positive");
    }
    std::vector<double> out(L.size(), 0.0);
    double qv = 0.0;
    for (std::size_t k = 1; k < L.size(); ++k) {
        const double dL = L[k] - L[k - 1];
        qv += dL * dL;
        out[k] = -(lambda_r / m) * (L[k] * L[k] - L[0] * L[0]) / 2.0 + (1.0 - lambda_r) / (2.0 * m) * qv;
    }
    return out;
}

FlatBookReport flat_book_identity_check(const SimConfig& cfg, double lambda_r, double m,
                                        const ItoCoefficients& inventory)
{
    cfg.validate();
    check_lambda(lambda_r);
    FlatBookReport rep;
    rep.lambda_r = lambda_r;
    rep.m = m;
    rep.paths = cfg.paths;
    rep.steps = cfg.steps();
    std::vector<double> id_err(cfg.paths), printed_err(cfg.paths), trip_err(cfg.paths), scale(cfg.paths);
    for_each_path(inventory, cfg, [&](std::size_t i, std::span<const double>, std::span<const double> L) {
        const std::vector<double> X = flat_book_wealth(L, lambda_r, m);
        const std::vector<double> I = flat_book_identity(L, lambda_r, m);
        double e = 0.0, pe = 0.0, sc = 1.0;
        for (std::size_t k = 0; k < L.size(); ++k) {
            e = std::max(e, std::abs(X[k] - X[0] - I[k]));
            pe = std::max(pe, std::abs(X[k] - X[0] + (L[k] * L[k] - L[0] * L[0])));
            sc = std::max(sc, L[k] * L[k] / m);
        }
        std::vector<double> trip(L.begin(), L.end());
        trip.insert(trip.end(), L.rbegin() + 1, L.rend());
        const std::vector<double> XT = flat_book_wealth(trip, lambda_r, m);
        id_err[i] = e;
        printed_err[i] = pe;
        trip_err[i] = std::abs(XT.back() - XT.front());
        scale[i] = sc;
    });
    bool ok = true;
    for (std::size_t i = 0; i < cfg.paths; ++i) {
        rep.max_identity_error = std::max(rep.max_identity_error, id_err[i]);
        rep.max_printed_form_error = std::max(rep.max_printed_form_error, printed_err[i]);
        rep.max_round_trip_error = std::max(rep.max_round_trip_error, trip_err[i]);
        ok = ok && id_err[i] <= rep.tolerance * scale[i];
        if (lambda_r == 1.0) {
            ok = ok && trip_err[i] <= rep.tolerance * scale[i];
        }
    }
    rep.passed = ok;
    return rep;
}

}  // namespace lobkit
