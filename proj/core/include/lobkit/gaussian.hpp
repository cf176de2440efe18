#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "lobkit/piecewise.hpp"

namespace lobkit {

double normal_pdf(double x) noexcept;
double normal_cdf(double x) noexcept;
/// Standard normal quantile; p in (0, 1).
double normal_quantile(double p);

/// Physicists' Gauss-Hermite rule (weight exp(-x^2)), computed once per size.
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussHermiteRule& gauss_hermite(int n);

/// Functionals F for which Phi_sigma(F) = E[F(Z)], Z ~ N(0, sigma^2), has a
/// closed form or an exact evaluation.
namespace functional {
struct Abs {};                 ///< |y|
struct Square {};              ///< y^2
struct SquareMinusAbs {        ///< y^2 - s|y|
    double s = 0.0;
};
struct IdTimes {               ///< y * g(y), evaluated by Gaussian integration by parts
    std::function<double(double)> g;
    std::function<double(double)> dg;
};
struct Generic {               ///< anything else with at most quadratic growth
    std::function<double(double)> f;
};
}  // namespace functional

using GaussianFunctional = std::variant<functional::Abs, functional::Square, functional::SquareMinusAbs,
                                        functional::IdTimes, functional::Generic, PiecewiseQuadratic>;

struct PhiOptions {
    int initial_nodes = 64;
    int max_nodes = 512;
    double rel_tol = 1e-10;
};

/// Phi_sigma(F) = int F(y) phi_{sigma^2}(y) dy with closed forms dispatched
/// by functional type.
double phi(double sigma, const GaussianFunctional& F);

/// Numerical Phi_sigma(F): Gauss-Hermite with node doubling until the relative
/// change is below rel_tol, falling back to adaptive Gauss-Kronrod on each
/// half-line for non-smooth F. Throws ValidationError on a non-finite result.
double phi_quadrature(double sigma, const std::function<double(double)>& F, PhiOptions options = {});

/// Exact E[f(Z)] for piecewise-quadratic f via truncated Gaussian moments.
double gaussian_expectation(const PiecewiseQuadratic& f, double sigma);

}  // namespace lobkit
