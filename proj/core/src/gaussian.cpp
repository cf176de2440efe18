#include "lobkit/gaussian.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "lobkit/error.hpp"

namespace lobkit {

namespace {

constexpr double kStandardizedRange = 40.0;  // normal_pdf(40) underflows

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_sigma(double sigma)
{
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw ValidationError("Gaussian functional needs a finite sigma >= 0");
    }
}

double gauss_hermite_sum(double sigma, const std::function<double(double)>& F, int n)
{
    const GaussHermiteRule& rule = gauss_hermite(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        acc += rule.weights[i] * F(std::numbers::sqrt2 * sigma * rule.nodes[i]);
    }
    return acc / std::sqrt(std::numbers::pi);
}

// Standard normal moments of order 0, 1, 2 on [a, b].
struct TruncatedMoments {
    double m0, m1, m2;
};

TruncatedMoments truncated_moments(double a, double b)
{
    const double pa = std::isinf(a) ? 0.0 : normal_pdf(a);
    const double pb = std::isinf(b) ? 0.0 : normal_pdf(b);
    const double apa = std::isinf(a) ? 0.0 : a * pa;
    const double bpb = std::isinf(b) ? 0.0 : b * pb;
    double m0 = 0.0;
    if (a >= 0.0) {
        m0 = 0.5 * (std::erfc(a / std::numbers::sqrt2) - std::erfc(b / std::numbers::sqrt2));
    } else if (b <= 0.0) {
        m0 = 0.5 * (std::erfc(-b / std::numbers::sqrt2) - std::erfc(-a / std::numbers::sqrt2));
    } else {
        m0 = normal_cdf(b) - normal_cdf(a);
    }
    return {m0, pa - pb, m0 + apa - bpb};
}

}  // namespace

double normal_pdf(double x) noexcept
{
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double x) noexcept
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double p)
{
    if (!(p > 0.0 && p < 1.0)) {
        throw ValidationError("normal quantile needs p in (0, 1)");
    }
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

const GaussHermiteRule& gauss_hermite(int n)
{
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussHermiteRule>> cache;
    if (n < 1) {
        throw ValidationError("Gauss-Hermite rule needs at least one node");
    }
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) {
        // Golub-Welsch: eigen-decomposition of the Jacobi matrix of H_n.
        Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd sub(std::max(n - 1, 0));
        for (int k = 1; k < n; ++k) {
            sub(k - 1) = std::sqrt(0.5 * k);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
        solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        auto rule = std::make_unique<GaussHermiteRule>();
        rule->nodes.resize(static_cast<std::size_t>(n));
        rule->weights.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const double v0 = solver.eigenvectors()(0, i);
            rule->nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
            rule->weights[static_cast<std::size_t>(i)] = std::sqrt(std::numbers::pi) * v0 * v0;
        }
        slot = std::move(rule);
    }
    return *slot;
}

double phi_quadrature(double sigma, const std::function<double(double)>& F, PhiOptions options)
{
    check_sigma(sigma);
    if (sigma == 0.0) {
        return F(0.0);
    }
    double prev = gauss_hermite_sum(sigma, F, options.initial_nodes);
    for (int n = 2 * options.initial_nodes; n <= options.max_nodes; n *= 2) {
        const double next = gauss_hermite_sum(sigma, F, n);
        if (!std::isfinite(next)) {
            break;
        }
        if (std::abs(next - prev) <= options.rel_tol * std::max(std::abs(next), 1e-300)) {
            return next;
        }
        prev = next;
    }
    // Kinks defeat Gauss-Hermite; integrate each half-line adaptively in z = y / sigma.
    using boost::math::quadrature::gauss_kronrod;
    auto integrand = [&](double z) {
        const double v = F(sigma * z) * normal_pdf(z);
        return std::isfinite(v) ? v : 0.0;
    };
    const double tol = std::min(options.rel_tol, 1e-12);
    const double left = gauss_kronrod<double, 61>::integrate(integrand, -kStandardizedRange, 0.0, 15, tol);
    const double right = gauss_kronrod<double, 61>::integrate(integrand, 0.0, kStandardizedRange, 15, tol);
    const double result = left + right;
    if (!std::isfinite(result)) {
        throw ValidationError("Gaussian quadrature did not produce a finite value");
    }
    return result;
}

double gaussian_expectation(const PiecewiseQuadratic& f, double sigma)
{
    check_sigma(sigma);
    if (sigma == 0.0) {
        for (const QuadPiece& p : f) {
            if (p.lo <= 0.0 && p.hi >= 0.0) {
                return p(0.0);
            }
        }
        throw DomainError("piecewise function undefined at 0");
    }
    double acc = 0.0;
    for (const QuadPiece& p : f) {
        const auto [m0, m1, m2] = truncated_moments(p.lo / sigma, p.hi / sigma);
        acc += p.c0 * m0 + p.c1 * sigma * m1 + p.c2 * sigma * sigma * m2;
    }
    return acc;
}

double phi(double sigma, const GaussianFunctional& F)
{
    check_sigma(sigma);
    const double abs_moment = sigma * std::sqrt(2.0 / std::numbers::pi);
    return std::visit(
        Overloaded{
            [&](const functional::Abs&) { return abs_moment; },
            [&](const functional::Square&) { return sigma * sigma; },
            [&](const functional::SquareMinusAbs& f) { return sigma * sigma - f.s * abs_moment; },
            [&](const functional::IdTimes& f) {
                // Stein: E[Z g(Z)] = sigma^2 E[g'(Z)].
                return sigma * sigma * phi_quadrature(sigma, f.dg);
            },
            [&](const functional::Generic& f) { return phi_quadrature(sigma, f.f); },
            [&](const PiecewiseQuadratic& f) { return gaussian_expectation(f, sigma); },
        },
        F);
}

}  // namespace lobkit
