#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace lobkit {

using ScalarFunction = std::function<double(double)>;

/// F_a(x) = x f(x) / sqrt(2 pi) - a rho(x) f(x).
double mm_objective(double a, double x, const ScalarFunction& f, const ScalarFunction& rho);

struct MmSolverOptions {
    std::size_t scan_points = 20000;
    double tolerance = 1e-10;  ///< bracket width for the refinement
    double max_upper = 1e9;
};

struct MmOptimum {
    double m = 0.0;  ///< argmax (smallest on ties)
    double M = 0.0;  ///< max F_a
    double scan_upper = 0.0;
    std::vector<double> local_maxima;  ///< refined local maximizers on the scan grid
};

/// M(a) = max_{x >= 0} F_a(x) and m(a) in argmax. The scan interval [0, b]
/// doubles from b = a + 1 until F_a falls on three consecutive doublings;
/// every local maximum of the dense scan is refined by a golden-section /
/// parabolic search. Throws ValidationError for a <= 0 or when f is not
/// positive and decreasing on the scan.
MmOptimum mm_optimal_rescaled_spread(double a, const ScalarFunction& f, const ScalarFunction& rho,
                                     MmSolverOptions options = {});

namespace price_model {
struct Martingale {};
struct BlackScholes {
    double mu = 0.0;
    double sigma = 0.2;
};
struct OrnsteinUhlenbeck {
    double reversion = 1.0;  ///< rho in dp = rho (p0 - p) dt + sigma dW
    double p0 = 0.0;
    double sigma = 1.0;
};
}  // namespace price_model

using PriceModel = std::variant<price_model::Martingale, price_model::BlackScholes, price_model::OrnsteinUhlenbeck>;

/// alpha_t = E[p_T - p_t | F_t] mu_t / sigma_t^2 + Z_t / sigma_t in closed form.
double mm_alpha(const PriceModel& model, double t, double p_t, double T);

/// The explicit pair f(x) = 1/(1+x)^2, rho(x) = 1/(1+x).
ScalarFunction inverse_square_intensity();
ScalarFunction inverse_correlation();
/// Stationary point of F_a for the explicit pair: sqrt(1 + 3 sqrt(2 pi) a).
double explicit_rescaled_spread(double a);
/// The same pair's optimum in the form sqrt(1 + 3 a).
double explicit_rescaled_spread_unscaled(double a);

struct MmProblem {
    ScalarFunction f;
    ScalarFunction rho;
    PriceModel model;
    double horizon = 1.0;
    MmSolverOptions options;
};

struct MmPathPoint {
    double t = 0.0;
    double p = 0.0;
    double sigma = 0.0;
};

struct MmSolution {
    std::vector<double> t;
    std::vector<double> alpha;
    std::vector<double> spread;          ///< s_t = sigma_t m(alpha_t)
    std::vector<double> rescaled;        ///< m(alpha_t)
    std::vector<double> inventory_vol;   ///< sigma_t f(m(alpha_t))
    std::vector<double> pnl_rate;        ///< M(alpha_t) sigma_t^2
    double expected_pnl = 0.0;           ///< trapezoid of pnl_rate
};

MmSolution mm_solve(const MmProblem& problem, const std::vector<MmPathPoint>& path);

}  // namespace lobkit
