#pragma once

#include <memory>

#include "lobkit/ito.hpp"

namespace lobkit {

/// tau_t = int_0^t n_u^2 du, by Gauss-Kronrod quadrature over a cached grid.
class TradingClock {
public:
    /// Throws ValidationError when n drops below epsilon on [0, horizon].
    TradingClock(TimeFunction rate, double horizon, double epsilon = 1e-8);

    double operator()(double t) const;
    double rate(double t) const { return rate_(t); }
    double horizon() const noexcept { return horizon_; }

private:
    TimeFunction rate_;
    double horizon_;
    double step_;
    std::vector<double> cumulative_;
};

/// Coefficients after the change of clock dtau = n^2 dt:
///   mu~ = n^2 mu(tau), b~ = n^2 b(tau), sigma~ = n sigma(tau), l~ = n l(tau),
///   s~ = n s(tau), rho~ = rho(tau).
ItoCoefficients time_change(const ItoCoefficients& coeffs, TimeFunction rate, double horizon,
                            double epsilon = 1e-8);

}  // namespace lobkit
