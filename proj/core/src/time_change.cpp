#include "lobkit/time_change.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lobkit/error.hpp"

namespace lobkit {

namespace {

constexpr std::size_t kClockCells = 256;
constexpr std::size_t kRateSamples = 4096;

double integrate_square(const TimeFunction& rate, double a, double b)
{
    if (b <= a) {
        return 0.0;
    }
    auto f = [&](double t) {
        const double n = rate(t);
        return n * n;
    };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 8, 1e-13);
}

}  // namespace

TradingClock::TradingClock(TimeFunction rate, double horizon, double epsilon)
    : rate_(std::move(rate)), horizon_(horizon)
{
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw ValidationError("time change horizon must be positive");
    }
    for (std::size_t i = 0; i <= kRateSamples; ++i) {
        const double t = horizon * static_cast<double>(i) / kRateSamples;
        const double n = rate_(t);
        if (!std::isfinite(n) || !(n >= epsilon)) {
            throw ValidationError("time-change rate not bounded away from zero at t = " + std::to_string(t));
        }
    }
    step_ = horizon / kClockCells;
    cumulative_.resize(kClockCells + 1, 0.0);
    for (std::size_t i = 0; i < kClockCells; ++i) {
        cumulative_[i + 1] = cumulative_[i] + integrate_square(rate_, i * step_, (i + 1) * step_);
    }
}

double TradingClock::operator()(double t) const
{
    if (t < 0.0) {
        throw ValidationError("trading clock is defined for t >= 0");
    }
    const auto cell = std::min<std::size_t>(static_cast<std::size_t>(t / step_), kClockCells);
    const double base = cell * step_;
    if (cell == kClockCells) {
        return cumulative_.back() + integrate_square(rate_, horizon_, t);
    }
    return cumulative_[cell] + integrate_square(rate_, base, t);
}

ItoCoefficients time_change(const ItoCoefficients& coeffs, TimeFunction rate, double horizon, double epsilon)
{
    auto clock = std::make_shared<const TradingClock>(std::move(rate), horizon, epsilon);
    ItoCoefficients out = coeffs;
    out.mu = [clock, f = coeffs.mu](double t, double p) {
        const double n = clock->rate(t);
        return n * n * f((*clock)(t), p);
    };
    out.b = [clock, f = coeffs.b](double t) {
        const double n = clock->rate(t);
        return n * n * f((*clock)(t));
    };
    out.sigma = [clock, f = coeffs.sigma](double t, double p) { return clock->rate(t) * f((*clock)(t), p); };
    out.l = [clock, f = coeffs.l](double t) { return clock->rate(t) * f((*clock)(t)); };
    out.s = [clock, f = coeffs.s](double t, double p) { return clock->rate(t) * f((*clock)(t), p); };
    out.rho = [clock, f = coeffs.rho](double t) { return f((*clock)(t)); };
    return out;
}

}  // namespace lobkit
