#pragma once

// Grid integrator shared by the engine and the ensemble runner. Not part of
// the public interface.

#include "sirs/engine.hpp"
#include "sirs/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

namespace sirs::detail {

[[noreturn]] inline void throw_non_finite(double t)
{
    std::ostringstream msg;
    msg << "non-finite state at t = " << t << " (step size too large or invalid model)";
    throw Error(ErrorKind::NonFiniteState, msg.str());
}

/// Euler-Maruyama on a type-erased SwitchingSde.
class SdeStepper {
public:
    SdeStepper(const SwitchingSde& sde, bool use_log)
        : sde_(sde), use_log_(use_log), drift_(sde.dimension), diffusion_(sde.dimension)
    {
    }

    bool uses_log() const noexcept { return use_log_; }
    std::size_t log_index() const noexcept { return use_log_ ? sde_.log_coordinate->index : 0; }

    void advance(std::span<double> x, double& log_value, Regime i, double h, double dW)
    {
        double d_log = 0.0;
        if (use_log_) {
            const auto& lc = *sde_.log_coordinate;
            d_log = lc.drift(x, i) * h + lc.diffusion(x, i) * dW;
        }
        sde_.drift(x, i, drift_);
        sde_.diffusion(x, i, diffusion_);
        for (std::size_t k = 0; k < x.size(); ++k) {
            x[k] += drift_[k] * h + diffusion_[k] * dW;
        }
        for (std::size_t k : sde_.clip_at_zero) {
            x[k] = std::max(x[k], 0.0);
        }
        if (use_log_) {
            log_value += d_log;
            x[sde_.log_coordinate->index] = std::exp(log_value);
        }
    }

private:
    const SwitchingSde& sde_;
    bool use_log_;
    std::vector<double> drift_;
    std::vector<double> diffusion_;
};

/// Same arithmetic as SdeStepper on as_switching_sde(model), without the
/// std::function indirection.
class SirsStepper {
public:
    SirsStepper(const SirsModel& model, bool use_log) : model_(model), use_log_(use_log) {}

    bool uses_log() const noexcept { return use_log_; }
    std::size_t log_index() const noexcept { return 1; }

    void advance(std::span<double> x, double& log_value, Regime i, double h, double dW)
    {
        const auto& r = model_.regime(i);
        const double S = x[0];
        const double I = x[1];
        const double R = x[2];
        const double f1 = eval_incidence(r.f1, S, I);
        const double f2 = eval_incidence(r.f2, S, I);
        const double incidence = S * I * f1;
        const double noise = S * I * f2;

        const double drift_s = -incidence + r.mu * (model_.capacity() - S) + r.gamma1 * R;
        const double drift_r = r.gamma2 * I - (r.mu + r.gamma1) * R;
        x[0] = std::max(S + (drift_s * h + -noise * dW), 0.0);
        x[2] = std::max(R + drift_r * h, 0.0);
        if (use_log_) {
            const double g = f1 * S - (r.mu + r.rho + r.gamma2 + f2 * f2 * S * S / 2.0);
            log_value += g * h + S * f2 * dW;
            x[1] = std::exp(log_value);
        }
        else {
            const double drift_i = incidence - (r.mu + r.rho + r.gamma2) * I;
            x[1] = I + (drift_i * h + noise * dW);
        }
    }

private:
    const SirsModel& model_;
    bool use_log_;
};

/// sqrt(h) Z with Z drawn from the path's stream.
class GaussianIncrements {
public:
    explicit GaussianIncrements(Rng& rng) : rng_(rng) {}

    double operator()(double /*t*/, double h) { return std::sqrt(h) * normal_(rng_); }

private:
    Rng& rng_;
    std::normal_distribution<double> normal_;
};

/// Observer interface (duck-typed):
///   void on_grid(std::size_t step, double t, std::span<const double> x,
///                double log_value, Regime regime);
/// called for step = 0 .. num_steps.
template <class Stepper, class Noise, class Observer>
void integrate(Stepper& stepper, const RegimePath& regimes, std::span<double> x, double& log_value,
               const SimConfig& cfg, Noise& noise, Observer& observer)
{
    const std::size_t n_steps = cfg.num_steps();
    const double dt = cfg.dt;
    Regime regime = regimes.initial;
    std::size_t next_jump = 0;

    observer.on_grid(0, 0.0, x, log_value, regime);
    for (std::size_t n = 0; n < n_steps; ++n) {
        const double t_begin = static_cast<double>(n) * dt;
        const double t_end = static_cast<double>(n + 1) * dt;
        double t = t_begin;
        while (next_jump < regimes.jumps.size() && regimes.jumps[next_jump].time < t_end) {
            const auto& jump = regimes.jumps[next_jump];
            const double h = jump.time - t;
            if (h > 0.0) {
                stepper.advance(x, log_value, regime, h, noise(t, h));
                t = jump.time;
            }
            regime = jump.regime;
            ++next_jump;
        }
        const double h = t_end - t;
        if (h > 0.0) {
            stepper.advance(x, log_value, regime, h, noise(t, h));
        }
        for (double v : x) {
            if (!std::isfinite(v)) {
                throw_non_finite(t_end);
            }
        }
        if (stepper.uses_log() && !std::isfinite(log_value)) {
            throw_non_finite(t_end);
        }
        observer.on_grid(n + 1, t_end, x, log_value, regime);
    }
}

/// Validates the initial condition against the region and returns the
/// initial log value (0 when the log channel is off).
inline double check_initial(const AdmissibleRegion& region, std::size_t dimension, std::size_t num_regimes,
                            const InitialState& init, bool use_log, std::size_t log_index)
{
    require(init.x.size() == dimension, "initial state has the wrong dimension",
            ErrorKind::DimensionMismatch);
    require(init.regime < num_regimes, "initial regime out of range", ErrorKind::InitOutsideRegion);
    for (double v : init.x) {
        require(std::isfinite(v), "initial state is not finite", ErrorKind::InitOutsideRegion);
    }
    if (region.violation(init.x) > 0.0) {
        throw Error(ErrorKind::InitOutsideRegion, "initial state lies outside " + region.describe());
    }
    if (!use_log) {
        return 0.0;
    }
    require(init.x[log_index] > 0.0, "log integration needs a positive initial value of coordinate "
                + std::to_string(log_index),
            ErrorKind::InitOutsideRegion);
    return std::log(init.x[log_index]);
}

} // namespace sirs::detail
