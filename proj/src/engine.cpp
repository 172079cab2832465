#include "sirs/engine.hpp"

#include "sirs/detail/integrator.hpp"
#include "sirs/error.hpp"

#include <cmath>
#include <sstream>

namespace sirs {

void SimConfig::validate() const
{
    require(std::isfinite(dt) && dt > 0.0, "dt must be > 0");
    require(std::isfinite(horizon) && horizon >= dt, "horizon must be >= dt");
    require(record_stride >= 1, "record_stride must be >= 1");
}

std::size_t SimConfig::num_steps() const
{
    const double ratio = horizon / dt;
    const double nearest = std::round(ratio);
    // Treat horizon/dt within rounding of an integer as that integer.
    if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) {
        return static_cast<std::size_t>(nearest);
    }
    return static_cast<std::size_t>(std::floor(ratio));
}

namespace {

class PathRecorder {
public:
    PathRecorder(HybridPath& path, const SimConfig& cfg, bool use_log, const AdmissibleRegion* region)
        : path_(path), stride_(cfg.record_stride), use_log_(use_log), region_(region)
    {
    }

    void on_grid(std::size_t step, double t, std::span<const double> x, double log_value, Regime regime)
    {
        path_.max_violation = std::max(path_.max_violation, region_->violation(x));
        if (step % stride_ == 0) {
            path_.times.push_back(t);
            path_.states.insert(path_.states.end(), x.begin(), x.end());
            path_.record_regimes.push_back(regime);
            if (use_log_) {
                path_.log_values.push_back(log_value);
            }
        }
        path_.terminal_time = t;
    }

private:
    HybridPath& path_;
    std::size_t stride_;
    bool use_log_;
    const AdmissibleRegion* region_;
};

template <class Stepper, class Noise>
HybridPath run(Stepper& stepper, const AdmissibleRegion& region, std::size_t dimension, RegimePath regimes,
               std::vector<double> x, double log_value, const SimConfig& cfg, Noise& noise)
{
    HybridPath path;
    path.dimension = dimension;
    path.regimes = std::move(regimes);
    const std::size_t expected = cfg.num_steps() / cfg.record_stride + 1;
    path.times.reserve(expected);
    path.states.reserve(expected * dimension);
    path.record_regimes.reserve(expected);

    PathRecorder recorder(path, cfg, stepper.uses_log(), &region);
    detail::integrate(stepper, path.regimes, std::span<double>(x), log_value, cfg, noise, recorder);

    path.terminal_state = std::move(x);
    if (stepper.uses_log()) {
        path.terminal_log = log_value;
    }
    return path;
}

void check_sde(const SwitchingSde& sde, const SimConfig& cfg, std::size_t chain_size)
{
    cfg.validate();
    require(sde.dimension > 0 && sde.drift && sde.diffusion, "SDE '" + sde.name + "' is incomplete");
    require(chain_size == sde.num_regimes, "generator size differs from the SDE's regime count",
            ErrorKind::DimensionMismatch);
    if (cfg.log_infected && !sde.log_coordinate) {
        throw Error(ErrorKind::MissingLogChannel, "SDE '" + sde.name + "' has no log coordinate");
    }
}

} // namespace

std::vector<double> em_step(const SwitchingSde& sde, std::span<const double> x, Regime i, double dt, double dW)
{
    require(dt > 0.0, "dt must be > 0");
    require(x.size() == sde.dimension, "state has the wrong dimension", ErrorKind::DimensionMismatch);
    std::vector<double> next(x.begin(), x.end());
    double unused = 0.0;
    detail::SdeStepper stepper(sde, false);
    stepper.advance(next, unused, i, dt, dW);
    for (double v : next) {
        if (!std::isfinite(v)) {
            detail::throw_non_finite(dt);
        }
    }
    return next;
}

EpidemicState log_infected_step(const SirsModel& model, const EpidemicState& state, double dt, double dW)
{
    require(dt > 0.0, "dt must be > 0");
    require(state.I > 0.0, "log_infected_step requires I > 0", ErrorKind::InitOutsideRegion);
    std::array<double, 3> x{state.S, state.I, state.R};
    double log_value = std::log(state.I);
    detail::SirsStepper stepper(model, true);
    stepper.advance(x, log_value, state.regime, dt, dW);
    for (double v : x) {
        if (!std::isfinite(v)) {
            detail::throw_non_finite(state.t + dt);
        }
    }
    return EpidemicState{x[0], x[1], x[2], state.regime, state.t + dt};
}

HybridPath simulate_path(const SwitchingSde& sde, const GeneratorMatrix& chain, const InitialState& init,
                         const SimConfig& cfg)
{
    Rng rng = path_stream(cfg.seed, 0);
    return simulate_path(sde, chain, init, cfg, rng);
}

HybridPath simulate_path(const SwitchingSde& sde, const GeneratorMatrix& chain, const InitialState& init,
                         const SimConfig& cfg, Rng& rng)
{
    check_sde(sde, cfg, chain.size());
    detail::SdeStepper stepper(sde, cfg.log_infected);
    const double log_value = detail::check_initial(sde.region, sde.dimension, sde.num_regimes, init,
                                                   cfg.log_infected, stepper.log_index());
    RegimePath regimes = sample_regime_path(chain, init.regime, cfg.horizon, rng);
    detail::GaussianIncrements noise(rng);
    return run(stepper, sde.region, sde.dimension, std::move(regimes), init.x, log_value, cfg, noise);
}

HybridPath simulate_path(const SirsModel& model, const InitialState& init, const SimConfig& cfg)
{
    Rng rng = path_stream(cfg.seed, 0);
    return simulate_path(model, init, cfg, rng);
}

HybridPath simulate_path(const SirsModel& model, const InitialState& init, const SimConfig& cfg, Rng& rng)
{
    cfg.validate();
    AdmissibleRegion region{true, model.capacity()};
    detail::SirsStepper stepper(model, cfg.log_infected);
    const double log_value =
        detail::check_initial(region, 3, model.num_regimes(), init, cfg.log_infected, stepper.log_index());
    RegimePath regimes = sample_regime_path(model.chain(), init.regime, cfg.horizon, rng);
    detail::GaussianIncrements noise(rng);
    return run(stepper, region, 3, std::move(regimes), init.x, log_value, cfg, noise);
}

HybridPath simulate_path(const SwitchingSde& sde, const RegimePath& regimes, const InitialState& init,
                         const SimConfig& cfg, const BrownianIncrements& increments)
{
    check_sde(sde, cfg, sde.num_regimes);
    require(regimes.initial == init.regime, "regime path does not start in the initial regime");
    detail::SdeStepper stepper(sde, cfg.log_infected);
    const double log_value = detail::check_initial(sde.region, sde.dimension, sde.num_regimes, init,
                                                   cfg.log_infected, stepper.log_index());
    auto noise = [&increments](double t, double h) { return increments(t, h); };
    return run(stepper, sde.region, sde.dimension, regimes, init.x, log_value, cfg, noise);
}

} // namespace sirs
