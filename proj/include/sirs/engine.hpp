#pragma once

#include "sirs/ctmc.hpp"
#include "sirs/model.hpp"
#include "sirs/rng.hpp"
#include "sirs/switching_sde.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace sirs {

struct SimConfig {
    double dt = 1e-3;
    double horizon = 1.0;
    std::size_t record_stride = 1;
    std::uint64_t seed = 0;
    /// Integrate the SDE's log coordinate (I for SIRS) through its logarithm.
    bool log_infected = true;

    /// Throws InvalidArgument unless dt > 0, horizon >= dt, stride >= 1.
    void validate() const;
    /// Number of dt steps: the largest n with n dt <= horizon (up to rounding).
    std::size_t num_steps() const;
};

struct InitialState {
    std::vector<double> x;
    Regime regime = 0;
};

/// A simulated trajectory. States are recorded at t = k * dt * record_stride
/// for k = 0, 1, ... while t <= horizon.
struct HybridPath {
    RegimePath regimes;
    std::size_t dimension = 0;
    std::vector<double> times;
    /// Row-major, one row of `dimension` values per record.
    std::vector<double> states;
    std::vector<Regime> record_regimes;
    /// ln of the log coordinate per record; empty unless log_infected.
    std::vector<double> log_values;

    double terminal_time = 0.0;
    std::vector<double> terminal_state;
    std::optional<double> terminal_log;
    /// Largest AdmissibleRegion::violation over every grid step.
    double max_violation = 0.0;

    std::size_t num_records() const noexcept { return times.size(); }
    std::span<const double> state(std::size_t record) const
    {
        return {states.data() + record * dimension, dimension};
    }
};

/// Brownian increment over [t, t + h].
using BrownianIncrements = std::function<double(double t, double h)>;

/// x + drift(x, i) dt + diffusion(x, i) dW, then coordinates in
/// sde.clip_at_zero that went negative are set to 0. Throws NonFiniteState.
std::vector<double> em_step(const SwitchingSde& sde, std::span<const double> x, Regime i, double dt,
                            double dW);

/// One step with S and R advanced by Euler-Maruyama and I through
/// ln I += g(S, I, i) dt + S F2(S, I, i) dW, so I stays positive.
/// Requires state.I > 0. Throws NonFiniteState.
EpidemicState log_infected_step(const SirsModel& model, const EpidemicState& state, double dt,
                                double dW);

/// Samples the regime path on [0, horizon] first, then integrates on the
/// dt grid. Steps that contain regime jumps are split at the jump times,
/// each piece getting its own Gaussian increment. The stream is
/// path_stream(cfg.seed, 0).
HybridPath simulate_path(const SwitchingSde& sde, const GeneratorMatrix& chain, const InitialState& init,
                         const SimConfig& cfg);
HybridPath simulate_path(const SwitchingSde& sde, const GeneratorMatrix& chain, const InitialState& init,
                         const SimConfig& cfg, Rng& rng);

/// Same law as simulate_path(as_switching_sde(model), model.chain(), ...),
/// evaluated without the type-erased callbacks.
HybridPath simulate_path(const SirsModel& model, const InitialState& init, const SimConfig& cfg);
HybridPath simulate_path(const SirsModel& model, const InitialState& init, const SimConfig& cfg, Rng& rng);

/// Integrates along a given regime path with caller-supplied increments,
/// e.g. to share one Brownian path across step sizes.
HybridPath simulate_path(const SwitchingSde& sde, const RegimePath& regimes, const InitialState& init,
                         const SimConfig& cfg, const BrownianIncrements& increments);

} // namespace sirs
