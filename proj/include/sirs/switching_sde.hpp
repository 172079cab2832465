#pragma once

#include "sirs/ctmc.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sirs {

/// Writes a d-vector for state x in regime i into `out`.
using VectorField = std::function<void(std::span<const double> x, Regime i, std::span<double> out)>;
using ScalarField = std::function<double(std::span<const double> x, Regime i)>;

/// Region where trajectories are expected to stay. With `capacity` set this
/// is the simplex {x >= 0, sum(x) <= capacity}; otherwise the nonnegative
/// orthant (if `nonnegative`) or all of R^d.
struct AdmissibleRegion {
    bool nonnegative = false;
    std::optional<double> capacity;

    bool contains(std::span<const double> x) const;
    /// max((sum - capacity)+, (-min x)+); 0 inside.
    double violation(std::span<const double> x) const;
    std::string describe() const;
};

/// Coordinate integrated through its logarithm: d ln x_k = drift dt + diffusion dB.
struct LogCoordinate {
    std::size_t index;
    ScalarField drift;
    ScalarField diffusion;
};

/// d-dimensional diffusion driven by one scalar Brownian motion with
/// coefficients that switch with a regime index.
struct SwitchingSde {
    std::string name;
    std::size_t dimension = 0;
    std::size_t num_regimes = 1;
    VectorField drift;
    VectorField diffusion;
    AdmissibleRegion region;
    /// Coordinates reset to 0 whenever a step leaves them negative.
    std::vector<std::size_t> clip_at_zero;
    std::optional<LogCoordinate> log_coordinate;
    /// Point at which the log-coordinate drift is averaged to give the
    /// extinction/permanence threshold, e.g. (K, 0, 0).
    std::optional<std::vector<double>> disease_free_state;
};

/// sum_i pi_i * log_drift(disease_free_state, i). Requires both optional
/// members of `sde`.
double compute_lambda(const SwitchingSde& sde, const GeneratorMatrix& chain);

} // namespace sirs
