#pragma once

#include "sirs/ctmc.hpp"
#include "sirs/engine.hpp"
#include "sirs/model.hpp"
#include "sirs/switching_sde.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace sirs {

/// What one path contributes to an ensemble.
struct PathSummary {
    /// ln I(T) / T, with I the SDE's log coordinate (or coordinate 1 when the
    /// log channel is off, possibly -inf).
    double log_growth = 0.0;
    double terminal_infected = 0.0;
    /// (1/T) int_0^T I dt, trapezoidal on the record grid.
    double time_average_infected = 0.0;
    std::vector<double> occupation;
    double max_violation = 0.0;
};

struct Estimate {
    double mean = 0.0;
    double se = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

struct Frequency {
    double value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

/// Immutable ensemble summary. Aggregates are computed from the per-path
/// samples sorted by value, so they do not depend on the order in which
/// paths were merged.
class EnsembleStats {
public:
    /// Throws InvalidArgument for fewer than 2 paths or occupation vectors of
    /// differing length.
    EnsembleStats(std::vector<PathSummary> paths, std::vector<double> deltas, double horizon, bool has_log);

    std::size_t n_paths() const noexcept { return paths_.size(); }
    const std::vector<PathSummary>& paths() const noexcept { return paths_; }
    const std::vector<double>& deltas() const noexcept { return deltas_; }
    double horizon() const noexcept { return horizon_; }
    bool has_log() const noexcept { return has_log_; }

    const Estimate& log_growth() const noexcept { return log_growth_; }
    const Estimate& time_average() const noexcept { return time_average_; }
    /// Frequency of I(T) >= deltas()[k].
    const std::vector<Frequency>& persistence() const noexcept { return persistence_; }
    const std::vector<double>& mean_occupation() const noexcept { return mean_occupation_; }
    double max_violation() const noexcept { return max_violation_; }

private:
    std::vector<PathSummary> paths_;
    std::vector<double> deltas_;
    double horizon_;
    bool has_log_;
    Estimate log_growth_;
    Estimate time_average_;
    std::vector<Frequency> persistence_;
    std::vector<double> mean_occupation_;
    double max_violation_ = 0.0;
};

/// Concatenates the paths of two ensembles run with the same settings.
EnsembleStats merge(const EnsembleStats& a, const EnsembleStats& b);

struct EnsembleOptions {
    std::size_t n_paths = 200;
    std::vector<double> deltas;
    /// 0: std::thread::hardware_concurrency().
    std::size_t threads = 0;
};

/// Path p uses path_stream(cfg.seed, p). Engine errors are rethrown with the
/// failing path index in the message.
EnsembleStats run_ensemble(const SirsModel& model, const InitialState& init, const SimConfig& cfg,
                           const EnsembleOptions& options);
EnsembleStats run_ensemble(const SwitchingSde& sde, const GeneratorMatrix& chain, const InitialState& init,
                           const SimConfig& cfg, const EnsembleOptions& options);

/// Mean and SE of ln I(T)/T. Throws MissingLogChannel unless the ensemble
/// was run with log_infected.
Estimate estimate_lyapunov(const EnsembleStats& stats);

/// Frequency of I(T) >= delta with a 95% normal-approximation interval.
/// Throws UnknownDelta unless delta was requested at run time.
Frequency estimate_persistence(const EnsembleStats& stats, double delta);

Estimate estimate_time_average(const EnsembleStats& stats);

/// max_i |mean occupation_i - pi_i|. Throws DimensionMismatch.
double occupation_check(const EnsembleStats& stats, const StationaryDistribution& pi);

/// (1 / (t_n - t_0)) int v dt by the trapezoidal rule on (times, values).
double time_average(std::span<const double> times, std::span<const double> values);

enum class Outcome { Extinct, Persistent };

/// Extinct when the whole 95% interval of ln I(T)/T lies below
/// ln(floor / capacity) / T, i.e. the typical path ends below `floor`.
/// As T grows the cut-off tends to 0 and this becomes "negative exponent".
Outcome classify(const EnsembleStats& stats, double capacity, double floor);

} // namespace sirs
