#include "sirs/montecarlo.hpp"

#include "sirs/detail/integrator.hpp"
#include "sirs/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>
#include <thread>

namespace sirs {

namespace {

constexpr double kZ95 = 1.959963984540054;

/// Neumaier summation over the values sorted ascending; the result depends
/// only on the multiset of values.
double ordered_sum(std::vector<double> values)
{
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    double compensation = 0.0;
    if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); })) {
        return std::accumulate(values.begin(), values.end(), 0.0);
    }
    for (double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            compensation += (sum - t) + v;
        }
        else {
            compensation += (v - t) + sum;
        }
        sum = t;
    }
    return sum + compensation;
}

Estimate estimate_of(const std::vector<double>& values)
{
    const auto n = static_cast<double>(values.size());
    Estimate e;
    e.mean = ordered_sum(values) / n;
    std::vector<double> squares;
    squares.reserve(values.size());
    for (double v : values) {
        squares.push_back((v - e.mean) * (v - e.mean));
    }
    const double variance = ordered_sum(std::move(squares)) / (n - 1.0);
    e.se = std::sqrt(variance / n);
    e.ci_low = e.mean - kZ95 * e.se;
    e.ci_high = e.mean + kZ95 * e.se;
    return e;
}

Frequency frequency_of(std::size_t hits, std::size_t n)
{
    Frequency f;
    f.value = static_cast<double>(hits) / static_cast<double>(n);
    const double half = kZ95 * std::sqrt(f.value * (1.0 - f.value) / static_cast<double>(n));
    f.ci_low = std::max(0.0, f.value - half);
    f.ci_high = std::min(1.0, f.value + half);
    return f;
}

class SummaryObserver {
public:
    SummaryObserver(const AdmissibleRegion& region, std::size_t stride, std::size_t infected_index)
        : region_(region), stride_(stride), infected_(infected_index)
    {
    }

    void on_grid(std::size_t step, double t, std::span<const double> x, double /*log_value*/, Regime /*regime*/)
    {
        max_violation_ = std::max(max_violation_, region_.violation(x));
        if (step % stride_ == 0) {
            const double value = x[infected_];
            if (last_time_) {
                area_ += (t - *last_time_) * (value + last_value_) / 2.0;
            }
            else {
                first_time_ = t;
            }
            last_time_ = t;
            last_value_ = value;
        }
        terminal_time_ = t;
    }

    double time_average() const
    {
        const double span = last_time_.value_or(0.0) - first_time_;
        return span > 0.0 ? area_ / span : last_value_;
    }
    double terminal_time() const { return terminal_time_; }
    double max_violation() const { return max_violation_; }

private:
    const AdmissibleRegion& region_;
    std::size_t stride_;
    std::size_t infected_;
    double area_ = 0.0;
    double first_time_ = 0.0;
    std::optional<double> last_time_;
    double last_value_ = 0.0;
    double terminal_time_ = 0.0;
    double max_violation_ = 0.0;
};

template <class Stepper>
PathSummary summarize_path(Stepper& stepper, const GeneratorMatrix& chain, const AdmissibleRegion& region,
                           std::size_t infected_index, const InitialState& init, double initial_log,
                           const SimConfig& cfg, std::size_t path_index)
{
    Rng rng = path_stream(cfg.seed, path_index);
    const RegimePath regimes = sample_regime_path(chain, init.regime, cfg.horizon, rng);
    detail::GaussianIncrements noise(rng);
    SummaryObserver observer(region, cfg.record_stride, infected_index);
    std::vector<double> x = init.x;
    double log_value = initial_log;
    detail::integrate(stepper, regimes, std::span<double>(x), log_value, cfg, noise, observer);

    PathSummary summary;
    const double T = observer.terminal_time();
    summary.terminal_infected = x[infected_index];
    summary.log_growth = stepper.uses_log() ? log_value / T : std::log(x[infected_index]) / T;
    summary.time_average_infected = observer.time_average();
    summary.occupation = regimes.occupation_fractions(chain.size());
    summary.max_violation = observer.max_violation();
    return summary;
}

/// Runs `one_path(p)` for p in [0, n) on a pool of threads; slot p of the
/// result always holds path p.
template <class OnePath>
std::vector<PathSummary> run_paths(std::size_t n, std::size_t threads, OnePath one_path)
{
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, n);

    std::vector<PathSummary> results(n);
    std::vector<std::optional<std::pair<std::size_t, Error>>> failures(threads);
    auto worker = [&](std::size_t w) {
        for (std::size_t p = w; p < n; p += threads) {
            try {
                results[p] = one_path(p);
            }
            catch (const Error& e) {
                failures[w].emplace(p, e);
                return;
            }
        }
    };
    if (threads == 1) {
        worker(0);
    }
    else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t w = 0; w < threads; ++w) {
            pool.emplace_back(worker, w);
        }
    }

    const std::pair<std::size_t, Error>* first = nullptr;
    for (const auto& f : failures) {
        if (f && (!first || f->first < first->first)) {
            first = &*f;
        }
    }
    if (first) {
        throw Error(first->second.kind(), "path " + std::to_string(first->first) + ": " + first->second.what());
    }
    return results;
}

double effective_horizon(const SimConfig& cfg)
{
    return static_cast<double>(cfg.num_steps()) * cfg.dt;
}

} // namespace

EnsembleStats::EnsembleStats(std::vector<PathSummary> paths, std::vector<double> deltas, double horizon,
                             bool has_log)
    : paths_(std::move(paths)), deltas_(std::move(deltas)), horizon_(horizon), has_log_(has_log)
{
    require(paths_.size() >= 2, "an ensemble needs at least 2 paths (standard errors are undefined otherwise)");
    const std::size_t m0 = paths_.front().occupation.size();

    std::vector<double> growth;
    std::vector<double> averages;
    growth.reserve(paths_.size());
    averages.reserve(paths_.size());
    std::vector<std::vector<double>> occupation(m0);
    for (const auto& p : paths_) {
        require(p.occupation.size() == m0, "paths disagree on the number of regimes", ErrorKind::DimensionMismatch);
        growth.push_back(p.log_growth);
        averages.push_back(p.time_average_infected);
        for (std::size_t i = 0; i < m0; ++i) {
            occupation[i].push_back(p.occupation[i]);
        }
        max_violation_ = std::max(max_violation_, p.max_violation);
    }
    log_growth_ = estimate_of(growth);
    time_average_ = estimate_of(averages);
    for (auto& column : occupation) {
        mean_occupation_.push_back(ordered_sum(std::move(column)) / static_cast<double>(paths_.size()));
    }
    for (double delta : deltas_) {
        const auto hits = std::count_if(paths_.begin(), paths_.end(),
                                        [delta](const PathSummary& p) { return p.terminal_infected >= delta; });
        persistence_.push_back(frequency_of(static_cast<std::size_t>(hits), paths_.size()));
    }
}

EnsembleStats merge(const EnsembleStats& a, const EnsembleStats& b)
{
    require(a.deltas() == b.deltas() && a.horizon() == b.horizon() && a.has_log() == b.has_log(),
            "ensembles were run with different settings");
    std::vector<PathSummary> paths = a.paths();
    paths.insert(paths.end(), b.paths().begin(), b.paths().end());
    return EnsembleStats(std::move(paths), a.deltas(), a.horizon(), a.has_log());
}

EnsembleStats run_ensemble(const SirsModel& model, const InitialState& init, const SimConfig& cfg,
                           const EnsembleOptions& options)
{
    cfg.validate();
    require(options.n_paths >= 2, "n_paths must be >= 2");
    const AdmissibleRegion region{true, model.capacity()};
    const double initial_log = detail::check_initial(region, 3, model.num_regimes(), init, cfg.log_infected, 1);
    auto paths = run_paths(options.n_paths, options.threads, [&](std::size_t p) {
        detail::SirsStepper stepper(model, cfg.log_infected);
        return summarize_path(stepper, model.chain(), region, 1, init, initial_log, cfg, p);
    });
    return EnsembleStats(std::move(paths), options.deltas, effective_horizon(cfg), cfg.log_infected);
}

EnsembleStats run_ensemble(const SwitchingSde& sde, const GeneratorMatrix& chain, const InitialState& init,
                           const SimConfig& cfg, const EnsembleOptions& options)
{
    cfg.validate();
    require(options.n_paths >= 2, "n_paths must be >= 2");
    require(chain.size() == sde.num_regimes, "generator size differs from the SDE's regime count",
            ErrorKind::DimensionMismatch);
    if (cfg.log_infected && !sde.log_coordinate) {
        throw Error(ErrorKind::MissingLogChannel, "SDE '" + sde.name + "' has no log coordinate");
    }
    const std::size_t infected = sde.log_coordinate ? sde.log_coordinate->index : std::min<std::size_t>(1, sde.dimension - 1);
    const double initial_log =
        detail::check_initial(sde.region, sde.dimension, sde.num_regimes, init, cfg.log_infected, infected);
    auto paths = run_paths(options.n_paths, options.threads, [&](std::size_t p) {
        detail::SdeStepper stepper(sde, cfg.log_infected);
        return summarize_path(stepper, chain, sde.region, infected, init, initial_log, cfg, p);
    });
    return EnsembleStats(std::move(paths), options.deltas, effective_horizon(cfg), cfg.log_infected);
}

Estimate estimate_lyapunov(const EnsembleStats& stats)
{
    if (!stats.has_log()) {
        throw Error(ErrorKind::MissingLogChannel, "ensemble was run without the log channel");
    }
    return stats.log_growth();
}

Frequency estimate_persistence(const EnsembleStats& stats, double delta)
{
    const auto& deltas = stats.deltas();
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        if (deltas[k] == delta) {
            return stats.persistence()[k];
        }
    }
    std::ostringstream msg;
    msg << "persistence threshold " << delta << " was not requested for this ensemble";
    throw Error(ErrorKind::UnknownDelta, msg.str());
}

Estimate estimate_time_average(const EnsembleStats& stats)
{
    return stats.time_average();
}

double occupation_check(const EnsembleStats& stats, const StationaryDistribution& pi)
{
    const auto& occupation = stats.mean_occupation();
    require(occupation.size() == pi.size(), "occupation and pi have different lengths", ErrorKind::DimensionMismatch);
    double worst = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i) {
        worst = std::max(worst, std::abs(occupation[i] - pi[i]));
    }
    return worst;
}

double time_average(std::span<const double> times, std::span<const double> values)
{
    require(times.size() == values.size() && !times.empty(), "time_average needs matching, non-empty inputs",
            ErrorKind::DimensionMismatch);
    if (times.size() == 1) {
        return values[0];
    }
    double area = 0.0;
    for (std::size_t k = 1; k < times.size(); ++k) {
        area += (times[k] - times[k - 1]) * (values[k] + values[k - 1]) / 2.0;
    }
    return area / (times.back() - times.front());
}

Outcome classify(const EnsembleStats& stats, double capacity, double floor)
{
    require(floor > 0.0 && floor < capacity, "classification floor must lie in (0, K)");
    const double cutoff = std::log(floor / capacity) / stats.horizon();
    return stats.log_growth().ci_high < cutoff ? Outcome::Extinct : Outcome::Persistent;
}

} // namespace sirs
