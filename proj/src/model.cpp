#include "sirs/model.hpp"

#include "sirs/error.hpp"

#include <cmath>
#include <memory>
#include <sstream>

namespace sirs {

namespace {

void require_rate(double value, const std::string& field)
{
    if (!(std::isfinite(value) && value > 0.0)) {
        std::ostringstream msg;
        msg << field << " must be > 0 (got " << value << ")";
        throw Error(ErrorKind::InvalidArgument, msg.str());
    }
}

} // namespace

SirsModel::SirsModel(double capacity, std::vector<SirsRegime> regimes, GeneratorMatrix chain)
    : capacity_(capacity), regimes_(std::move(regimes)), chain_(std::move(chain))
{
    require_rate(capacity_, "K");
    if (regimes_.size() != chain_.size()) {
        std::ostringstream msg;
        msg << "model has " << regimes_.size() << " regime records but the generator has "
            << chain_.size() << " states";
        throw Error(ErrorKind::DimensionMismatch, msg.str());
    }
    for (std::size_t i = 0; i < regimes_.size(); ++i) {
        const std::string prefix = "regimes[" + std::to_string(i) + "]";
        const auto& r = regimes_[i];
        require_rate(r.mu, prefix + ".mu");
        require_rate(r.rho, prefix + ".rho");
        require_rate(r.gamma1, prefix + ".gamma1");
        require_rate(r.gamma2, prefix + ".gamma2");
        check_incidence(r.f1, capacity_, prefix + ".f1");
        check_incidence(r.f2, capacity_, prefix + ".f2");
    }
}

double eval_g(const SirsModel& model, double x, double y, Regime i)
{
    const auto& r = model.regime(i);
    const double f1 = eval_incidence(r.f1, x, y);
    const double f2 = eval_incidence(r.f2, x, y);
    return f1 * x - (r.mu + r.rho + r.gamma2 + f2 * f2 * x * x / 2.0);
}

std::vector<double> boundary_growth_rates(const SirsModel& model)
{
    std::vector<double> g(model.num_regimes());
    for (Regime i = 0; i < g.size(); ++i) {
        g[i] = eval_g(model, model.capacity(), 0.0, i);
    }
    return g;
}

double compute_lambda(const SirsModel& model)
{
    const auto pi = stationary_distribution(model.chain());
    double lambda = 0.0;
    for (Regime i = 0; i < model.num_regimes(); ++i) {
        lambda += pi[i] * eval_g(model, model.capacity(), 0.0, i);
    }
    return lambda;
}

std::array<double, 3> sirs_drift(const SirsModel& model, const EpidemicState& state)
{
    const auto& r = model.regime(state.regime);
    const double x = state.S;
    const double y = state.I;
    const double z = state.R;
    const double incidence = x * y * eval_incidence(r.f1, x, y);
    return {
        -incidence + r.mu * (model.capacity() - x) + r.gamma1 * z,
        incidence - (r.mu + r.rho + r.gamma2) * y,
        r.gamma2 * y - (r.mu + r.gamma1) * z,
    };
}

std::array<double, 3> sirs_diffusion(const SirsModel& model, const EpidemicState& state)
{
    const auto& r = model.regime(state.regime);
    const double noise = state.S * state.I * eval_incidence(r.f2, state.S, state.I);
    return {-noise, noise, 0.0};
}

SwitchingSde as_switching_sde(const SirsModel& model)
{
    // Closures share ownership of one copy of the model.
    auto shared = std::make_shared<const SirsModel>(model);
    auto to_state = [](std::span<const double> x, Regime i) {
        return EpidemicState{x[0], x[1], x[2], i, 0.0};
    };

    SwitchingSde sde;
    sde.name = "sirs";
    sde.dimension = 3;
    sde.num_regimes = model.num_regimes();
    sde.drift = [shared, to_state](std::span<const double> x, Regime i, std::span<double> out) {
        const auto f = sirs_drift(*shared, to_state(x, i));
        std::copy(f.begin(), f.end(), out.begin());
    };
    sde.diffusion = [shared, to_state](std::span<const double> x, Regime i, std::span<double> out) {
        const auto g = sirs_diffusion(*shared, to_state(x, i));
        std::copy(g.begin(), g.end(), out.begin());
    };
    sde.region.nonnegative = true;
    sde.region.capacity = model.capacity();
    sde.clip_at_zero = {0, 2};
    sde.log_coordinate = LogCoordinate{
        1,
        [shared](std::span<const double> x, Regime i) { return eval_g(*shared, x[0], x[1], i); },
        [shared](std::span<const double> x, Regime i) {
            return x[0] * eval_incidence(shared->regime(i).f2, x[0], x[1]);
        },
    };
    sde.disease_free_state = std::vector<double>{model.capacity(), 0.0, 0.0};
    return sde;
}

} // namespace sirs
