#include "sirs/presets.hpp"

#include "sirs/error.hpp"

#include <cmath>
#include <memory>
#include <sstream>

namespace sirs {

namespace {

void require_positive(double value, const std::string& field)
{
    if (!(std::isfinite(value) && value > 0.0)) {
        std::ostringstream msg;
        msg << field << " must be > 0 (got " << value << ")";
        throw Error(ErrorKind::InvalidArgument, msg.str());
    }
}

void require_nonnegative(double value, const std::string& field)
{
    if (!(std::isfinite(value) && value >= 0.0)) {
        std::ostringstream msg;
        msg << field << " must be >= 0 (got " << value << ")";
        throw Error(ErrorKind::InvalidArgument, msg.str());
    }
}

} // namespace

SwitchingSde preset_ex8(const Ex8Parameters& params)
{
    require(params.regimes.size() == params.chain.size(),
            "ex8: number of regimes differs from the generator size", ErrorKind::DimensionMismatch);
    for (std::size_t j = 0; j < params.regimes.size(); ++j) {
        const std::string prefix = "ex8.regimes[" + std::to_string(j) + "]";
        const auto& r = params.regimes[j];
        require_positive(r.mu, prefix + ".mu");
        require_positive(r.beta, prefix + ".beta");
        require_positive(r.gamma, prefix + ".gamma");
        require_positive(r.recovery, prefix + ".recovery");
        require_nonnegative(r.sigma, prefix + ".sigma");
    }

    auto regimes = std::make_shared<const std::vector<Ex8Regime>>(params.regimes);

    SwitchingSde sde;
    sde.name = "ex8";
    sde.dimension = 3;
    sde.num_regimes = params.regimes.size();
    sde.drift = [regimes](std::span<const double> x, Regime i, std::span<double> out) {
        const auto& r = (*regimes)[i];
        const double S = x[0];
        const double I = x[1];
        const double R = x[2];
        out[0] = r.mu - r.beta * S * I - r.mu * S + r.gamma * R - r.sigma * S * I * (S + I);
        out[1] = r.beta * S * I - (r.mu + r.recovery) * I;
        out[2] = r.recovery * I - (r.mu + r.gamma) * R;
    };
    sde.diffusion = [regimes](std::span<const double> x, Regime i, std::span<double> out) {
        const double noise = (*regimes)[i].sigma * x[0] * x[1];
        out[0] = -noise;
        out[1] = noise;
        out[2] = 0.0;
    };
    sde.region.nonnegative = true;
    sde.region.capacity = 1.0;
    sde.clip_at_zero = {0, 2};
    sde.log_coordinate = LogCoordinate{
        1,
        [regimes](std::span<const double> x, Regime i) {
            const auto& r = (*regimes)[i];
            const double S = x[0];
            return r.beta * S - (r.mu + r.recovery) - r.sigma * r.sigma * S * S / 2.0;
        },
        [regimes](std::span<const double> x, Regime i) { return (*regimes)[i].sigma * x[0]; },
    };
    sde.disease_free_state = std::vector<double>{1.0, 0.0, 0.0};
    return sde;
}

SirsModel preset_ex17(const Ex17Parameters& p)
{
    require_positive(p.Lambda, "ex17.Lambda");
    require_positive(p.mu, "ex17.mu");
    require_nonnegative(p.beta, "ex17.beta");
    require_nonnegative(p.alpha, "ex17.alpha");
    require_positive(p.delta, "ex17.delta");
    require_positive(p.gamma, "ex17.gamma");
    require_positive(p.epsilon, "ex17.epsilon");
    require_nonnegative(p.sigma, "ex17.sigma");

    SirsRegime regime{
        p.mu,
        p.epsilon,
        p.delta,
        p.gamma,
        SaturatedInI{p.beta, p.alpha},
        SaturatedInI{p.sigma, p.alpha},
    };
    return SirsModel(p.Lambda / p.mu, {regime}, single_regime());
}

} // namespace sirs
