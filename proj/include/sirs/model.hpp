#pragma once

#include "sirs/ctmc.hpp"
#include "sirs/incidence.hpp"
#include "sirs/switching_sde.hpp"

#include <array>
#include <vector>

namespace sirs {

/// Rates (1/time) and incidence functions that hold while the chain is in
/// one regime.
struct SirsRegime {
    double mu;     ///< disease-free death rate, also the recruitment rate toward K
    double rho;    ///< excess death rate of infectives
    double gamma1; ///< loss of immunity, R -> S
    double gamma2; ///< recovery, I -> R
    IncidenceFunction f1; ///< transmission, incidence S I F1(S, I)
    IncidenceFunction f2; ///< noise intensity, diffusion S I F2(S, I)
};

/// Regime-switching stochastic SIRS model
///
///   dS = (-S I F1 + mu (K - S) + gamma1 R) dt - S I F2 dB
///   dI = ( S I F1 - (mu + rho + gamma2) I) dt + S I F2 dB
///   dR = (gamma2 I - (mu + gamma1) R) dt
///
/// with all coefficients evaluated in the current regime of `chain`.
class SirsModel {
public:
    /// Throws InvalidArgument unless K and every rate are positive, the
    /// incidence functions are nonnegative on [0, K]^2, and there is one
    /// regime record per chain state.
    SirsModel(double capacity, std::vector<SirsRegime> regimes, GeneratorMatrix chain);

    double capacity() const noexcept { return capacity_; }
    std::size_t num_regimes() const noexcept { return regimes_.size(); }
    const SirsRegime& regime(Regime i) const { return regimes_[i]; }
    const std::vector<SirsRegime>& regimes() const noexcept { return regimes_; }
    const GeneratorMatrix& chain() const noexcept { return chain_; }

private:
    double capacity_;
    std::vector<SirsRegime> regimes_;
    GeneratorMatrix chain_;
};

struct EpidemicState {
    double S = 0.0;
    double I = 0.0;
    double R = 0.0;
    Regime regime = 0;
    double t = 0.0;
};

/// g(x, y, i) = F1(x, y, i) x - (mu + rho + gamma2 + F2(x, y, i)^2 x^2 / 2),
/// the growth rate of ln I.
double eval_g(const SirsModel& model, double x, double y, Regime i);

/// [g(K, 0, i)] for every regime.
std::vector<double> boundary_growth_rates(const SirsModel& model);

/// Threshold lambda = sum_i pi_i g(K, 0, i). Negative: extinction at rate
/// lambda. Positive: strong stochastic permanence.
double compute_lambda(const SirsModel& model);

std::array<double, 3> sirs_drift(const SirsModel& model, const EpidemicState& state);
std::array<double, 3> sirs_diffusion(const SirsModel& model, const EpidemicState& state);

/// d = 3 view of the model with I as log coordinate, S and R clipped at 0,
/// admissible region Delta = {x >= 0, S + I + R <= K} and disease-free
/// state (K, 0, 0).
SwitchingSde as_switching_sde(const SirsModel& model);

} // namespace sirs
