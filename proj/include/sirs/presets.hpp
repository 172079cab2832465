#pragma once

#include "sirs/ctmc.hpp"
#include "sirs/model.hpp"
#include "sirs/switching_sde.hpp"

#include <vector>

namespace sirs {

/// One regime of the switching SIRS model with unit capacity and an extra
/// S-drift term -sigma S I (S + I):
///
///   dS = (mu - beta S I - mu S + gamma R - sigma S I (S + I)) dt - sigma S I dB
///   dI = (beta S I - (mu + recovery) I) dt + sigma S I dB
///   dR = (recovery I - (mu + gamma) R) dt
struct Ex8Regime {
    double mu;
    double beta;
    double gamma;    ///< loss of immunity
    double recovery; ///< I -> R
    double sigma;
};

struct Ex8Parameters {
    std::vector<Ex8Regime> regimes;
    GeneratorMatrix chain = single_regime();
};

/// Not of SirsModel form (recruitment mu instead of mu (K - S), extra cubic
/// S-drift), so it is exposed only as a SwitchingSde with K = 1.
SwitchingSde preset_ex8(const Ex8Parameters& params);

/// Single-regime SIRS model with saturated incidence:
///
///   dS = (Lambda - mu S - beta S I / (1 + alpha I) + delta R) dt - sigma S I / (1 + alpha I) dB
///   dI = (beta S I / (1 + alpha I) - (mu + gamma + epsilon) I) dt + sigma S I / (1 + alpha I) dB
///   dR = (gamma I - (mu + delta) R) dt
struct Ex17Parameters {
    double Lambda;
    double mu;
    double beta;
    double alpha;
    double delta;   ///< loss of immunity
    double gamma;   ///< recovery
    double epsilon; ///< disease-induced death
    double sigma;
};

/// K = Lambda / mu, F1 = SaturatedInI(beta, alpha), F2 = SaturatedInI(sigma, alpha),
/// rho = epsilon, gamma1 = delta, gamma2 = gamma.
SirsModel preset_ex17(const Ex17Parameters& params);

} // namespace sirs
