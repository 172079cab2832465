#pragma once

#include "sirs/presets.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sirs {

/// Threshold comparison for the unit-capacity switching model of
/// preset_ex8 against the stability conditions published for it.
struct Ex8ThresholdReport {
    /// sum_j pi_j g(1, 0, j), evaluated through the preset's log coordinate.
    double lambda;
    std::vector<double> pi;
    /// C_j = beta_j - mu_j - recovery_j - sigma_j^2 / 2
    std::vector<double> c;
    double sum_pi_c;
    /// sum_j pi_j (beta_j^2 - 2 mu_j sigma_j^2) / (2 sigma_j^2); empty when
    /// some sigma_j = 0 makes it undefined.
    std::optional<double> almost_sure_quantity;
    /// beta_j >= sigma_j^2, the side condition of the in-probability result.
    std::vector<bool> beta_ge_sigma2;
    /// (beta_j^2 - 2 mu_j sigma_j^2) / (2 sigma_j^2) - recovery_j, the upper
    /// bound C_j <= bound_j from Cauchy's inequality; empty entries where
    /// sigma_j = 0.
    std::vector<std::optional<double>> cauchy_bound;
    /// C_j <= cauchy_bound_j wherever the bound is defined.
    bool cauchy_holds;
};

/// Threshold comparison for preset_ex17.
struct Ex17ThresholdReport {
    /// compute_lambda on the preset: beta K - (mu + gamma + epsilon) - sigma^2 K^2 / 2.
    double lambda;
    /// The same expression as printed with the literature's R0, i.e. without
    /// the 1/2 on the noise term.
    double lambda_without_half;
    /// beta Lambda / (mu (mu + gamma + epsilon)) - sigma^2 Lambda^2 / (mu^2 (mu + gamma + epsilon))
    double r0_tilde_printed;
    /// lambda / (mu + gamma + epsilon) + 1, consistent with `lambda`:
    /// lambda > 0 iff r0_bar > 1.
    double r0_bar;
    /// beta Lambda / (mu (mu + gamma + epsilon)), the sigma = 0 value.
    double r0_deterministic;
    std::string note;
};

Ex8ThresholdReport compare_thresholds(const Ex8Parameters& params);
Ex17ThresholdReport compare_thresholds(const Ex17Parameters& params);

} // namespace sirs
