#include "sirs/thresholds.hpp"

#include "sirs/model.hpp"

namespace sirs {

Ex8ThresholdReport compare_thresholds(const Ex8Parameters& params)
{
    const SwitchingSde sde = preset_ex8(params);
    const auto pi = stationary_distribution(params.chain);

    Ex8ThresholdReport report;
    report.lambda = compute_lambda(sde, params.chain);
    report.pi = pi.pi;
    report.sum_pi_c = 0.0;
    report.cauchy_holds = true;

    double as_quantity = 0.0;
    bool as_defined = true;
    for (std::size_t j = 0; j < params.regimes.size(); ++j) {
        const auto& r = params.regimes[j];
        const double s2 = r.sigma * r.sigma;
        const double c = r.beta - r.mu - r.recovery - s2 / 2.0;
        report.c.push_back(c);
        report.sum_pi_c += pi[j] * c;
        report.beta_ge_sigma2.push_back(r.beta >= s2);
        if (s2 > 0.0) {
            const double term = (r.beta * r.beta - 2.0 * r.mu * s2) / (2.0 * s2);
            as_quantity += pi[j] * term;
            report.cauchy_bound.emplace_back(term - r.recovery);
            report.cauchy_holds = report.cauchy_holds && c <= term - r.recovery;
        }
        else {
            as_defined = false;
            report.cauchy_bound.emplace_back(std::nullopt);
        }
    }
    if (as_defined) {
        report.almost_sure_quantity = as_quantity;
    }
    return report;
}

Ex17ThresholdReport compare_thresholds(const Ex17Parameters& p)
{
    const SirsModel model = preset_ex17(p);
    const double removal = p.mu + p.gamma + p.epsilon;
    const double k = p.Lambda / p.mu;

    Ex17ThresholdReport report;
    report.lambda = compute_lambda(model);
    report.lambda_without_half = p.beta * k - removal - p.sigma * p.sigma * k * k;
    report.r0_tilde_printed = p.beta * p.Lambda / (p.mu * removal)
        - p.sigma * p.sigma * p.Lambda * p.Lambda / (p.mu * p.mu * removal);
    report.r0_bar = report.lambda / removal + 1.0;
    report.r0_deterministic = p.beta * p.Lambda / (p.mu * removal);
    report.note =
        "lambda carries sigma^2 K^2 / 2 on the noise term; r0_tilde_printed and "
        "lambda_without_half use sigma^2 K^2 without the factor 1/2. "
        "lambda > 0 iff r0_bar > 1.";
    return report;
}

} // namespace sirs
