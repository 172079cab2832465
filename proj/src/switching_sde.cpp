#include "sirs/switching_sde.hpp"

#include "sirs/error.hpp"

#include <algorithm>
#include <sstream>

namespace sirs {

bool AdmissibleRegion::contains(std::span<const double> x) const
{
    return violation(x) == 0.0;
}

double AdmissibleRegion::violation(std::span<const double> x) const
{
    double worst = 0.0;
    if (nonnegative || capacity) {
        for (double v : x) {
            worst = std::max(worst, -v);
        }
    }
    if (capacity) {
        double total = 0.0;
        for (double v : x) {
            total += v;
        }
        worst = std::max(worst, total - *capacity);
    }
    return worst;
}

std::string AdmissibleRegion::describe() const
{
    std::ostringstream out;
    if (capacity) {
        out << "{x >= 0, sum(x) <= " << *capacity << "}";
    }
    else if (nonnegative) {
        out << "{x >= 0}";
    }
    else {
        out << "R^d";
    }
    return out.str();
}

double compute_lambda(const SwitchingSde& sde, const GeneratorMatrix& chain)
{
    require(sde.log_coordinate.has_value(), sde.name + ": no log coordinate", ErrorKind::MissingLogChannel);
    require(sde.disease_free_state.has_value(), sde.name + ": no disease-free state");
    require(chain.size() == sde.num_regimes, sde.name + ": chain size differs from regime count",
            ErrorKind::DimensionMismatch);
    const auto pi = stationary_distribution(chain);
    const std::span<const double> x0(*sde.disease_free_state);
    double lambda = 0.0;
    for (Regime i = 0; i < chain.size(); ++i) {
        lambda += pi[i] * sde.log_coordinate->drift(x0, i);
    }
    return lambda;
}

} // namespace sirs
