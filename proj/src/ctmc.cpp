#include "sirs/ctmc.hpp"

#include "sirs/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sirs {

namespace {

std::vector<bool> reachable_from_zero(std::size_t m0, const std::vector<double>& rates, bool reversed)
{
    std::vector<bool> seen(m0, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        const std::size_t k = stack.back();
        stack.pop_back();
        for (std::size_t l = 0; l < m0; ++l) {
            const double q = reversed ? rates[l * m0 + k] : rates[k * m0 + l];
            if (l != k && q > 0.0 && !seen[l]) {
                seen[l] = true;
                stack.push_back(l);
            }
        }
    }
    return seen;
}

} // namespace

std::vector<std::vector<double>> GeneratorMatrix::rows() const
{
    std::vector<std::vector<double>> out(m0_, std::vector<double>(m0_));
    for (std::size_t k = 0; k < m0_; ++k) {
        for (std::size_t l = 0; l < m0_; ++l) {
            out[k][l] = rate(k, l);
        }
    }
    return out;
}

GeneratorMatrix validate_generator(const std::vector<std::vector<double>>& rates,
                                   GeneratorOptions options)
{
    const std::size_t m0 = rates.size();
    require(m0 > 0, "generator must have at least one regime");
    std::vector<double> flat;
    flat.reserve(m0 * m0);
    for (std::size_t k = 0; k < m0; ++k) {
        require(rates[k].size() == m0, "generator must be square", ErrorKind::DimensionMismatch);
        for (std::size_t l = 0; l < m0; ++l) {
            const double q = rates[k][l];
            require(std::isfinite(q), "generator entries must be finite");
            if (k != l && q < 0.0) {
                std::ostringstream msg;
                msg << "negative off-diagonal rate q[" << k << "][" << l << "] = " << q;
                throw Error(ErrorKind::NegativeOffDiagonal, msg.str());
            }
            flat.push_back(q);
        }
    }
    for (std::size_t k = 0; k < m0; ++k) {
        double sum = 0.0;
        for (std::size_t l = 0; l < m0; ++l) {
            sum += flat[k * m0 + l];
        }
        if (std::abs(sum) > options.row_sum_tolerance) {
            std::ostringstream msg;
            msg << "row " << k << " of the generator sums to " << sum;
            throw Error(ErrorKind::RowSumNonzero, msg.str());
        }
    }
    // Strongly connected iff every state is reachable from 0 in the rate
    // graph and in its transpose.
    const auto forward = reachable_from_zero(m0, flat, false);
    const auto backward = reachable_from_zero(m0, flat, true);
    for (std::size_t k = 0; k < m0; ++k) {
        if (!forward[k] || !backward[k]) {
            std::ostringstream msg;
            msg << "generator is not irreducible (state " << k
                << " is not mutually reachable with state 0)";
            throw Error(ErrorKind::NotIrreducible, msg.str());
        }
    }
    return GeneratorMatrix(m0, std::move(flat), options);
}

GeneratorMatrix single_regime()
{
    return validate_generator({{0.0}});
}

StationaryDistribution stationary_distribution(const GeneratorMatrix& q)
{
    const auto m0 = static_cast<Eigen::Index>(q.size());
    Eigen::MatrixXd a(m0 + 1, m0);
    for (Eigen::Index k = 0; k < m0; ++k) {
        for (Eigen::Index l = 0; l < m0; ++l) {
            a(l, k) = q.rate(static_cast<Regime>(k), static_cast<Regime>(l));
        }
    }
    a.row(m0).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m0 + 1);
    b(m0) = 1.0;

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() != m0) {
        throw Error(ErrorKind::SingularSystem,
                    "stationary system is rank deficient (null space of Q^T is not one-dimensional)");
    }
    const Eigen::VectorXd solution = qr.solve(b);

    StationaryDistribution out;
    out.pi.assign(solution.data(), solution.data() + m0);
    for (double p : out.pi) {
        if (!(p > 0.0)) {
            throw Error(ErrorKind::SingularSystem, "stationary distribution has a non-positive entry");
        }
    }
    const double residual = stationary_residual(q, out);
    if (residual > q.options().residual_tolerance) {
        std::ostringstream msg;
        msg << "stationary residual |pi Q| = " << residual << " exceeds tolerance";
        throw Error(ErrorKind::SingularSystem, msg.str());
    }
    return out;
}

double stationary_residual(const GeneratorMatrix& q, const StationaryDistribution& pi)
{
    require(pi.size() == q.size(), "pi and Q dimensions differ", ErrorKind::DimensionMismatch);
    double worst = 0.0;
    for (std::size_t l = 0; l < q.size(); ++l) {
        double acc = 0.0;
        for (std::size_t k = 0; k < q.size(); ++k) {
            acc += pi[k] * q.rate(k, l);
        }
        worst = std::max(worst, std::abs(acc));
    }
    return worst;
}

Regime RegimePath::regime_at(double t) const
{
    Regime current = initial;
    for (const auto& jump : jumps) {
        if (jump.time > t) {
            break;
        }
        current = jump.regime;
    }
    return current;
}

std::vector<double> RegimePath::occupation_fractions(std::size_t m0) const
{
    std::vector<double> time_in(m0, 0.0);
    double last = 0.0;
    Regime current = initial;
    for (const auto& jump : jumps) {
        time_in.at(current) += jump.time - last;
        last = jump.time;
        current = jump.regime;
    }
    time_in.at(current) += horizon - last;
    for (double& v : time_in) {
        v /= horizon;
    }
    return time_in;
}

RegimePath sample_regime_path(const GeneratorMatrix& q, Regime initial, double horizon, Rng& rng)
{
    require(horizon > 0.0, "regime path horizon must be positive");
    require(initial < q.size(), "initial regime out of range");

    RegimePath path;
    path.initial = initial;
    path.horizon = horizon;

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Regime current = initial;
    double t = 0.0;
    while (true) {
        const double exit = q.exit_rate(current);
        if (exit <= 0.0) {
            break;
        }
        t += std::exponential_distribution<double>(exit)(rng);
        if (t > horizon) {
            break;
        }
        double target = unit(rng) * exit;
        Regime next = current;
        for (Regime l = 0; l < q.size(); ++l) {
            if (l == current) {
                continue;
            }
            const double rate = q.rate(current, l);
            if (rate <= 0.0) {
                continue;
            }
            next = l;
            if (target < rate) {
                break;
            }
            target -= rate;
        }
        path.jumps.push_back({t, next});
        current = next;
    }
    return path;
}

} // namespace sirs
