#pragma once

#include "sirs/rng.hpp"

#include <cstddef>
#include <vector>

namespace sirs {

using Regime = std::size_t;

struct GeneratorOptions {
    double row_sum_tolerance = 1e-12;
    double residual_tolerance = 1e-10;
};

/// Transition-rate matrix of a finite, irreducible, time-homogeneous
/// Markov chain. Immutable once validated.
class GeneratorMatrix {
public:
    std::size_t size() const noexcept { return m0_; }
    double rate(Regime from, Regime to) const { return rates_[from * m0_ + to]; }
    /// -q_kk
    double exit_rate(Regime k) const { return -rate(k, k); }
    const std::vector<double>& row_major() const noexcept { return rates_; }
    std::vector<std::vector<double>> rows() const;
    const GeneratorOptions& options() const noexcept { return options_; }

private:
    friend GeneratorMatrix validate_generator(const std::vector<std::vector<double>>&,
                                              GeneratorOptions);
    GeneratorMatrix(std::size_t m0, std::vector<double> rates, GeneratorOptions options)
        : m0_(m0), rates_(std::move(rates)), options_(options) {}

    std::size_t m0_;
    std::vector<double> rates_;
    GeneratorOptions options_;
};

/// Throws Error with NegativeOffDiagonal, RowSumNonzero or NotIrreducible.
/// A 1x1 matrix [[0]] is accepted as the single-regime chain.
GeneratorMatrix validate_generator(const std::vector<std::vector<double>>& rates,
                                   GeneratorOptions options = {});

/// The trivial chain with one regime.
GeneratorMatrix single_regime();

struct StationaryDistribution {
    std::vector<double> pi;

    std::size_t size() const noexcept { return pi.size(); }
    double operator[](Regime i) const { return pi[i]; }
};

/// Solves [Q^T; 1^T] pi = [0; 1] densely. Throws SingularSystem if the
/// null space of Q^T is not one-dimensional or the result fails the
/// residual/positivity checks.
StationaryDistribution stationary_distribution(const GeneratorMatrix& q);

/// max_j |(pi Q)_j|
double stationary_residual(const GeneratorMatrix& q, const StationaryDistribution& pi);

struct RegimeJump {
    double time;
    Regime regime;
};

struct RegimePath {
    Regime initial = 0;
    std::vector<RegimeJump> jumps;
    double horizon = 0.0;

    Regime regime_at(double t) const;
    Regime final_regime() const { return jumps.empty() ? initial : jumps.back().regime; }
    /// Fraction of [0, horizon] spent in each regime.
    std::vector<double> occupation_fractions(std::size_t m0) const;
};

/// Exact (event-driven) sampling on [0, horizon].
RegimePath sample_regime_path(const GeneratorMatrix& q, Regime initial, double horizon, Rng& rng);

} // namespace sirs
