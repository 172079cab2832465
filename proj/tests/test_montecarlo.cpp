#include "sirs/error.hpp"
#include "sirs/montecarlo.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

using namespace sirs;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

constexpr double z95 = 1.959963984540054;

namespace {

SirsModel bilinear_model(double beta, double sigma)
{
    return SirsModel(1.0, {{0.1, 0.05, 0.2, 0.05, Constant{beta}, Constant{sigma}}}, single_regime());
}

SimConfig config(double dt, double horizon, std::uint64_t seed = 1, bool log_infected = true)
{
    SimConfig cfg;
    cfg.dt = dt;
    cfg.horizon = horizon;
    cfg.seed = seed;
    cfg.log_infected = log_infected;
    cfg.record_stride = 10;
    return cfg;
}

PathSummary synthetic(double growth, double terminal, double average, std::vector<double> occupation)
{
    return PathSummary{growth, terminal, average, std::move(occupation), 0.0};
}

bool same(const Estimate& a, const Estimate& b)
{
    return a.mean == b.mean && a.se == b.se && a.ci_low == b.ci_low && a.ci_high == b.ci_high;
}

} // namespace

TEST_CASE("ensembles are reproducible and independent of the thread count")
{
    const auto m = bilinear_model(0.5, 0.3);
    const InitialState init{{0.8, 0.2, 0.0}, 0};
    const auto cfg = config(1e-2, 20.0, 77);
    const EnsembleOptions one{6, {1e-3, 0.1}, 1};
    const EnsembleOptions three{6, {1e-3, 0.1}, 3};
    const auto a = run_ensemble(m, init, cfg, one);
    const auto b = run_ensemble(m, init, cfg, one);
    const auto c = run_ensemble(m, init, cfg, three);
    for (std::size_t p = 0; p < 6; ++p) {
        CHECK(a.paths()[p].log_growth == b.paths()[p].log_growth);
        CHECK(a.paths()[p].log_growth == c.paths()[p].log_growth);
        CHECK(a.paths()[p].time_average_infected == c.paths()[p].time_average_infected);
    }
    CHECK(same(a.log_growth(), c.log_growth()));

    // path p of the ensemble is the single path simulated from stream p
    Rng rng = path_stream(77, 4);
    const auto single = simulate_path(m, init, cfg, rng);
    CHECK(a.paths()[4].terminal_infected == single.terminal_state[1]);
    CHECK(a.paths()[4].log_growth == *single.terminal_log / single.terminal_time);
    std::vector<double> infected;
    for (std::size_t k = 0; k < single.num_records(); ++k) {
        infected.push_back(single.state(k)[1]);
    }
    CHECK_THAT(a.paths()[4].time_average_infected, WithinRel(time_average(single.times, infected), 1e-12));
    CHECK(a.paths()[4].max_violation == single.max_violation);

    // the generic route gives the same summaries
    const auto d = run_ensemble(as_switching_sde(m), m.chain(), init, cfg, one);
    CHECK(same(a.log_growth(), d.log_growth()));
}

TEST_CASE("noise-free decay gives the exact exponent")
{
    const SirsModel idle(1.0, {{0.1, 0.05, 0.2, 0.05, Constant{0.0}, Constant{0.0}}}, single_regime());
    const auto stats = run_ensemble(idle, {{0.0, 1.0, 0.0}, 0}, config(1e-2, 50.0), {4, {0.0}, 1});
    for (const auto& p : stats.paths()) {
        CHECK_THAT(p.log_growth, WithinAbs(-0.2, 1e-13));
    }
    CHECK_THAT(estimate_lyapunov(stats).mean, WithinAbs(-0.2, 1e-13));
    CHECK(estimate_lyapunov(stats).se < 1e-14);
}

TEST_CASE("persistence frequencies")
{
    const auto m = bilinear_model(0.5, 0.2);
    const auto stats = run_ensemble(m, {{0.9, 0.1, 0.0}, 0}, config(1e-2, 30.0), {20, {0.0, 1e-3, 1.5}, 1});
    CHECK(estimate_persistence(stats, 0.0).value == 1.0);
    CHECK(estimate_persistence(stats, 1.5).value == 0.0);
    const auto f = estimate_persistence(stats, 1e-3);
    CHECK(f.ci_low <= f.value);
    CHECK(f.value <= f.ci_high);
    CHECK(f.ci_low >= 0.0);
    CHECK(f.ci_high <= 1.0);
    try {
        estimate_persistence(stats, 0.5);
        FAIL("expected UnknownDelta");
    }
    catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownDelta);
    }
}

TEST_CASE("lyapunov estimate needs the log channel")
{
    const auto m = bilinear_model(0.5, 0.2);
    const auto stats = run_ensemble(m, {{0.9, 0.1, 0.0}, 0}, config(1e-2, 5.0, 1, false), {3, {}, 1});
    try {
        estimate_lyapunov(stats);
        FAIL("expected MissingLogChannel");
    }
    catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MissingLogChannel);
    }
}

TEST_CASE("standard errors, intervals and frequency bounds")
{
    std::mt19937_64 rng(2);
    std::normal_distribution<double> z(0.3, 2.0);
    std::vector<PathSummary> paths;
    std::vector<double> values;
    for (int p = 0; p < 50; ++p) {
        values.push_back(z(rng));
        paths.push_back(synthetic(values.back(), p % 5 == 0 ? 0.0 : 1.0, 0.5, {1.0}));
    }
    const EnsembleStats stats(paths, {0.5}, 10.0, true);
    double mean = 0.0;
    for (double v : values) {
        mean += v / 50;
    }
    double var = 0.0;
    for (double v : values) {
        var += (v - mean) * (v - mean) / 49;
    }
    const auto e = stats.log_growth();
    CHECK_THAT(e.mean, WithinAbs(mean, 1e-14));
    CHECK_THAT(e.se, WithinRel(std::sqrt(var / 50), 1e-12));
    CHECK_THAT(e.ci_high - e.mean, WithinRel(z95 * e.se, 1e-12));
    CHECK_THAT(e.mean - e.ci_low, WithinRel(z95 * e.se, 1e-12));
    const auto f = stats.persistence()[0];
    CHECK(f.value == 0.8);
    CHECK_THAT(f.ci_high - f.value, WithinRel(z95 * std::sqrt(0.8 * 0.2 / 50), 1e-12));

    std::vector<PathSummary> all_hit(3, synthetic(0.0, 1.0, 0.0, {1.0}));
    const EnsembleStats certain(all_hit, {0.5}, 1.0, true);
    CHECK(certain.persistence()[0].ci_low == 1.0);
    CHECK(certain.persistence()[0].ci_high == 1.0);

    CHECK_THROWS_AS(EnsembleStats({synthetic(0, 0, 0, {1.0})}, {}, 1.0, true), Error);
    CHECK_THROWS_AS(EnsembleStats({synthetic(0, 0, 0, {1.0}), synthetic(0, 0, 0, {0.5, 0.5})}, {}, 1.0, true),
                    Error);
}

TEST_CASE("aggregates do not depend on path order")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    std::vector<PathSummary> paths;
    for (int p = 0; p < 101; ++p) {
        const double o = std::abs(u(rng)) / 1e3;
        paths.push_back(synthetic(u(rng) * (p % 7 == 0 ? 1e-9 : 1.0), std::abs(u(rng)), u(rng), {o, 1 - o}));
    }
    const EnsembleStats base(paths, {10.0}, 5.0, true);
    for (int rep = 0; rep < 10; ++rep) {
        std::shuffle(paths.begin(), paths.end(), rng);
        const EnsembleStats shuffled(paths, {10.0}, 5.0, true);
        CHECK(same(base.log_growth(), shuffled.log_growth()));
        CHECK(same(base.time_average(), shuffled.time_average()));
        CHECK(base.mean_occupation() == shuffled.mean_occupation());
        CHECK(base.persistence()[0].value == shuffled.persistence()[0].value);
    }

    const EnsembleStats left(std::vector<PathSummary>(paths.begin(), paths.begin() + 40), {10.0}, 5.0, true);
    const EnsembleStats right(std::vector<PathSummary>(paths.begin() + 40, paths.end()), {10.0}, 5.0, true);
    const auto ab = merge(left, right);
    const auto ba = merge(right, left);
    CHECK(ab.n_paths() == 101);
    CHECK(same(ab.log_growth(), ba.log_growth()));
    CHECK(same(ab.log_growth(), base.log_growth()));
    CHECK(same(ab.time_average(), base.time_average()));
    CHECK(ab.mean_occupation() == base.mean_occupation());

    const EnsembleStats other(paths, {20.0}, 5.0, true);
    CHECK_THROWS_AS(merge(left, other), Error);
}

TEST_CASE("time averages")
{
    const std::vector<double> t{0.0, 1.0, 2.0, 4.0};
    CHECK(time_average(t, std::vector<double>{0.3, 0.3, 0.3, 0.3}) == 0.3);
    // piecewise linear: area 0.5 + 1.5 + 5 = 7 over 4
    CHECK_THAT(time_average(t, std::vector<double>{0.0, 1.0, 2.0, 3.0}), WithinAbs(1.75, 1e-15));
    CHECK(time_average(std::vector<double>{2.0}, std::vector<double>{5.0}) == 5.0);
    CHECK_THROWS_AS(time_average(t, std::vector<double>{1.0}), Error);

    // an I(0) = 0 run has identically zero time average
    const auto m = bilinear_model(0.5, 0.2);
    const auto stats = run_ensemble(m, {{0.5, 0.0, 0.2}, 0}, config(1e-2, 5.0, 1, false), {3, {}, 1});
    CHECK(estimate_time_average(stats).mean == 0.0);
}

TEST_CASE("occupation check")
{
    const auto m = bilinear_model(0.5, 0.2);
    const auto single = run_ensemble(m, {{0.9, 0.1, 0.0}, 0}, config(1e-2, 5.0), {3, {}, 1});
    CHECK(occupation_check(single, stationary_distribution(single_regime())) == 0.0);
    try {
        occupation_check(single, StationaryDistribution{{0.5, 0.5}});
        FAIL("expected DimensionMismatch");
    }
    catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DimensionMismatch);
    }

    const SirsModel two(1.0,
                        {{0.1, 0.05, 0.2, 0.05, Constant{0.5}, Constant{0.2}},
                         {0.2, 0.05, 0.2, 0.1, Constant{0.3}, Constant{0.1}}},
                        validate_generator({{-1, 1}, {2, -2}}));
    auto cfg = config(2e-2, 1000.0, 5);
    cfg.record_stride = 1000;
    const auto stats = run_ensemble(two, {{0.9, 0.1, 0.0}, 0}, cfg, {200, {}, 0});
    const auto pi = stationary_distribution(two.chain());
    CHECK(occupation_check(stats, pi) <= 0.02);
    for (const auto& p : stats.paths()) {
        CHECK_THAT(p.occupation[0] + p.occupation[1], WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("classification uses the floor-based cut-off")
{
    const auto make = [](double mean, double spread) {
        std::vector<PathSummary> paths;
        for (int p = 0; p < 10; ++p) {
            paths.push_back(synthetic(mean + spread * (p - 4.5), 0.0, 0.0, {1.0}));
        }
        return EnsembleStats(paths, {}, 1000.0, true);
    };
    // cut-off ln(1e-3) / 1000 = -0.0069
    CHECK(classify(make(-0.12, 1e-3), 1.0, 1e-3) == Outcome::Extinct);
    CHECK(classify(make(-0.001, 1e-4), 1.0, 1e-3) == Outcome::Persistent);
    CHECK(classify(make(-0.0075, 1e-3), 1.0, 1e-3) == Outcome::Persistent);
    CHECK_THROWS_AS(classify(make(0.0, 1.0), 1.0, 2.0), Error);
}

TEST_CASE("engine failures name the failing path")
{
    SwitchingSde sde;
    sde.name = "explosive";
    sde.dimension = 1;
    sde.drift = [](std::span<const double> x, Regime, std::span<double> out) { out[0] = x[0] * x[0]; };
    sde.diffusion = [](std::span<const double>, Regime, std::span<double> out) { out[0] = 0.0; };
    try {
        run_ensemble(sde, single_regime(), {{1.0}, 0}, config(0.5, 100.0, 1, false), {4, {}, 2});
        FAIL("expected NonFiniteState");
    }
    catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonFiniteState);
        CHECK_THAT(e.what(), ContainsSubstring("path 0"));
    }
}
