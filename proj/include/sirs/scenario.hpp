#pragma once

#include "sirs/engine.hpp"
#include "sirs/error.hpp"
#include "sirs/model.hpp"
#include "sirs/presets.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sirs {

/// Scenario validation failure. what() lists every problem found, one per
/// line, as "<source>:<line>:<column>: <field.path>: <message>".
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

enum class ModelKind { Sirs, Ex8, Ex17 };

/// A parsed and validated scenario file. Schema (YAML):
///
///   name: str                       # [A-Za-z0-9_.-]+, used in output file names
///   model:                          # exactly one of `model` / `preset`
///     K: real
///     generator: [[real, ...], ...] # optional with a single regime
///     regimes:
///       - {mu, rho, gamma1, gamma2: real,
///          f1: {family: constant|saturated_i|saturated_s|beddington_deangelis,
///               beta: real, a: real, a1: real, a2: real},
///          f2: {...}}
///   preset:
///     name: ex8 | ex17
///     # ex8:  generator, regimes: [{mu, beta, gamma, recovery, sigma}]
///     # ex17: Lambda, mu, beta, alpha, delta, gamma, epsilon, sigma
///   initial: {S, I, R: real, regime: int = 0}
///   sim: {dt = 1e-3, horizon, seed, record_stride = 1, n_paths = 200,
///         deltas = [1e-3 K], log_infected = (I > 0), threads = 0}
///   output: dir = "."
struct Scenario {
    std::string name;
    std::string source;
    std::string sha256;
    ModelKind kind = ModelKind::Sirs;
    /// Set for Sirs and Ex17 (the built preset).
    std::optional<SirsModel> model;
    std::optional<Ex8Parameters> ex8;
    std::optional<Ex17Parameters> ex17;
    InitialState initial;
    SimConfig sim;
    std::size_t n_paths = 200;
    std::vector<double> deltas;
    std::size_t threads = 0;
    std::filesystem::path output_dir = ".";

    double capacity() const;
    std::size_t num_regimes() const;
    SwitchingSde sde() const;
    const GeneratorMatrix& chain() const;
};

/// Parses YAML text. `source` names the text in diagnostics.
Scenario parse_scenario(std::string_view text, const std::string& source = "<scenario>");
Scenario load_scenario(const std::filesystem::path& path);

struct Overrides {
    std::optional<std::filesystem::path> out;
    std::optional<std::size_t> paths;
    std::optional<std::uint64_t> seed;
};

void apply_overrides(Scenario& scenario, const Overrides& overrides);

} // namespace sirs
