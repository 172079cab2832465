#pragma once

#include "sirs/engine.hpp"
#include "sirs/montecarlo.hpp"

#include <json.hpp>

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace sirs {

std::string_view tool_version();

/// Lower-case hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

/// Shortest decimal string that round-trips to `value`; "nan", "inf",
/// "-inf" for non-finite values.
std::string format_number(double value);

/// Stamped on every artifact.
struct Provenance {
    std::string scenario;
    std::string scenario_sha256;
    std::uint64_t seed = 0;
};

nlohmann::ordered_json metadata_json(const Provenance& provenance);

/// "# key=value" lines: tool, version, scenario, scenario_sha256, seed.
void write_csv_metadata(std::ostream& out, const Provenance& provenance);

/// Metadata block, then header "t,regime,S,I,R[,lnI]" and one row per record.
void write_path_csv(std::ostream& out, const HybridPath& path, const Provenance& provenance);

/// Metadata block, then header
/// "path,log_growth,terminal_I,time_average_I,max_violation,occupation_0,..."
/// and one row per path.
void write_ensemble_csv(std::ostream& out, const EnsembleStats& stats, const Provenance& provenance);

} // namespace sirs
