#include "sirs/output.hpp"

#include "sirs/error.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <memory>

namespace sirs {

std::string_view tool_version()
{
    return SIRSIM_VERSION;
}

std::string sha256_hex(std::string_view data)
{
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorKind::InvalidArgument, "SHA-256 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string format_number(double value)
{
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    std::array<char, 32> buffer{};
    const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return std::string(buffer.data(), end);
}

nlohmann::ordered_json metadata_json(const Provenance& provenance)
{
    return {
        {"tool", "sirsim"},
        {"version", tool_version()},
        {"scenario", provenance.scenario},
        {"scenario_sha256", provenance.scenario_sha256},
        {"seed", provenance.seed},
    };
}

void write_csv_metadata(std::ostream& out, const Provenance& provenance)
{
    out << "# tool=sirsim\n"
        << "# version=" << tool_version() << '\n'
        << "# scenario=" << provenance.scenario << '\n'
        << "# scenario_sha256=" << provenance.scenario_sha256 << '\n'
        << "# seed=" << provenance.seed << '\n';
}

void write_path_csv(std::ostream& out, const HybridPath& path, const Provenance& provenance)
{
    require(path.dimension == 3, "path CSV expects (S, I, R) states", ErrorKind::DimensionMismatch);
    const bool with_log = !path.log_values.empty();
    write_csv_metadata(out, provenance);
    out << "t,regime,S,I,R" << (with_log ? ",lnI" : "") << '\n';
    for (std::size_t k = 0; k < path.num_records(); ++k) {
        const auto x = path.state(k);
        out << format_number(path.times[k]) << ',' << path.record_regimes[k] << ',' << format_number(x[0]) << ','
            << format_number(x[1]) << ',' << format_number(x[2]);
        if (with_log) {
            out << ',' << format_number(path.log_values[k]);
        }
        out << '\n';
    }
}

void write_ensemble_csv(std::ostream& out, const EnsembleStats& stats, const Provenance& provenance)
{
    write_csv_metadata(out, provenance);
    const std::size_t m0 = stats.paths().front().occupation.size();
    out << "path,log_growth,terminal_I,time_average_I,max_violation";
    for (std::size_t i = 0; i < m0; ++i) {
        out << ",occupation_" << i;
    }
    out << '\n';
    for (std::size_t p = 0; p < stats.n_paths(); ++p) {
        const auto& s = stats.paths()[p];
        out << p << ',' << format_number(s.log_growth) << ',' << format_number(s.terminal_infected) << ','
            << format_number(s.time_average_infected) << ',' << format_number(s.max_violation);
        for (double o : s.occupation) {
            out << ',' << format_number(o);
        }
        out << '\n';
    }
}

} // namespace sirs
