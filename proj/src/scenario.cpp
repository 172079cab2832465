#include "sirs/scenario.hpp"

#include "sirs/output.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace sirs {

namespace {

enum class Bound { Any, Positive, NonNegative };

class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    void error(const YAML::Node& at, const std::string& path, const std::string& message)
    {
        std::ostringstream line;
        line << source_;
        if (at.IsDefined() && at.Mark().line >= 0) {
            line << ':' << at.Mark().line + 1 << ':' << at.Mark().column + 1;
        }
        line << ": " << path << ": " << message;
        errors_.push_back(line.str());
    }

    bool ok() const { return errors_.empty(); }

    void finish() const
    {
        if (errors_.empty()) {
            return;
        }
        std::ostringstream all;
        for (std::size_t k = 0; k < errors_.size(); ++k) {
            all << (k ? "\n" : "") << errors_[k];
        }
        throw ConfigError(all.str());
    }

    bool expect_map(const YAML::Node& node, const std::string& path)
    {
        if (!node.IsMap()) {
            error(node, path, "expected a mapping");
            return false;
        }
        return true;
    }

    void check_keys(const YAML::Node& map, const std::set<std::string>& allowed, const std::string& path)
    {
        for (const auto& entry : map) {
            const auto key = entry.first.as<std::string>();
            if (!allowed.contains(key)) {
                error(entry.first, join(path, key), "unknown field");
            }
        }
    }

    std::optional<double> real(const YAML::Node& parent, const std::string& key, const std::string& path,
                               Bound bound, std::optional<double> fallback = std::nullopt)
    {
        const std::string field = join(path, key);
        const YAML::Node node = parent[key];
        if (!node.IsDefined() || node.IsNull()) {
            if (!fallback) {
                error(parent, field, "required field is missing");
            }
            return fallback;
        }
        double value = 0.0;
        try {
            value = node.as<double>();
        }
        catch (const YAML::Exception&) {
            error(node, field, "expected a real number");
            return std::nullopt;
        }
        if (!std::isfinite(value)) {
            error(node, field, "must be finite");
            return std::nullopt;
        }
        if (bound == Bound::Positive && !(value > 0.0)) {
            error(node, field, "must be > 0 (got " + format_number(value) + ")");
            return std::nullopt;
        }
        if (bound == Bound::NonNegative && !(value >= 0.0)) {
            error(node, field, "must be >= 0 (got " + format_number(value) + ")");
            return std::nullopt;
        }
        return value;
    }

    template <class Int>
    std::optional<Int> integer(const YAML::Node& parent, const std::string& key, const std::string& path,
                               std::optional<Int> fallback = std::nullopt)
    {
        const std::string field = join(path, key);
        const YAML::Node node = parent[key];
        if (!node.IsDefined() || node.IsNull()) {
            if (!fallback) {
                error(parent, field, "required field is missing");
            }
            return fallback;
        }
        try {
            return node.as<Int>();
        }
        catch (const YAML::Exception&) {
            error(node, field, "expected a nonnegative integer");
            return std::nullopt;
        }
    }

    std::optional<std::string> string(const YAML::Node& parent, const std::string& key, const std::string& path,
                                      std::optional<std::string> fallback = std::nullopt)
    {
        const std::string field = join(path, key);
        const YAML::Node node = parent[key];
        if (!node.IsDefined() || node.IsNull()) {
            if (!fallback) {
                error(parent, field, "required field is missing");
            }
            return fallback;
        }
        if (!node.IsScalar()) {
            error(node, field, "expected a string");
            return std::nullopt;
        }
        return node.as<std::string>();
    }

    static std::string join(const std::string& path, const std::string& key)
    {
        return path.empty() ? key : path + "." + key;
    }

    static std::string index(const std::string& path, std::size_t i)
    {
        return path + "[" + std::to_string(i) + "]";
    }

private:
    std::string source_;
    std::vector<std::string> errors_;
};

std::optional<IncidenceFunction> read_incidence(Reader& reader, const YAML::Node& parent, const std::string& key,
                                                const std::string& path)
{
    const std::string field = Reader::join(path, key);
    const YAML::Node node = parent[key];
    if (!node.IsDefined()) {
        reader.error(parent, field, "required field is missing");
        return std::nullopt;
    }
    if (!reader.expect_map(node, field)) {
        return std::nullopt;
    }
    const auto family = reader.string(node, "family", field);
    if (!family) {
        return std::nullopt;
    }
    const auto beta = [&] { return reader.real(node, "beta", field, Bound::NonNegative); };
    const auto param = [&](const char* name) { return reader.real(node, name, field, Bound::NonNegative); };

    if (*family == "constant") {
        reader.check_keys(node, {"family", "beta"}, field);
        if (auto b = beta()) {
            return Constant{*b};
        }
    }
    else if (*family == "saturated_i" || *family == "saturated_s") {
        reader.check_keys(node, {"family", "beta", "a"}, field);
        const auto b = beta();
        const auto a = param("a");
        if (b && a) {
            if (*family == "saturated_i") {
                return SaturatedInI{*b, *a};
            }
            return SaturatedInS{*b, *a};
        }
    }
    else if (*family == "beddington_deangelis") {
        reader.check_keys(node, {"family", "beta", "a1", "a2"}, field);
        const auto b = beta();
        const auto a1 = param("a1");
        const auto a2 = param("a2");
        if (b && a1 && a2) {
            return BeddingtonDeAngelis{*b, *a1, *a2};
        }
    }
    else {
        reader.error(node["family"], Reader::join(field, "family"),
                     "unknown family '" + *family
                         + "' (expected constant, saturated_i, saturated_s or beddington_deangelis)");
    }
    return std::nullopt;
}

std::optional<GeneratorMatrix> read_generator(Reader& reader, const YAML::Node& parent, const std::string& path,
                                              std::size_t regimes)
{
    const std::string field = Reader::join(path, "generator");
    const YAML::Node node = parent["generator"];
    if (!node.IsDefined()) {
        if (regimes == 1) {
            return single_regime();
        }
        reader.error(parent, field, "required when there is more than one regime");
        return std::nullopt;
    }
    if (!node.IsSequence()) {
        reader.error(node, field, "expected a list of rows");
        return std::nullopt;
    }
    std::vector<std::vector<double>> rows;
    bool parsed = true;
    for (std::size_t k = 0; k < node.size(); ++k) {
        const YAML::Node row = node[k];
        if (!row.IsSequence()) {
            reader.error(row, Reader::index(field, k), "expected a list of rates");
            parsed = false;
            continue;
        }
        std::vector<double> values;
        for (std::size_t l = 0; l < row.size(); ++l) {
            try {
                values.push_back(row[l].as<double>());
            }
            catch (const YAML::Exception&) {
                reader.error(row[l], Reader::index(Reader::index(field, k), l), "expected a real number");
                parsed = false;
            }
        }
        rows.push_back(std::move(values));
    }
    if (!parsed) {
        return std::nullopt;
    }
    if (rows.size() != regimes) {
        reader.error(node, field,
                     "has " + std::to_string(rows.size()) + " rows but there are " + std::to_string(regimes)
                         + " regimes");
        return std::nullopt;
    }
    try {
        return validate_generator(rows);
    }
    catch (const Error& e) {
        reader.error(node, field, std::string(to_string(e.kind())) + ": " + e.what());
        return std::nullopt;
    }
}

std::optional<SirsModel> read_model(Reader& reader, const YAML::Node& node)
{
    const std::string path = "model";
    if (!reader.expect_map(node, path)) {
        return std::nullopt;
    }
    reader.check_keys(node, {"K", "generator", "regimes"}, path);
    const auto capacity = reader.real(node, "K", path, Bound::Positive);
    const YAML::Node list = node["regimes"];
    if (!list.IsDefined() || !list.IsSequence() || list.size() == 0) {
        reader.error(list.IsDefined() ? list : node, "model.regimes", "expected a non-empty list of regimes");
        return std::nullopt;
    }
    std::vector<SirsRegime> regimes;
    bool complete = true;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string at = Reader::index("model.regimes", i);
        const YAML::Node r = list[i];
        if (!reader.expect_map(r, at)) {
            complete = false;
            continue;
        }
        reader.check_keys(r, {"mu", "rho", "gamma1", "gamma2", "f1", "f2"}, at);
        const auto mu = reader.real(r, "mu", at, Bound::Positive);
        const auto rho = reader.real(r, "rho", at, Bound::Positive);
        const auto gamma1 = reader.real(r, "gamma1", at, Bound::Positive);
        const auto gamma2 = reader.real(r, "gamma2", at, Bound::Positive);
        auto f1 = read_incidence(reader, r, "f1", at);
        auto f2 = read_incidence(reader, r, "f2", at);
        if (mu && rho && gamma1 && gamma2 && f1 && f2) {
            regimes.push_back({*mu, *rho, *gamma1, *gamma2, std::move(*f1), std::move(*f2)});
        }
        else {
            complete = false;
        }
    }
    auto chain = read_generator(reader, node, path, list.size());
    if (!complete || !capacity || !chain) {
        return std::nullopt;
    }
    try {
        return SirsModel(*capacity, std::move(regimes), std::move(*chain));
    }
    catch (const Error& e) {
        reader.error(node, path, e.what());
        return std::nullopt;
    }
}

void read_preset(Reader& reader, const YAML::Node& node, Scenario& scenario)
{
    const std::string path = "preset";
    if (!reader.expect_map(node, path)) {
        return;
    }
    const auto name = reader.string(node, "name", path);
    if (!name) {
        return;
    }
    if (*name == "ex8") {
        scenario.kind = ModelKind::Ex8;
        reader.check_keys(node, {"name", "generator", "regimes"}, path);
        const YAML::Node list = node["regimes"];
        if (!list.IsDefined() || !list.IsSequence() || list.size() == 0) {
            reader.error(list.IsDefined() ? list : node, "preset.regimes", "expected a non-empty list of regimes");
            return;
        }
        Ex8Parameters params;
        bool complete = true;
        for (std::size_t j = 0; j < list.size(); ++j) {
            const std::string at = Reader::index("preset.regimes", j);
            const YAML::Node r = list[j];
            if (!reader.expect_map(r, at)) {
                complete = false;
                continue;
            }
            reader.check_keys(r, {"mu", "beta", "gamma", "recovery", "sigma"}, at);
            const auto mu = reader.real(r, "mu", at, Bound::Positive);
            const auto beta = reader.real(r, "beta", at, Bound::Positive);
            const auto gamma = reader.real(r, "gamma", at, Bound::Positive);
            const auto recovery = reader.real(r, "recovery", at, Bound::Positive);
            const auto sigma = reader.real(r, "sigma", at, Bound::NonNegative);
            if (mu && beta && gamma && recovery && sigma) {
                params.regimes.push_back({*mu, *beta, *gamma, *recovery, *sigma});
            }
            else {
                complete = false;
            }
        }
        auto chain = read_generator(reader, node, path, list.size());
        if (complete && chain) {
            params.chain = std::move(*chain);
            scenario.ex8 = std::move(params);
        }
    }
    else if (*name == "ex17") {
        scenario.kind = ModelKind::Ex17;
        reader.check_keys(node, {"name", "Lambda", "mu", "beta", "alpha", "delta", "gamma", "epsilon", "sigma"},
                          path);
        const auto Lambda = reader.real(node, "Lambda", path, Bound::Positive);
        const auto mu = reader.real(node, "mu", path, Bound::Positive);
        const auto beta = reader.real(node, "beta", path, Bound::Positive);
        const auto alpha = reader.real(node, "alpha", path, Bound::NonNegative);
        const auto delta = reader.real(node, "delta", path, Bound::Positive);
        const auto gamma = reader.real(node, "gamma", path, Bound::Positive);
        const auto epsilon = reader.real(node, "epsilon", path, Bound::Positive);
        const auto sigma = reader.real(node, "sigma", path, Bound::NonNegative);
        if (Lambda && mu && beta && alpha && delta && gamma && epsilon && sigma) {
            scenario.ex17 = Ex17Parameters{*Lambda, *mu, *beta, *alpha, *delta, *gamma, *epsilon, *sigma};
            try {
                scenario.model = preset_ex17(*scenario.ex17);
            }
            catch (const Error& e) {
                reader.error(node, path, e.what());
            }
        }
    }
    else {
        reader.error(node["name"], "preset.name", "unknown preset '" + *name + "' (expected ex8 or ex17)");
    }
}

} // namespace

double Scenario::capacity() const
{
    return kind == ModelKind::Ex8 ? 1.0 : model->capacity();
}

std::size_t Scenario::num_regimes() const
{
    return kind == ModelKind::Ex8 ? ex8->regimes.size() : model->num_regimes();
}

SwitchingSde Scenario::sde() const
{
    return kind == ModelKind::Ex8 ? preset_ex8(*ex8) : as_switching_sde(*model);
}

const GeneratorMatrix& Scenario::chain() const
{
    return kind == ModelKind::Ex8 ? ex8->chain : model->chain();
}

Scenario parse_scenario(std::string_view text, const std::string& source)
{
    Reader reader(source);
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    }
    catch (const YAML::ParserException& e) {
        std::ostringstream msg;
        msg << source << ':' << e.mark.line + 1 << ':' << e.mark.column + 1 << ": syntax error: " << e.msg;
        throw ConfigError(msg.str());
    }
    if (!root.IsMap()) {
        throw ConfigError(source + ": top level must be a mapping");
    }

    Scenario scenario;
    scenario.source = source;
    scenario.sha256 = sha256_hex(text);
    reader.check_keys(root, {"name", "model", "preset", "initial", "sim", "output"}, "");

    if (auto name = reader.string(root, "name", "")) {
        static const std::regex allowed("[A-Za-z0-9_.-]+");
        if (std::regex_match(*name, allowed)) {
            scenario.name = *name;
        }
        else {
            reader.error(root["name"], "name", "must match [A-Za-z0-9_.-]+");
        }
    }

    const bool has_model = root["model"].IsDefined();
    const bool has_preset = root["preset"].IsDefined();
    if (has_model == has_preset) {
        reader.error(root, "model", "exactly one of 'model' or 'preset' is required");
    }
    else if (has_model) {
        scenario.kind = ModelKind::Sirs;
        scenario.model = read_model(reader, root["model"]);
    }
    else {
        read_preset(reader, root["preset"], scenario);
    }
    const bool model_ok = scenario.model.has_value() || scenario.ex8.has_value();

    // initial
    const YAML::Node init = root["initial"];
    std::optional<double> s0, i0, r0;
    if (!init.IsDefined()) {
        reader.error(root, "initial", "required field is missing");
    }
    else if (reader.expect_map(init, "initial")) {
        reader.check_keys(init, {"S", "I", "R", "regime"}, "initial");
        s0 = reader.real(init, "S", "initial", Bound::NonNegative);
        i0 = reader.real(init, "I", "initial", Bound::NonNegative);
        r0 = reader.real(init, "R", "initial", Bound::NonNegative);
        const auto regime = reader.integer<std::size_t>(init, "regime", "initial", std::size_t{0});
        if (s0 && i0 && r0 && regime) {
            scenario.initial.x = {*s0, *i0, *r0};
            scenario.initial.regime = *regime;
            if (model_ok) {
                if (*regime >= scenario.num_regimes()) {
                    reader.error(init["regime"], "initial.regime", "out of range");
                }
                if (*s0 + *i0 + *r0 > scenario.capacity()) {
                    reader.error(init, "initial", "S + I + R exceeds the capacity K = " + format_number(scenario.capacity()));
                }
            }
        }
    }

    // sim
    const YAML::Node sim = root["sim"];
    if (!sim.IsDefined()) {
        reader.error(root, "sim", "required field is missing");
    }
    else if (reader.expect_map(sim, "sim")) {
        reader.check_keys(sim, {"dt", "horizon", "seed", "record_stride", "n_paths", "deltas", "log_infected", "threads"},
                          "sim");
        const auto dt = reader.real(sim, "dt", "sim", Bound::Positive, 1e-3);
        const auto horizon = reader.real(sim, "horizon", "sim", Bound::Positive);
        const auto seed = reader.integer<std::uint64_t>(sim, "seed", "sim");
        const auto stride = reader.integer<std::size_t>(sim, "record_stride", "sim", std::size_t{1});
        const auto paths = reader.integer<std::size_t>(sim, "n_paths", "sim", std::size_t{200});
        const auto threads = reader.integer<std::size_t>(sim, "threads", "sim", std::size_t{0});
        if (dt && horizon) {
            if (*horizon < *dt) {
                reader.error(sim["horizon"], "sim.horizon", "must be >= dt");
            }
            scenario.sim.dt = *dt;
            scenario.sim.horizon = *horizon;
        }
        if (seed) {
            scenario.sim.seed = *seed;
        }
        if (stride) {
            if (*stride == 0) {
                reader.error(sim["record_stride"], "sim.record_stride", "must be >= 1");
            }
            scenario.sim.record_stride = *stride;
        }
        if (paths) {
            if (*paths < 2) {
                reader.error(sim["n_paths"], "sim.n_paths", "must be >= 2 (standard errors need two paths)");
            }
            scenario.n_paths = *paths;
        }
        if (threads) {
            scenario.threads = *threads;
        }

        const YAML::Node log_node = sim["log_infected"];
        const bool positive_i = i0 && *i0 > 0.0;
        scenario.sim.log_infected = positive_i;
        if (log_node.IsDefined()) {
            try {
                scenario.sim.log_infected = log_node.as<bool>();
            }
            catch (const YAML::Exception&) {
                reader.error(log_node, "sim.log_infected", "expected true or false");
            }
            if (scenario.sim.log_infected && i0 && !positive_i) {
                reader.error(log_node, "sim.log_infected", "requires initial.I > 0");
            }
        }

        const YAML::Node deltas = sim["deltas"];
        if (deltas.IsDefined()) {
            if (!deltas.IsSequence()) {
                reader.error(deltas, "sim.deltas", "expected a list of thresholds");
            }
            else {
                for (std::size_t k = 0; k < deltas.size(); ++k) {
                    double d = 0.0;
                    bool valid = false;
                    try {
                        d = deltas[k].as<double>();
                        valid = std::isfinite(d) && d >= 0.0;
                    }
                    catch (const YAML::Exception&) {
                    }
                    if (valid) {
                        scenario.deltas.push_back(d);
                    }
                    else {
                        reader.error(deltas[k], Reader::index("sim.deltas", k), "expected a real >= 0");
                    }
                }
            }
        }
        else if (model_ok) {
            scenario.deltas = {1e-3 * scenario.capacity()};
        }
    }

    if (auto out = reader.string(root, "output", "", std::string("."))) {
        scenario.output_dir = *out;
    }

    reader.finish();
    return scenario;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(path.string() + ": cannot open scenario file");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str(), path.string());
}

void apply_overrides(Scenario& scenario, const Overrides& overrides)
{
    if (overrides.out) {
        scenario.output_dir = *overrides.out;
    }
    if (overrides.paths) {
        if (*overrides.paths < 2) {
            throw ConfigError("--paths: must be >= 2 (standard errors need two paths)");
        }
        scenario.n_paths = *overrides.paths;
    }
    if (overrides.seed) {
        scenario.sim.seed = *overrides.seed;
    }
}

} // namespace sirs
