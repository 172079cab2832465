#include "sirs/commands.hpp"
#include "sirs/output.hpp"
#include "sirs/scenario.hpp"

#include <catch_amalgamated.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace sirs;
namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

const char* const kBilinear = R"(name: bilinear
model:
  K: 1
  regimes:
    - {mu: 0.1, rho: 0.05, gamma1: 0.2, gamma2: 0.05,
       f1: {family: constant, beta: 0.5}, f2: {family: constant, beta: 0.2}}
initial: {S: 0.9, I: 0.1, R: 0}
sim: {dt: 0.01, horizon: 20, seed: 4, record_stride: 10, n_paths: 8, deltas: [0.001, 0.01], threads: 1}
)";

const char* const kTwoRegime = R"(name: switching
model:
  K: 2
  generator: [[-1, 1], [2, -2]]
  regimes:
    - {mu: 0.1, rho: 0.05, gamma1: 0.2, gamma2: 0.05,
       f1: {family: saturated_i, beta: 0.5, a: 1}, f2: {family: constant, beta: 0.1}}
    - {mu: 0.2, rho: 0.1, gamma1: 0.1, gamma2: 0.3,
       f1: {family: beddington_deangelis, beta: 0.3, a1: 0.5, a2: 0.5}, f2: {family: saturated_s, beta: 0.2, a: 1}}
initial: {S: 1.5, I: 0.2, R: 0.1, regime: 1}
sim: {dt: 0.01, horizon: 10, seed: 11, n_paths: 4}
)";

const char* const kEx8 = R"(name: ex8
preset:
  name: ex8
  generator: [[-1, 1], [2, -2]]
  regimes:
    - {mu: 0.1, beta: 0.5, gamma: 0.2, recovery: 0.1, sigma: 0.2}
    - {mu: 0.2, beta: 0.3, gamma: 0.1, recovery: 0.2, sigma: 0.4}
initial: {S: 0.8, I: 0.1, R: 0.1}
sim: {dt: 0.01, horizon: 5, seed: 2, n_paths: 3}
)";

const char* const kEx17 = R"(name: ex17
preset: {name: ex17, Lambda: 0.5, mu: 0.25, beta: 0.4, alpha: 0.7, delta: 0.3, gamma: 0.2, epsilon: 0.05, sigma: 0.1}
initial: {S: 1.5, I: 0.2, R: 0}
sim: {dt: 0.01, horizon: 5, seed: 2, n_paths: 3}
)";

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("sirsim_test_app_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const fs::path& path, const std::string& text)
{
    std::ofstream(path, std::ios::binary) << text;
    return path;
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "sirsim");
    std::vector<char*> argv;
    for (auto& a : args) {
        argv.push_back(a.data());
    }
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

int run_exe(const std::string& args)
{
    const int status = std::system((std::string(SIRSIM_EXE) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string config_error(const std::string& text)
{
    try {
        parse_scenario(text, "bad.yaml");
    }
    catch (const ConfigError& e) {
        return e.what();
    }
    FAIL("expected a ConfigError");
    return {};
}

} // namespace

TEST_CASE("scenario parsing")
{
    const auto s = parse_scenario(kBilinear, "b.yaml");
    CHECK(s.name == "bilinear");
    CHECK(s.kind == ModelKind::Sirs);
    REQUIRE(s.model);
    CHECK(s.capacity() == 1.0);
    CHECK(s.num_regimes() == 1);
    CHECK(s.sim.dt == 0.01);
    CHECK(s.sim.seed == 4);
    CHECK(s.sim.record_stride == 10);
    CHECK(s.sim.log_infected);
    CHECK(s.n_paths == 8);
    CHECK(s.deltas == std::vector<double>{0.001, 0.01});
    CHECK(s.sha256 == sha256_hex(kBilinear));
    CHECK(s.initial.x == std::vector<double>{0.9, 0.1, 0.0});

    const auto two = parse_scenario(kTwoRegime);
    CHECK(two.num_regimes() == 2);
    CHECK(two.initial.regime == 1);
    CHECK(two.deltas == std::vector<double>{0.002});
    CHECK(two.n_paths == 4);
    CHECK(family_name(two.model->regime(1).f2) == "saturated_s");

    const auto ex8 = parse_scenario(kEx8);
    CHECK(ex8.kind == ModelKind::Ex8);
    CHECK_FALSE(ex8.model);
    CHECK(ex8.capacity() == 1.0);
    CHECK(ex8.sde().name.size() > 0);

    const auto ex17 = parse_scenario(kEx17);
    CHECK(ex17.kind == ModelKind::Ex17);
    CHECK(ex17.capacity() == 2.0);
}

TEST_CASE("sha256 matches a known digest")
{
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("scenario errors carry positions and field paths")
{
    std::string text = kBilinear;
    text.replace(text.find("mu: 0.1"), 7, "mu: -0.1");
    const auto msg = config_error(text);
    CHECK_THAT(msg, ContainsSubstring("bad.yaml:5:"));
    CHECK_THAT(msg, ContainsSubstring("model.regimes[0].mu: must be > 0"));

    // every problem is reported, not just the first
    std::string many = kBilinear;
    many.replace(many.find("seed: 4, "), 9, "");
    many.replace(many.find("gamma1"), 6, "gamma9");
    many += "colour: blue\n";
    const auto all = config_error(many);
    CHECK_THAT(all, ContainsSubstring("sim.seed: required field is missing"));
    CHECK_THAT(all, ContainsSubstring("model.regimes[0].gamma9: unknown field"));
    CHECK_THAT(all, ContainsSubstring("model.regimes[0].gamma1: required field is missing"));
    CHECK_THAT(all, ContainsSubstring("colour: unknown field"));

    CHECK_THAT(config_error("name: x\n  bad: [\n"), ContainsSubstring("syntax error"));
    CHECK_THAT(config_error(std::string(kBilinear) + "preset: {name: ex17}\n"),
               ContainsSubstring("exactly one of 'model' or 'preset'"));

    std::string family = kBilinear;
    family.replace(family.find("family: constant"), 16, "family: logistic");
    CHECK_THAT(config_error(family), ContainsSubstring("model.regimes[0].f1.family: unknown family 'logistic'"));

    std::string outside = kBilinear;
    outside.replace(outside.find("S: 0.9"), 6, "S: 0.95");
    CHECK_THAT(config_error(outside), ContainsSubstring("exceeds the capacity"));

    std::string one_path = kBilinear;
    one_path.replace(one_path.find("n_paths: 8"), 10, "n_paths: 1");
    CHECK_THAT(config_error(one_path), ContainsSubstring("sim.n_paths: must be >= 2"));

    std::string reducible = kTwoRegime;
    reducible.replace(reducible.find("[[-1, 1], [2, -2]]"), 18, "[[0, 0], [2, -2]]");
    CHECK_THAT(config_error(reducible), ContainsSubstring("model.generator"));

    std::string log_on = kBilinear;
    log_on.replace(log_on.find("I: 0.1"), 6, "I: 0");
    log_on.replace(log_on.find("threads: 1"), 10, "threads: 1, log_infected: true");
    CHECK_THAT(config_error(log_on), ContainsSubstring("sim.log_infected"));

    CHECK_THAT(config_error(std::string("name: 'a b'\n") + std::string(kBilinear).substr(15)),
               ContainsSubstring("name: must match"));
}

TEST_CASE("I(0) = 0 switches the log channel off by default")
{
    std::string text = kBilinear;
    text.replace(text.find("I: 0.1"), 6, "I: 0");
    const auto s = parse_scenario(text);
    CHECK_FALSE(s.sim.log_infected);
}

TEST_CASE("overrides")
{
    auto s = parse_scenario(kBilinear);
    apply_overrides(s, {fs::path("elsewhere"), 12, 99});
    CHECK(s.output_dir == fs::path("elsewhere"));
    CHECK(s.n_paths == 12);
    CHECK(s.sim.seed == 99);
    CHECK_THROWS_AS(apply_overrides(s, {std::nullopt, 1, std::nullopt}), ConfigError);
}

TEST_CASE("lambda command")
{
    const auto dir = scratch("lambda");
    const auto file = write_file(dir / "b.yaml", kBilinear);
    const auto r = cli({"lambda", "--scenario", file.string(), "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("lambda = 0.28\n"));

    const auto doc = nlohmann::json::parse(read_file(dir / "bilinear_lambda.json"));
    CHECK_THAT(doc["lambda"].get<double>(), WithinAbs(0.28, 1e-14));
    CHECK(doc["meta"]["seed"] == 4);
    CHECK(doc["meta"]["scenario_sha256"] == sha256_hex(kBilinear));

    const auto two = write_file(dir / "s.yaml", kTwoRegime);
    const auto r2 = cli({"lambda", "--scenario", two.string(), "--out", dir.string()});
    CHECK(r2.code == 0);
    CHECK_THAT(r2.out, ContainsSubstring("pi = [0.666667, 0.333333]"));
    CHECK_THAT(r2.out, ContainsSubstring("sum(pi) = 1\n"));
}

TEST_CASE("simulate command writes the path CSV")
{
    const auto dir = scratch("simulate");
    const auto file = write_file(dir / "s.yaml", kTwoRegime);
    REQUIRE(cli({"simulate", "--scenario", file.string(), "--out", dir.string()}).code == 0);
    const auto csv = read_file(dir / "switching_path.csv");
    CHECK(csv.rfind("# tool=sirsim\n# version=", 0) == 0);
    CHECK_THAT(csv, ContainsSubstring("# scenario_sha256=" + sha256_hex(kTwoRegime) + "\n# seed=11\n"));
    CHECK_THAT(csv, ContainsSubstring("\nt,regime,S,I,R,lnI\n0,1,1.5,0.2,0.1,"));

    std::istringstream lines(csv);
    std::string line, last;
    std::size_t rows = 0;
    while (std::getline(lines, line)) {
        if (!line.empty() && line[0] != '#' && line[0] != 't') {
            ++rows;
            last = line;
        }
    }
    CHECK(rows == 1001);
    CHECK(last.rfind("10,", 0) == 0);
}

TEST_CASE("simulate with I(0) = 0 keeps the I column at zero")
{
    const auto dir = scratch("zero");
    std::string text = kBilinear;
    text.replace(text.find("I: 0.1"), 6, "I: 0");
    const auto file = write_file(dir / "z.yaml", text);
    REQUIRE(cli({"simulate", "--scenario", file.string(), "--out", dir.string()}).code == 0);
    std::istringstream lines(read_file(dir / "bilinear_path.csv"));
    std::string line;
    std::size_t rows = 0;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 't') {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) {
            cells.push_back(cell);
        }
        REQUIRE(cells.size() == 5);
        CHECK(cells[3] == "0");
        ++rows;
    }
    CHECK(rows == 201);
}

TEST_CASE("ensemble command writes JSON and per-path CSV")
{
    const auto dir = scratch("ensemble");
    const auto file = write_file(dir / "b.yaml", kBilinear);
    const auto r = cli({"ensemble", "--scenario", file.string(), "--out", dir.string(), "--paths", "5"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(read_file(dir / "bilinear_ensemble.json"));
    CHECK(doc["config"]["n_paths"] == 5);
    CHECK(doc["estimators"]["persistence"].size() == 2);
    CHECK(doc["estimators"]["persistence"][0]["delta"] == 0.001);
    CHECK(doc["estimators"]["lyapunov"].contains("se"));
    CHECK(doc["estimators"]["occupation"]["max_error"] == 0.0);
    CHECK(doc.contains("max_delta_violation"));
    CHECK(doc["classification"]["outcome"] == "persistent");

    const auto csv = read_file(dir / "bilinear_paths.csv");
    CHECK_THAT(csv, ContainsSubstring("\npath,log_growth,terminal_I,time_average_I,max_violation,occupation_0\n0,"));
    CHECK_THAT(csv, ContainsSubstring("\n4,"));
}

TEST_CASE("compare command")
{
    const auto dir = scratch("compare");
    const auto ex8 = write_file(dir / "ex8.yaml", kEx8);
    const auto r8 = cli({"compare", "--scenario", ex8.string(), "--out", dir.string()});
    REQUIRE(r8.code == 0);
    const auto d8 = nlohmann::json::parse(read_file(dir / "ex8_compare.json"));
    CHECK_THAT(d8["lambda"].get<double>(), WithinAbs(d8["sum_pi_C"].get<double>(), 1e-14));
    CHECK(d8["cauchy_holds"] == true);
    CHECK(d8["C"].size() == 2);

    const auto ex17 = write_file(dir / "ex17.yaml", kEx17);
    const auto r17 = cli({"compare", "--scenario", ex17.string(), "--out", dir.string()});
    REQUIRE(r17.code == 0);
    CHECK_THAT(r17.out, ContainsSubstring("R0_bar"));
    const auto d17 = nlohmann::json::parse(read_file(dir / "ex17_compare.json"));
    CHECK(d17.contains("r0_tilde_printed"));
    CHECK(d17.contains("note"));

    const auto plain = write_file(dir / "b.yaml", kBilinear);
    const auto bad = cli({"compare", "--scenario", plain.string(), "--out", dir.string()});
    CHECK(bad.code == 2);
    CHECK_THAT(bad.err, ContainsSubstring("compare requires a preset"));

    // ex8 runs through the generic engine as well
    CHECK(cli({"simulate", "--scenario", ex8.string(), "--out", dir.string()}).code == 0);
    CHECK(cli({"ensemble", "--scenario", ex8.string(), "--out", dir.string()}).code == 0);
}

TEST_CASE("validate command and exit codes")
{
    const auto dir = scratch("exit");
    const auto good = write_file(dir / "b.yaml", kBilinear);
    const auto v = cli({"validate", "--scenario", good.string()});
    CHECK(v.code == 0);
    CHECK_THAT(v.out, ContainsSubstring(": ok"));

    std::string text = kBilinear;
    text.replace(text.find("mu: 0.1"), 7, "mu: -0.1");
    const auto bad = write_file(dir / "bad.yaml", text);
    const auto r = cli({"lambda", "--scenario", bad.string()});
    CHECK(r.code == 2);
    CHECK_THAT(r.err, ContainsSubstring("model.regimes[0].mu"));

    CHECK(cli({"lambda", "--scenario", (dir / "missing.yaml").string()}).code == 2);
    // an output directory that cannot be created is an I/O failure
    write_file(dir / "blocker", "x");
    CHECK(cli({"lambda", "--scenario", good.string(), "--out", (dir / "blocker" / "sub").string()}).code == 1);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"lambda"}).code == 2);
    CHECK(cli({"ensemble", "--scenario", good.string(), "--paths", "1", "--out", dir.string()}).code == 2);

    // a stiff model blows up the explicit scheme
    std::string stiff = kBilinear;
    stiff.replace(stiff.find("gamma1: 0.2"), 11, "gamma1: 1e300");
    stiff.replace(stiff.find("dt: 0.01"), 8, "dt: 0.5");
    const auto blow = write_file(dir / "stiff.yaml", stiff);
    CHECK(cli({"simulate", "--scenario", blow.string(), "--out", dir.string()}).code == 3);

    CHECK(run_exe("validate --scenario " + good.string()) == 0);
    CHECK(run_exe("lambda --scenario " + bad.string()) == 2);
    CHECK(run_exe("simulate --scenario " + blow.string() + " --out " + dir.string()) == 3);
    CHECK(run_exe("--version") == 0);
}

TEST_CASE("artifacts are byte-identical across runs")
{
    const auto dir = scratch("determinism");
    const auto file = write_file(dir / "s.yaml", kTwoRegime);
    std::map<std::string, std::string> first;
    for (int run = 0; run < 2; ++run) {
        const auto out = dir / ("run" + std::to_string(run));
        for (const char* cmd : {"lambda", "simulate", "ensemble"}) {
            REQUIRE(run_exe(std::string(cmd) + " --scenario " + file.string() + " --out " + out.string()) == 0);
        }
        for (const auto& entry : fs::directory_iterator(out)) {
            const auto name = entry.path().filename().string();
            if (run == 0) {
                first[name] = read_file(entry.path());
            }
            else {
                CHECK(first.at(name) == read_file(entry.path()));
            }
        }
    }
    CHECK(first.size() == 4);

    // a different seed changes the path
    const auto other = dir / "other";
    REQUIRE(run_exe("simulate --scenario " + file.string() + " --seed 12 --out " + other.string()) == 0);
    CHECK(read_file(other / "switching_path.csv") != first.at("switching_path.csv"));
}
