#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "commands.hpp"
#include "config_io.hpp"
#include "repeaterlab/errors.hpp"
#include "repeaterlab/repeater_sim.hpp"

using namespace rlab;
using doctest::Approx;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path& work_dir() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() /
                     ("repeaterlab-cli-" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string desk_config_path() { return std::string(RLAB_CONFIG_DIR) + "/desk_160km.json"; }

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) out.push_back(field);
    return out;
}

// small 4-segment chain; quick enough to run many times
std::string small_config_path() {
    static const std::string path = [] {
        sim::ChainConfig c;
        c.total_length_km = 40.0;
        c.segment_length_km = 10.0;
        c.target_pairs = 5;
        c.noise.epsilon = 0.005;
        const fs::path p = work_dir() / "small_40km.json";
        cli::write_text_file(p.string(), cli::config_to_json(sim::resolved(c)).dump(2));
        return p.string();
    }();
    return path;
}

int run_cli(const std::string& args, const fs::path& stdout_path,
            const fs::path& stderr_path) {
    const char* exe = std::getenv("RLAB_CLI_PATH");
    REQUIRE(exe != nullptr);
    const std::string cmd = std::string(exe) + " " + args + " > " +
                            stdout_path.string() + " 2> " + stderr_path.string();
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("default config text reparses to the resolved defaults") {
    const std::string text = cli::default_config_text();
    const sim::ChainConfig parsed = cli::config_from_json(json::parse(text));
    const sim::ChainConfig ref = sim::resolved(sim::ChainConfig{});
    CHECK(parsed.total_length_km == ref.total_length_km);
    CHECK(parsed.segment_length_km == ref.segment_length_km);
    CHECK(parsed.qubits_per_station == ref.qubits_per_station);
    CHECK(parsed.fiber_loss_db_per_km == ref.fiber_loss_db_per_km);
    CHECK(parsed.light_speed_km_per_ms == ref.light_speed_km_per_ms);
    CHECK(parsed.target_pairs == ref.target_pairs);
    CHECK(parsed.rng_seed == ref.rng_seed);
    CHECK(parsed.probe.mode == ref.probe.mode);
    CHECK(parsed.probe.p_c == ref.probe.p_c);
    CHECK(parsed.probe.theta == ref.probe.theta);
    CHECK(parsed.probe.zero_xi == ref.probe.zero_xi);
    CHECK(parsed.noise.epsilon == ref.noise.epsilon);
    CHECK(parsed.purification_schedule == ref.purification_schedule);
}

TEST_CASE("decimal formatting round-trips exactly") {
    for (double x : {0.1, 0.9984412744365729, 1e-3, 160.0, 0.0, 3.5e300}) {
        CHECK(std::stod(cli::format_double(x)) == x);
    }
    CHECK(cli::format_double(0.1) == "0.1");
    CHECK_THROWS_AS(cli::format_double(std::nan("")),
                    NumericalError);
}

TEST_CASE("analyze writes the tradeoff grid") {
    const fs::path csv = work_dir() / "tradeoff.csv";
    cli::AnalyzeOptions o;
    o.eta_sq = 2.0 / 3.0;
    o.pc_min = 0.1;
    o.pc_max = 1.0;
    o.pc_steps = 10;
    o.out_path = csv.string();

    std::ostringstream out, err;
    REQUIRE(cli::cmd_analyze(o, out, err) == 0);
    CHECK(out.str() == "wrote " + csv.string() + " (10 rows)\n");

    const auto lines = lines_of(read_file(csv));
    REQUIRE(lines.size() == 11);
    CHECK(lines[0] == "p_c,d_opt,f_max,p_s");
    double prev = 0.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split_csv(lines[i]);
        REQUIRE(f.size() == 4);
        const double p_c = std::stod(f[0]);
        CHECK(p_c > prev);
        prev = p_c;
    }
    // the 0.5 row reproduces the known operating point
    const auto row = split_csv(lines[5]);
    CHECK(std::stod(row[0]) == Approx(0.5).epsilon(1e-12));
    CHECK(std::stod(row[2]) == Approx(0.7670812).epsilon(1e-4));
    CHECK(std::stod(row[3]) == Approx(0.3640387).epsilon(1e-4));

    CHECK(fs::exists(csv.string() + ".manifest.json"));
    const json manifest = json::parse(read_file(csv.string() + ".manifest.json"));
    CHECK(manifest.at("command") == "analyze");
    CHECK(manifest.at("output_paths").at(0) == csv.string());
}

TEST_CASE("analyze without loss supports near-unit fidelity") {
    const fs::path csv = work_dir() / "lossless.csv";
    cli::AnalyzeOptions o;
    o.eta_sq = 1.0;
    o.pc_min = 2.0;
    o.pc_max = 2.0;
    o.pc_steps = 1;
    o.out_path = csv.string();
    std::ostringstream out, err;
    REQUIRE(cli::cmd_analyze(o, out, err) == 0);
    const auto lines = lines_of(read_file(csv));
    REQUIRE(lines.size() == 2);
    CHECK(std::stod(split_csv(lines[1])[2]) >= 0.999);
}

TEST_CASE("analyze rejects bad grids and unwritable outputs") {
    std::ostringstream out, err;
    cli::AnalyzeOptions o;
    o.eta_sq = 0.0;
    o.pc_min = 0.1;
    o.pc_max = 1.0;
    o.pc_steps = 5;
    o.out_path = (work_dir() / "never.csv").string();
    CHECK(cli::cmd_analyze(o, out, err) == 1);
    CHECK(err.str().find("--eta-sq") != std::string::npos);

    o.eta_sq = 0.5;
    o.pc_steps = 0;
    err.str("");
    CHECK(cli::cmd_analyze(o, out, err) == 1);
    CHECK(err.str().find("--pc-steps") != std::string::npos);

    o.pc_steps = 5;
    o.out_path = "/nonexistent-dir/never.csv";
    err.str("");
    CHECK(cli::cmd_analyze(o, out, err) == 2);
    CHECK(!fs::exists(work_dir() / "never.csv"));
}

TEST_CASE("simulate runs a bundled config reproducibly") {
    cli::SimulateOptions o;
    o.config_path = desk_config_path();
    o.seed = 0;
    o.out_path = (work_dir() / "desk_a.json").string();

    std::ostringstream out, err;
    REQUIRE(cli::cmd_simulate(o, out, err) == 0);
    CHECK(out.str().rfind("rate_hz=", 0) == 0);
    CHECK(out.str().find(" fidelity=") != std::string::npos);

    const json result = json::parse(read_file(o.out_path));
    CHECK(result.at("rate_hz").get<double>() > 0.0);
    const double fidelity = result.at("mean_final_fidelity").get<double>();
    CHECK(fidelity > 0.99);
    CHECK(fidelity <= 1.0);
    CHECK(result.at("seed").get<std::uint64_t>() == 0);
    CHECK(result.at("config").at("segment_length_km").get<double>() == 10.0);
    CHECK(result.at("arrival_times_ms").size() == 9);

    const json manifest = json::parse(read_file(o.out_path + ".manifest.json"));
    CHECK(manifest.at("command") == "simulate");
    CHECK(manifest.at("seed").get<std::uint64_t>() == 0);
    CHECK(manifest.at("resolved_config").at("total_length_km").get<double>() == 160.0);
    CHECK(manifest.at("tool_version").is_string());

    cli::SimulateOptions again = o;
    again.out_path = (work_dir() / "desk_b.json").string();
    std::ostringstream out2, err2;
    REQUIRE(cli::cmd_simulate(again, out2, err2) == 0);
    CHECK(read_file(again.out_path) == read_file(o.out_path));
    CHECK(out2.str() == out.str());
}

TEST_CASE("simulate maps failure kinds to distinct exit codes") {
    std::ostringstream out, err;

    cli::SimulateOptions missing;
    missing.config_path = (work_dir() / "no_such_config.json").string();
    missing.out_path = (work_dir() / "never.json").string();
    CHECK(cli::cmd_simulate(missing, out, err) == 2);
    CHECK(err.str().find("cannot read config file") != std::string::npos);

    json cfg = json::parse(cli::default_config_text());
    cfg.erase("segment_length_km");
    const fs::path incomplete = work_dir() / "incomplete.json";
    cli::write_text_file(incomplete.string(), cfg.dump());
    cli::SimulateOptions bad;
    bad.config_path = incomplete.string();
    bad.out_path = (work_dir() / "never.json").string();
    err.str("");
    CHECK(cli::cmd_simulate(bad, out, err) == 1);
    CHECK(err.str().find("missing config key: segment_length_km") != std::string::npos);

    json extra = json::parse(cli::default_config_text());
    extra["surprise"] = 1;
    const fs::path unknown = work_dir() / "unknown.json";
    cli::write_text_file(unknown.string(), extra.dump());
    bad.config_path = unknown.string();
    err.str("");
    CHECK(cli::cmd_simulate(bad, out, err) == 1);
    CHECK(err.str().find("unknown config key: surprise") != std::string::npos);

    json garbled = json::parse(cli::default_config_text());
    const fs::path truncated = work_dir() / "truncated.json";
    cli::write_text_file(truncated.string(), garbled.dump().substr(0, 40));
    bad.config_path = truncated.string();
    err.str("");
    CHECK(cli::cmd_simulate(bad, out, err) == 1);
    CHECK(err.str().find("parse error") != std::string::npos);

    sim::ChainConfig wedge;
    wedge.total_length_km = 20.0;
    wedge.segment_length_km = 10.0;
    wedge.qubits_per_station = 2;
    wedge.target_pairs = 1;
    wedge.probe.mode = sim::ProbeConfig::Mode::ideal;
    wedge.purification_schedule = {1, 0};
    const fs::path stuck = work_dir() / "stuck.json";
    cli::write_text_file(stuck.string(), cli::config_to_json(wedge).dump());
    bad.config_path = stuck.string();
    err.str("");
    CHECK(cli::cmd_simulate(bad, out, err) == 3);
    CHECK(err.str().find("queue ran dry") != std::string::npos);
}

TEST_CASE("sweep writes one ordered row per error value") {
    cli::SweepOptions o;
    o.config_path = desk_config_path();
    o.seed = 0;
    o.epsilons = {0.0, 0.005, 0.01};
    o.runs_per_point = 1;
    o.out_path = (work_dir() / "sweep.csv").string();

    std::ostringstream out, err;
    REQUIRE(cli::cmd_sweep(o, out, err) == 0);
    CHECK(out.str() == "wrote " + o.out_path + " (3 points)\n");

    const auto lines = lines_of(read_file(o.out_path));
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "epsilon,rate_hz,rate_std_hz,fidelity,fidelity_std,seed");
    std::vector<double> fidelity;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split_csv(lines[i]);
        REQUIRE(f.size() == 6);
        fidelity.push_back(std::stod(f[3]));
        CHECK(std::stod(f[1]) > 0.0);
        CHECK(f[5] == std::to_string(i - 1));  // seed advances per point
    }
    CHECK(fidelity[0] > fidelity[1]);
    CHECK(fidelity[1] > fidelity[2]);

    const json manifest = json::parse(read_file(o.out_path + ".manifest.json"));
    CHECK(manifest.at("command") == "sweep");
    CHECK(manifest.at("resolved_config").at("qubits_per_station").get<int>() == 10);
}

TEST_CASE("a one-point sweep agrees with a plain simulation") {
    cli::SweepOptions o;
    o.config_path = small_config_path();
    o.seed = 11;
    o.epsilons = {0.005};
    o.runs_per_point = 1;
    o.out_path = (work_dir() / "one_point.csv").string();
    std::ostringstream out, err;
    REQUIRE(cli::cmd_sweep(o, out, err) == 0);

    cli::SimulateOptions s;
    s.config_path = small_config_path();
    s.seed = 11;
    s.out_path = (work_dir() / "one_point.json").string();
    std::ostringstream out2, err2;
    REQUIRE(cli::cmd_simulate(s, out2, err2) == 0);
    const json result = json::parse(read_file(s.out_path));

    const auto lines = lines_of(read_file(o.out_path));
    REQUIRE(lines.size() == 2);
    const auto row = split_csv(lines[1]);
    CHECK(std::stod(row[1]) == result.at("rate_hz").get<double>());
    CHECK(std::stod(row[3]) == result.at("mean_final_fidelity").get<double>());
    CHECK(row[5] == "11");
}

TEST_CASE("sweep refuses an empty error grid") {
    cli::SweepOptions o;
    o.config_path = small_config_path();
    o.seed = 0;
    o.epsilons = {};
    o.out_path = (work_dir() / "never.csv").string();
    std::ostringstream out, err;
    CHECK(cli::cmd_sweep(o, out, err) == 1);
    CHECK(!fs::exists(o.out_path));
}

TEST_CASE("executable wires the subcommands") {
    const fs::path out = work_dir() / "proc_out.txt";
    const fs::path err = work_dir() / "proc_err.txt";

    CHECK(run_cli("--help", out, err) == 0);
    CHECK(run_cli("simulate --help", out, err) == 0);

    CHECK(run_cli("simulate --dump-defaults", out, err) == 0);
    CHECK(read_file(out) == cli::default_config_text());

    // missing required flags and unknown flags are usage errors
    CHECK(run_cli("simulate --config " + small_config_path() + " --out " +
                      (work_dir() / "proc.json").string(),
                  out, err) == 1);
    CHECK(read_file(err).find("--seed") != std::string::npos);
    CHECK(run_cli("sweep --config " + small_config_path() + " --seed 0 --out " +
                      (work_dir() / "proc.csv").string(),
                  out, err) == 1);
    CHECK(run_cli("simulate --frobnicate", out, err) == 1);
    CHECK(run_cli("", out, err) == 1);

    const fs::path result = work_dir() / "proc_result.json";
    CHECK(run_cli("simulate --config " + small_config_path() + " --seed 3 --out " +
                      result.string(),
                  out, err) == 0);
    const std::string summary = read_file(out);
    CHECK(summary.rfind("rate_hz=", 0) == 0);
    CHECK(summary.back() == '\n');
    CHECK(json::parse(read_file(result)).at("seed").get<std::uint64_t>() == 3);

    const fs::path grid = work_dir() / "proc_grid.csv";
    CHECK(run_cli("analyze --eta-sq 0.675 --pc-min 0.2 --pc-max 0.8 --pc-steps 4 --out " +
                      grid.string(),
                  out, err) == 0);
    CHECK(lines_of(read_file(grid)).size() == 5);

    const fs::path sweep_csv = work_dir() / "proc_sweep.csv";
    CHECK(run_cli("sweep --config " + small_config_path() +
                      " --seed 0 --epsilons 0,0.01 --runs-per-point 2 --out " +
                      sweep_csv.string(),
                  out, err) == 0);
    const auto rows = lines_of(read_file(sweep_csv));
    REQUIRE(rows.size() == 3);
    CHECK(split_csv(rows[1])[0] == "0");
    CHECK(split_csv(rows[2])[0] == "0.01");
}
