#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int run(const std::string& args) {
    std::string cmd = std::string(SEGLAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("seglab-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static inline int counter = 0;

    fs::path write_config(const json& j) const {
        fs::path p = path / "config.json";
        std::ofstream(p) << j.dump(2);
        return p;
    }
    std::vector<fs::path> artifacts(const std::string& ext) const {
        std::vector<fs::path> out;
        for (const auto& e : fs::directory_iterator(path))
            if (e.path().extension() == "." + ext &&
                e.path().filename().string().find('-') != std::string::npos)
                out.push_back(e.path());
        return out;
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("bad invocations fail cleanly") {
    CHECK(run("") != 0);                       // missing subcommand
    CHECK(run("decay") == 3);                  // missing --config
    CHECK(run("decay --config /nonexistent.json") == 3);
}

TEST_CASE("malformed or unknown-field configs exit 3 without artifacts") {
    TempDir dir;
    fs::path bad = dir.path / "bad.json";
    std::ofstream(bad) << "{ not json";
    CHECK(run("decay --config " + bad.string() + " --out " + dir.path.string()) == 3);
    CHECK(dir.artifacts("json").empty());
    fs::path unknown = dir.write_config({{"K_list", {1.0}}, {"bogus", 1}});
    CHECK(run("decay --config " + unknown.string() + " --out " + dir.path.string()) == 3);
    CHECK(dir.artifacts("json").empty());
}

TEST_CASE("decay run produces named artifacts, byte-identical on rerun") {
    TempDir dir;
    fs::path cfg = dir.write_config(
        {{"K_list", {1.0, 4.0, 9.0}}, {"A", 1.0}, {"r", 2.0}, {"dim", 1}});
    std::string base = " --config " + cfg.string() + " --out " + dir.path.string();
    REQUIRE(run("decay" + base + " --seed 7") == 0);
    auto jsons = dir.artifacts("json");
    auto csvs = dir.artifacts("csv");
    REQUIRE(jsons.size() == 1);
    REQUIRE(csvs.size() == 1);
    // <command>-<16 hex digits>.json
    std::string name = jsons[0].filename().string();
    CHECK(name.rfind("decay-", 0) == 0);
    CHECK(name.size() == std::string("decay-0123456789abcdef.json").size());
    std::string first = slurp(jsons[0]), first_csv = slurp(csvs[0]);
    REQUIRE(run("decay" + base + " --seed 7") == 0);
    CHECK(slurp(jsons[0]) == first);
    CHECK(slurp(csvs[0]) == first_csv);
    // a different seed hashes to a different artifact name
    REQUIRE(run("decay" + base + " --seed 8") == 0);
    CHECK(dir.artifacts("json").size() == 2);
    json out = json::parse(first);
    CHECK(out["sup_Br"].size() == 3);
    CHECK(std::abs(out["slope_fit"].get<double>() + 2.0) < 0.01);
}

TEST_CASE("partition of equal arcs reports k^2/4") {
    TempDir dir;
    fs::path cfg = dir.write_config({{"arcs_equal", {{"k", 3}}}});
    REQUIRE(run("partition --config " + cfg.string() + " --out " + dir.path.string()) == 0);
    json out = json::parse(slurp(dir.artifacts("json")[0]));
    CHECK(std::abs(out["partition_value"].get<double>() - 2.25) < 1e-12);
    CHECK(std::abs(out["beta_value"].get<double>() - 3.0) < 1e-12);
    CHECK(out["arcs"].size() == 3);
}

TEST_CASE("solve exits 0 when converged and 2 when iteration-starved") {
    TempDir dir;
    json cfg = {{"grid", {{"n_r", 16}, {"n_theta", 32}, {"r_max", 1.0}}},
                {"k", 2},
                {"boundary", {{"kind", "profile"}, {"d", 1.0}}},
                {"beta", 25.0},
                {"tol_grad", 1e-6},
                {"max_iter", 20000},
                {"step_rule", {{"kind", "fixed"}, {"omega", 1.8}}}};
    fs::path p = dir.write_config(cfg);
    REQUIRE(run("solve --config " + p.string() + " --out " + dir.path.string()) == 0);
    json rep = json::parse(slurp(dir.artifacts("json")[0]));
    CHECK(rep["converged"].get<bool>());
    CHECK(rep["final_residual"].get<double>() <= 1e-6);
    CHECK(dir.artifacts("csv").size() == 1);

    TempDir dir2;
    cfg["max_iter"] = 3;
    fs::path p2 = dir2.write_config(cfg);
    CHECK(run("solve --config " + p2.string() + " --out " + dir2.path.string()) == 2);
}

TEST_CASE("almgren on a synthetic profile reports the degree") {
    TempDir dir;
    json cfg = {{"profile",
                 {{"grid", {{"n_r", 128}, {"n_theta", 128}, {"r_max", 1.0}}},
                  {"d", 1.0},
                  {"k", 2}}},
                {"beta", 5.0},
                {"radii", {{"lo", 0.1}, {"hi", 0.9}, {"per_octave", 8}}},
                {"doubling_d", 1.0}};
    fs::path p = dir.write_config(cfg);
    REQUIRE(run("almgren --config " + p.string() + " --out " + dir.path.string()) == 0);
    json out = json::parse(slurp(dir.artifacts("json")[0]));
    CHECK(std::abs(out["d_hat"].get<double>() - 1.0) < 0.02);
    CHECK(out["doubling"]["pass_lower"].get<bool>());
    CHECK(out["doubling"]["pass_upper"].get<bool>());
    CHECK(dir.artifacts("csv").size() == 1);
}

TEST_CASE("profile1d command emits the shooting parameter") {
    TempDir dir;
    fs::path cfg = dir.write_config({{"a", 1.0}, {"X", 12.0}, {"tol", 1e-5}});
    REQUIRE(run("profile1d --config " + cfg.string() + " --out " + dir.path.string()) == 0);
    json out = json::parse(slurp(dir.artifacts("json")[0]));
    CHECK(std::abs(out["m"].get<double>() - 1.50999) < 1e-3);
    CHECK(out["symmetry_defect"].get<double>() <= 1e-5);
}
