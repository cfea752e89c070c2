#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "levnet_cli_tests";
        fs::remove_all(d);
        fs::create_directories(d);
        std::ofstream(d / "butterfly.csv") << "source,target,weight\n0,1,1\n1,2,1\n2,0,1\n0,3,1\n3,4,1\n4,0,1\n";
        return d;
    }();
    return dir;
}

// Runs the CLI inside the work directory; stdout and stderr go to files.
int run(const std::string& args) {
    const std::string cmd = "cd '" + workdir().string() + "' && '" LEVNET_CLI "' " + args +
                            " > stdout.txt 2> stderr.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json load(const std::string& rel) { return nlohmann::json::parse(slurp(workdir() / rel)); }

}  // namespace

TEST_CASE("cli: butterfly is unstable") {
    REQUIRE(run("--out st stability --matrix butterfly.csv") == 0);
    const auto j = load("st/stability.json");
    CHECK(j["regime"] == "unstable");
    CHECK(j["lambda_hat_max"].get<double>() == doctest::Approx(1.2599210498948732).epsilon(1e-9));
    CHECK(j["n"] == 5);
    CHECK(fs::exists(workdir() / "st" / "config.ini"));
}

TEST_CASE("cli: generate is deterministic in the seed") {
    REQUIRE(run("--seed 7 --out g1 generate --ensemble er --n 40 --p 0.1") == 0);
    REQUIRE(run("--seed 7 --out g2 generate --ensemble er --n 40 --p 0.1") == 0);
    REQUIRE(run("--seed 8 --out g3 generate --ensemble er --n 40 --p 0.1") == 0);
    const auto a = slurp(workdir() / "g1" / "graph.csv");
    CHECK(!a.empty());
    CHECK(a == slurp(workdir() / "g2" / "graph.csv"));
    CHECK(a != slurp(workdir() / "g3" / "graph.csv"));
}

TEST_CASE("cli: errors are reported as JSON") {
    CHECK(run("--out e1 generate --n 10") == 1);
    auto err = nlohmann::json::parse(slurp(workdir() / "stderr.txt"));
    CHECK(err["error"]["kind"] == "usage");
    CHECK(run("--out e2 stability --matrix does_not_exist.csv") == 2);
    CHECK(run("--seed 1 --out e3 reconstruct") == 2);
    std::ofstream(workdir() / "bad.csv") << "source,target,weight\n0,1,x\n";
    CHECK(run("--out e4 stability --matrix bad.csv") == 1);
    err = nlohmann::json::parse(slurp(workdir() / "stderr.txt"));
    CHECK(err["error"]["kind"] == "io");
}

TEST_CASE("cli: edge-addition ensemble summary") {
    REQUIRE(run("--seed 3 --out pe pathway edges --n 15 --replicas 3") == 0);
    const auto j = load("pe/summary.json");
    CHECK(j["replicas"] == 3);
    for (const auto& d : j["first_crossing_densities"]) {
        CHECK(d.get<double>() > 0.0);
        CHECK(d.get<double>() <= 1.0);
    }
    CHECK(j["runs"].size() == 3);
    CHECK(fs::exists(workdir() / "pe" / "trajectories.csv"));
}

TEST_CASE("cli: config replay reproduces the outputs") {
    REQUIRE(run("--seed 11 --jobs 2 --out r1 pathway nodes --model regular --replicas 2 --nodes-to-add 30") == 0);
    const auto cfg = slurp(workdir() / "r1" / "config.ini");
    CHECK(cfg.find("pathway.nodes.model") != std::string::npos);
    // Same settings, different output directory.
    std::ofstream(workdir() / "replay.ini") << cfg;
    REQUIRE(run("--config replay.ini --out r2 pathway nodes") == 0);
    CHECK(slurp(workdir() / "r1" / "trajectories.csv") == slurp(workdir() / "r2" / "trajectories.csv"));
    CHECK(load("r1/summary.json") == load("r2/summary.json"));
}
